use std::fmt;

use super::{Echelon, Scalar, SparseVec};

/// A rectangular matrix over the rationals, stored by sparse columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|i| i < rows)));
        Matrix { rows, cols }
    }

    /// Builds a matrix from dense rows. All rows must have length `cols`.
    pub fn from_rows(rows: &[Vec<Scalar>], cols: usize) -> Self {
        let mut out = vec![Vec::new(); cols];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out[j].push((i, x.clone()));
                }
            }
        }
        Matrix { rows: rows.len(), cols: out.into_iter().map(SparseVec::from_terms).collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect();
        Matrix::from_rows(&dense, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(i)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols.len()]; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.iter() {
                out[i][j] = x.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.iter() {
                rows[i].push((j, x.clone()));
            }
        }
        Matrix {
            rows: self.cols.len(),
            cols: rows.into_iter().map(SparseVec::from_terms).collect(),
        }
    }

    /// Sparse rows, i.e. the columns of the transpose.
    pub fn rows(&self) -> Vec<SparseVec> {
        self.transpose().cols
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = super::Accumulator::new();
        for (j, x) in v.iter() {
            acc.add_vec(&self.cols[j], x);
        }
        acc.finish()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.nrows(), "shape mismatch in product");
        Matrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols.iter().map(|v| v.scale(c)).collect() }
    }

    fn check_same_shape(&self, other: &Matrix) {
        assert!(
            self.rows == other.rows && self.ncols() == other.ncols(),
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.ncols(),
            other.rows,
            other.ncols()
        );
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.ncols()
            && self.cols.iter().enumerate().all(|(j, c)| c.nnz() == 1 && c.get(j).is_one())
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows < self.ncols() {
            let mut e = Echelon::new();
            for r in self.rows() {
                e.insert(&r);
            }
            e.rank()
        } else {
            let mut e = Echelon::new();
            for c in &self.cols {
                e.insert(c);
            }
            e.rank()
        }
    }

    /// Indices of the leftmost maximal set of independent columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut e = Echelon::new();
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if e.insert(c) {
                out.push(j);
            }
        }
        out
    }

    /// Reduced row echelon form: nonzero rows and their pivot columns.
    pub fn rref(&self) -> Vec<(usize, SparseVec)> {
        let mut e = Echelon::new();
        for r in self.rows() {
            e.insert(&r);
        }
        e.reduced_rows()
    }

    /// A basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let rref = self.rref();
        let pivots: std::collections::BTreeSet<usize> = rref.iter().map(|(p, _)| *p).collect();
        let mut out = Vec::new();
        for f in (0..self.ncols()).filter(|j| !pivots.contains(j)) {
            let mut terms = vec![(f, Scalar::one())];
            for (p, row) in &rref {
                let c = row.get(f);
                if !c.is_zero() {
                    terms.push((*p, -c));
                }
            }
            out.push(SparseVec::from_terms(terms));
        }
        out
    }

    /// Some x with `self * x = b`, preferring the leftmost independent columns.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let mut e = Echelon::tracking();
        for c in &self.cols {
            e.insert(c);
        }
        e.express(b)
    }

    /// A right inverse built on the leftmost independent columns, if the matrix is onto.
    pub fn right_inverse(&self) -> Option<Matrix> {
        let mut e = Echelon::tracking();
        for c in &self.cols {
            e.insert(c);
        }
        if e.rank() < self.rows {
            return None;
        }
        let cols = (0..self.rows).map(|i| e.express(&SparseVec::unit(i)).expect("onto")).collect();
        Some(Matrix { rows: self.ncols(), cols })
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.ncols() {
            return None;
        }
        self.right_inverse()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix { rows: self.rows, cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    /// Keeps the listed rows, renumbered in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        Matrix {
            rows: idx.len(),
            cols: self
                .cols
                .iter()
                .map(|c| {
                    SparseVec::from_terms(
                        c.iter().filter(|(i, _)| pos[*i] != usize::MAX).map(|(i, x)| (pos[i], x.clone())),
                    )
                })
                .collect(),
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Matrix { rows: self.rows, cols }
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.ncols());
        let off = self.rows;
        Matrix {
            rows: self.rows + other.rows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.add(&b.map_indices(|i| i + off)))
                .collect(),
        }
    }

    /// Kronecker product; row and column indices are ordered with `self` major.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut terms = Vec::with_capacity(a.nnz() * b.nnz());
                for (i, x) in a.iter() {
                    for (k, y) in b.iter() {
                        terms.push((i * other.rows + k, x * y));
                    }
                }
                cols.push(SparseVec::from_terms(terms));
            }
        }
        Matrix { rows: self.rows * other.rows, cols }
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::nrows).sum();
        let mut cols = Vec::new();
        let mut off = 0;
        for b in blocks {
            for c in &b.cols {
                cols.push(c.map_indices(|i| i + off));
            }
            off += b.rows;
        }
        Matrix { rows, cols }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.ncols())?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row_sum() {
        let m = Matrix::from_int_rows(&[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).is_zero());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn right_inverse_uses_leftmost_pivot() {
        let p = Matrix::from_int_rows(&[&[1, 0]]);
        let s = p.right_inverse().unwrap();
        assert_eq!(s, Matrix::from_int_rows(&[&[1], &[0]]));
        assert!(Matrix::zeros(1, 1).right_inverse().is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_int_rows(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
    }

    #[test]
    fn kron_shape_and_order() {
        let a = Matrix::from_int_rows(&[&[1, 2]]);
        let b = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k, Matrix::from_int_rows(&[&[0, 1, 0, 2], &[1, 0, 2, 0]]));
    }
}
