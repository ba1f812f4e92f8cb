use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactlin::{Echelon, GradedVectorSpace, Matrix, Scalar, SparseVec};
use crate::operads::free_action;
use crate::symseq::{Evaluation, OrbitCache};
use crate::{Error, Result};

use super::{AlgebraOverOperad, Quotient};

/// `B_p = T^{p+1}C` for `p ≤ top`, with faces `d_i = T^i μ T^{p−i−1}`, `d_p = T^p ξ`
/// and degeneracies `s_i = T^{i+1} η T^{p−i}`.
#[derive(Clone, Debug)]
pub struct BarResolution {
    algebra: AlgebraOverOperad,
    /// `towers[q]` is `T^q C` for `q ≥ 1`; slot 0 is unused.
    towers: Vec<Option<Arc<Evaluation>>>,
    /// `faces[p][i]: B_p → B_{p−1}` for `1 ≤ p ≤ top + 1`.
    faces: Vec<Vec<Matrix>>,
    /// `degeneracies[p][i]: B_p → B_{p+1}` for `p ≤ top`.
    degeneracies: Vec<Vec<Matrix>>,
    augmentation: Matrix,
    top: usize,
}

/// The bar resolution through simplicial degree `top + 1`, so that homology is
/// available through `top`.
pub fn bar_resolution(c: &AlgebraOverOperad, top: usize) -> Result<BarResolution> {
    if !c.is_connected() {
        return Err(Error::NotConnected("the bar construction needs a positively graded carrier".into()));
    }
    let op = c.operad();
    let cap = c.cap();
    let cache = OrbitCache::new();
    let mut towers: Vec<Option<Arc<Evaluation>>> = vec![None];
    let mut input = c.carrier().clone();
    for _ in 0..top + 2 {
        let e = Arc::new(Evaluation::with_cache(op.seq(), &input, cap, &cache)?);
        input = e.space().clone();
        towers.push(Some(e));
    }
    let level = |q: usize| towers[q].as_ref().expect("tower level").clone();
    let space = |q: usize| if q == 0 { c.carrier().clone() } else { level(q).space().clone() };

    // ξ: TC → C
    let t1 = level(1);
    let xi_cols = (0..t1.dim())
        .map(|idx| {
            let (_, m, tuple) = t1.representative(idx);
            let inputs: Vec<SparseVec> = tuple.iter().map(|&i| SparseVec::unit(i)).collect();
            c.theta(&m, &inputs)
        })
        .collect();
    let xi = Matrix::from_columns(c.dim(), xi_cols);
    // μ: T^q C → T^{q−1} C for q ≥ 2
    let mu = |q: usize| -> Matrix {
        let outer = level(q);
        let inner = level(q - 1);
        let cols = (0..outer.dim())
            .map(|idx| {
                let (_, m, tuple) = outer.representative(idx);
                let inputs: Vec<SparseVec> = tuple.iter().map(|&i| SparseVec::unit(i)).collect();
                free_action(op, &inner, &m, &inputs)
            })
            .collect();
        Matrix::from_columns(inner.dim(), cols)
    };
    // η: T^q C → T^{q+1} C
    let eta = |q: usize| -> Matrix {
        let target = level(q + 1);
        let cols = (0..space(q).total_dim()).map(|y| target.project(1, op.unit(), &[y])).collect();
        Matrix::from_columns(target.dim(), cols)
    };
    // T^times applied to g: T^a C → T^b C.
    let lift = |mut g: Matrix, a: usize, b: usize, times: usize| -> Matrix {
        for t in 1..=times {
            g = level(a + t).map_to(&g, &level(b + t));
        }
        g
    };

    let mut faces = vec![Vec::new()];
    for p in 1..=top + 1 {
        let row = (0..=p)
            .map(|i| {
                let q = p + 1 - i;
                let base = if q == 1 { xi.clone() } else { mu(q) };
                lift(base, q, q - 1, i)
            })
            .collect();
        faces.push(row);
    }
    let degeneracies = (0..=top)
        .map(|p| (0..=p).map(|i| lift(eta(p - i), p - i, p - i + 1, i + 1)).collect())
        .collect();
    Ok(BarResolution { algebra: c.clone(), towers, faces, degeneracies, augmentation: xi, top })
}

impl BarResolution {
    pub fn algebra(&self) -> &AlgebraOverOperad {
        &self.algebra
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// `B_p` as a graded space.
    pub fn level(&self, p: usize) -> &GradedVectorSpace {
        self.towers[p + 1].as_ref().expect("tower level").space()
    }

    pub fn face(&self, p: usize, i: usize) -> &Matrix {
        &self.faces[p][i]
    }

    pub fn degeneracy(&self, p: usize, i: usize) -> &Matrix {
        &self.degeneracies[p][i]
    }

    /// `ξ: B₀ → C`.
    pub fn augmentation(&self) -> &Matrix {
        &self.augmentation
    }

    /// Every simplicial identity that fails, named as an equation.
    pub fn verify_simplicial_identities(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = |p: usize, i: usize| &self.faces[p][i];
        let s = |p: usize, i: usize| &self.degeneracies[p][i];
        if self.augmentation.mul(d(1, 0)) != self.augmentation.mul(d(1, 1)) {
            out.push("ξd₀ = ξd₁ on B₁".to_string());
        }
        for p in 2..=self.top + 1 {
            for j in 0..=p {
                for i in 0..j {
                    if d(p - 1, i).mul(d(p, j)) != d(p - 1, j - 1).mul(d(p, i)) {
                        out.push(format!("d{i}d{j} = d{}d{i} on B{p}", j - 1));
                    }
                }
            }
        }
        for p in 0..self.top {
            for j in 0..=p {
                for i in 0..=j {
                    if s(p + 1, i).mul(s(p, j)) != s(p + 1, j + 1).mul(s(p, i)) {
                        out.push(format!("s{i}s{j} = s{}s{i} on B{p}", j + 1));
                    }
                }
            }
        }
        for p in 0..=self.top {
            let id = Matrix::identity(self.level(p).total_dim());
            for j in 0..=p {
                for i in 0..=p + 1 {
                    let lhs = d(p + 1, i).mul(s(p, j));
                    let rhs = if i < j {
                        s(p - 1, j - 1).mul(d(p, i))
                    } else if i == j || i == j + 1 {
                        id.clone()
                    } else {
                        s(p - 1, j).mul(d(p, i - 1))
                    };
                    if lhs != rhs {
                        out.push(format!("d{i}s{j} on B{p}"));
                    }
                }
            }
        }
        out
    }

    fn degenerate(&self, p: usize) -> Echelon {
        let mut e = Echelon::new();
        if p > 0 {
            for s in &self.degeneracies[p - 1] {
                for c in s.columns() {
                    e.insert(c);
                }
            }
        }
        e
    }

    /// `Σ (−1)^i d_i: B_p → B_{p−1}`.
    pub fn boundary(&self, p: usize) -> Matrix {
        let mut out = Matrix::zeros(self.level(p - 1).total_dim(), self.level(p).total_dim());
        for (i, f) in self.faces[p].iter().enumerate() {
            out = out.add(&f.scale(&Scalar::sign(i % 2 == 1)));
        }
        out
    }

    /// Normalized chains `N_p = B_p / degenerate` and the induced boundaries.
    pub fn normalized(&self) -> (Vec<Quotient>, Vec<Matrix>) {
        let quotients: Vec<Quotient> = (0..=self.top + 1).map(|p| Quotient::new(self.level(p), &self.degenerate(p))).collect();
        let mut boundaries = vec![Matrix::zeros(0, quotients[0].kept.len())];
        for p in 1..=self.top + 1 {
            let full = self.boundary(p);
            let restricted = full.select_columns(&quotients[p].kept);
            boundaries.push(quotients[p - 1].projection.mul(&restricted));
        }
        (quotients, boundaries)
    }

    /// Homology of the normalized complex, by simplicial degree then internal degree.
    pub fn homology(&self) -> Vec<BTreeMap<i32, usize>> {
        let (quotients, boundaries) = self.normalized();
        (0..=self.top)
            .map(|p| {
                let mut out = BTreeMap::new();
                for (&deg, &n) in quotients[p].space.dims() {
                    let into = if p == 0 { 0 } else { block_rank(&boundaries[p], &quotients[p].space, deg) };
                    let from = block_rank(&boundaries[p + 1], &quotients[p + 1].space, deg);
                    let h = n - into - from;
                    if h > 0 {
                        out.insert(deg, h);
                    }
                }
                out
            })
            .collect()
    }

    /// Whether `ξ` induces `H₀ ≅ C`.
    pub fn augmentation_is_iso(&self) -> bool {
        let h0 = &self.homology()[0];
        let (quotients, _) = self.normalized();
        let xi = self.augmentation.select_columns(&quotients[0].kept);
        super::dims_of(self.algebra.carrier()) == *h0
            && self.algebra.carrier().dims().keys().all(|&d| block_rank(&xi, &quotients[0].space, d) == self.algebra.carrier().dim(d))
    }
}

/// Rank of the columns of `m` lying in internal degree `deg` of `source`.
fn block_rank(m: &Matrix, source: &GradedVectorSpace, deg: i32) -> usize {
    let cols: Vec<usize> = source.range(deg).collect();
    if cols.is_empty() {
        return 0;
    }
    m.select_columns(&cols).rank()
}
