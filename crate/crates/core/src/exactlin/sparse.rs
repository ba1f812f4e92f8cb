use std::collections::BTreeMap;
use std::fmt;

use super::Scalar;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::one())] }
    }

    pub fn single(i: usize, c: Scalar) -> Self {
        if c.is_zero() {
            Self::new()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    /// Builds a vector from arbitrary (index, coefficient) pairs, summing duplicates.
    pub fn from_terms<I: IntoIterator<Item = (usize, Scalar)>>(terms: I) -> Self {
        let mut acc = Accumulator::new();
        for (i, c) in terms {
            acc.add(i, &c);
        }
        acc.finish()
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    /// `self + c * other`, by a linear merge.
    pub fn add_scaled(&self, other: &SparseVec, c: &Scalar) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &-Scalar::one())
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut total = Scalar::zero();
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                total += &(x * y);
                a.next();
                b.next();
            }
        }
        total
    }

    /// Relabels indices through `f`, summing collisions.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> SparseVec {
        SparseVec::from_terms(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }

    /// Keeps only indices satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> SparseVec {
        SparseVec { entries: self.entries.iter().filter(|(i, _)| keep(*i)).cloned().collect() }
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (i, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}:{c}")?;
        }
        f.write_str("]")
    }
}

/// Collects many scaled contributions before producing a `SparseVec`.
#[derive(Default)]
pub struct Accumulator {
    terms: BTreeMap<usize, Scalar>,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator { terms: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_insert_with(Scalar::zero);
        *slot += c;
    }

    pub fn add_vec(&mut self, v: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            self.add(i, &(x * c));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.values().all(Scalar::is_zero)
    }

    pub fn finish(self) -> SparseVec {
        SparseVec { entries: self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_cancels() {
        let a = SparseVec::from_terms([(0, Scalar::one()), (3, Scalar::from_int(2))]);
        let b = SparseVec::from_terms([(3, Scalar::one()), (5, Scalar::one())]);
        let c = a.add_scaled(&b, &Scalar::from_int(-2));
        assert_eq!(c.indices().collect::<Vec<_>>(), vec![0, 5]);
        assert_eq!(c.get(5), Scalar::from_int(-2));
        assert_eq!(a.dot(&b), Scalar::from_int(2));
    }
}
