use std::collections::BTreeMap;

use super::{Accumulator, Scalar, SparseVec};

/// An incrementally built subspace in row-echelon form.
///
/// Every stored row is normalized to a leading coefficient of one. Optionally
/// each row remembers how it was combined from the inserted generators, which
/// lets [`Echelon::express`] write a vector in terms of those generators.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Row>,
    track: bool,
    inserted: usize,
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new(), track: false, inserted: 0 }
    }

    /// An echelon form that records generator combinations.
    pub fn tracking() -> Self {
        Echelon { rows: BTreeMap::new(), track: true, inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    fn reduce_full(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        if self.rows.is_empty() {
            return (v.clone(), SparseVec::new());
        }
        let mut acc: BTreeMap<usize, Scalar> = v.iter().map(|(i, c)| (i, c.clone())).collect();
        let mut combo = Accumulator::new();
        let mut cursor = 0usize;
        loop {
            let next = acc
                .range(cursor..)
                .find(|(i, c)| !c.is_zero() && self.rows.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            let Some((p, c)) = next else { break };
            let row = &self.rows[&p];
            for (j, x) in row.vec.iter() {
                let slot = acc.entry(j).or_insert_with(Scalar::zero);
                *slot -= &(x * &c);
            }
            if self.track {
                combo.add_vec(&row.combo, &c);
            }
            cursor = p + 1;
        }
        let rest = SparseVec::from_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()));
        (rest, combo.finish())
    }

    /// The remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_full(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v` as the next generator; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let gen = self.inserted;
        self.inserted += 1;
        let (rest, combo) = self.reduce_full(v);
        let Some((p, lead)) = rest.leading() else { return false };
        let inv = lead.recip();
        let vec = rest.scale(&inv);
        let combo = if self.track {
            SparseVec::unit(gen).sub(&combo).scale(&inv)
        } else {
            SparseVec::new()
        };
        self.rows.insert(p, Row { vec, combo });
        true
    }

    /// Coefficients expressing `v` in the inserted generators, if `v` lies in the span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express requires a tracking echelon form");
        let (rest, combo) = self.reduce_full(v);
        rest.is_zero().then_some(combo)
    }

    /// Rows of the fully reduced echelon form, ordered by pivot.
    pub fn reduced_rows(&self) -> Vec<(usize, SparseVec)> {
        let mut out: Vec<(usize, SparseVec)> = Vec::with_capacity(self.rows.len());
        // Back substitution from the last pivot upwards.
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut v = row.vec.clone();
            for (&q, r) in done.iter() {
                let c = v.get(q);
                if !c.is_zero() {
                    v = v.add_scaled(r, &-c);
                }
            }
            done.insert(p, v);
        }
        for (p, v) in done {
            out.push((p, v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[i64]) -> SparseVec {
        SparseVec::from_dense(&v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&sv(&[1, 2, 3])));
        assert!(e.insert(&sv(&[0, 1, 1])));
        assert!(!e.insert(&sv(&[1, 3, 4])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&sv(&[2, 5, 7])));
        assert!(!e.contains(&sv(&[0, 0, 1])));
    }

    #[test]
    fn express_in_generators() {
        let mut e = Echelon::tracking();
        e.insert(&sv(&[1, 1, 0]));
        e.insert(&sv(&[0, 1, 1]));
        let c = e.express(&sv(&[2, 5, 3])).unwrap();
        assert_eq!(c.to_dense(2), vec![Scalar::from_int(2), Scalar::from_int(3)]);
        assert!(e.express(&sv(&[1, 0, 0])).is_none());
    }

    #[test]
    fn reduced_rows_are_reduced() {
        let mut e = Echelon::new();
        e.insert(&sv(&[1, 1, 1]));
        e.insert(&sv(&[0, 1, 2]));
        let rows = e.reduced_rows();
        assert_eq!(rows[0].1, sv(&[1, 0, -1]));
        assert_eq!(rows[1].1, sv(&[0, 1, 2]));
    }
}
