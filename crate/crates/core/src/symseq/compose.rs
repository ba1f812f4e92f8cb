use std::collections::HashMap;

use super::SymmetricSequence;
use crate::exactlin::{koszul_sign, Accumulator, GradedVectorSpace, Matrix, Scalar, SparseVec};
use crate::symrep::{Permutation, SymGroupModule};
use crate::{Error, Result};

/// Set partitions of `0..n` as block lists, blocks sorted internally and ordered
/// by their minima, enumerated by restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(pos: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if pos == rgs.len() {
            let blocks = if rgs.is_empty() { 0 } else { max + 1 };
            let mut parts = vec![Vec::new(); blocks];
            for (i, &b) in rgs.iter().enumerate() {
                parts[b].push(i);
            }
            out.push(parts);
            return;
        }
        let limit = if pos == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rgs[pos] = b;
            rec(pos + 1, max.max(b), rgs, out);
        }
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

/// A basis vector `[π; f; g₁ … g_k]` of `(F∘G)[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompositeEntry {
    pub partition: usize,
    pub f: usize,
    pub gs: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
struct ArityPart {
    partitions: Vec<Vec<Vec<usize>>>,
    partition_index: HashMap<Vec<Vec<usize>>, usize>,
    entries: Vec<CompositeEntry>,
    index: HashMap<CompositeEntry, usize>,
}

/// `F∘G` on the set-partition basis together with its bookkeeping.
#[derive(Clone, Debug)]
pub struct Composite {
    outer: SymmetricSequence,
    inner: SymmetricSequence,
    seq: SymmetricSequence,
    parts: Vec<ArityPart>,
}

impl Composite {
    pub fn sequence(&self) -> &SymmetricSequence {
        &self.seq
    }

    pub fn outer(&self) -> &SymmetricSequence {
        &self.outer
    }

    pub fn inner(&self) -> &SymmetricSequence {
        &self.inner
    }

    pub fn max_arity(&self) -> usize {
        self.seq.max_arity()
    }

    pub fn entries(&self, n: usize) -> &[CompositeEntry] {
        &self.parts[n].entries
    }

    pub fn partition(&self, n: usize, idx: usize) -> &[Vec<usize>] {
        &self.parts[n].partitions[idx]
    }

    pub fn partitions(&self, n: usize) -> &[Vec<Vec<usize>>] {
        &self.parts[n].partitions
    }

    pub fn index_of(&self, n: usize, entry: &CompositeEntry) -> Option<usize> {
        self.parts[n].index.get(entry).copied()
    }

    pub fn partition_index(&self, n: usize, blocks: &[Vec<usize>]) -> Option<usize> {
        self.parts[n].partition_index.get(blocks).copied()
    }

    /// Coordinates of `f ⊗ g₁ ⊗ … ⊗ g_k` placed on `blocks` (each block sorted,
    /// blocks in any order); the blocks are reordered by their minima.
    pub fn element(&self, n: usize, blocks: &[Vec<usize>], f: &SparseVec, gs: &[SparseVec]) -> SparseVec {
        let mut acc = Accumulator::new();
        self.element_into(&mut acc, &Scalar::one(), n, blocks, f, gs);
        acc.finish()
    }

    pub fn element_into(
        &self,
        acc: &mut Accumulator,
        coef: &Scalar,
        n: usize,
        blocks: &[Vec<usize>],
        f: &SparseVec,
        gs: &[SparseVec],
    ) {
        let k = blocks.len();
        if f.is_zero() || gs.iter().any(SparseVec::is_zero) {
            return;
        }
        let mins: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
        let beta = Permutation::sorting(&mins);
        let mut sorted_blocks = vec![Vec::new(); k];
        for (i, b) in blocks.iter().enumerate() {
            sorted_blocks[beta.apply(i)] = b.clone();
        }
        let Some(&pidx) = self.parts[n].partition_index.get(&sorted_blocks) else { return };
        let f2 = if beta.is_identity() { f.clone() } else { self.outer.component(k).act(&beta, f) };
        let inner_degs: Vec<Vec<i32>> = blocks.iter().map(|b| self.inner.component(b.len()).space().degrees()).collect();
        let rule = self.seq.sign_rule();
        let supports: Vec<Vec<(usize, &Scalar)>> = gs.iter().map(|g| g.iter().collect()).collect();
        let mut choice = vec![0usize; k];
        loop {
            let mut c = coef.clone();
            let mut degs = Vec::with_capacity(k);
            let mut new_gs = vec![0usize; k];
            for i in 0..k {
                let (b, x) = supports[i][choice[i]];
                c = &c * x;
                degs.push(inner_degs[i][b]);
                new_gs[beta.apply(i)] = b;
            }
            if koszul_sign(beta.images(), &degs, rule) {
                c = -c;
            }
            for (fi, fc) in f2.iter() {
                let entry = CompositeEntry { partition: pidx, f: fi, gs: new_gs.clone() };
                if let Some(&pos) = self.parts[n].index.get(&entry) {
                    acc.add(pos, &(&c * fc));
                }
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < supports[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    /// Image of a basis vector under a permutation of the labels.
    pub fn act_on_entry(&self, n: usize, sigma: &Permutation, entry: &CompositeEntry) -> SparseVec {
        let blocks = &self.parts[n].partitions[entry.partition];
        let mut new_blocks = Vec::with_capacity(blocks.len());
        let mut new_gs = Vec::with_capacity(blocks.len());
        for (b, &g) in blocks.iter().zip(&entry.gs) {
            let image: Vec<usize> = b.iter().map(|&x| sigma.apply(x)).collect();
            let tau = Permutation::sorting(&image);
            let mut sorted = image.clone();
            sorted.sort_unstable();
            let gv = SparseVec::unit(g);
            new_gs.push(if tau.is_identity() { gv } else { self.inner.component(b.len()).act(&tau, &gv) });
            new_blocks.push(sorted);
        }
        self.element(n, &new_blocks, &SparseVec::unit(entry.f), &new_gs)
    }

    pub fn degree_of(&self, n: usize, entry: &CompositeEntry) -> i32 {
        let blocks = &self.parts[n].partitions[entry.partition];
        let f = self.outer.component(blocks.len()).space().degree_of(entry.f);
        f + blocks
            .iter()
            .zip(&entry.gs)
            .map(|(b, &g)| self.inner.component(b.len()).space().degree_of(g))
            .sum::<i32>()
    }
}

/// `compose(F, G)`: the composition product on the set-partition basis.
pub fn compose(outer: &SymmetricSequence, inner: &SymmetricSequence) -> Result<Composite> {
    if inner.dim(0) > 0 {
        return Err(Error::Invalid("inner sequence of a composition must vanish in arity 0".into()));
    }
    if outer.sign_rule() != inner.sign_rule() {
        return Err(Error::Invalid("sign rules of composed sequences differ".into()));
    }
    let max = outer.max_arity().min(inner.max_arity());
    let mut composite = Composite {
        outer: outer.clone(),
        inner: inner.clone(),
        seq: SymmetricSequence::zero(0, outer.sign_rule()),
        parts: Vec::new(),
    };
    for n in 0..=max {
        let partitions: Vec<Vec<Vec<usize>>> = set_partitions(n)
            .into_iter()
            .filter(|p| outer.dim(p.len()) > 0 && p.iter().all(|b| inner.dim(b.len()) > 0))
            .collect();
        let mut entries = Vec::new();
        for (pidx, p) in partitions.iter().enumerate() {
            let dims: Vec<usize> = p.iter().map(|b| inner.dim(b.len())).collect();
            for f in 0..outer.dim(p.len()) {
                for gs in product_tuples(&dims) {
                    entries.push(CompositeEntry { partition: pidx, f, gs });
                }
            }
        }
        let partition_index = partitions.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut part = ArityPart { partitions, partition_index, entries, index: HashMap::new() };
        let degree = |e: &CompositeEntry| {
            let blocks = &part.partitions[e.partition];
            outer.component(blocks.len()).space().degree_of(e.f)
                + blocks.iter().zip(&e.gs).map(|(b, &g)| inner.component(b.len()).space().degree_of(g)).sum::<i32>()
        };
        let mut keyed: Vec<(i32, CompositeEntry)> = part.entries.iter().map(|e| (degree(e), e.clone())).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| (a.1.partition, a.1.f, &a.1.gs).cmp(&(b.1.partition, b.1.f, &b.1.gs))));
        part.entries = keyed.into_iter().map(|e| e.1).collect();
        part.index = part.entries.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        composite.parts.push(part);
    }
    let mut comps = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let entries = composite.parts[n].entries.clone();
        let degs: Vec<i32> = entries.iter().map(|e| composite.degree_of(n, e)).collect();
        let space = GradedVectorSpace::from_degrees(&degs);
        let gens = (0..n.saturating_sub(1))
            .map(|i| {
                let s = Permutation::transposition(n, i);
                let cols = entries.iter().map(|e| composite.act_on_entry(n, &s, e)).collect();
                Matrix::from_columns(entries.len(), cols)
            })
            .collect();
        comps.push(SymGroupModule::new(n, space, gens)?);
    }
    let seq = if outer.dim(0) > 0 {
        SymmetricSequence::new_unital(comps, outer.sign_rule())?
    } else {
        SymmetricSequence::new(comps, outer.sign_rule())?
    };
    composite.seq = seq.mark_truncated(outer.is_truncated() || inner.is_truncated());
    Ok(composite)
}

/// All tuples `t` with `t[i] < dims[i]`, lexicographic.
pub fn product_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..7).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
        assert_eq!(set_partitions(3)[1], vec![vec![0, 1], vec![2]]);
    }
}
