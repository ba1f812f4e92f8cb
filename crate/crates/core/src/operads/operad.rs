use std::collections::BTreeMap;
use std::fmt;

use crate::exactlin::{koszul_sign, Accumulator, Matrix, Scalar, SignRule, SparseVec};
use crate::symrep::Permutation;
use crate::symseq::SymmetricSequence;
use crate::{Error, Result};

/// A composition signature `(k; j₁, …, j_k)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub outer: usize,
    pub inner: Vec<usize>,
}

impl Signature {
    pub fn new(inner: Vec<usize>) -> Self {
        Signature { outer: inner.len(), inner }
    }

    pub fn total(&self) -> usize {
        self.inner.iter().sum()
    }

    pub fn parse(s: &str) -> Option<Signature> {
        let (k, rest) = s.split_once(';')?;
        let k: usize = k.trim().parse().ok()?;
        let inner: Vec<usize> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?
        };
        (inner.len() == k).then_some(Signature { outer: k, inner })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.inner.iter().map(usize::to_string).collect();
        write!(f, "{};{}", self.outer, inner.join(","))
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// All signatures with `k ≥ 1`, `jᵢ ≥ 1`, `Σ jᵢ ≤ max` whose components are nonzero.
pub fn signatures(seq: &SymmetricSequence, max: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    for k in 1..=max.min(seq.max_arity()) {
        if seq.dim(k) == 0 {
            continue;
        }
        for js in compositions_bounded(k, max) {
            if js.iter().all(|&j| seq.dim(j) > 0) {
                out.push(Signature::new(js));
            }
        }
    }
    out
}

/// Tuples of `k` positive integers with sum at most `max`.
pub(crate) fn compositions_bounded(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len() - 1;
        for j in 1..=left.saturating_sub(remaining) {
            cur.push(j);
            rec(k, left - j, cur, out);
            cur.pop();
        }
    }
    if k <= max {
        rec(k, max, &mut cur, &mut out);
    }
    out
}

/// The permutation sending consecutive blocks of the given sizes onto `blocks`.
pub fn block_placement(blocks: &[Vec<usize>]) -> Permutation {
    let images: Vec<usize> = blocks.iter().flatten().copied().collect();
    Permutation::new(images).expect("blocks partition the label set")
}

/// An operad: a symmetric sequence with unit and composition maps.
///
/// `γ` for a signature is a flat matrix whose columns are indexed by the
/// lexicographic tensor basis of `M[k] ⊗ M[j₁] ⊗ … ⊗ M[j_k]`, `M[k]` major.
#[derive(Clone, Debug)]
pub struct Operad {
    name: String,
    seq: SymmetricSequence,
    unit: SparseVec,
    gamma: BTreeMap<Signature, Matrix>,
}

impl Operad {
    pub fn new(
        name: impl Into<String>,
        seq: SymmetricSequence,
        unit: SparseVec,
        gamma: BTreeMap<Signature, Matrix>,
    ) -> Result<Self> {
        for (sig, m) in &gamma {
            let cols: usize = seq.dim(sig.outer) * sig.inner.iter().map(|&j| seq.dim(j)).product::<usize>();
            if sig.total() > seq.max_arity() || m.ncols() != cols || m.nrows() != seq.dim(sig.total()) {
                return Err(Error::Invalid(format!("γ table for ({sig}) has the wrong shape")));
            }
        }
        if unit.max_index().is_some_and(|i| i >= seq.dim(1)) {
            return Err(Error::Invalid("unit lies outside arity one".into()));
        }
        Ok(Operad { name: name.into(), seq, unit, gamma })
    }

    /// Builds every `γ` table with `Σ jᵢ ≤ N` from a rule on basis vectors.
    pub fn from_rule(
        name: impl Into<String>,
        seq: SymmetricSequence,
        unit: SparseVec,
        mut rule: impl FnMut(&Signature, usize, &[usize]) -> SparseVec,
    ) -> Result<Self> {
        let mut gamma = BTreeMap::new();
        for sig in signatures(&seq, seq.max_arity()) {
            let dims: Vec<usize> = sig.inner.iter().map(|&j| seq.dim(j)).collect();
            let mut cols = Vec::new();
            for f in 0..seq.dim(sig.outer) {
                for gs in crate::symseq::product_tuples(&dims) {
                    cols.push(rule(&sig, f, &gs));
                }
            }
            let rows = seq.dim(sig.total());
            gamma.insert(sig, Matrix::from_columns(rows, cols));
        }
        Operad::new(name, seq, unit, gamma)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn seq(&self) -> &SymmetricSequence {
        &self.seq
    }

    pub fn max_arity(&self) -> usize {
        self.seq.max_arity()
    }

    pub fn sign_rule(&self) -> SignRule {
        self.seq.sign_rule()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.seq.dim(n)
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn gamma_tables(&self) -> &BTreeMap<Signature, Matrix> {
        &self.gamma
    }

    pub fn gamma(&self, sig: &Signature) -> Option<&Matrix> {
        self.gamma.get(sig)
    }

    /// Replaces one `γ` table without re-checking any law.
    pub fn with_gamma_table(mut self, sig: Signature, table: Matrix) -> Self {
        self.gamma.insert(sig, table);
        self
    }

    fn column_index(&self, sig: &Signature, f: usize, gs: &[usize]) -> usize {
        let mut idx = f;
        for (&j, &g) in sig.inner.iter().zip(gs) {
            idx = idx * self.seq.dim(j) + g;
        }
        idx
    }

    /// `γ(f; g₁, …, g_k)` on basis vectors.
    pub fn gamma_basis(&self, inner: &[usize], f: usize, gs: &[usize]) -> SparseVec {
        let sig = Signature::new(inner.to_vec());
        match self.gamma.get(&sig) {
            Some(m) => m.column(self.column_index(&sig, f, gs)).clone(),
            None => SparseVec::new(),
        }
    }

    /// `γ` extended multilinearly; `gs` pairs each argument with its arity.
    pub fn compose_vec(&self, f: &SparseVec, gs: &[(usize, SparseVec)]) -> SparseVec {
        let mut acc = Accumulator::new();
        self.compose_into(&mut acc, &Scalar::one(), f, gs);
        acc.finish()
    }

    pub fn compose_into(&self, acc: &mut Accumulator, coef: &Scalar, f: &SparseVec, gs: &[(usize, SparseVec)]) {
        let inner: Vec<usize> = gs.iter().map(|g| g.0).collect();
        let sig = Signature::new(inner);
        let Some(m) = self.gamma.get(&sig) else { return };
        if f.is_zero() || gs.iter().any(|g| g.1.is_zero()) {
            return;
        }
        let supports: Vec<Vec<(usize, &Scalar)>> = gs.iter().map(|g| g.1.iter().collect()).collect();
        let mut choice = vec![0usize; gs.len()];
        let mut basis = vec![0usize; gs.len()];
        loop {
            let mut c = coef.clone();
            for (i, &ch) in choice.iter().enumerate() {
                let (b, x) = supports[i][ch];
                basis[i] = b;
                c = &c * x;
            }
            for (fi, fc) in f.iter() {
                acc.add_vec(m.column(self.column_index(&sig, fi, &basis)), &(&c * fc));
            }
            let mut i = gs.len();
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

    /// `σ_π · γ(f; g)`: composition placed on the blocks of a set partition.
    pub fn compose_on_blocks(&self, blocks: &[Vec<usize>], f: &SparseVec, gs: &[SparseVec]) -> SparseVec {
        let args: Vec<(usize, SparseVec)> = blocks.iter().map(|b| b.len()).zip(gs.iter().cloned()).collect();
        let v = self.compose_vec(f, &args);
        let sigma = block_placement(blocks);
        if sigma.is_identity() {
            v
        } else {
            self.seq.component(sigma.degree()).act(&sigma, &v)
        }
    }

    /// Degree of the `b`-th basis vector of `M[n]`.
    pub fn degree(&self, n: usize, b: usize) -> i32 {
        self.seq.component(n).space().degree_of(b)
    }
}

/// One failed instance of an operad law, summarized per signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub signature: Signature,
    /// Further context: inner arities for associativity, the moved slot for equivariance.
    pub detail: String,
    /// Rank of the matrix of discrepancies over the tested basis vectors.
    pub rank: usize,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({})", self.law, self.signature)?;
        if !self.detail.is_empty() {
            write!(f, " [{}]", self.detail)?;
        }
        write!(f, ", discrepancy rank {}", self.rank)
    }
}

struct Discrepancies {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl Discrepancies {
    fn new(rows: usize) -> Self {
        Discrepancies { rows, cols: Vec::new() }
    }

    fn push(&mut self, lhs: &SparseVec, rhs: &SparseVec) {
        let d = lhs.sub(rhs);
        if !d.is_zero() {
            self.cols.push(d);
        }
    }

    fn report(self, law: &'static str, signature: &Signature, detail: String, out: &mut Vec<LawViolation>) {
        if !self.cols.is_empty() {
            let rank = Matrix::from_columns(self.rows, self.cols).rank();
            out.push(LawViolation { law, signature: signature.clone(), detail, rank });
        }
    }
}

/// Checks unit, equivariance and associativity at every signature of total arity `≤ N`.
pub fn check_operad_laws(op: &Operad) -> Vec<LawViolation> {
    let mut out = Vec::new();
    let seq = op.seq();
    let n_max = op.max_arity();
    let rule = op.sign_rule();
    let sigs = signatures(seq, n_max);

    // unit
    for n in 1..=n_max {
        if seq.dim(n) == 0 {
            continue;
        }
        let left = Signature::new(vec![n]);
        let mut d = Discrepancies::new(seq.dim(n));
        for f in 0..seq.dim(n) {
            let unit = op.compose_vec(op.unit(), &[(n, SparseVec::unit(f))]);
            d.push(&unit, &SparseVec::unit(f));
        }
        d.report("left unit", &left, String::new(), &mut out);
        let right = Signature::new(vec![1; n]);
        let mut d = Discrepancies::new(seq.dim(n));
        for f in 0..seq.dim(n) {
            let args: Vec<(usize, SparseVec)> = (0..n).map(|_| (1, op.unit().clone())).collect();
            d.push(&op.compose_vec(&SparseVec::unit(f), &args), &SparseVec::unit(f));
        }
        d.report("right unit", &right, String::new(), &mut out);
    }

    for sig in &sigs {
        let k = sig.outer;
        let n = sig.total();
        let dims: Vec<usize> = sig.inner.iter().map(|&j| seq.dim(j)).collect();
        let tuples = crate::symseq::product_tuples(&dims);
        let target = seq.component(n);

        // inner equivariance: γ(f; …, τgᵢ, …) = (1 ⊕ … ⊕ τ ⊕ … ⊕ 1)·γ(f; g)
        let mut offset = 0;
        for (i, &j) in sig.inner.iter().enumerate() {
            let gi_mod = seq.component(j);
            for s in 0..j.saturating_sub(1) {
                let tau = Permutation::transposition(j, s);
                let shifted = Permutation::transposition(n, offset + s);
                let mut d = Discrepancies::new(seq.dim(n));
                for f in 0..seq.dim(k) {
                    for gs in &tuples {
                        let moved = gi_mod.act(&tau, &SparseVec::unit(gs[i]));
                        let args: Vec<(usize, SparseVec)> = gs
                            .iter()
                            .enumerate()
                            .map(|(t, &g)| (sig.inner[t], if t == i { moved.clone() } else { SparseVec::unit(g) }))
                            .collect();
                        let lhs = op.compose_vec(&SparseVec::unit(f), &args);
                        let rhs = target.act(&shifted, &op.gamma_basis(&sig.inner, f, gs));
                        d.push(&lhs, &rhs);
                    }
                }
                d.report("equivariance", sig, format!("input {} of block {}", s + 1, i + 1), &mut out);
            }
            offset += j;
        }

        // outer equivariance: γ(f; g) = ε · σ_swap · γ(s_a f; g with a, a+1 swapped)
        let fmod = seq.component(k);
        for a in 0..k.saturating_sub(1) {
            let s = Permutation::transposition(k, a);
            let mut swapped_inner = sig.inner.clone();
            swapped_inner.swap(a, a + 1);
            // consecutive layout of swapped sizes → original positions
            let starts: Vec<usize> = sig.inner.iter().scan(0, |acc, &j| {
                let st = *acc;
                *acc += j;
                Some(st)
            }).collect();
            let mut order: Vec<usize> = (0..k).collect();
            order.swap(a, a + 1);
            let images: Vec<usize> =
                order.iter().flat_map(|&b| (starts[b]..starts[b] + sig.inner[b]).collect::<Vec<_>>()).collect();
            let sigma = Permutation::new(images).expect("block swap");
            let mut d = Discrepancies::new(seq.dim(n));
            for f in 0..seq.dim(k) {
                let sf = fmod.act(&s, &SparseVec::unit(f));
                for gs in &tuples {
                    let mut sg = gs.clone();
                    sg.swap(a, a + 1);
                    let args: Vec<(usize, SparseVec)> =
                        swapped_inner.iter().zip(&sg).map(|(&j, &g)| (j, SparseVec::unit(g))).collect();
                    let inner_val = op.compose_vec(&sf, &args);
                    let mut rhs = target.act(&sigma, &inner_val);
                    if rule.swap_sign(op.degree(sig.inner[a], gs[a]), op.degree(sig.inner[a + 1], gs[a + 1])) {
                        rhs = rhs.neg();
                    }
                    d.push(&op.gamma_basis(&sig.inner, f, gs), &rhs);
                }
            }
            d.report("equivariance", sig, format!("blocks {} and {}", a + 1, a + 2), &mut out);
        }

        // associativity against every choice of third-level arities
        for hs_arities in compositions_bounded(n, n_max) {
            if hs_arities.iter().any(|&h| seq.dim(h) == 0) {
                continue;
            }
            let total: usize = hs_arities.iter().sum();
            let hdims: Vec<usize> = hs_arities.iter().map(|&h| seq.dim(h)).collect();
            let htuples = crate::symseq::product_tuples(&hdims);
            let mut d = Discrepancies::new(seq.dim(total));
            // blocks of h's under each g
            let mut hblocks = Vec::with_capacity(k);
            let mut pos = 0;
            for &j in &sig.inner {
                hblocks.push(pos..pos + j);
                pos += j;
            }
            for f in 0..seq.dim(k) {
                for gs in &tuples {
                    let fg = op.gamma_basis(&sig.inner, f, gs);
                    for hs in &htuples {
                        let hargs: Vec<(usize, SparseVec)> =
                            hs_arities.iter().zip(hs).map(|(&a, &h)| (a, SparseVec::unit(h))).collect();
                        let lhs = op.compose_vec(&fg, &hargs);
                        let mut inner_args = Vec::with_capacity(k);
                        for (i, r) in hblocks.iter().enumerate() {
                            let sub: Vec<(usize, SparseVec)> = hargs[r.clone()].to_vec();
                            let ar: usize = hs_arities[r.clone()].iter().sum();
                            inner_args.push((ar, op.compose_vec(&SparseVec::unit(gs[i]), &sub)));
                        }
                        let mut rhs = op.compose_vec(&SparseVec::unit(f), &inner_args);
                        // (g₁…g_k, h₁…h_m) → (g₁, h_{B₁}, g₂, h_{B₂}, …)
                        let mut dest = Vec::with_capacity(k + hs.len());
                        let mut degs = Vec::with_capacity(k + hs.len());
                        let mut before = 0;
                        let mut gdest = Vec::with_capacity(k);
                        for r in &hblocks {
                            gdest.push(before + gdest.len());
                            before += r.len();
                        }
                        for (i, &g) in gs.iter().enumerate() {
                            dest.push(gdest[i]);
                            degs.push(op.degree(sig.inner[i], g));
                        }
                        for (i, r) in hblocks.iter().enumerate() {
                            for t in r.clone() {
                                dest.push(gdest[i] + 1 + (t - r.start));
                                degs.push(op.degree(hs_arities[t], hs[t]));
                            }
                        }
                        if koszul_sign(&dest, &degs, rule) {
                            rhs = rhs.neg();
                        }
                        d.push(&lhs, &rhs);
                    }
                }
            }
            let detail = hs_arities.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            d.report("associativity", sig, format!("then {detail}"), &mut out);
        }
    }
    out
}

/// Arity-wise maps between two operads.
#[derive(Clone, Debug)]
pub struct OperadMorphism {
    pub source: Operad,
    pub target: Operad,
    pub components: Vec<Matrix>,
}

/// A failed morphism condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismViolation {
    pub condition: &'static str,
    pub location: String,
}

impl OperadMorphism {
    pub fn new(source: Operad, target: Operad, components: Vec<Matrix>) -> Result<Self> {
        let n = source.max_arity().min(target.max_arity());
        if components.len() != n + 1 {
            return Err(Error::Invalid(format!("expected {} components", n + 1)));
        }
        for (a, c) in components.iter().enumerate() {
            if c.ncols() != source.dim(a) || c.nrows() != target.dim(a) {
                return Err(Error::Invalid(format!("component {a} has the wrong shape")));
            }
        }
        Ok(OperadMorphism { source, target, components })
    }

    pub fn max_arity(&self) -> usize {
        self.components.len() - 1
    }

    /// Equivariance, degree preservation, unit and `γ` compatibility.
    pub fn verify(&self) -> Vec<MorphismViolation> {
        let mut out = Vec::new();
        let (src, tgt) = (&self.source, &self.target);
        for (n, phi) in self.components.iter().enumerate() {
            let (ms, mt) = (src.seq().component(n), tgt.seq().component(n));
            for i in 0..n.saturating_sub(1) {
                if phi.mul(&ms.gens()[i]) != mt.gens()[i].mul(phi) {
                    out.push(MorphismViolation { condition: "equivariance", location: format!("arity {n}, s{}", i + 1) });
                }
            }
            for (b, col) in phi.columns().iter().enumerate() {
                let d = ms.space().degree_of(b);
                if col.indices().any(|r| mt.space().degree_of(r) != d) {
                    out.push(MorphismViolation { condition: "degree", location: format!("arity {n}, basis {b}") });
                    break;
                }
            }
        }
        if self.components.len() > 1 && self.components[1].apply(src.unit()) != *tgt.unit() {
            out.push(MorphismViolation { condition: "unit", location: "arity 1".into() });
        }
        for sig in signatures(src.seq(), self.max_arity()) {
            let dims: Vec<usize> = sig.inner.iter().map(|&j| src.dim(j)).collect();
            let mut bad = false;
            'outer: for f in 0..src.dim(sig.outer) {
                for gs in crate::symseq::product_tuples(&dims) {
                    let lhs = self.components[sig.total()].apply(&src.gamma_basis(&sig.inner, f, &gs));
                    let args: Vec<(usize, SparseVec)> = sig
                        .inner
                        .iter()
                        .zip(&gs)
                        .map(|(&j, &g)| (j, self.components[j].column(g).clone()))
                        .collect();
                    let rhs = tgt.compose_vec(self.components[sig.outer].column(f), &args);
                    if lhs != rhs {
                        bad = true;
                        break 'outer;
                    }
                }
            }
            if bad {
                out.push(MorphismViolation { condition: "composition", location: sig.to_string() });
            }
        }
        out
    }

    /// True when every component is square and invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(|c| c.nrows() == c.ncols() && c.rank() == c.ncols())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_round_trip() {
        let s = Signature::new(vec![1, 2]);
        assert_eq!(s.to_string(), "2;1,2");
        assert_eq!(Signature::parse("2;1,2"), Some(s));
        assert_eq!(Signature::parse("3;1,2"), None);
    }

    #[test]
    fn bounded_compositions() {
        assert_eq!(compositions_bounded(2, 3), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert!(compositions_bounded(4, 3).is_empty());
    }
}
