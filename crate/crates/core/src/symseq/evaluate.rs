use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::SymmetricSequence;
use crate::exactlin::{koszul_sign, Accumulator, GradedVectorSpace, Matrix, Scalar, SignRule, SparseVec};
use crate::symrep::{coinvariants_from_average, Coinvariants, Permutation};
use crate::{Error, Result};

/// One basis vector of `⊕ₙ M[n] ⊗_{Σₙ} X^{⊗n}`: the class of
/// `section[local] ⊗ x_{tuple[0]} ⊗ … ⊗ x_{tuple[n-1]}` with `tuple` sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvalBasis {
    pub arity: usize,
    pub tuple: Vec<usize>,
    pub local: usize,
}

#[derive(Debug)]
struct Orbit {
    coinv: Arc<Coinvariants>,
    /// Flat position of each coinvariant basis vector, `None` above the cap.
    positions: Vec<Option<usize>>,
}

type RunKey = (usize, Vec<(usize, usize, bool)>);

/// The value `F(X)` of an analytic functor, truncated at an internal degree.
#[derive(Debug)]
pub struct Evaluation {
    seq: SymmetricSequence,
    input: GradedVectorSpace,
    input_degrees: Vec<i32>,
    cap: i32,
    honest_cap: i32,
    space: GradedVectorSpace,
    basis: Vec<EvalBasis>,
    orbits: HashMap<Vec<usize>, Orbit>,
}

/// Coinvariant data of `M[n]` under a Young subgroup twisted by signs, shared
/// across evaluations of the same sequence.
#[derive(Default, Debug)]
pub struct OrbitCache {
    map: Mutex<HashMap<RunKey, Arc<Coinvariants>>>,
}

impl OrbitCache {
    pub fn new() -> Self {
        OrbitCache::default()
    }

    fn get(&self, seq: &SymmetricSequence, key: RunKey) -> Arc<Coinvariants> {
        if let Some(c) = self.map.lock().expect("cache lock").get(&key) {
            return c.clone();
        }
        let m = seq.component(key.0);
        let gens: Vec<(usize, bool)> = key
            .1
            .iter()
            .flat_map(|&(start, len, odd)| (start..start + len - 1).map(move |i| (i, odd)))
            .collect();
        let c = if gens.is_empty() {
            let n = m.dim();
            Coinvariants {
                space: m.space().clone(),
                projection: Matrix::identity(n),
                section: Matrix::identity(n),
            }
        } else {
            coinvariants_from_average(m.space(), &m.twisted_average(&gens))
        };
        let c = Arc::new(c);
        self.map.lock().expect("cache lock").insert(key, c.clone());
        c
    }
}

impl Evaluation {
    pub fn new(seq: &SymmetricSequence, input: &GradedVectorSpace, cap: i32) -> Result<Self> {
        Self::with_cache(seq, input, cap, &OrbitCache::new())
    }

    pub fn with_cache(
        seq: &SymmetricSequence,
        input: &GradedVectorSpace,
        cap: i32,
        cache: &OrbitCache,
    ) -> Result<Self> {
        let input_degrees = input.degrees();
        let min_x = input.min_degree();
        let honest_cap = match (seq.is_truncated(), min_x) {
            (true, Some(m)) if m <= 0 => {
                return Err(Error::NonConvergent(format!(
                    "input has a basis vector in degree {m} and the sequence is only known through arity {}",
                    seq.max_arity()
                )))
            }
            (true, Some(m)) => cap.min((seq.max_arity() as i32 + 1) * m + seq.min_degree().unwrap_or(0).min(0) - 1),
            _ => cap,
        };
        let rule = seq.sign_rule();
        let mut entries: Vec<(i32, EvalBasis)> = Vec::new();
        let mut pending: Vec<(Vec<usize>, Arc<Coinvariants>, i32)> = Vec::new();
        for n in 0..=seq.max_arity() {
            let Some(m) = seq.get(n) else { continue };
            let mdeg_min = m.space().min_degree().unwrap_or(0);
            for tuple in sorted_tuples(&input_degrees, n, cap - mdeg_min) {
                let tdeg: i32 = tuple.iter().map(|&i| input_degrees[i]).sum();
                let key = (n, runs(&tuple, &input_degrees, rule));
                let coinv = cache.get(seq, key);
                let qdegs = coinv.space.degrees();
                for (k, qd) in qdegs.iter().enumerate() {
                    if tdeg + qd <= cap {
                        entries.push((tdeg + qd, EvalBasis { arity: n, tuple: tuple.clone(), local: k }));
                    }
                }
                pending.push((tuple, coinv, tdeg));
            }
        }
        entries.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then(a.1.arity.cmp(&b.1.arity))
                .then(a.1.tuple.cmp(&b.1.tuple))
                .then(a.1.local.cmp(&b.1.local))
        });
        let index: HashMap<(Vec<usize>, usize), usize> =
            entries.iter().enumerate().map(|(i, (_, b))| ((b.tuple.clone(), b.local), i)).collect();
        let mut orbits = HashMap::new();
        for (tuple, coinv, _) in pending {
            let positions =
                (0..coinv.space.total_dim()).map(|k| index.get(&(tuple.clone(), k)).copied()).collect();
            orbits.insert(tuple, Orbit { coinv, positions });
        }
        let degs: Vec<i32> = entries.iter().map(|e| e.0).collect();
        Ok(Evaluation {
            seq: seq.clone(),
            input: input.clone(),
            input_degrees,
            cap,
            honest_cap,
            space: GradedVectorSpace::from_degrees(&degs),
            basis: entries.into_iter().map(|e| e.1).collect(),
            orbits,
        })
    }

    pub fn sequence(&self) -> &SymmetricSequence {
        &self.seq
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn input(&self) -> &GradedVectorSpace {
        &self.input
    }

    pub fn input_degrees(&self) -> &[i32] {
        &self.input_degrees
    }

    pub fn cap(&self) -> i32 {
        self.cap
    }

    /// The largest degree through which the result equals the untruncated functor.
    pub fn honest_cap(&self) -> i32 {
        self.honest_cap
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[EvalBasis] {
        &self.basis
    }

    pub fn degree_of(&self, idx: usize) -> i32 {
        let b = &self.basis[idx];
        let tdeg: i32 = b.tuple.iter().map(|&i| self.input_degrees[i]).sum();
        let orbit = &self.orbits[&b.tuple];
        tdeg + orbit.coinv.space.degree_of(b.local)
    }

    /// Indices of the basis vectors coming from arity `n`.
    pub fn arity_part(&self, n: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].arity == n).collect()
    }

    /// A chain-level representative `(arity, m, tuple)` of a basis vector.
    pub fn representative(&self, idx: usize) -> (usize, SparseVec, &[usize]) {
        let b = &self.basis[idx];
        let orbit = &self.orbits[&b.tuple];
        (b.arity, orbit.coinv.section.column(b.local).clone(), &b.tuple)
    }

    /// Adds `coef · [m ⊗ x_{tuple}]` to `acc`, for any (unsorted) tuple.
    pub fn project_into(&self, acc: &mut Accumulator, coef: &Scalar, arity: usize, m: &SparseVec, tuple: &[usize]) {
        if coef.is_zero() || m.is_zero() {
            return;
        }
        let tdeg: i32 = tuple.iter().map(|&i| self.input_degrees[i]).sum();
        if tdeg + self.seq.component(arity).space().min_degree().unwrap_or(0) > self.cap {
            return;
        }
        let sorting = Permutation::sorting(tuple);
        let mut sorted = vec![0; tuple.len()];
        for (i, &x) in tuple.iter().enumerate() {
            sorted[sorting.apply(i)] = x;
        }
        let Some(orbit) = self.orbits.get(&sorted) else { return };
        let degs: Vec<i32> = tuple.iter().map(|&i| self.input_degrees[i]).collect();
        let neg = koszul_sign(sorting.images(), &degs, self.seq.sign_rule());
        let moved = if sorting.is_identity() {
            m.clone()
        } else {
            self.seq.component(arity).act(&sorting, m)
        };
        let coords = orbit.coinv.projection.apply(&moved);
        let c = if neg { -coef } else { coef.clone() };
        for (k, x) in coords.iter() {
            if let Some(pos) = orbit.positions[k] {
                acc.add(pos, &(x * &c));
            }
        }
    }

    pub fn project(&self, arity: usize, m: &SparseVec, tuple: &[usize]) -> SparseVec {
        let mut acc = Accumulator::new();
        self.project_into(&mut acc, &Scalar::one(), arity, m, tuple);
        acc.finish()
    }

    /// The matrix of `F(f): F(X) → F(Y)` for a degree-preserving `f: X → Y`.
    pub fn map_to(&self, f: &Matrix, target: &Evaluation) -> Matrix {
        let cols = (0..self.dim()).map(|idx| self.map_basis(idx, f, target)).collect();
        Matrix::from_columns(target.dim(), cols)
    }

    fn map_basis(&self, idx: usize, f: &Matrix, target: &Evaluation) -> SparseVec {
        let (n, m, tuple) = self.representative(idx);
        let images: Vec<&SparseVec> = tuple.iter().map(|&i| f.column(i)).collect();
        let mut acc = Accumulator::new();
        let mut choice = vec![0usize; n];
        let supports: Vec<Vec<(usize, Scalar)>> =
            images.iter().map(|v| v.iter().map(|(i, c)| (i, c.clone())).collect()).collect();
        if supports.iter().any(Vec::is_empty) {
            return SparseVec::new();
        }
        loop {
            let mut coef = Scalar::one();
            let mut ys = Vec::with_capacity(n);
            for (slot, &c) in choice.iter().enumerate() {
                let (y, x) = &supports[slot][c];
                coef = &coef * x;
                ys.push(*y);
            }
            target.project_into(&mut acc, &coef, n, &m, &ys);
            // next choice
            let mut k = n;
            loop {
                if k == 0 {
                    return acc.finish();
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < supports[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    }

    /// How many tensor slots of each basis vector come from each input label.
    pub fn multidegree(&self, idx: usize, labels: &[usize], parts: usize) -> Vec<usize> {
        let mut out = vec![0; parts];
        for &i in &self.basis[idx].tuple {
            out[labels[i]] += 1;
        }
        out
    }
}

/// Maximal runs of equal entries: `(start, length, odd)`; odd runs carry the sign
/// character under the Koszul rule. Singleton runs are omitted.
fn runs(tuple: &[usize], degrees: &[i32], rule: SignRule) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < tuple.len() {
        let mut end = start + 1;
        while end < tuple.len() && tuple[end] == tuple[start] {
            end += 1;
        }
        if end - start > 1 {
            let odd = rule.is_koszul() && degrees[tuple[start]].rem_euclid(2) == 1;
            out.push((start, end - start, odd));
        }
        start = end;
    }
    out
}

/// Nondecreasing index tuples of length `n` with total degree `<= cap`.
fn sorted_tuples(degrees: &[i32], n: usize, cap: i32) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        if cap >= 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if degrees.is_empty() {
        return out;
    }
    // suffix minima let us prune: remaining slots use indices >= current.
    let len = degrees.len();
    let mut suffix_min = vec![i32::MAX; len + 1];
    for i in (0..len).rev() {
        suffix_min[i] = suffix_min[i + 1].min(degrees[i]);
    }
    let mut cur = Vec::with_capacity(n);
    fn rec(
        degrees: &[i32],
        suffix_min: &[i32],
        n: usize,
        from: usize,
        sum: i32,
        cap: i32,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == n {
            if sum <= cap {
                out.push(cur.clone());
            }
            return;
        }
        let left = (n - cur.len()) as i32;
        for i in from..degrees.len() {
            if sum + degrees[i] + (left - 1) * suffix_min[i] > cap {
                continue;
            }
            cur.push(i);
            rec(degrees, suffix_min, n, i, sum + degrees[i], cap, cur, out);
            cur.pop();
        }
    }
    rec(degrees, &suffix_min, n, 0, 0, cap, &mut cur, &mut out);
    out
}

/// `evaluate(F, X, D)`.
pub fn evaluate(seq: &SymmetricSequence, input: &GradedVectorSpace, cap: i32) -> Result<Evaluation> {
    Evaluation::new(seq, input, cap)
}
