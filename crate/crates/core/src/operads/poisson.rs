//! Multilinear parts of free Poisson-type algebras.
//!
//! An arity-`n` basis vector is a product, ordered by minimal letter, of
//! desuspended Lie words `s^{-d}P_w` with `w` a Lyndon word on distinct letters.
//! Brackets have degree `d`; with `d = 0` and a single block this is the free
//! Lie algebra.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::exactlin::{koszul_sign, GradedVectorSpace, Matrix, Scalar, SignRule, SparseVec};
use crate::symrep::{Permutation, SymGroupModule};
use crate::symseq::{set_partitions, SymmetricSequence};
use crate::{Error, Result};

use super::operad::Operad;

type Word = Vec<u8>;
type Mono = Vec<Word>;
type Elem = BTreeMap<Mono, Scalar>;

fn add_term(e: &mut Elem, m: Mono, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match e.get_mut(&m) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                e.remove(&m);
            }
        }
        None => {
            e.insert(m, c);
        }
    }
}

fn word_min(w: &Word) -> u8 {
    *w.iter().min().expect("nonempty word")
}

fn is_lyndon(w: &Word) -> bool {
    w[0] == word_min(w)
}

pub(crate) struct PoissonModel {
    shift: i32,
    lie_only: bool,
    rule: SignRule,
    bases: Vec<Vec<Mono>>,
    degrees: Vec<Vec<i32>>,
    index: Vec<HashMap<Mono, usize>>,
    cache: RefCell<HashMap<Word, BTreeMap<Word, Scalar>>>,
    values: RefCell<HashMap<(usize, usize), Elem>>,
}

impl PoissonModel {
    pub(crate) fn new(shift: i32, lie_only: bool, rule: SignRule, max: usize) -> Self {
        let mut bases = Vec::new();
        let mut degrees = Vec::new();
        let mut index = Vec::new();
        for n in 0..=max {
            let mut keyed: Vec<(i32, Mono)> = Vec::new();
            if n > 0 {
                for p in set_partitions(n) {
                    if lie_only && p.len() > 1 {
                        continue;
                    }
                    let choices: Vec<Vec<Word>> = p.iter().map(|b| lyndon_words(b)).collect();
                    let deg = shift * (n - p.len()) as i32;
                    let dims: Vec<usize> = choices.iter().map(Vec::len).collect();
                    for t in crate::symseq::product_tuples(&dims) {
                        keyed.push((deg, t.iter().enumerate().map(|(i, &c)| choices[i][c].clone()).collect()));
                    }
                }
            }
            keyed.sort_by_key(|e| e.0);
            degrees.push(keyed.iter().map(|e| e.0).collect());
            let basis: Vec<Mono> = keyed.into_iter().map(|e| e.1).collect();
            index.push(basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect());
            bases.push(basis);
        }
        PoissonModel { shift, lie_only, rule, bases, degrees, index, cache: RefCell::new(HashMap::new()), values: RefCell::new(HashMap::new()) }
    }

    fn odd(&self, x: i32) -> bool {
        self.rule.is_koszul() && x.rem_euclid(2) == 1
    }

    fn factor_degree(&self, w: &Word) -> i32 {
        self.shift * (w.len() as i32 - 1)
    }

    /// Sorts factors by minimal letter with the Koszul sign.
    fn normalize(&self, factors: Vec<Word>) -> (Mono, bool) {
        let mins: Vec<u8> = factors.iter().map(word_min).collect();
        let sorting = Permutation::sorting(&mins);
        let degs: Vec<i32> = factors.iter().map(|w| self.factor_degree(w)).collect();
        let neg = koszul_sign(sorting.images(), &degs, self.rule);
        let mut out = vec![Vec::new(); factors.len()];
        for (i, w) in factors.into_iter().enumerate() {
            out[sorting.apply(i)] = w;
        }
        (out, neg)
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let (m, neg) = self.normalize(ma.iter().chain(mb).cloned().collect());
                let c = ca * cb;
                add_term(&mut out, m, if neg { -c } else { c });
            }
        }
        out
    }

    /// `s^{-d}[u, v]` as words: `uv − (−1)^{|u||v|} vu` with `|u| = d·len(u)`.
    fn word_bracket(&self, u: &Word, v: &Word) -> [(Word, Scalar); 2] {
        let du = self.shift * u.len() as i32;
        let dv = self.shift * v.len() as i32;
        let uv: Word = u.iter().chain(v).copied().collect();
        let vu: Word = v.iter().chain(u).copied().collect();
        let s = if self.odd(du) && self.odd(dv) { Scalar::one() } else { -Scalar::one() };
        [(uv, Scalar::one()), (vu, s)]
    }

    fn bracket(&self, a: &Elem, b: &Elem) -> Elem {
        let d = self.shift;
        let mut out = Elem::new();
        for (ma, ca) in a {
            let da: Vec<i32> = ma.iter().map(|w| self.factor_degree(w)).collect();
            for (mb, cb) in b {
                let db: Vec<i32> = mb.iter().map(|w| self.factor_degree(w)).collect();
                let total_b: i32 = db.iter().sum();
                let c0 = ca * cb;
                for i in 0..ma.len() {
                    let after_a: i32 = da[i + 1..].iter().sum();
                    for j in 0..mb.len() {
                        let before_b: i32 = db[..j].iter().sum();
                        let neg = (self.odd(total_b + d) && self.odd(after_a))
                            ^ (self.odd(da[i] + d) && self.odd(before_b));
                        for (w, wc) in self.word_bracket(&ma[i], &mb[j]) {
                            let mut factors: Vec<Word> = Vec::with_capacity(ma.len() + mb.len() - 1);
                            factors.extend(ma[..i].iter().cloned());
                            factors.extend(mb[..j].iter().cloned());
                            factors.push(w);
                            factors.extend(mb[j + 1..].iter().cloned());
                            factors.extend(ma[i + 1..].iter().cloned());
                            let (m, sneg) = self.normalize(factors);
                            let c = &c0 * &wc;
                            add_term(&mut out, m, if neg ^ sneg { -c } else { c });
                        }
                    }
                }
            }
        }
        out
    }

    /// Expansion of the standard bracketing of a Lyndon word in `T(y)`.
    fn lie_expand(&self, w: &Word) -> BTreeMap<Word, Scalar> {
        if let Some(e) = self.cache.borrow().get(w) {
            return e.clone();
        }
        let out = if w.len() == 1 {
            BTreeMap::from([(w.clone(), Scalar::one())])
        } else {
            let split = standard_split(w);
            let (u, v) = (w[..split].to_vec(), w[split..].to_vec());
            let (pu, pv) = (self.lie_expand(&u), self.lie_expand(&v));
            let sign = if self.odd(self.shift * u.len() as i32) && self.odd(self.shift * v.len() as i32) {
                Scalar::one()
            } else {
                -Scalar::one()
            };
            let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
            for (x, cx) in &pu {
                for (y, cy) in &pv {
                    let c = cx * cy;
                    for (word, coef) in [
                        (x.iter().chain(y).copied().collect::<Word>(), c.clone()),
                        (y.iter().chain(x).copied().collect::<Word>(), &c * &sign),
                    ] {
                        let e = out.entry(word).or_insert_with(Scalar::zero);
                        *e += &coef;
                    }
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        self.cache.borrow_mut().insert(w.clone(), out.clone());
        out
    }

    /// The value of the `b`-th arity-`n` basis vector on degree-0 generators.
    fn basis_value(&self, n: usize, b: usize) -> Elem {
        if let Some(e) = self.values.borrow().get(&(n, b)) {
            return e.clone();
        }
        let gens: Vec<(Elem, i32)> =
            (0..n).map(|l| (Elem::from([(vec![vec![l as u8]], Scalar::one())]), 0)).collect();
        let e = self.evaluate(n, b, &gens);
        self.values.borrow_mut().insert((n, b), e.clone());
        e
    }

    pub(crate) fn dim(&self, n: usize) -> usize {
        self.bases[n].len()
    }

    fn coords(&self, n: usize, e: &Elem) -> SparseVec {
        let mut rest = e.clone();
        let mut terms = Vec::new();
        while let Some((lead, c)) = rest.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
            assert!(lead.iter().all(is_lyndon), "element outside the Lyndon span: {lead:?}");
            let idx = self.index[n][&lead];
            let value = self.basis_value(n, idx);
            let c = &c / &value[&lead];
            for (m, x) in value {
                add_term(&mut rest, m, -(&c * &x));
            }
            terms.push((idx, c));
        }
        SparseVec::from_terms(terms)
    }

    fn relabel(&self, e: &Elem, map: impl Fn(u8) -> u8) -> Elem {
        let mut out = Elem::new();
        for (m, c) in e {
            let factors = m.iter().map(|w| w.iter().map(|&l| map(l)).collect()).collect();
            let (mm, neg) = self.normalize(factors);
            add_term(&mut out, mm, if neg { -c.clone() } else { c.clone() });
        }
        out
    }

    fn module(&self, n: usize) -> Result<SymGroupModule> {
        let gens = (0..n.saturating_sub(1))
            .map(|i| {
                let s = Permutation::transposition(n, i);
                let cols = (0..self.dim(n))
                    .map(|b| {
                        let e = self.relabel(&self.basis_value(n, b), |l| s.apply(l as usize) as u8);
                        self.coords(n, &e)
                    })
                    .collect();
                Matrix::from_columns(self.dim(n), cols)
            })
            .collect();
        SymGroupModule::new(n, GradedVectorSpace::from_degrees(&self.degrees[n]), gens)
    }

    /// Evaluates the `f`-th arity-`k` basis vector at homogeneous arguments.
    fn evaluate(&self, k: usize, f: usize, args: &[(Elem, i32)]) -> Elem {
        let m = &self.bases[k][f];
        // prefix traversal: (is_op, degree, leaf label)
        let mut prefix: Vec<(bool, i32, usize)> = Vec::new();
        fn walk(w: &[u8], d: i32, out: &mut Vec<(bool, i32, usize)>) {
            if w.len() == 1 {
                out.push((false, 0, w[0] as usize));
                return;
            }
            let split = standard_split(w);
            out.push((true, d, 0));
            walk(&w[..split], d, out);
            walk(&w[split..], d, out);
        }
        for w in m {
            walk(w, self.shift, &mut prefix);
        }
        // ops in prefix order, then inputs in label order
        let ops: Vec<usize> = (0..prefix.len()).filter(|&p| prefix[p].0).collect();
        let mut leaf_pos = vec![0usize; k];
        for (p, item) in prefix.iter().enumerate() {
            if !item.0 {
                leaf_pos[item.2] = p;
            }
        }
        let mut dest = Vec::with_capacity(prefix.len());
        let mut degs = Vec::with_capacity(prefix.len());
        for &p in &ops {
            dest.push(p);
            degs.push(self.shift);
        }
        for (l, &p) in leaf_pos.iter().enumerate() {
            dest.push(p);
            degs.push(args[l].1);
        }
        let neg = koszul_sign(&dest, &degs, self.rule);
        let mut value = Elem::from([(Vec::new(), Scalar::one())]);
        for w in m {
            let (factor, _) = self.eval_word(w, args);
            value = self.mul(&value, &factor);
        }
        if neg {
            for c in value.values_mut() {
                *c = -c.clone();
            }
        }
        value
    }

    /// Value and degree of a bracket tree; the action carries `(−1)^{d·|left|}`
    /// relative to the shifted bracket.
    fn eval_word(&self, w: &[u8], args: &[(Elem, i32)]) -> (Elem, i32) {
        if w.len() == 1 {
            return args[w[0] as usize].clone();
        }
        let split = standard_split(w);
        let (l, dl) = self.eval_word(&w[..split], args);
        let (r, dr) = self.eval_word(&w[split..], args);
        let mut value = self.bracket(&l, &r);
        if self.odd(self.shift) && self.odd(dl) {
            for c in value.values_mut() {
                *c = -c.clone();
            }
        }
        (value, dl + dr + self.shift)
    }

    fn gamma(&self, inner: &[usize], f: usize, gs: &[usize]) -> SparseVec {
        let mut offset = 0u8;
        let mut args = Vec::with_capacity(inner.len());
        for (&j, &g) in inner.iter().zip(gs) {
            let e = self.relabel(&self.basis_value(j, g), |l| l + offset);
            args.push((e, self.degrees[j][g]));
            offset += j as u8;
        }
        let n: usize = inner.iter().sum();
        self.coords(n, &self.evaluate(inner.len(), f, &args))
    }

    /// Word expansion of a Lie basis vector, `(word, coefficient)` pairs.
    pub(crate) fn lie_words(&self, n: usize, b: usize) -> Vec<(Word, Scalar)> {
        assert!(self.lie_only);
        self.lie_expand(&self.bases[n][b][0]).into_iter().collect()
    }

    pub(crate) fn operad(&self, name: &str, max: usize) -> Result<Operad> {
        let mut comps = Vec::with_capacity(max + 1);
        for n in 0..=max {
            comps.push(self.module(n)?);
        }
        let seq = SymmetricSequence::new(comps, self.rule)?;
        Operad::from_rule(name, seq, SparseVec::unit(0), |sig, f, gs| self.gamma(&sig.inner, f, gs))
    }
}

/// Lyndon words on the letters of a sorted block: the minimum first, then any order.
fn lyndon_words(block: &[usize]) -> Vec<Word> {
    let rest: Vec<u8> = block[1..].iter().map(|&x| x as u8).collect();
    Permutation::all(rest.len())
        .into_iter()
        .map(|p| {
            let mut w = vec![block[0] as u8];
            w.extend(p.images().iter().map(|&i| rest[i]));
            w
        })
        .collect()
}

/// Start of the longest proper Lyndon suffix.
fn standard_split(w: &[u8]) -> usize {
    (1..w.len())
        .find(|&i| w[i] == *w[i..].iter().min().expect("nonempty"))
        .expect("words of length ≥ 2 have a Lyndon suffix")
}

pub(crate) fn lie_model(rule: SignRule, max: usize) -> PoissonModel {
    PoissonModel::new(0, true, rule, max)
}

pub(crate) fn poisson_model(n: i32, rule: SignRule, max: usize) -> Result<PoissonModel> {
    if n < 1 {
        return Err(Error::UnknownName(format!("poisson({n})")));
    }
    Ok(PoissonModel::new(n - 1, false, rule, max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_factorization() {
        assert_eq!(standard_split(&[0, 2, 1]), 2);
        assert_eq!(standard_split(&[0, 1, 2]), 1);
        assert_eq!(standard_split(&[0, 3, 1, 2]), 2);
    }

    #[test]
    fn lie_dimensions() {
        let m = lie_model(SignRule::Plain, 5);
        assert_eq!((1..=5).map(|n| m.dim(n)).collect::<Vec<_>>(), vec![1, 1, 2, 6, 24]);
    }

    #[test]
    fn leading_word_is_lyndon() {
        let m = lie_model(SignRule::Koszul, 4);
        for b in 0..m.dim(4) {
            let words = m.lie_words(4, b);
            let lead = &words[0];
            assert_eq!(lead.0, m.bases[4][b][0]);
            assert!(lead.1.is_one());
        }
    }
}
