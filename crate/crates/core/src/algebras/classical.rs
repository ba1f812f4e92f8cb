use std::collections::{BTreeMap, HashMap};

use crate::exactlin::{Echelon, Matrix, Scalar, SignRule, SparseVec};
use crate::{Error, Result};

use super::{check_algebra_laws, dims_of, find_section, q_n_functor, split_algebra, AlgebraOverOperad, SplitReport};

type Monomial = Vec<u32>;

/// Ranks of `HH_q` of `Q[x₁…x_k]` against `Ω^q`, keyed by `(q, internal degree)`.
#[derive(Clone, Debug)]
pub struct HochschildReport {
    pub vars: usize,
    pub homology: BTreeMap<(usize, i32), usize>,
    pub forms: BTreeMap<(usize, i32), usize>,
    pub holds: bool,
}

fn monomials(k: usize, weight: u32) -> Vec<Monomial> {
    if k == 0 {
        return if weight == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=weight).rev() {
        for mut rest in monomials(k - 1, weight - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Basis of the normalized chains `A ⊗ Ā^{⊗q}` in weight `w`.
fn chains(k: usize, q: usize, w: u32) -> Vec<Vec<Monomial>> {
    let mut out = Vec::new();
    let mut cur: Vec<Monomial> = Vec::new();
    fn rec(k: usize, q: usize, left: u32, cur: &mut Vec<Monomial>, out: &mut Vec<Vec<Monomial>>) {
        if cur.len() == q + 1 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots_after = (q + 1 - cur.len() - 1) as u32;
        let lo = if cur.is_empty() { 0 } else { 1 };
        for weight in lo..=left.saturating_sub(slots_after) {
            for m in monomials(k, weight) {
                cur.push(m);
                rec(k, q, left - weight, cur, out);
                cur.pop();
            }
        }
    }
    rec(k, q, w, &mut cur, &mut out);
    out
}

fn times(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `b: C_q → C_{q−1}` in weight `w`, as a matrix between the chain bases.
fn hochschild_boundary(k: usize, q: usize, w: u32) -> Matrix {
    let src = chains(k, q, w);
    let tgt = chains(k, q - 1, w);
    let index: HashMap<&Vec<Monomial>, usize> = tgt.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let cols = src
        .iter()
        .map(|c| {
            let mut terms = Vec::new();
            for i in 0..q {
                let mut t = c[..i].to_vec();
                t.push(times(&c[i], &c[i + 1]));
                t.extend(c[i + 2..].iter().cloned());
                terms.push((index[&t], Scalar::sign(i % 2 == 1)));
            }
            let mut t = vec![times(&c[q], &c[0])];
            t.extend(c[1..q].iter().cloned());
            terms.push((index[&t], Scalar::sign(q % 2 == 1)));
            SparseVec::from_terms(terms)
        })
        .collect();
    Matrix::from_columns(tgt.len(), cols)
}

/// Hochschild homology of the polynomial algebra on `vars` weight-one generators,
/// through `q_max` and internal degree `cap`, compared with differential forms.
pub fn hochschild_homology(vars: usize, q_max: usize, cap: i32) -> HochschildReport {
    let mut homology = BTreeMap::new();
    let mut forms = BTreeMap::new();
    for w in 0..=cap.max(0) as u32 {
        let mut ranks = vec![0usize; q_max + 2];
        for (q, r) in ranks.iter_mut().enumerate().skip(1) {
            *r = hochschild_boundary(vars, q, w).rank();
        }
        for q in 0..=q_max {
            let dim = chains(vars, q, w).len();
            let h = dim - ranks[q] - ranks[q + 1];
            let omega = if w as usize >= q { binomial(vars, q) * monomials(vars, w - q as u32).len() } else { 0 };
            if h > 0 {
                homology.insert((q, w as i32), h);
            }
            if omega > 0 {
                forms.insert((q, w as i32), omega);
            }
        }
    }
    HochschildReport { vars, holds: homology == forms, homology, forms }
}

/// `A ≅ P(Q(A))` for a connected commutative algebra, with the Poincaré-series check.
#[derive(Clone, Debug)]
pub struct LerayReport {
    pub indecomposables: BTreeMap<i32, usize>,
    pub split: SplitReport,
    /// `series(A) = Π (1 − t^d)^{−1}` over even (or plain) generators, `Π (1 + t^d)` over odd ones.
    pub poincare_holds: bool,
}

impl LerayReport {
    pub fn holds(&self) -> bool {
        self.split.holds() && self.poincare_holds
    }
}

/// Leray's splitting for `A` a Com-algebra. A coproduct, if given, is only shape-checked:
/// the construction never consumes it.
pub fn leray_split(a: &AlgebraOverOperad, coproduct: Option<&Matrix>) -> Result<LerayReport> {
    if a.operad().name() != "com" {
        return Err(Error::Invalid("Leray's theorem is about commutative algebras (operad com)".into()));
    }
    if !a.is_connected() {
        return Err(Error::NotConnected("the augmentation ideal must sit in positive degrees".into()));
    }
    if let Some(v) = check_algebra_laws(a).into_iter().next() {
        return Err(Error::LawFailure(v.to_string()));
    }
    if let Some(d) = coproduct {
        if d.ncols() != a.dim() {
            return Err(Error::Invalid("the coproduct must have one column per basis vector of A".into()));
        }
    }
    let q = q_n_functor(a, 2)?;
    let phi = find_section(a).ok_or_else(|| Error::NotASection("no section of A → Q(A)".into()))?;
    let split = split_algebra(a, &phi, a.cap().max(1) as usize + 1)?;
    let cap = a.cap();
    let mut series: BTreeMap<i32, Scalar> = BTreeMap::from([(0, Scalar::one())]);
    let koszul = a.operad().sign_rule() == SignRule::Koszul;
    for (&d, &n) in q.space.dims() {
        for _ in 0..n {
            let odd = koszul && d % 2 != 0;
            let mut next: BTreeMap<i32, Scalar> = BTreeMap::new();
            for (&e, c) in &series {
                let mut k = 0;
                while e + k * d <= cap {
                    let slot = next.entry(e + k * d).or_insert_with(Scalar::zero);
                    *slot = &*slot + c;
                    k += 1;
                    if odd && k > 1 {
                        break;
                    }
                }
            }
            series = next;
        }
    }
    let predicted: BTreeMap<i32, usize> = series
        .into_iter()
        .filter(|(d, c)| *d > 0 && !c.is_zero())
        .map(|(d, c)| (d, c.numer().try_into().expect("small count")))
        .collect();
    Ok(LerayReport { indecomposables: dims_of(&q.space), poincare_holds: predicted == dims_of(a.carrier()), split })
}

/// A finite-dimensional Lie algebra with weights, given by its brackets `[e_i, e_j]` for `i < j`.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub names: Vec<String>,
    pub weights: Vec<i32>,
    pub brackets: BTreeMap<(usize, usize), SparseVec>,
}

/// `x, y` of weight one and `z = [x, y]` of weight two, `z` central.
pub fn heisenberg() -> LieAlgebraData {
    LieAlgebraData {
        names: vec!["x".into(), "y".into(), "z".into()],
        weights: vec![1, 1, 2],
        brackets: BTreeMap::from([((0, 1), SparseVec::unit(2))]),
    }
}

impl LieAlgebraData {
    fn bracket(&self, i: usize, j: usize) -> SparseVec {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self.brackets.get(&(j, i)).map(|v| v.neg()).unwrap_or_default(),
            std::cmp::Ordering::Equal => SparseVec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.weights.len();
        if self.names.len() != n {
            return Err(Error::Invalid("one name per basis vector".into()));
        }
        for (&(i, j), v) in &self.brackets {
            if i >= j || j >= n {
                return Err(Error::Invalid(format!("bracket key ({i},{j}) must satisfy i < j < {n}")));
            }
            for (k, _) in v.iter() {
                if k >= n || self.weights[k] != self.weights[i] + self.weights[j] {
                    return Err(Error::Invalid(format!("[e{i},e{j}] is not homogeneous of the right weight")));
                }
            }
        }
        Ok(())
    }
}

/// `U(L)` versus `S(L)` through a weight cap.
#[derive(Clone, Debug)]
pub struct PbwReport {
    /// Dimensions of `U(L)` by weight `0..=cap`: the sorted words, a basis once
    /// rewriting is confluent.
    pub enveloping: Vec<usize>,
    /// Dimensions of `S(L)` by weight.
    pub symmetric: Vec<usize>,
    /// Whether rewriting every overlap `e_k e_j e_i` (`k > j > i`) resolves uniquely.
    pub confluent: bool,
    /// Whether symmetrization `S(L) → U(L)` is bijective in every weight.
    pub symmetrization_bijective: bool,
}

impl PbwReport {
    pub fn holds(&self) -> bool {
        self.confluent && self.symmetrization_bijective && self.enveloping == self.symmetric
    }
}

type Word = Vec<usize>;

/// Normal form of a word: rewrite `… b a …` (`b > a`) to `… a b … + … [b,a] …`.
fn normal_form(lie: &LieAlgebraData, word: &Word, memo: &mut HashMap<Word, BTreeMap<Word, Scalar>>) -> BTreeMap<Word, Scalar> {
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let out = match word.windows(2).position(|w| w[0] > w[1]) {
        None => BTreeMap::from([(word.clone(), Scalar::one())]),
        Some(p) => {
            let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
            let mut swapped = word.clone();
            swapped.swap(p, p + 1);
            add_into(&mut out, &normal_form(lie, &swapped, memo), &Scalar::one());
            for (k, c) in lie.bracket(word[p], word[p + 1]).iter() {
                let mut shorter = word[..p].to_vec();
                shorter.push(k);
                shorter.extend_from_slice(&word[p + 2..]);
                add_into(&mut out, &normal_form(lie, &shorter, memo), c);
            }
            out
        }
    };
    memo.insert(word.clone(), out.clone());
    out
}

fn add_into(acc: &mut BTreeMap<Word, Scalar>, v: &BTreeMap<Word, Scalar>, c: &Scalar) {
    for (w, x) in v {
        let slot = acc.entry(w.clone()).or_insert_with(Scalar::zero);
        *slot = &*slot + &(x * c);
        if slot.is_zero() {
            acc.remove(w);
        }
    }
}

/// Nondecreasing words of total weight `w`.
fn sorted_words(weights: &[i32], w: i32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(weights: &[i32], from: usize, left: i32, cur: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..weights.len() {
            if weights[i] <= left && weights[i] > 0 {
                cur.push(i);
                rec(weights, i, left - weights[i], cur, out);
                cur.pop();
            }
        }
    }
    rec(weights, 0, w, &mut cur, &mut out);
    out
}

fn distinct_orderings(word: &Word) -> Vec<Word> {
    let mut w = word.clone();
    w.sort_unstable();
    let mut out = vec![w.clone()];
    // next_permutation over the multiset
    loop {
        let Some(i) = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) else { return out };
        let j = (i + 1..w.len()).rev().find(|&j| w[j] > w[i]).expect("successor exists");
        w.swap(i, j);
        w[i + 1..].reverse();
        out.push(w.clone());
    }
}

/// The PBW comparison for a positively weighted Lie algebra (ungraded signs).
pub fn pbw_check(lie: &LieAlgebraData, cap: i32) -> Result<PbwReport> {
    lie.validate()?;
    if lie.weights.iter().any(|&w| w <= 0) {
        return Err(Error::Invalid("weights must be positive".into()));
    }
    let n = lie.weights.len();
    let mut memo = HashMap::new();
    let mut confluent = true;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                // kji rewritten starting at either adjacent pair
                let left = resolve(lie, &[k, j, i], 0, &mut memo);
                let right = resolve(lie, &[k, j, i], 1, &mut memo);
                confluent &= left == right;
            }
        }
    }
    let mut enveloping = Vec::new();
    let mut symmetric = Vec::new();
    let mut bijective = true;
    for w in 0..=cap {
        let monos = sorted_words(&lie.weights, w);
        symmetric.push(monos.len());
        let index: HashMap<&Word, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        enveloping.push(monos.len());
        let mut image = Echelon::new();
        for m in &monos {
            let orders = distinct_orderings(m);
            let scale = Scalar::new(1, orders.len() as i64);
            let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
            for o in &orders {
                add_into(&mut acc, &normal_form(lie, o, &mut memo), &scale);
            }
            image.insert(&SparseVec::from_terms(acc.into_iter().map(|(word, c)| (index[&word], c))));
        }
        bijective &= image.rank() == monos.len();
    }
    Ok(PbwReport { enveloping, symmetric, confluent, symmetrization_bijective: bijective })
}

/// Normal form of a length-three word after first rewriting the pair at `at`.
fn resolve(lie: &LieAlgebraData, word: &[usize], at: usize, memo: &mut HashMap<Word, BTreeMap<Word, Scalar>>) -> BTreeMap<Word, Scalar> {
    let mut out = BTreeMap::new();
    let mut swapped = word.to_vec();
    swapped.swap(at, at + 1);
    add_into(&mut out, &normal_form(lie, &swapped, memo), &Scalar::one());
    for (k, c) in lie.bracket(word[at], word[at + 1]).iter() {
        let mut shorter = word[..at].to_vec();
        shorter.push(k);
        shorter.extend_from_slice(&word[at + 2..]);
        add_into(&mut out, &normal_form(lie, &shorter, memo), c);
    }
    out
}
