//! Analytic triples, the operad a triple induces, and the compatibility check.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::calculus::{multilinear_part, AnalyticFunctor};
use crate::exactlin::{koszul_sign, Accumulator, GradedVectorSpace, Matrix, Scalar, SignRule, SparseVec};
use crate::operads::{builtin_operad, check_operad_laws, Operad, OperadMorphism};
use crate::symrep::{Permutation, SymGroupModule};
use crate::symseq::{compose, product_tuples, set_partitions, Composite, Evaluation, SymmetricSequence};
use crate::{Error, Result};

/// A triple `(F, μ: F∘F ⇒ F, η)` on an analytic functor, with `μ` given on the
/// set-partition basis of `F∘F` arity by arity.
#[derive(Clone, Debug)]
pub struct AnalyticTriple {
    name: String,
    functor: AnalyticFunctor,
    composite: Arc<Composite>,
    mu: Vec<Matrix>,
    eta: SparseVec,
}

/// `{1,3}{2}`: blocks printed one-based.
pub fn partition_string(blocks: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for b in blocks {
        s.push('{');
        for (i, x) in b.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", x + 1);
        }
        s.push('}');
    }
    s
}

impl AnalyticTriple {
    pub fn new(name: impl Into<String>, seq: SymmetricSequence, mu: Vec<Matrix>, eta: SparseVec) -> Result<Self> {
        let functor = AnalyticFunctor::new(seq.clone())?;
        let composite = compose(&seq, &seq)?;
        if mu.len() != composite.max_arity() + 1 {
            return Err(Error::Invalid("one μ matrix per arity is required".into()));
        }
        for (n, m) in mu.iter().enumerate() {
            if m.nrows() != seq.dim(n) || m.ncols() != composite.entries(n).len() {
                return Err(Error::Invalid(format!("μ in arity {n} has the wrong shape")));
            }
        }
        if eta.max_index().is_some_and(|i| i >= seq.dim(1)) {
            return Err(Error::Invalid("η lies outside F[1]".into()));
        }
        Ok(AnalyticTriple { name: name.into(), functor, composite: Arc::new(composite), mu, eta })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn functor(&self) -> &AnalyticFunctor {
        &self.functor
    }

    pub fn seq(&self) -> &SymmetricSequence {
        self.functor.seq()
    }

    pub fn max_arity(&self) -> usize {
        self.composite.max_arity()
    }

    pub fn composite(&self) -> &Composite {
        &self.composite
    }

    pub fn mu(&self, n: usize) -> &Matrix {
        &self.mu[n]
    }

    pub fn eta(&self) -> &SparseVec {
        &self.eta
    }

    /// The same triple with one column of `μ` replaced.
    pub fn with_mu_column(&self, n: usize, column: usize, value: SparseVec) -> Self {
        let mut cols = self.mu[n].columns().to_vec();
        cols[column] = value;
        let mut t = self.clone();
        t.mu[n] = Matrix::from_columns(self.mu[n].nrows(), cols);
        t
    }

    /// `μ` applied to `f ⊗ g₁ ⊗ … ⊗ g_k` placed on `blocks` of `0..n`.
    pub fn multiply(&self, n: usize, blocks: &[Vec<usize>], f: &SparseVec, gs: &[SparseVec]) -> SparseVec {
        self.mu[n].apply(&self.composite.element(n, blocks, f, gs))
    }

    fn degree(&self, n: usize, b: usize) -> i32 {
        self.seq().component(n).space().degree_of(b)
    }
}

/// `T_a`: the triple of an operad, `μ` from `γ` on every set partition.
pub fn associated_triple(op: &Operad) -> Result<AnalyticTriple> {
    if let Some(v) = check_operad_laws(op).into_iter().next() {
        return Err(Error::LawFailure(v.to_string()));
    }
    associated_triple_unchecked(op)
}

fn associated_triple_unchecked(op: &Operad) -> Result<AnalyticTriple> {
    let seq = op.seq().clone();
    let composite = compose(&seq, &seq)?;
    let mu = (0..=composite.max_arity())
        .map(|n| {
            let cols = composite
                .entries(n)
                .iter()
                .map(|e| {
                    let gs: Vec<SparseVec> = e.gs.iter().map(|&g| SparseVec::unit(g)).collect();
                    op.compose_on_blocks(composite.partition(n, e.partition), &SparseVec::unit(e.f), &gs)
                })
                .collect();
            Matrix::from_columns(seq.dim(n), cols)
        })
        .collect();
    AnalyticTriple::new(op.name().to_string(), seq, mu, op.unit().clone())
}

/// `tensor`/`assoc`, `symmetric`/`com`, `free-lie`/`lie` or `poisson(n)`.
pub fn builtin_triple(name: &str, max: usize, rule: SignRule) -> Result<AnalyticTriple> {
    let op = match name.trim().to_ascii_lowercase().as_str() {
        "tensor" => builtin_operad("assoc", max, rule)?,
        "symmetric" => builtin_operad("com", max, rule)?,
        "free-lie" => builtin_operad("lie", max, rule)?,
        other => builtin_operad(other, max, rule)?,
    };
    associated_triple(&op)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleViolation {
    pub law: &'static str,
    pub arity: usize,
    pub component: String,
}

impl std::fmt::Display for TripleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} fails in arity {} at {}", self.law, self.arity, self.component)
    }
}

/// Naturality (Σₙ-equivariance of `μ`), associativity on the three-level
/// partition basis of `F∘F∘F`, and both unit laws.
pub fn check_triple_laws(t: &AnalyticTriple) -> Vec<TripleViolation> {
    let mut out = Vec::new();
    let max = t.max_arity();
    let rule = t.seq().sign_rule();
    for n in 1..=max {
        let singletons: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let all = vec![(0..n).collect::<Vec<usize>>()];
        let etas = vec![t.eta.clone(); n];
        for f in 0..t.seq().dim(n) {
            let fv = SparseVec::unit(f);
            if t.multiply(n, &singletons, &fv, &etas) != fv {
                out.push(TripleViolation { law: "right unit", arity: n, component: partition_string(&singletons) });
                break;
            }
        }
        for f in 0..t.seq().dim(n) {
            let fv = SparseVec::unit(f);
            if t.multiply(n, &all, &t.eta, std::slice::from_ref(&fv)) != fv {
                out.push(TripleViolation { law: "left unit", arity: n, component: partition_string(&all) });
                break;
            }
        }
        let module = t.seq().component(n);
        'nat: for (col, e) in t.composite.entries(n).iter().enumerate() {
            for i in 0..n.saturating_sub(1) {
                let s = Permutation::transposition(n, i);
                let lhs = t.mu[n].apply(&t.composite.act_on_entry(n, &s, e));
                let rhs = module.act(&s, t.mu[n].column(col));
                if lhs != rhs {
                    let component = partition_string(t.composite.partition(n, e.partition));
                    out.push(TripleViolation { law: "naturality", arity: n, component });
                    break 'nat;
                }
            }
        }
        for rho in set_partitions(n) {
            let m = rho.len();
            if rho.iter().any(|b| t.seq().dim(b.len()) == 0) {
                continue;
            }
            for sigma in set_partitions(m) {
                if t.seq().dim(sigma.len()) == 0 || sigma.iter().any(|b| t.seq().dim(b.len()) == 0) {
                    continue;
                }
                if let Some(v) = associativity_at(t, n, &rho, &sigma, rule) {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn associativity_at(
    t: &AnalyticTriple,
    n: usize,
    rho: &[Vec<usize>],
    sigma: &[Vec<usize>],
    rule: SignRule,
) -> Option<TripleViolation> {
    let k = sigma.len();
    let m = rho.len();
    let unions: Vec<Vec<usize>> = sigma
        .iter()
        .map(|g| {
            let mut u: Vec<usize> = g.iter().flat_map(|&b| rho[b].iter().copied()).collect();
            u.sort_unstable();
            u
        })
        .collect();
    let local: Vec<Vec<Vec<usize>>> = sigma
        .iter()
        .zip(&unions)
        .map(|(g, u)| {
            g.iter().map(|&b| rho[b].iter().map(|x| u.binary_search(x).expect("in union")).collect()).collect()
        })
        .collect();
    let mut dims = vec![t.seq().dim(k)];
    dims.extend(sigma.iter().map(|g| t.seq().dim(g.len())));
    dims.extend(rho.iter().map(|b| t.seq().dim(b.len())));
    for choice in product_tuples(&dims) {
        let f = choice[0];
        let gs = &choice[1..=k];
        let es = &choice[k + 1..];
        // μ ∘ μF
        let phi = t.multiply(m, sigma, &SparseVec::unit(f), &gs.iter().map(|&g| SparseVec::unit(g)).collect::<Vec<_>>());
        let rhs = t.multiply(n, rho, &phi, &es.iter().map(|&e| SparseVec::unit(e)).collect::<Vec<_>>());
        // μ ∘ Fμ, with the Koszul sign of f g₁ … g_k e₁ … e_m → f g₁ e_{σ₁} g₂ e_{σ₂} …
        let mut degs = vec![t.degree(k, f)];
        degs.extend(sigma.iter().zip(gs).map(|(g, &x)| t.degree(g.len(), x)));
        degs.extend(rho.iter().zip(es).map(|(b, &x)| t.degree(b.len(), x)));
        let mut dest = vec![0usize; 1 + k + m];
        let mut pos = 1;
        for (i, g) in sigma.iter().enumerate() {
            dest[1 + i] = pos;
            pos += 1;
            for &b in g {
                dest[1 + k + b] = pos;
                pos += 1;
            }
        }
        let neg = koszul_sign(&dest, &degs, rule);
        let hs: Vec<SparseVec> = sigma
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let inner: Vec<SparseVec> = g.iter().map(|&b| SparseVec::unit(es[b])).collect();
                t.multiply(unions[i].len(), &local[i], &SparseVec::unit(gs[i]), &inner)
            })
            .collect();
        let mut lhs = t.multiply(n, &unions, &SparseVec::unit(f), &hs);
        if neg {
            lhs = lhs.neg();
        }
        if lhs != rhs {
            return Some(TripleViolation {
                law: "associativity",
                arity: n,
                component: format!("{} over {}", partition_string(rho), partition_string(&unions)),
            });
        }
    }
    None
}

/// Identifications `ιₙ: F[n] → D₁^{(n)}crₙF(S)` and their inverses.
fn identifications(t: &AnalyticTriple) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
    let mut iota = Vec::new();
    let mut inv = Vec::new();
    for n in 0..=t.max_arity() {
        if n == 0 || t.seq().dim(n) == 0 {
            iota.push(Matrix::zeros(0, t.seq().dim(n)));
            inv.push(Matrix::zeros(t.seq().dim(n), 0));
            continue;
        }
        let i = multilinear_part(t.functor(), n)?;
        let j = i.inverse().ok_or_else(|| Error::Invalid(format!("multilinear part in arity {n} is not F[{n}]")))?;
        iota.push(i);
        inv.push(j);
    }
    Ok((iota, inv))
}

/// `a_T`: `a_T(n) = D₁^{(n)}crₙF(S)`, `γ` the restriction of `μ` to consecutive blocks.
pub fn induced_operad(t: &AnalyticTriple) -> Result<Operad> {
    if let Some(v) = check_triple_laws(t).into_iter().next() {
        return Err(Error::LawFailure(v.to_string()));
    }
    Ok(induced_operad_unchecked(t)?.0)
}

type Induced = (Operad, Vec<Matrix>, Vec<Matrix>);

fn induced_operad_unchecked(t: &AnalyticTriple) -> Result<Induced> {
    let (iota, inv) = identifications(t)?;
    let mut comps = Vec::new();
    for n in 0..=t.max_arity() {
        let m = t.seq().component(n);
        let gens = m.gens().iter().map(|s| iota[n].mul(s).mul(&inv[n])).collect();
        comps.push(SymGroupModule::new(n, m.space().clone(), gens)?);
    }
    let seq = SymmetricSequence::new(comps, t.seq().sign_rule())?;
    let unit = if t.max_arity() >= 1 && t.seq().dim(1) > 0 { iota[1].apply(&t.eta) } else { SparseVec::new() };
    let op = Operad::from_rule(format!("a({})", t.name()), seq, unit, |sig, f, gs| {
        let mut blocks = Vec::with_capacity(gs.len());
        let mut start = 0;
        for &j in &sig.inner {
            blocks.push((start..start + j).collect::<Vec<usize>>());
            start += j;
        }
        let fv = inv[sig.outer].column(f).clone();
        let gv: Vec<SparseVec> = sig.inner.iter().zip(gs).map(|(&j, &g)| inv[j].column(g).clone()).collect();
        iota[start].apply(&t.multiply(start, &blocks, &fv, &gv))
    })?;
    Ok((op, iota, inv))
}

/// `a ≅ a_{T_a}`, verified as an operad isomorphism.
pub fn roundtrip_identity(op: &Operad) -> Result<OperadMorphism> {
    let t = associated_triple(op)?;
    let (induced, _, inv) = induced_operad_unchecked(&t)?;
    let morphism = OperadMorphism::new(induced, op.clone(), inv)?;
    if let Some(v) = morphism.verify().into_iter().next() {
        return Err(Error::LawFailure(format!("roundtrip map fails: {} at {}", v.condition, v.location)));
    }
    if !morphism.is_isomorphism() {
        return Err(Error::LawFailure("roundtrip map is not invertible".into()));
    }
    Ok(morphism)
}

/// A morphism of triples `F ⇒ G`, one matrix `F[n] → G[n]` per arity.
#[derive(Clone, Debug)]
pub struct TripleMorphism {
    pub source: AnalyticTriple,
    pub target: AnalyticTriple,
    pub components: Vec<Matrix>,
}

impl TripleMorphism {
    /// Failures of `φ∘η = η'` and `φ∘μ = μ'∘(φ∘φ)`, as `(arity, component)`.
    pub fn verify(&self) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        let (s, t, phi) = (&self.source, &self.target, &self.components);
        if t.max_arity() >= 1 && phi[1].apply(&s.eta) != t.eta {
            out.push((1, "unit".to_string()));
        }
        let max = s.max_arity().min(t.max_arity()).min(phi.len() - 1);
        for n in 1..=max {
            for (col, e) in s.composite.entries(n).iter().enumerate() {
                let blocks = s.composite.partition(n, e.partition);
                let lhs = phi[n].apply(s.mu[n].column(col));
                let gs: Vec<SparseVec> =
                    blocks.iter().zip(&e.gs).map(|(b, &g)| phi[b.len()].column(g).clone()).collect();
                let rhs = t.multiply(n, blocks, phi[blocks.len()].column(e.f), &gs);
                if lhs != rhs {
                    out.push((n, partition_string(blocks)));
                    break;
                }
            }
        }
        out
    }
}

/// `a_φ: a_F → a_G` for a morphism of triples.
pub fn induced_morphism(phi: &TripleMorphism) -> Result<OperadMorphism> {
    let (a, iota_s, inv_s) = induced_operad_unchecked(&phi.source)?;
    let (b, iota_t, _) = induced_operad_unchecked(&phi.target)?;
    let _ = iota_s;
    let max = a.max_arity().min(b.max_arity());
    let comps = (0..=max).map(|n| iota_t[n].mul(&phi.components[n]).mul(&inv_s[n])).collect();
    OperadMorphism::new(a, b, comps)
}

/// `ν: T_{a_T} ⇒ T` built by unit insertion then multiplication.
#[derive(Clone, Debug)]
pub struct Nu {
    /// `a_T(n) → F[n]`.
    pub components: Vec<Matrix>,
    /// Components of `(T_a∘T_a)` where the triple-map square fails.
    pub failures: Vec<(usize, String)>,
}

impl Nu {
    pub fn is_triple_map(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn canonical_nu(t: &AnalyticTriple) -> Result<Nu> {
    let (a, _, inv) = induced_operad_unchecked(t)?;
    let components = nu_components(t, &inv);
    let aa = compose(a.seq(), a.seq())?;
    let mut failures = Vec::new();
    for n in 1..=aa.max_arity() {
        for e in aa.entries(n) {
            let blocks = aa.partition(n, e.partition);
            let gs: Vec<SparseVec> = e.gs.iter().map(|&g| SparseVec::unit(g)).collect();
            let lhs = components[n].apply(&a.compose_on_blocks(blocks, &SparseVec::unit(e.f), &gs));
            let ngs: Vec<SparseVec> =
                blocks.iter().zip(&e.gs).map(|(b, &g)| components[b.len()].column(g).clone()).collect();
            let rhs = t.multiply(n, blocks, components[blocks.len()].column(e.f), &ngs);
            if lhs != rhs {
                failures.push((n, partition_string(blocks)));
                break;
            }
        }
    }
    Ok(Nu { components, failures })
}

fn nu_components(t: &AnalyticTriple, inv: &[Matrix]) -> Vec<Matrix> {
    (0..=t.max_arity())
        .map(|n| {
            let singletons: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
            let etas = vec![t.eta.clone(); n];
            let cols = (0..t.seq().dim(n)).map(|v| t.multiply(n, &singletons, inv[n].column(v), &etas)).collect();
            Matrix::from_columns(t.seq().dim(n), cols)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityMismatch {
    pub arity: usize,
    pub degree: i32,
    /// The partition of `F∘F` used by the multiplication route.
    pub component: String,
}

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub holds: bool,
    pub mismatches: Vec<CompatibilityMismatch>,
    pub checked: usize,
}

/// Compares `μ_X ∘ ν` with the induced-operad action on `a_T(n) ⊗ F(X)^{⊗n} → F(X)`.
pub fn check_compatibility(t: &AnalyticTriple, x: &GradedVectorSpace, cap: i32) -> Result<CompatibilityReport> {
    let (a, iota, inv) = induced_operad_unchecked(t)?;
    let nu = nu_components(t, &inv);
    let eval = t.functor().evaluate(x, cap)?;
    let rule = t.seq().sign_rule();
    let degs: Vec<i32> = (0..eval.dim()).map(|i| eval.degree_of(i)).collect();
    let min = degs.iter().copied().min().unwrap_or(0);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for n in 1..=a.max_arity() {
        for tuple in ordered_tuples(&degs, n, cap - a.seq().min_degree().unwrap_or(0).min(0), min) {
            for f in 0..a.dim(n) {
                let total = a.degree(n, f) + tuple.iter().map(|&i| degs[i]).sum::<i32>();
                if total > cap {
                    continue;
                }
                checked += 1;
                let (via_mu, component) = route_multiplication(t, &eval, nu[n].column(f), &tuple, rule);
                let via_gamma = route_operad(&a, &iota, &inv, &eval, &SparseVec::unit(f), &tuple, rule);
                if via_mu != via_gamma {
                    mismatches.push(CompatibilityMismatch { arity: n, degree: total, component });
                }
            }
        }
    }
    mismatches.sort_by(|p, q| (p.arity, p.degree, &p.component).cmp(&(q.arity, q.degree, &q.component)));
    mismatches.dedup();
    Ok(CompatibilityReport { holds: mismatches.is_empty(), mismatches, checked })
}

type Rep = (usize, SparseVec, Vec<usize>);

fn reps(eval: &Evaluation, tuple: &[usize]) -> Vec<Rep> {
    tuple
        .iter()
        .map(|&i| {
            let (a, m, w) = eval.representative(i);
            (a, m, w.to_vec())
        })
        .collect()
}

/// Expands `f ⊗ (m₁ ⊗ w₁) ⊗ … ⊗ (m_k ⊗ w_k)` into terms `(coef, m-basis choice)`
/// with the sign of moving every `mᵢ` left past the earlier `w`'s.
fn expand(eval: &Evaluation, r: &[Rep], rule: SignRule, deg: impl Fn(usize, usize) -> i32) -> Vec<(Scalar, Vec<usize>)> {
    let wdeg: Vec<i32> = r.iter().map(|x| x.2.iter().map(|&i| eval.input_degrees()[i]).sum()).collect();
    let terms: Vec<Vec<(usize, &Scalar)>> = r.iter().map(|x| x.1.iter().collect()).collect();
    let dims: Vec<usize> = terms.iter().map(Vec::len).collect();
    let k = r.len();
    let mut out = Vec::new();
    for choice in product_tuples(&dims) {
        let mut c = Scalar::one();
        let mut bs = Vec::with_capacity(k);
        let mut degs = Vec::with_capacity(2 * k);
        let mut dest = Vec::with_capacity(2 * k);
        for (i, &ch) in choice.iter().enumerate() {
            let (b, x) = terms[i][ch];
            c = &c * x;
            bs.push(b);
            degs.push(deg(r[i].0, b));
            dest.push(i);
            degs.push(wdeg[i]);
            dest.push(k + i);
        }
        if koszul_sign(&dest, &degs, rule) {
            c = -c;
        }
        out.push((c, bs));
    }
    out
}

fn route_multiplication(t: &AnalyticTriple, eval: &Evaluation, f: &SparseVec, tuple: &[usize], rule: SignRule) -> (SparseVec, String) {
    let r = reps(eval, tuple);
    let word: Vec<usize> = r.iter().flat_map(|x| x.2.iter().copied()).collect();
    let n = word.len();
    let beta = Permutation::sorting(&word);
    let mut sorted = vec![0; n];
    for (i, &x) in word.iter().enumerate() {
        sorted[beta.apply(i)] = x;
    }
    let xdeg: Vec<i32> = word.iter().map(|&i| eval.input_degrees()[i]).collect();
    let xneg = koszul_sign(beta.images(), &xdeg, rule);
    let mut blocks = Vec::with_capacity(r.len());
    let mut start = 0;
    for x in &r {
        blocks.push((start..start + x.0).map(|p| beta.apply(p)).collect::<Vec<usize>>());
        start += x.0;
    }
    let mut canonical = blocks.clone();
    canonical.sort();
    let component = partition_string(&canonical);
    let mut acc = Accumulator::new();
    for (c, bs) in expand(eval, &r, rule, |a, b| t.degree(a, b)) {
        let gs: Vec<SparseVec> = bs.iter().map(|&b| SparseVec::unit(b)).collect();
        let m = t.multiply(n, &blocks, f, &gs);
        let c = if xneg { -c } else { c };
        eval.project_into(&mut acc, &c, n, &m, &sorted);
    }
    (acc.finish(), component)
}

fn route_operad(
    a: &Operad,
    iota: &[Matrix],
    inv: &[Matrix],
    eval: &Evaluation,
    f: &SparseVec,
    tuple: &[usize],
    rule: SignRule,
) -> SparseVec {
    let r = reps(eval, tuple);
    let word: Vec<usize> = r.iter().flat_map(|x| x.2.iter().copied()).collect();
    let n = word.len();
    let mut acc = Accumulator::new();
    for (c, bs) in expand(eval, &r, rule, |ar, b| a.degree(ar, b)) {
        let gs: Vec<(usize, SparseVec)> = r.iter().zip(&bs).map(|(x, &b)| (x.0, iota[x.0].column(b).clone())).collect();
        let m = inv[n].apply(&a.compose_vec(f, &gs));
        eval.project_into(&mut acc, &c, n, &m, &word);
    }
    acc.finish()
}

fn ordered_tuples(degs: &[i32], n: usize, cap: i32, min: i32) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(degs: &[i32], n: usize, sum: i32, cap: i32, min: i32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let left = (n - cur.len() - 1) as i32;
        for i in 0..degs.len() {
            if sum + degs[i] + left * min > cap {
                continue;
            }
            cur.push(i);
            rec(degs, n, sum + degs[i], cap, min, cur, out);
            cur.pop();
        }
    }
    rec(degs, n, 0, cap, min, &mut cur, &mut out);
    out
}
