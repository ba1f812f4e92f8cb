//! Algebras over an operad, the bar resolution, the augmentation tower and the
//! classical splittings.

mod bar;
mod classical;
mod tower;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::exactlin::{koszul_sign, Echelon, GradedLinearMap, GradedVectorSpace, Matrix, Scalar, SparseVec};
use crate::operads::{free_action, nondecreasing_tuples, signatures, Operad};
use crate::symrep::Permutation;
use crate::symseq::{evaluate, product_tuples, Evaluation};
use crate::{Error, Result};

pub use bar::{bar_resolution, BarResolution};
pub use classical::{
    heisenberg, hochschild_homology, leray_split, pbw_check, HochschildReport, LerayReport, LieAlgebraData, PbwReport,
};
pub use tower::{layer_compare, split_algebra, tower, AugmentationTower, LayerComparison, SplitReport, TowerMode};

/// An algebra over an operad, presented as `T_a(X)/J` truncated at internal degree `cap`.
///
/// `J` is an ideal of the free algebra; the carrier basis is the set of free basis
/// vectors that are not pivots of `J`. Arities listed in `killed` act by zero, which
/// is how deliberately broken algebras are produced.
#[derive(Clone, Debug)]
pub struct AlgebraOverOperad {
    operad: Operad,
    generators: GradedVectorSpace,
    free: Arc<Evaluation>,
    ideal: Echelon,
    relations: Vec<SparseVec>,
    kept: Vec<usize>,
    position: Vec<Option<usize>>,
    carrier: GradedVectorSpace,
    killed: BTreeSet<usize>,
}

/// `T_a(X)` through internal degree `cap`.
pub fn free_algebra(op: &Operad, x: &GradedVectorSpace, cap: i32) -> Result<AlgebraOverOperad> {
    let free = Arc::new(evaluate(op.seq(), x, cap)?);
    Ok(AlgebraOverOperad::assemble(op.clone(), x.clone(), free, Echelon::new(), Vec::new()))
}

/// `T_a(X)/(relations)`, the relations given in free-algebra coordinates.
pub fn quotient_algebra(
    op: &Operad,
    x: &GradedVectorSpace,
    cap: i32,
    relations: &[SparseVec],
) -> Result<AlgebraOverOperad> {
    free_algebra(op, x, cap)?.quotient(relations)
}

impl AlgebraOverOperad {
    fn assemble(
        operad: Operad,
        generators: GradedVectorSpace,
        free: Arc<Evaluation>,
        ideal: Echelon,
        relations: Vec<SparseVec>,
    ) -> Self {
        let kept: Vec<usize> = (0..free.dim()).filter(|&i| !ideal.is_pivot(i)).collect();
        let mut position = vec![None; free.dim()];
        for (k, &i) in kept.iter().enumerate() {
            position[i] = Some(k);
        }
        let degs: Vec<i32> = kept.iter().map(|&i| free.degree_of(i)).collect();
        AlgebraOverOperad {
            operad,
            generators,
            free,
            ideal,
            relations,
            kept,
            position,
            carrier: GradedVectorSpace::from_degrees(&degs),
            killed: BTreeSet::new(),
        }
    }

    pub fn operad(&self) -> &Operad {
        &self.operad
    }

    pub fn carrier(&self) -> &GradedVectorSpace {
        &self.carrier
    }

    pub fn generators(&self) -> &GradedVectorSpace {
        &self.generators
    }

    pub fn cap(&self) -> i32 {
        self.free.cap()
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    /// The free algebra this one is a quotient of.
    pub fn free_evaluation(&self) -> &Arc<Evaluation> {
        &self.free
    }

    /// Relations as given, in free-algebra coordinates.
    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    pub fn killed_arities(&self) -> &BTreeSet<usize> {
        &self.killed
    }

    pub fn is_connected(&self) -> bool {
        self.carrier.min_degree().is_none_or(|d| d > 0)
    }

    /// The same carrier with `θ_n` replaced by zero.
    pub fn with_killed_arity(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.killed.insert(n);
        out
    }

    /// The quotient by the ideal generated by `relations` (free coordinates).
    pub fn quotient(&self, relations: &[SparseVec]) -> Result<Self> {
        if let Some(i) = relations.iter().filter_map(SparseVec::max_index).max() {
            if i >= self.free.dim() {
                return Err(Error::Invalid(format!("relation index {i} is outside the free algebra")));
            }
        }
        let mut all = self.relations.clone();
        all.extend(relations.iter().cloned());
        let ideal = ideal_closure(&self.operad, &self.free, &all);
        let mut out = Self::assemble(self.operad.clone(), self.generators.clone(), self.free.clone(), ideal, all);
        out.killed = self.killed.clone();
        Ok(out)
    }

    /// Carrier coordinates to free-algebra coordinates (on the kept basis).
    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        v.map_indices(|k| self.kept[k])
    }

    /// Free-algebra coordinates to the carrier, reducing modulo the ideal.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.ideal.reduce(v).map_indices(|i| self.position[i].expect("reduced vectors avoid pivots"))
    }

    /// `θ_n(f; a₁, …, a_n)` on carrier vectors.
    pub fn theta(&self, f: &SparseVec, inputs: &[SparseVec]) -> SparseVec {
        if self.killed.contains(&inputs.len()) {
            return SparseVec::new();
        }
        let lifted: Vec<SparseVec> = inputs.iter().map(|v| self.lift(v)).collect();
        self.reduce(&free_action(&self.operad, &self.free, f, &lifted))
    }

    /// `θ_k(e₀; x_{w₁}, …, x_{w_k})` for generator indices `w`, with `e₀` the first
    /// basis vector of `a(k)` (the word itself for Assoc, the product for Com).
    pub fn monomial(&self, word: &[usize]) -> SparseVec {
        self.reduce(&free_monomial(&self.free, word))
    }

    /// Same as [`AlgebraOverOperad::monomial`] in free-algebra coordinates, for relations.
    pub fn free_monomial(&self, word: &[usize]) -> SparseVec {
        free_monomial(&self.free, word)
    }

    fn degrees(&self) -> Vec<i32> {
        self.carrier.degrees()
    }
}

fn free_monomial(free: &Evaluation, word: &[usize]) -> SparseVec {
    let n = word.len();
    if n == 0 {
        return SparseVec::new();
    }
    free.project(n, &SparseVec::unit(0), word)
}

/// Smallest internal degree occurring in `v`.
fn min_degree(degs: &[i32], v: &SparseVec) -> i32 {
    v.indices().map(|i| degs[i]).min().unwrap_or(0)
}

fn ideal_closure(op: &Operad, free: &Evaluation, relations: &[SparseVec]) -> Echelon {
    let degs: Vec<i32> = (0..free.dim()).map(|i| free.degree_of(i)).collect();
    let cap = free.cap();
    let mut ideal = Echelon::new();
    let mut queue: Vec<SparseVec> = Vec::new();
    for r in relations {
        if ideal.insert(r) {
            queue.push(r.clone());
        }
    }
    while let Some(j) = queue.pop() {
        let jdeg = min_degree(&degs, &j);
        for n in 1..=op.max_arity() {
            for f in 0..op.dim(n) {
                if n == 1 && SparseVec::unit(f) == *op.unit() {
                    continue;
                }
                let fdeg = op.degree(n, f);
                // j in the first slot is enough: the other slots are reached by equivariance.
                for rest in nondecreasing_tuples(&degs, n - 1, cap - jdeg - fdeg) {
                    let mut inputs = Vec::with_capacity(n);
                    inputs.push(j.clone());
                    inputs.extend(rest.iter().map(|&i| SparseVec::unit(i)));
                    let v = free_action(op, free, &SparseVec::unit(f), &inputs);
                    if !v.is_zero() && ideal.insert(&v) {
                        queue.push(v);
                    }
                }
            }
        }
    }
    ideal
}

/// `Σ_{k ≥ n_min} im θ_k` in carrier coordinates.
pub(crate) fn theta_image(c: &AlgebraOverOperad, n_min: usize) -> Echelon {
    let degs = c.degrees();
    let op = c.operad();
    let mut image = Echelon::new();
    for k in n_min.max(1)..=op.max_arity() {
        for f in 0..op.dim(k) {
            if k == 1 && SparseVec::unit(f) == *op.unit() {
                continue;
            }
            for tuple in nondecreasing_tuples(&degs, k, c.cap() - op.degree(k, f)) {
                let inputs: Vec<SparseVec> = tuple.iter().map(|&i| SparseVec::unit(i)).collect();
                let v = c.theta(&SparseVec::unit(f), &inputs);
                if !v.is_zero() {
                    image.insert(&v);
                }
            }
        }
    }
    image
}

/// `V/W` on the non-pivot basis of `W`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: GradedVectorSpace,
    /// `V → V/W`.
    pub projection: Matrix,
    /// Basis vectors of `V` whose classes form the basis of `V/W`.
    pub kept: Vec<usize>,
}

impl Quotient {
    pub fn new(ambient: &GradedVectorSpace, w: &Echelon) -> Self {
        let dim = ambient.total_dim();
        let kept: Vec<usize> = (0..dim).filter(|&i| !w.is_pivot(i)).collect();
        let mut pos = vec![usize::MAX; dim];
        for (k, &i) in kept.iter().enumerate() {
            pos[i] = k;
        }
        let cols = (0..dim).map(|i| w.reduce(&SparseVec::unit(i)).map_indices(|j| pos[j])).collect();
        let degs: Vec<i32> = kept.iter().map(|&i| ambient.degree_of(i)).collect();
        Quotient {
            space: GradedVectorSpace::from_degrees(&degs),
            projection: Matrix::from_columns(kept.len(), cols),
            kept,
        }
    }

    pub fn projection_map(&self, ambient: &GradedVectorSpace) -> GradedLinearMap {
        GradedLinearMap::from_flat(ambient.clone(), self.space.clone(), &self.projection).expect("degree-preserving")
    }
}

/// `Qₙ(C) = C / Σ_{k ≥ n} im θ_k` with its projection.
pub fn q_n_functor(c: &AlgebraOverOperad, n: usize) -> Result<Quotient> {
    if n < 2 {
        return Err(Error::Invalid("Qₙ needs n ≥ 2".into()));
    }
    Ok(Quotient::new(c.carrier(), &theta_image(c, n)))
}

/// A right inverse `φ: I/I²(C) → C` of the projection `C → Q₂(C)`.
pub fn find_section(c: &AlgebraOverOperad) -> Option<GradedLinearMap> {
    let q = q_n_functor(c, 2).ok()?;
    crate::exactlin::solve_section(&q.projection_map(c.carrier()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraViolation {
    pub law: &'static str,
    /// `"k;j₁,…,j_k"` for associativity, the arity otherwise.
    pub signature: String,
    pub degree: i32,
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({}) in degree {}", self.law, self.signature, self.degree)
    }
}

/// Unit, equivariance and associativity of `θ`, one violation per signature.
pub fn check_algebra_laws(c: &AlgebraOverOperad) -> Vec<AlgebraViolation> {
    let mut out = Vec::new();
    let op = c.operad();
    let degs = c.degrees();
    let cap = c.cap();
    let rule = op.sign_rule();
    for a in 0..c.dim() {
        if c.theta(op.unit(), &[SparseVec::unit(a)]) != SparseVec::unit(a) {
            out.push(AlgebraViolation { law: "unit", signature: "1".into(), degree: degs[a] });
            break;
        }
    }
    let module_degs = |n: usize| (0..op.dim(n)).map(|f| op.degree(n, f)).min().unwrap_or(0);
    'equi: for n in 2..=op.max_arity() {
        let m = op.seq().component(n);
        for tuple in all_tuples(&degs, n, cap - module_degs(n)) {
            let tdegs: Vec<i32> = tuple.iter().map(|&i| degs[i]).collect();
            for i in 0..n - 1 {
                let s = Permutation::transposition(n, i);
                let mut moved = tuple.clone();
                for (k, &x) in tuple.iter().enumerate() {
                    moved[s.apply(k)] = x;
                }
                let sign = Scalar::sign(koszul_sign(s.images(), &tdegs, rule));
                let a_in: Vec<SparseVec> = tuple.iter().map(|&x| SparseVec::unit(x)).collect();
                let b_in: Vec<SparseVec> = moved.iter().map(|&x| SparseVec::unit(x)).collect();
                for f in 0..op.dim(n) {
                    let lhs = c.theta(&m.act(&s, &SparseVec::unit(f)), &b_in);
                    let rhs = c.theta(&SparseVec::unit(f), &a_in).scale(&sign);
                    if lhs != rhs {
                        let degree = tdegs.iter().sum::<i32>() + op.degree(n, f);
                        out.push(AlgebraViolation { law: "equivariance", signature: n.to_string(), degree });
                        continue 'equi;
                    }
                }
            }
        }
    }
    for sig in signatures(op.seq(), op.max_arity()) {
        if let Some(degree) = associativity_failure(c, &sig.inner, &degs) {
            out.push(AlgebraViolation { law: "associativity", signature: sig.to_string(), degree });
        }
    }
    out
}

fn associativity_failure(c: &AlgebraOverOperad, inner: &[usize], degs: &[i32]) -> Option<i32> {
    let op = c.operad();
    let k = inner.len();
    let n: usize = inner.iter().sum();
    let rule = op.sign_rule();
    let mut bases = vec![op.dim(k)];
    bases.extend(inner.iter().map(|&j| op.dim(j)));
    let min_op: i32 = (0..op.dim(k)).map(|f| op.degree(k, f)).min().unwrap_or(0)
        + inner.iter().map(|&j| (0..op.dim(j)).map(|g| op.degree(j, g)).min().unwrap_or(0)).sum::<i32>();
    let tuples = all_tuples(degs, n, c.cap() - min_op);
    for choice in product_tuples(&bases) {
        let f = SparseVec::unit(choice[0]);
        let gs: Vec<(usize, SparseVec)> = inner.iter().zip(&choice[1..]).map(|(&j, &g)| (j, SparseVec::unit(g))).collect();
        let gdeg: Vec<i32> = inner.iter().zip(&choice[1..]).map(|(&j, &g)| op.degree(j, g)).collect();
        let composite = op.compose_vec(&f, &gs);
        for tuple in &tuples {
            let mut inside = Vec::with_capacity(k);
            let mut order_degs = Vec::with_capacity(2 * k);
            let mut dest = Vec::with_capacity(2 * k);
            let mut start = 0;
            for (i, &j) in inner.iter().enumerate() {
                let block: Vec<SparseVec> = tuple[start..start + j].iter().map(|&x| SparseVec::unit(x)).collect();
                inside.push(c.theta(&gs[i].1, &block));
                order_degs.push(gdeg[i]);
                dest.push(i);
                order_degs.push(tuple[start..start + j].iter().map(|&x| degs[x]).sum());
                dest.push(k + i);
                start += j;
            }
            let lhs = c.theta(&f, &inside);
            let all: Vec<SparseVec> = tuple.iter().map(|&x| SparseVec::unit(x)).collect();
            let sign = Scalar::sign(koszul_sign(&dest, &order_degs, rule));
            let rhs = c.theta(&composite, &all).scale(&sign);
            if lhs != rhs {
                return Some(tuple.iter().map(|&x| degs[x]).sum::<i32>() + op.degree(k, choice[0]) + gdeg.iter().sum::<i32>());
            }
        }
    }
    None
}

/// All index tuples of length `n` with total degree `<= cap`.
fn all_tuples(degs: &[i32], n: usize, cap: i32) -> Vec<Vec<usize>> {
    let min = degs.iter().copied().min().unwrap_or(0);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(degs: &[i32], min: i32, n: usize, sum: i32, cap: i32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let left = (n - cur.len() - 1) as i32;
        for (i, &d) in degs.iter().enumerate() {
            if sum + d + left * min > cap {
                continue;
            }
            cur.push(i);
            rec(degs, min, n, sum + d, cap, cur, out);
            cur.pop();
        }
    }
    rec(degs, min, n, 0, cap, &mut cur, &mut out);
    out
}

/// Dimensions by degree, zero entries dropped.
pub(crate) fn dims_of(v: &GradedVectorSpace) -> BTreeMap<i32, usize> {
    v.dims().iter().filter(|(_, &c)| c > 0).map(|(&d, &c)| (d, c)).collect()
}
