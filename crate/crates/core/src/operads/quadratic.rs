use std::collections::VecDeque;

use crate::exactlin::{Echelon, GradedVectorSpace, Matrix, SparseVec};
use crate::symrep::{Permutation, SymGroupModule};
use crate::symseq::SymmetricSequence;
use crate::{Error, Result};

use super::free::{free_operad, FreeOperad};
use super::operad::Operad;

/// A quotient `P / I` of an operad by the ideal generated by some elements.
#[derive(Clone, Debug)]
pub struct QuotientOperad {
    operad: Operad,
    /// `P(n) → (P/I)(n)` for each arity.
    projections: Vec<Matrix>,
    /// The kept basis indices of `P(n)`.
    kept: Vec<Vec<usize>>,
    ideal_dims: Vec<usize>,
}

impl QuotientOperad {
    pub fn operad(&self) -> &Operad {
        &self.operad
    }

    pub fn into_operad(self) -> Operad {
        self.operad
    }

    pub fn projection(&self, n: usize) -> &Matrix {
        &self.projections[n]
    }

    pub fn kept(&self, n: usize) -> &[usize] {
        &self.kept[n]
    }

    pub fn ideal_dims(&self) -> &[usize] {
        &self.ideal_dims
    }
}

fn partial(op: &Operad, a: usize, x: &SparseVec, p: usize, b: usize, y: &SparseVec) -> SparseVec {
    let gs: Vec<(usize, SparseVec)> =
        (0..a).map(|i| if i == p { (b, y.clone()) } else { (1, op.unit().clone()) }).collect();
    op.compose_vec(x, &gs)
}

/// The ideal generated by `gens` (pairs of arity and element), arity by arity.
fn ideal(op: &Operad, gens: &[(usize, SparseVec)]) -> Vec<Echelon> {
    let max = op.max_arity();
    let mut ideal: Vec<Echelon> = (0..=max).map(|_| Echelon::new()).collect();
    for n in 0..=max {
        let mut queue: VecDeque<SparseVec> = VecDeque::new();
        let push = |ech: &mut Echelon, v: SparseVec, queue: &mut VecDeque<SparseVec>| {
            if !v.is_zero() && ech.insert(&v) {
                queue.push_back(v);
            }
        };
        let mut ech = Echelon::new();
        for (a, v) in gens {
            if *a == n {
                push(&mut ech, v.clone(), &mut queue);
            }
        }
        for a in 1..=n {
            let b = n + 1 - a;
            if a == n || b == n {
                continue;
            }
            let (ia, ib) = (ideal[a].reduced_rows(), ideal[b].reduced_rows());
            for (_, x) in &ia {
                for y in 0..op.dim(b) {
                    for p in 0..a {
                        push(&mut ech, partial(op, a, x, p, b, &SparseVec::unit(y)), &mut queue);
                    }
                }
            }
            for x in 0..op.dim(a) {
                for (_, y) in &ib {
                    for p in 0..a {
                        push(&mut ech, partial(op, a, &SparseVec::unit(x), p, b, y), &mut queue);
                    }
                }
            }
        }
        let module = op.seq().component(n);
        let transpositions: Vec<Permutation> = (0..n.saturating_sub(1)).map(|i| Permutation::transposition(n, i)).collect();
        while let Some(v) = queue.pop_front() {
            for s in &transpositions {
                push(&mut ech, module.act(s, &v), &mut queue);
            }
            for u in 0..op.dim(1) {
                let u = SparseVec::unit(u);
                for p in 0..n {
                    push(&mut ech, partial(op, n, &v, p, 1, &u), &mut queue);
                }
                push(&mut ech, partial(op, 1, &u, 0, n, &v), &mut queue);
            }
        }
        ideal[n] = ech;
    }
    ideal
}

/// `P / (gens)`: the quotient by the operadic ideal generated by `gens`.
pub fn quotient_operad(op: &Operad, gens: &[(usize, SparseVec)]) -> Result<QuotientOperad> {
    let max = op.max_arity();
    let ideal = ideal(op, gens);
    let mut kept = Vec::with_capacity(max + 1);
    let mut projections = Vec::with_capacity(max + 1);
    let mut comps = Vec::with_capacity(max + 1);
    for (n, ech) in ideal.iter().enumerate() {
        let k: Vec<usize> = (0..op.dim(n)).filter(|&i| !ech.is_pivot(i)).collect();
        let mut pos = vec![usize::MAX; op.dim(n)];
        for (j, &i) in k.iter().enumerate() {
            pos[i] = j;
        }
        let cols = (0..op.dim(n)).map(|i| ech.reduce(&SparseVec::unit(i)).map_indices(|x| pos[x])).collect();
        let proj = Matrix::from_columns(k.len(), cols);
        let degs: Vec<i32> = k.iter().map(|&i| op.degree(n, i)).collect();
        let module = op.seq().component(n);
        let g = module
            .gens()
            .iter()
            .map(|s| Matrix::from_columns(k.len(), k.iter().map(|&i| proj.apply(s.column(i))).collect()))
            .collect();
        comps.push(SymGroupModule::new(n, GradedVectorSpace::from_degrees(&degs), g)?);
        kept.push(k);
        projections.push(proj);
    }
    let seq = if op.seq().is_unital() {
        SymmetricSequence::new_unital(comps, op.sign_rule())?
    } else {
        SymmetricSequence::new(comps, op.sign_rule())?
    }
    .mark_truncated(op.seq().is_truncated());
    let unit = if max >= 1 { projections[1].apply(op.unit()) } else { SparseVec::new() };
    let quotient = Operad::from_rule(format!("{}/I", op.name()), seq, unit, |sig, f, gs| {
        let gvs: Vec<(usize, SparseVec)> =
            sig.inner.iter().zip(gs).map(|(&j, &g)| (j, SparseVec::unit(kept[j][g]))).collect();
        projections[sig.total()].apply(&op.compose_vec(&SparseVec::unit(kept[sig.outer][f]), &gvs))
    })?;
    let ideal_dims = ideal.iter().map(Echelon::rank).collect();
    Ok(QuotientOperad { operad: quotient, projections, kept, ideal_dims })
}

/// A quadratic operad: binary generators `gens` modulo `relations ⊂ F(gens)(3)`.
#[derive(Clone, Debug)]
pub struct QuadraticOperad {
    pub free: FreeOperad,
    pub quotient: QuotientOperad,
}

impl QuadraticOperad {
    pub fn operad(&self) -> &Operad {
        self.quotient.operad()
    }
}

/// `quadratic_operad(E, R, N)`. `relations` are coordinate vectors in the free
/// operad's arity-3 basis ([`FreeOperad::basis`]); their span must be Σ₃-stable.
pub fn quadratic_operad(
    gens: &SymGroupModule,
    relations: &[SparseVec],
    rule: crate::exactlin::SignRule,
    max: usize,
) -> Result<QuadraticOperad> {
    if gens.arity() != 2 {
        return Err(Error::Invalid("quadratic generators live in arity 2".into()));
    }
    let mut comps = vec![SymGroupModule::zero(0), SymGroupModule::zero(1), gens.clone()];
    comps.extend((3..=max.max(2)).map(SymGroupModule::zero));
    let free = free_operad(&SymmetricSequence::new(comps, rule)?, max.max(3), None)?;
    let f3 = free.operad().seq().component(3);
    let mut span = Echelon::new();
    for r in relations {
        span.insert(r);
    }
    for r in relations {
        for s in f3.gens() {
            if !span.contains(&s.apply(r)) {
                return Err(Error::RelationsNotStable);
            }
        }
    }
    let free = if max < 3 { free_operad(free.generators(), max, None)? } else { free };
    let gens: Vec<(usize, SparseVec)> = if max >= 3 { relations.iter().map(|r| (3, r.clone())).collect() } else { Vec::new() };
    let quotient = quotient_operad(free.operad(), &gens)?;
    Ok(QuadraticOperad { free, quotient })
}
