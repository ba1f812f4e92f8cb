use std::collections::BTreeMap;

use crate::exactlin::{koszul_sign, Accumulator, Echelon, GradedVectorSpace, Scalar, SparseVec};
use crate::symseq::{evaluate, product_tuples, Evaluation};
use crate::Result;

use super::operad::Operad;

/// The free-algebra action `θ(f; e₁, …, e_n)` on `T_P(X) = evaluate(P, X, D)`.
///
/// `f` lies in `P(n)`; the `eᵢ` are vectors of `T_P(X)`.
pub fn free_action(op: &Operad, eval: &Evaluation, f: &SparseVec, inputs: &[SparseVec]) -> SparseVec {
    let mut acc = Accumulator::new();
    let supports: Vec<Vec<(usize, &Scalar)>> = inputs.iter().map(|v| v.iter().collect()).collect();
    let dims: Vec<usize> = supports.iter().map(Vec::len).collect();
    for choice in product_tuples(&dims) {
        let mut c = Scalar::one();
        let mut idx = Vec::with_capacity(inputs.len());
        for (i, &k) in choice.iter().enumerate() {
            let (b, x) = supports[i][k];
            c = &c * x;
            idx.push(b);
        }
        action_basis_into(op, eval, &mut acc, &c, f, &idx);
    }
    acc.finish()
}

fn action_basis_into(op: &Operad, eval: &Evaluation, acc: &mut Accumulator, coef: &Scalar, f: &SparseVec, idx: &[usize]) {
    let reps: Vec<(usize, SparseVec, Vec<usize>)> = idx
        .iter()
        .map(|&i| {
            let (a, m, t) = eval.representative(i);
            (a, m, t.to_vec())
        })
        .collect();
    let wdeg: Vec<i32> = reps.iter().map(|r| r.2.iter().map(|&x| eval.input_degrees()[x]).sum()).collect();
    let tuple: Vec<usize> = reps.iter().flat_map(|r| r.2.iter().copied()).collect();
    let n = tuple.len();
    let rule = op.sign_rule();
    let terms: Vec<Vec<(usize, &Scalar)>> = reps.iter().map(|r| r.1.iter().collect()).collect();
    let dims: Vec<usize> = terms.iter().map(Vec::len).collect();
    for choice in product_tuples(&dims) {
        let mut c = coef.clone();
        let mut gs = Vec::with_capacity(idx.len());
        let mut mdeg = Vec::with_capacity(idx.len());
        for (i, &k) in choice.iter().enumerate() {
            let (b, x) = terms[i][k];
            c = &c * x;
            gs.push((reps[i].0, SparseVec::unit(b)));
            mdeg.push(op.degree(reps[i].0, b));
        }
        // m₁ w₁ m₂ w₂ … → m₁ m₂ … w₁ w₂ …
        let k = idx.len();
        let mut degs = Vec::with_capacity(2 * k);
        let mut dest = Vec::with_capacity(2 * k);
        for i in 0..k {
            degs.push(mdeg[i]);
            dest.push(i);
            degs.push(wdeg[i]);
            dest.push(k + i);
        }
        if koszul_sign(&dest, &degs, rule) {
            c = -c;
        }
        let m = op.compose_vec(f, &gs);
        eval.project_into(acc, &c, n, &m, &tuple);
    }
}

/// Outcome of [`is_primitively_generated`]; the witness is `(n, dim X, degree)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimGenReport {
    pub holds: bool,
    pub witness: Option<(usize, usize, i32)>,
}

/// Checks that `θ_n: P(n) ⊗ T_P(X)^{⊗n} → T_P(X)` hits the whole arity-`≥ n` part,
/// for `X = K^d` in degree one, `d ∈ test_dims`, up to internal degree `cap`.
pub fn is_primitively_generated(op: &Operad, test_dims: &[usize], cap: i32) -> Result<PrimGenReport> {
    for &d in test_dims {
        let x = GradedVectorSpace::from_pairs(&[(1, d)]);
        let eval = evaluate(op.seq(), &x, cap)?;
        for n in 2..=op.max_arity() {
            let mut high: BTreeMap<i32, usize> = BTreeMap::new();
            for (i, b) in eval.basis().iter().enumerate() {
                if b.arity >= n {
                    *high.entry(eval.degree_of(i)).or_default() += 1;
                }
            }
            let mut image: BTreeMap<i32, Echelon> = BTreeMap::new();
            let min_f = op.seq().component(n).space().min_degree().unwrap_or(0);
            let degs: Vec<i32> = (0..eval.dim()).map(|i| eval.degree_of(i)).collect();
            for tuple in nondecreasing_tuples(&degs, n, cap - min_f) {
                for f in 0..op.dim(n) {
                    let deg = op.degree(n, f) + tuple.iter().map(|&i| eval.degree_of(i)).sum::<i32>();
                    if deg > cap {
                        continue;
                    }
                    let mut acc = Accumulator::new();
                    action_basis_into(op, &eval, &mut acc, &Scalar::one(), &SparseVec::unit(f), &tuple);
                    let v = acc.finish();
                    if !v.is_zero() {
                        image.entry(deg).or_default().insert(&v);
                    }
                }
            }
            for (&deg, &want) in &high {
                if image.get(&deg).map_or(0, Echelon::rank) != want {
                    return Ok(PrimGenReport { holds: false, witness: Some((n, d, deg)) });
                }
            }
        }
    }
    Ok(PrimGenReport { holds: true, witness: None })
}

/// Nondecreasing tuples of basis indices of length `n` with total degree `<= cap`.
pub(crate) fn nondecreasing_tuples(degs: &[i32], n: usize, cap: i32) -> Vec<Vec<usize>> {
    let min = degs.iter().copied().min().unwrap_or(0);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(degs: &[i32], min: i32, n: usize, from: usize, sum: i32, cap: i32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let left = (n - cur.len() - 1) as i32;
        for i in from..degs.len() {
            if sum + degs[i] + left * min > cap {
                continue;
            }
            cur.push(i);
            rec(degs, min, n, i, sum + degs[i], cap, cur, out);
            cur.pop();
        }
    }
    rec(degs, min, n, 0, 0, cap, &mut cur, &mut out);
    out
}
