use std::collections::BTreeMap;

use opcalc_core::calculus::{
    build_splitting, check_split_condition, cross_effect, differential, differential_at_zero_is_linear, layer,
    multilinear_part, taylor_polynomial, AnalyticFunctor,
};
use opcalc_core::exactlin::{GradedVectorSpace, Scalar, SignRule, SparseVec};
use opcalc_core::operads::builtin_operad;
use opcalc_core::symrep::{factorial, Permutation, SymGroupModule};
use opcalc_core::symseq::{compose, SymmetricSequence};
use opcalc_core::Error;
use proptest::prelude::*;

fn builtin(name: &str, max: usize, rule: SignRule) -> AnalyticFunctor {
    AnalyticFunctor::from_operad(&builtin_operad(name, max, rule).unwrap())
}

fn only(module: SymGroupModule, max: usize) -> AnalyticFunctor {
    let n = module.arity();
    let comps = (0..=max).map(|k| if k == n { module.clone() } else { SymGroupModule::zero(k) }).collect();
    AnalyticFunctor::new(SymmetricSequence::new(comps, SignRule::Koszul).unwrap()).unwrap()
}

fn k(deg: i32, d: usize) -> GradedVectorSpace {
    GradedVectorSpace::from_pairs(&[(deg, d)])
}

fn dims(v: &GradedVectorSpace) -> BTreeMap<i32, usize> {
    v.dims().iter().filter(|(_, &c)| c > 0).map(|(&d, &c)| (d, c)).collect()
}

fn add(a: &BTreeMap<i32, usize>, b: &BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    let mut out = a.clone();
    for (&d, &c) in b {
        *out.entry(d).or_default() += c;
    }
    out.retain(|_, c| *c > 0);
    out
}

#[test]
fn cross_effects_of_small_functors() {
    let sym2 = only(SymGroupModule::trivial(2, 0), 3);
    let one = k(0, 1);
    assert_eq!(cross_effect(&sym2, &[one.clone(), one.clone()], 4).unwrap().space.total_dim(), 1);
    assert_eq!(cross_effect(&sym2, &[one.clone(), one.clone(), one.clone()], 4).unwrap().space.total_dim(), 0);
    let cr1 = cross_effect(&sym2, &[k(1, 2)], 4).unwrap();
    assert_eq!(dims(&cr1.space), dims(sym2.evaluate(&k(1, 2), 4).unwrap().space()));

    let assoc = builtin("assoc", 3, SignRule::Koszul);
    let cr2 = cross_effect(&assoc, &[k(1, 1), k(1, 1)], 2).unwrap();
    assert_eq!(cr2.space.dim(2), 2);
    assert!(cr2.multidegrees.iter().all(|m| m == &vec![1, 1]));
    assert!(matches!(cross_effect(&assoc, &[], 2), Err(Error::Invalid(_))));
}

#[test]
fn cross_effect_recursion_through_four_inputs() {
    for name in ["com", "assoc", "lie"] {
        let f = builtin(name, 4, SignRule::Koszul);
        for kk in 2..=4 {
            let inputs: Vec<GradedVectorSpace> = (0..kk).map(|i| k(1 + (i as i32 % 2), 1)).collect();
            let mut merged = vec![inputs[0].direct_sum(&inputs[1])];
            merged.extend(inputs[2..].iter().cloned());
            let lhs = cross_effect(&f, &merged, 4).unwrap();
            let full = cross_effect(&f, &inputs, 4).unwrap();
            let mut drop1 = vec![inputs[0].clone()];
            drop1.extend(inputs[2..].iter().cloned());
            let mut drop0 = vec![inputs[1].clone()];
            drop0.extend(inputs[2..].iter().cloned());
            let a = cross_effect(&f, &drop1, 4).unwrap();
            let b = cross_effect(&f, &drop0, 4).unwrap();
            let rhs = add(&add(&dims(&full.space), &dims(&a.space)), &dims(&b.space));
            assert_eq!(dims(&lhs.space), rhs, "{name}, k = {kk}");
        }
    }
}

#[test]
fn taylor_polynomials_and_layers() {
    let assoc = builtin("assoc", 4, SignRule::Koszul);
    let x = k(1, 2);
    let p1 = taylor_polynomial(&assoc, 1).evaluate(&x, 4).unwrap();
    assert_eq!(dims(p1.space()), dims(&x));
    let com = builtin("com", 4, SignRule::Plain);
    let d3 = layer(&com, 3).evaluate(&k(1, 1), 4).unwrap();
    assert_eq!(dims(d3.space()), BTreeMap::from([(3, 1)]));
    let p4 = taylor_polynomial(&com, 4).evaluate(&x, 6).unwrap();
    assert_eq!(dims(p4.space()), dims(com.evaluate(&x, 6).unwrap().space()));
    for n in 1..=4 {
        let m = multilinear_part(&assoc, n).unwrap();
        assert_eq!((m.nrows(), m.rank()), (factorial(n), factorial(n)));
    }
}

#[test]
fn differentials() {
    let com = builtin("com", 5, SignRule::Plain);
    let d = differential(&com, &k(1, 1), &k(1, 1), 5).unwrap();
    assert_eq!(dims(d.space()), (1..=5).map(|deg| (deg, 1)).collect());
    assert!(d.projection().mul(&d.value.inclusion()).is_identity());
    for name in ["com", "assoc", "lie", "poisson(2)"] {
        let f = builtin(name, 4, SignRule::Koszul);
        assert!(differential_at_zero_is_linear(&f, &k(1, 2), 4).unwrap(), "{name}");
        let y = k(2, 1);
        let split = add(
            &dims(differential(&f, &k(1, 1), &y, 5).unwrap().space()),
            &dims(differential(&f, &k(3, 1), &y, 5).unwrap().space()),
        );
        let sum = k(1, 1).direct_sum(&k(3, 1));
        assert_eq!(dims(differential(&f, &sum, &y, 5).unwrap().space()), split, "{name}");
    }
}

#[test]
fn chain_rule_in_arity_one() {
    let mut a = vec![SymGroupModule::zero(0)];
    a.push(SymGroupModule::new(1, GradedVectorSpace::from_pairs(&[(0, 1), (2, 1)]), vec![]).unwrap());
    a.push(SymGroupModule::regular(2, 0));
    let mut b = vec![SymGroupModule::zero(0)];
    b.push(SymGroupModule::new(1, GradedVectorSpace::from_pairs(&[(1, 3)]), vec![]).unwrap());
    b.push(SymGroupModule::trivial(2, 1));
    let f = SymmetricSequence::new(a, SignRule::Koszul).unwrap();
    let g = SymmetricSequence::new(b, SignRule::Koszul).unwrap();
    let fg = compose(&f, &g).unwrap();
    let mut by_degree: BTreeMap<i32, usize> = BTreeMap::new();
    for e in fg.entries(1) {
        *by_degree.entry(fg.degree_of(1, e)).or_default() += 1;
    }
    assert_eq!(by_degree, BTreeMap::from([(1, 3), (3, 3)]));
}

#[test]
fn truncated_cross_effect_is_multilinear() {
    for name in ["com", "assoc", "lie"] {
        let f = builtin(name, 4, SignRule::Koszul);
        for n in 1..=3 {
            let inputs = vec![k(2, 2); n];
            let p = cross_effect(&taylor_polynomial(&f, n), &inputs, 8).unwrap();
            let full = cross_effect(&f, &inputs, 8).unwrap();
            let linear: Vec<usize> =
                (0..full.indices.len()).filter(|&i| full.multidegrees[i].iter().all(|&c| c == 1)).collect();
            assert_eq!(p.indices.len(), linear.len(), "{name}, n = {n}");
            assert!(p.multidegrees.iter().all(|m| m.iter().all(|&c| c == 1)));
            let degs: Vec<i32> = linear.iter().map(|&i| full.space.degree_of(i)).collect();
            assert_eq!(dims(&p.space), dims(&GradedVectorSpace::from_degrees(&degs)));
        }
    }
}

#[test]
fn split_condition_and_splitting() {
    let x = k(1, 1);
    for (name, rule, want) in [
        ("com", SignRule::Plain, vec![1, 1, 1]),
        ("assoc", SignRule::Koszul, vec![1, 1, 1]),
        ("lie", SignRule::Plain, vec![1, 0, 0]),
    ] {
        let f = builtin(name, 4, rule);
        let cond = check_split_condition(&f, &x, 3, 3).unwrap();
        assert!(cond.holds(), "{name}");
        assert_eq!(cond.sections.len(), 6);
        let s = build_splitting(&f, &x, &cond, 3, 3).unwrap();
        assert!(s.is_isomorphism, "{name}");
        let got: Vec<usize> = s.block_dims.iter().map(|d| d.values().sum()).collect();
        assert_eq!(got, want, "{name}");
    }
    let assoc = builtin("assoc", 3, SignRule::Koszul);
    let two = check_split_condition(&assoc, &k(1, 1), 2, 2).unwrap();
    let s2 = two.sections.iter().find(|s| s.n == 2).unwrap();
    // x₁ in degree one, x₁x₂ and x₂x₁ in degree two
    assert_eq!(s2.projection.mul(&s2.section).rank(), 3);
    let zero = AnalyticFunctor::new(SymmetricSequence::zero(3, SignRule::Koszul)).unwrap();
    assert!(check_split_condition(&zero, &x, 3, 3).unwrap().sections.is_empty());

    let x2 = k(1, 2);
    for name in ["com", "assoc", "lie"] {
        let f = builtin(name, 3, SignRule::Koszul);
        let cond = check_split_condition(&f, &x2, 3, 3).unwrap();
        assert!(build_splitting(&f, &x2, &cond, 3, 3).unwrap().is_isomorphism, "{name}");
    }
}

#[test]
fn broken_sections_are_refused() {
    let f = builtin("com", 3, SignRule::Plain);
    let x = k(1, 1);
    let mut cond = check_split_condition(&f, &x, 2, 2).unwrap();
    let s = &mut cond.sections[1];
    s.section = s.section.scale(&Scalar::from_int(2));
    s.composite_is_identity = s.projection.mul(&s.section).is_identity();
    assert!(matches!(build_splitting(&f, &x, &cond, 2, 2), Err(Error::NotASection(m)) if m.contains("n = 2")));
}

/// Graded character of a Σₙ-module: `σ ↦ Σ_d tr(σ | degree d) tᵈ`.
fn character(m: &SymGroupModule, sigma: &Permutation) -> BTreeMap<i32, Scalar> {
    let mut out = BTreeMap::new();
    for b in 0..m.dim() {
        let c = m.act(sigma, &SparseVec::unit(b)).get(b);
        let e = out.entry(m.space().degree_of(b)).or_insert_with(Scalar::zero);
        *e = &*e + &c;
    }
    out
}

fn cycle_lengths(sigma: &Permutation) -> Vec<usize> {
    let n = sigma.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        let mut l = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = sigma.apply(j);
            l += 1;
        }
        if l > 0 {
            out.push(l);
        }
    }
    out
}

fn poly_mul(a: &BTreeMap<i32, Scalar>, b: &BTreeMap<i32, Scalar>) -> BTreeMap<i32, Scalar> {
    let mut out: BTreeMap<i32, Scalar> = BTreeMap::new();
    for (da, ca) in a {
        for (db, cb) in b {
            let e = out.entry(da + db).or_insert_with(Scalar::zero);
            *e = &*e + &(ca * cb);
        }
    }
    out
}

/// `dim F[n] ⊗_{Σₙ} V^{⊗n}` by averaging characters; a cycle of length `l` on a
/// basis vector of degree `d` contributes `(−1)^{(l−1)d} t^{ld}` under the Koszul rule.
fn coinvariant_dims(m: &SymGroupModule, v: &GradedVectorSpace, rule: SignRule) -> BTreeMap<i32, usize> {
    let n = m.arity();
    let mut total: BTreeMap<i32, Scalar> = BTreeMap::new();
    for sigma in Permutation::all(n) {
        let mut tr = character(m, &sigma);
        for l in cycle_lengths(&sigma) {
            let mut cyc: BTreeMap<i32, Scalar> = BTreeMap::new();
            for b in 0..v.total_dim() {
                let d = v.degree_of(b);
                let odd = rule.is_koszul() && (l as i32 - 1) * d % 2 != 0;
                let e = cyc.entry(l as i32 * d).or_insert_with(Scalar::zero);
                *e = &*e + &Scalar::sign(odd);
            }
            tr = poly_mul(&tr, &cyc);
        }
        for (d, c) in tr {
            let e = total.entry(d).or_insert_with(Scalar::zero);
            *e = &*e + &c;
        }
    }
    let order = Scalar::from_int(factorial(n) as i64);
    total
        .into_iter()
        .map(|(d, c)| {
            let q = &c * &order.recip();
            assert!(q.is_integer() && !q.is_negative());
            (d, q.numer().try_into().unwrap())
        })
        .filter(|&(_, c): &(i32, usize)| c > 0)
        .collect()
}

#[test]
fn layer_dimensions_match_the_character_formula() {
    for rule in [SignRule::Koszul, SignRule::Plain] {
        for name in ["com", "assoc", "lie", "poisson(2)"] {
            let f = builtin(name, 3, rule);
            for kk in 1..=3 {
                for deg in [0, 1] {
                    let x = k(deg, 1).direct_sum(&k(deg + 1, 1));
                    let wedge = (1..kk).fold(x.clone(), |acc, _| acc.direct_sum(&x));
                    for n in 1..=3 {
                        let lhs = dims(layer(&f, n).evaluate(&wedge, 20).unwrap().space());
                        let rhs = coinvariant_dims(&f.seq().component(n), &wedge, rule);
                        assert_eq!(lhs, rhs, "{name} {rule:?} k = {kk} n = {n} deg = {deg}");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cross_effects_partition_the_wedge(d1 in 1usize..3, d2 in 1usize..3, deg1 in 1i32..3, deg2 in 1i32..3, which in 0usize..3) {
        let name = ["com", "assoc", "lie"][which];
        let f = builtin(name, 4, SignRule::Koszul);
        let (a, b) = (k(deg1, d1), k(deg2, d2));
        let whole = dims(f.evaluate(&a.direct_sum(&b), 5).unwrap().space());
        let cr2 = dims(&cross_effect(&f, &[a.clone(), b.clone()], 5).unwrap().space);
        let fa = dims(f.evaluate(&a, 5).unwrap().space());
        let fb = dims(f.evaluate(&b, 5).unwrap().space());
        prop_assert_eq!(whole, add(&add(&cr2, &fa), &fb));
    }
}
