use std::collections::{BTreeMap, HashMap};

use opcalc_core::algebras::{
    bar_resolution, check_algebra_laws, find_section, free_algebra, heisenberg, hochschild_homology, layer_compare,
    leray_split, pbw_check, q_n_functor, quotient_algebra, split_algebra, tower, TowerMode,
};
use opcalc_core::exactlin::{Echelon, GradedVectorSpace, Scalar, SignRule, SparseVec};
use opcalc_core::operads::{builtin_operad, free_operad, Operad};
use opcalc_core::symrep::SymGroupModule;
use opcalc_core::symseq::SymmetricSequence;
use opcalc_core::Error;
use proptest::prelude::*;

fn op(name: &str, max: usize, rule: SignRule) -> Operad {
    builtin_operad(name, max, rule).unwrap()
}

fn k(deg: i32, d: usize) -> GradedVectorSpace {
    GradedVectorSpace::from_pairs(&[(deg, d)])
}

fn dims(v: &GradedVectorSpace) -> Vec<usize> {
    let top = v.max_degree().unwrap_or(0);
    (1..=top).map(|d| v.dim(d)).collect()
}

fn by_degree(v: &GradedVectorSpace) -> BTreeMap<i32, usize> {
    v.dims().iter().filter(|(_, &c)| c > 0).map(|(&d, &c)| (d, c)).collect()
}

/// Necklace count: `(1/n) Σ_{d|n} μ(d) q^{n/d}`.
fn witt(q: i64, n: i64) -> usize {
    fn mobius(mut n: i64) -> i64 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            -m
        } else {
            m
        }
    }
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * q.pow((n / d) as u32)).sum();
    (s / n) as usize
}

#[test]
fn free_algebra_dimensions() {
    let com = free_algebra(&op("com", 4, SignRule::Plain), &k(1, 1), 4).unwrap();
    assert_eq!(dims(com.carrier()), vec![1, 1, 1, 1]);
    let lie = free_algebra(&op("lie", 5, SignRule::Plain), &k(1, 2), 5).unwrap();
    let witt_dims: Vec<usize> = (1..=5).map(|n| witt(2, n)).collect();
    assert_eq!(dims(lie.carrier()), witt_dims);
    assert_eq!(witt_dims, vec![2, 1, 2, 3, 6]);
    let zero = free_algebra(&op("assoc", 4, SignRule::Koszul), &GradedVectorSpace::zero(), 4).unwrap();
    assert_eq!(zero.dim(), 0);
    assert!(check_algebra_laws(&zero).is_empty());
    assert!(q_n_functor(&zero, 2).unwrap().space.is_zero());
}

#[test]
fn free_algebras_satisfy_the_laws() {
    for (name, rule) in [
        ("com", SignRule::Koszul),
        ("assoc", SignRule::Koszul),
        ("lie", SignRule::Koszul),
        ("poisson(2)", SignRule::Koszul),
        ("com", SignRule::Plain),
    ] {
        let a = free_algebra(&op(name, 4, rule), &GradedVectorSpace::from_pairs(&[(1, 1), (2, 1)]), 4).unwrap();
        let report = check_algebra_laws(&a);
        assert!(report.is_empty(), "{name}: {:?}", report.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
}

#[test]
fn truncated_polynomial_algebra() {
    let com = op("com", 5, SignRule::Plain);
    let free = free_algebra(&com, &k(1, 1), 6).unwrap();
    let x5 = free.free_monomial(&[0; 5]);
    let a = quotient_algebra(&com, &k(1, 1), 6, &[x5]).unwrap();
    assert_eq!(dims(a.carrier()), vec![1, 1, 1, 1]);
    assert!(check_algebra_laws(&a).is_empty());
    let x2 = a.monomial(&[0, 0]);
    let x3 = a.monomial(&[0, 0, 0]);
    assert_eq!(a.theta(&SparseVec::unit(0), &[SparseVec::unit(0), x2.clone()]), x3);
    assert!(a.theta(&SparseVec::unit(0), &[x2.clone(), x3]).is_zero());
}

#[test]
fn killing_the_product_breaks_associativity() {
    let a = free_algebra(&op("assoc", 3, SignRule::Koszul), &k(1, 1), 3).unwrap().with_killed_arity(2);
    let report = check_algebra_laws(&a);
    let first = report.iter().find(|v| v.law == "associativity").unwrap();
    assert_eq!(first.signature, "2;1,2");
    assert!(report.iter().all(|v| v.signature != "2;1,1"));
}

#[test]
fn bar_resolution_is_a_resolution() {
    let com = free_algebra(&op("com", 3, SignRule::Plain), &k(1, 1), 3).unwrap();
    let lie = free_algebra(&op("lie", 3, SignRule::Plain), &k(1, 2), 3).unwrap();
    let free = free_algebra(&op("com", 3, SignRule::Plain), &k(1, 1), 3).unwrap();
    let truncated = free.quotient(&[free.free_monomial(&[0, 0, 0])]).unwrap();
    for (name, c) in [("com", com), ("lie", lie), ("k[x]/x^3", truncated)] {
        let bar = bar_resolution(&c, 3).unwrap();
        assert!(bar.verify_simplicial_identities().is_empty(), "{name}: {:?}", bar.verify_simplicial_identities());
        let h = bar.homology();
        assert_eq!(h[0], by_degree(c.carrier()), "{name}");
        assert!(h[1..].iter().all(BTreeMap::is_empty), "{name}: {h:?}");
        assert!(bar.augmentation_is_iso(), "{name}");
        let d01 = bar.face(1, 0).mul(bar.face(2, 2));
        assert_eq!(d01, bar.face(1, 1).mul(bar.face(2, 0)));
    }
    let disconnected = free_algebra(&op("com", 3, SignRule::Plain), &k(0, 1), 3).unwrap();
    assert!(matches!(bar_resolution(&disconnected, 1), Err(Error::NotConnected(_))));
}

#[test]
fn indecomposables() {
    let com = free_algebra(&op("com", 4, SignRule::Plain), &k(1, 1), 4).unwrap();
    assert_eq!(by_degree(&q_n_functor(&com, 2).unwrap().space), BTreeMap::from([(1, 1)]));
    for name in ["com", "assoc", "lie"] {
        let o = op(name, 4, SignRule::Plain);
        let x = k(1, 2);
        let a = free_algebra(&o, &x, 4).unwrap();
        for n in 2..=4 {
            let q = q_n_functor(&a, n).unwrap();
            let truncated = o.seq().truncate_to(n - 1);
            let expected = opcalc_core::symseq::evaluate(&truncated, &x, 4).unwrap();
            assert_eq!(by_degree(&q.space), by_degree(expected.space()), "{name}, n = {n}");
        }
    }
}

#[test]
fn towers_of_free_algebras() {
    let com = free_algebra(&op("com", 5, SignRule::Plain), &k(1, 1), 5).unwrap();
    let t = tower(&com, 5, TowerMode::Direct).unwrap();
    for n in 1..=5 {
        assert_eq!(t.level(n).total_dim(), n - 1);
    }
    assert!(t.connecting_maps_surjective());
    assert_eq!(t.layer(1), &by_degree(&q_n_functor(&com, 2).unwrap().space));
    for name in ["com", "assoc", "lie"] {
        let a = free_algebra(&op(name, 3, SignRule::Plain), &k(1, 2), 3).unwrap();
        let direct = tower(&a, 3, TowerMode::Direct).unwrap();
        let derived = tower(&a, 3, TowerMode::Derived).unwrap();
        for n in 1..=3 {
            assert_eq!(by_degree(direct.level(n)), by_degree(derived.level(n)), "{name}, n = {n}");
        }
        assert!(derived.connecting_maps_surjective());
    }
}

#[test]
fn layers_match_the_prediction() {
    for name in ["com", "assoc", "lie"] {
        for d in [1, 2] {
            let a = free_algebra(&op(name, 4, SignRule::Plain), &k(1, d), 4).unwrap();
            for n in 1..=3 {
                let cmp = layer_compare(&a, n, TowerMode::Direct).unwrap();
                assert!(cmp.holds, "{name}, d = {d}, n = {n}: {:?} vs {:?}", cmp.layer, cmp.expected);
            }
        }
    }
    let assoc = free_algebra(&op("assoc", 4, SignRule::Plain), &k(1, 2), 4).unwrap();
    assert_eq!(layer_compare(&assoc, 2, TowerMode::Derived).unwrap().layer, BTreeMap::from([(2, 4)]));
    let lie = free_algebra(&op("lie", 4, SignRule::Plain), &k(1, 2), 4).unwrap();
    assert_eq!(layer_compare(&lie, 2, TowerMode::Direct).unwrap().layer, BTreeMap::from([(2, 1)]));

    let mut comps = vec![SymGroupModule::zero(0), SymGroupModule::zero(1), SymGroupModule::zero(2)];
    comps.push(SymGroupModule::trivial(3, 0));
    let gens = SymmetricSequence::new(comps, SignRule::Plain).unwrap();
    let ternary = free_operad(&gens, 3, None).unwrap();
    let c = free_algebra(ternary.operad(), &k(1, 1), 3).unwrap();
    assert!(matches!(layer_compare(&c, 2, TowerMode::Direct), Err(Error::NotPrimitivelyGenerated { arity: 2, .. })));
}

#[test]
fn sections_and_splittings() {
    let com = op("com", 4, SignRule::Plain);
    let free = free_algebra(&com, &k(1, 1), 4).unwrap();
    let cubed = free.quotient(&[free.free_monomial(&[0, 0, 0])]).unwrap();
    let phi = find_section(&cubed).unwrap();
    assert_eq!(phi.to_flat().column(0), &cubed.monomial(&[0]));

    for (name, rule) in [("com", SignRule::Plain), ("assoc", SignRule::Koszul), ("lie", SignRule::Plain), ("poisson(2)", SignRule::Koszul)] {
        let a = free_algebra(&op(name, 4, rule), &k(1, 2), 4).unwrap();
        let phi = find_section(&a).unwrap();
        let report = split_algebra(&a, &phi, 5).unwrap();
        assert!(report.holds(), "{name}: {:?}", report.witness);
    }

    // K[x, y] through degree three
    let xy = free_algebra(&op("com", 3, SignRule::Plain), &k(1, 2), 3).unwrap();
    assert_eq!(dims(xy.carrier()), vec![2, 3, 4]);
    let report = split_algebra(&xy, &find_section(&xy).unwrap(), 4).unwrap();
    assert!(report.holds());

    for name in ["com", "assoc"] {
        let free = free_algebra(&op(name, 4, SignRule::Plain), &k(1, 1), 4).unwrap();
        let broken = free.quotient(&[free.free_monomial(&[0, 0])]).unwrap();
        let report = split_algebra(&broken, &find_section(&broken).unwrap(), 4).unwrap();
        assert_eq!(report.witness, Some((2, 2)), "{name}");
    }
    let lie = free_algebra(&op("lie", 4, SignRule::Plain), &k(1, 2), 4).unwrap();
    let abelian = lie.quotient(&[lie.free_monomial(&[0, 1])]).unwrap();
    let report = split_algebra(&abelian, &find_section(&abelian).unwrap(), 4).unwrap();
    assert_eq!(report.witness, Some((2, 2)));

    let bad_phi = find_section(&cubed).unwrap().scale(&Scalar::from_int(2));
    assert!(matches!(split_algebra(&cubed, &bad_phi, 3), Err(Error::NotASection(_))));
}

#[test]
fn hkr() {
    for vars in [1, 2] {
        let r = hochschild_homology(vars, 3, 4);
        assert!(r.holds, "{vars}: {:?} vs {:?}", r.homology, r.forms);
    }
    let one = hochschild_homology(1, 3, 4);
    assert!(one.homology.keys().all(|&(q, _)| q <= 1));
    assert_eq!(one.homology.get(&(1, 3)), Some(&1));
    assert_eq!(hochschild_homology(2, 2, 2).homology.get(&(2, 2)), Some(&1));
}

#[test]
fn leray() {
    let px = free_algebra(&op("com", 6, SignRule::Plain), &k(1, 1), 6).unwrap();
    let r = leray_split(&px, None).unwrap();
    assert!(r.holds());
    assert_eq!(r.indecomposables, BTreeMap::from([(1, 1)]));

    let lambda = free_algebra(&op("com", 6, SignRule::Koszul), &GradedVectorSpace::from_pairs(&[(1, 1), (2, 1)]), 6).unwrap();
    assert_eq!(dims(lambda.carrier()), vec![1, 1, 1, 1, 1, 1]);
    let r = leray_split(&lambda, None).unwrap();
    assert!(r.holds());
    assert_eq!(r.indecomposables, BTreeMap::from([(1, 1), (2, 1)]));

    let assoc = free_algebra(&op("assoc", 3, SignRule::Plain), &k(1, 1), 3).unwrap();
    assert!(matches!(leray_split(&assoc, None), Err(Error::Invalid(_))));
}

/// `dim T(L)_w − rank` of the two-sided ideal spanned by `u (ab − ba − [a,b]) v`.
fn enveloping_dims_by_relations(weights: &[i32], bracket: &dyn Fn(usize, usize) -> Vec<(usize, i64)>, cap: i32) -> Vec<usize> {
    fn words(weights: &[i32], w: i32) -> Vec<Vec<usize>> {
        if w == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, &x) in weights.iter().enumerate() {
            if x <= w {
                for mut rest in words(weights, w - x) {
                    rest.insert(0, i);
                    out.push(rest);
                }
            }
        }
        out
    }
    let n = weights.len();
    (0..=cap)
        .map(|w| {
            let basis = words(weights, w);
            let index: HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
            let mut ideal = Echelon::new();
            for lw in 0..=w {
                for u in words(weights, lw) {
                    for a in 0..n {
                        for b in 0..n {
                            let rw = w - lw - weights[a] - weights[b];
                            if rw < 0 {
                                continue;
                            }
                            for v in words(weights, rw) {
                                let make = |mid: &[usize]| {
                                    let mut x = u.clone();
                                    x.extend_from_slice(mid);
                                    x.extend_from_slice(&v);
                                    x
                                };
                                let mut terms = vec![(index[&make(&[a, b])], Scalar::one()), (index[&make(&[b, a])], -Scalar::one())];
                                for (c, coef) in bracket(a, b) {
                                    terms.push((index[&make(&[c])], Scalar::from_int(-coef)));
                                }
                                ideal.insert(&SparseVec::from_terms(terms));
                            }
                        }
                    }
                }
            }
            basis.len() - ideal.rank()
        })
        .collect()
}

#[test]
fn pbw_for_the_heisenberg_algebra() {
    let r = pbw_check(&heisenberg(), 6).unwrap();
    assert!(r.holds());
    assert_eq!(r.enveloping, vec![1, 2, 4, 6, 9, 12, 16]);
    let bracket = |a: usize, b: usize| match (a, b) {
        (0, 1) => vec![(2, 1)],
        (1, 0) => vec![(2, -1)],
        _ => vec![],
    };
    assert_eq!(enveloping_dims_by_relations(&[1, 1, 2], &bracket, 6), r.enveloping);
    // coefficients of 1/((1−t)²(1−t²))
    let series: Vec<usize> = (0..=6).map(|n: usize| (0..=n / 2).map(|j| n - 2 * j + 1).sum()).collect();
    assert_eq!(series, r.symmetric);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quotients_by_random_relations_are_algebras(a in -2i64..3, b in -2i64..3, which in 0usize..2) {
        let name = ["com", "assoc"][which];
        let free = free_algebra(&op(name, 3, SignRule::Plain), &k(1, 2), 3).unwrap();
        let r = free.free_monomial(&[0, 1]).scale(&Scalar::from_int(a)).add(&free.free_monomial(&[1, 1]).scale(&Scalar::from_int(b)));
        let q = free.quotient(&[r]).unwrap();
        prop_assert!(check_algebra_laws(&q).is_empty());
        let bar = bar_resolution(&q, 1).unwrap();
        prop_assert!(bar.verify_simplicial_identities().is_empty());
        prop_assert_eq!(&bar.homology()[0], &by_degree(q.carrier()));
        prop_assert!(bar.homology()[1].is_empty());
    }
}
