use opcalc_core::exactlin::{GradedVectorSpace, Scalar, SignRule, SparseVec};
use opcalc_core::operads::{builtin_operad, check_operad_laws, lie_to_assoc};
use opcalc_core::triples::{
    associated_triple, builtin_triple, canonical_nu, check_compatibility, check_triple_laws, induced_morphism,
    induced_operad, roundtrip_identity, TripleMorphism,
};

#[test]
fn associated_triples_satisfy_the_laws() {
    for name in ["com", "assoc", "lie", "poisson(2)"] {
        let t = builtin_triple(name, 4, SignRule::Koszul).unwrap();
        let report = check_triple_laws(&t);
        assert!(report.is_empty(), "{name}: {:?}", report.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
}

#[test]
fn com_multiplication_folds_partitions() {
    let t = builtin_triple("symmetric", 3, SignRule::Koszul).unwrap();
    assert_eq!(t.composite().entries(2).len(), 2);
    for c in t.mu(2).columns() {
        assert_eq!(c, &SparseVec::unit(0));
    }
    assert_eq!(t.mu(1).apply(&t.composite().element(1, &[vec![0]], t.eta(), &[t.eta().clone()])), *t.eta());
}

#[test]
fn zeroed_multiplication_is_reported() {
    let t = builtin_triple("tensor", 3, SignRule::Koszul).unwrap();
    let e = t.composite().entries(3).iter().position(|e| t.composite().partition(3, e.partition).len() == 2).unwrap();
    let bad = t.with_mu_column(3, e, SparseVec::new());
    let report = check_triple_laws(&bad);
    assert!(!report.is_empty());
    assert!(report.iter().all(|v| v.arity == 3));
    assert!(report.iter().any(|v| v.component.contains('{')));
}

#[test]
fn induced_operads_of_the_classical_triples() {
    for (name, dims) in [
        ("tensor", vec![1, 2, 6, 24, 120]),
        ("symmetric", vec![1, 1, 1, 1, 1]),
        ("free-lie", vec![1, 1, 2, 6, 24]),
    ] {
        let t = builtin_triple(name, 5, SignRule::Koszul).unwrap();
        let a = induced_operad(&t).unwrap();
        assert_eq!((1..=5).map(|n| a.dim(n)).collect::<Vec<_>>(), dims, "{name}");
        assert!(check_operad_laws(&a).is_empty(), "{name}");
    }
}

#[test]
fn roundtrip_is_an_isomorphism() {
    for name in ["com", "assoc", "lie", "poisson(2)"] {
        let op = builtin_operad(name, 5, SignRule::Koszul).unwrap();
        let m = roundtrip_identity(&op).unwrap();
        assert!(m.is_isomorphism());
        if name == "com" {
            assert!(m.components[1..].iter().all(|c| c.is_identity() && c.nrows() == 1));
        }
    }
}

#[test]
fn nu_is_a_map_of_triples() {
    let t = builtin_triple("assoc", 4, SignRule::Koszul).unwrap();
    let nu = canonical_nu(&t).unwrap();
    assert!(nu.is_triple_map());
    assert!(nu.components[2].is_identity());
    assert_eq!(nu.components[2].nrows(), 2);
}

#[test]
fn compatibility_holds_and_detects_a_perturbation() {
    let k1 = GradedVectorSpace::from_pairs(&[(1, 1)]);
    let k2 = GradedVectorSpace::from_pairs(&[(1, 2)]);
    let com = builtin_triple("com", 4, SignRule::Plain).unwrap();
    assert!(check_compatibility(&com, &k1, 4).unwrap().holds);
    let lie = builtin_triple("lie", 4, SignRule::Plain).unwrap();
    assert!(check_compatibility(&lie, &k2, 4).unwrap().holds);

    let c = com.composite();
    let col = c
        .entries(3)
        .iter()
        .position(|e| c.partition(3, e.partition) == [vec![0, 2], vec![1]])
        .unwrap();
    let bad = com.with_mu_column(3, col, SparseVec::single(0, Scalar::from_int(2)));
    assert!(check_compatibility(&bad, &k1, 4).unwrap().holds, "one letter cannot see non-consecutive blocks");
    let report = check_compatibility(&bad, &k2, 4).unwrap();
    assert!(!report.holds);
    assert!(report.mismatches.iter().all(|m| m.component == "{1,3}{2}" && m.arity == 2), "{:?}", report.mismatches);
}

#[test]
fn lie_into_assoc_induces_the_commutator_map() {
    let phi = lie_to_assoc(4, SignRule::Koszul).unwrap();
    let source = associated_triple(&phi.source).unwrap();
    let target = associated_triple(&phi.target).unwrap();
    let tm = TripleMorphism { source, target, components: phi.components.clone() };
    assert!(tm.verify().is_empty());
    let induced = induced_morphism(&tm).unwrap();
    assert!(induced.verify().is_empty());
    assert_eq!(induced.components, phi.components);
    let _ = induced_operad;
}
