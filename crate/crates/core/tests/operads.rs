use opcalc_core::exactlin::{Scalar, SignRule};
use opcalc_core::operads::{builtin_operad, check_operad_laws, lie_to_assoc, Signature};

#[test]
fn builtins_satisfy_the_laws() {
    for (name, rule) in [
        ("com", SignRule::Koszul),
        ("assoc", SignRule::Koszul),
        ("lie", SignRule::Koszul),
        ("poisson(2)", SignRule::Koszul),
        ("poisson(3)", SignRule::Koszul),
        ("poisson(2)", SignRule::Plain),
    ] {
        let op = builtin_operad(name, 5, rule).unwrap();
        let report = check_operad_laws(&op);
        assert!(report.is_empty(), "{name}: {:?}", report.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
}

#[test]
fn builtin_dimensions() {
    let dims = |name: &str| {
        let op = builtin_operad(name, 5, SignRule::Koszul).unwrap();
        (1..=5).map(|n| op.dim(n)).collect::<Vec<_>>()
    };
    assert_eq!(dims("com"), vec![1, 1, 1, 1, 1]);
    assert_eq!(dims("assoc"), vec![1, 2, 6, 24, 120]);
    assert_eq!(dims("lie"), vec![1, 1, 2, 6, 24]);
    assert_eq!(dims("poisson(2)"), vec![1, 2, 6, 24, 120]);
    assert!(builtin_operad("gerst", 3, SignRule::Koszul).is_err());
}

#[test]
fn negated_gamma_entry_is_reported() {
    let op = builtin_operad("assoc", 4, SignRule::Koszul).unwrap();
    let sig = Signature::new(vec![1, 2]);
    let table = op.gamma(&sig).unwrap().clone();
    let mut cols = table.columns().to_vec();
    cols[0] = cols[0].scale(&Scalar::from_int(-1));
    let bad = op.with_gamma_table(sig.clone(), opcalc_core::exactlin::Matrix::from_columns(table.nrows(), cols));
    let report = check_operad_laws(&bad);
    assert!(report.iter().any(|v| v.signature == sig), "{report:?}");
}

#[test]
fn commutator_map_is_a_morphism() {
    let m = lie_to_assoc(5, SignRule::Koszul).unwrap();
    assert!(m.verify().is_empty(), "{:?}", m.verify());
    assert!(!m.is_isomorphism());
}
