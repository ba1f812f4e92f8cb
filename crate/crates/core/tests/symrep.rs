use opcalc_core::exactlin::{Matrix, Scalar, SparseVec};
use opcalc_core::symrep::{factorial, Permutation, SymGroupModule};
use proptest::prelude::*;

/// Multiplicity of the trivial character, straight from the character formula.
fn trivial_multiplicity(m: &SymGroupModule) -> usize {
    let n = m.arity();
    let mut total = Scalar::zero();
    for p in Permutation::all(n) {
        let a = m.act_flat(&p);
        for i in 0..m.dim() {
            total += &a.get(i, i);
        }
    }
    let avg = &total / &Scalar::from_int(factorial(n) as i64);
    assert!(avg.is_integer());
    avg.to_string().parse().unwrap()
}

fn permutation_matrix(p: &Permutation) -> Matrix {
    let perms = Permutation::all(p.degree());
    let cols = perms.iter().map(|q| SparseVec::unit(p.compose(q).lex_rank())).collect();
    Matrix::from_columns(perms.len(), cols)
}

#[test]
fn trivial_and_regular_actions_are_valid() {
    assert!(SymGroupModule::trivial(3, 0).verify_action().is_empty());
    assert!(SymGroupModule::regular(3, 0).verify_action().is_empty());
    assert!(SymGroupModule::regular(4, 2).verify_action().is_empty());
}

#[test]
fn broken_square_is_named() {
    let bad = SymGroupModule::new(2, SymGroupModule::trivial(2, 0).space().clone(), vec![Matrix::from_int_rows(&[&[2]])])
        .unwrap();
    let report = bad.verify_action();
    assert_eq!(report.len(), 1);
    assert_eq!(report[0].key(), (1, "square"));
}

#[test]
fn three_cycle_on_regular_rep() {
    let reg = SymGroupModule::regular(3, 0);
    let cycle = Permutation::from_one_based(&[2, 3, 1]).unwrap();
    assert_eq!(reg.act_flat(&cycle), permutation_matrix(&cycle));
    let s1 = Permutation::transposition(3, 0);
    assert_eq!(reg.act_flat(&s1), reg.gens()[0]);
    assert!(reg.act_flat(&Permutation::identity(3)).is_identity());
}

#[test]
fn coinvariant_dimensions() {
    let reg = SymGroupModule::regular(3, 0).coinvariants().unwrap();
    assert_eq!(reg.space.total_dim(), 1);
    let sign = SymGroupModule::sign(2, 0).coinvariants().unwrap();
    assert_eq!(sign.space.total_dim(), 0);
    let triv = SymGroupModule::trivial(4, 1).coinvariants().unwrap();
    assert!(triv.projection.is_identity());
    assert!(SymGroupModule::trivial(8, 0).coinvariants().is_err());
}

#[test]
fn coinvariants_agree_with_character_formula() {
    let mods = [
        SymGroupModule::regular(3, 0),
        SymGroupModule::regular(4, 0),
        SymGroupModule::sign(3, 0),
        SymGroupModule::regular(3, 0).diagonal_tensor(&SymGroupModule::sign(3, 0)),
        SymGroupModule::induce(&[SymGroupModule::trivial(2, 0), SymGroupModule::sign(2, 0)]).unwrap(),
    ];
    for m in &mods {
        let c = m.coinvariants().unwrap();
        assert_eq!(c.space.total_dim(), trivial_multiplicity(m));
        assert!(c.projection.mul(&c.section).is_identity());
        assert_eq!(c.space.total_dim(), m.invariants_dim());
    }
}

#[test]
fn induced_dimensions() {
    let t1 = SymGroupModule::trivial(1, 0);
    let two = SymGroupModule::induce(&[t1.clone(), t1.clone()]).unwrap();
    assert_eq!(two.dim(), 2);
    assert!(two.verify_action().is_empty());
    assert_eq!(two.coinvariants().unwrap().space.total_dim(), 1);
    let same = SymGroupModule::induce(&[SymGroupModule::trivial(2, 0)]).unwrap();
    assert_eq!(same.dim(), 1);
    let six = SymGroupModule::induce(&[t1.clone(), t1.clone(), t1]).unwrap();
    assert_eq!(six.dim(), 6);
    assert!(six.verify_action().is_empty());
    let mixed = SymGroupModule::induce(&[SymGroupModule::regular(2, 1), SymGroupModule::sign(3, 0)]).unwrap();
    assert_eq!(mixed.dim(), 10 * 2);
    assert!(mixed.verify_action().is_empty());
}

proptest! {
    #[test]
    fn action_is_a_homomorphism(
        a in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        b in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let m = SymGroupModule::induce(&[SymGroupModule::regular(2, 0), SymGroupModule::sign(2, 1)]).unwrap();
        let s = Permutation::new(a).unwrap();
        let t = Permutation::new(b).unwrap();
        prop_assert_eq!(m.act_flat(&s.compose(&t)), m.act_flat(&s).mul(&m.act_flat(&t)));
    }
}
