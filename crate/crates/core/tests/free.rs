use opcalc_core::exactlin::{Matrix, SignRule, SparseVec};
use opcalc_core::operads::{
    builtin_operad, check_operad_laws, free_operad, is_primitively_generated, quadratic_operad, Operad,
};
use opcalc_core::symrep::{Permutation, SymGroupModule};
use opcalc_core::symseq::SymmetricSequence;
use opcalc_core::Error;

fn binary(module: SymGroupModule, max: usize, rule: SignRule) -> SymmetricSequence {
    let mut comps = vec![SymGroupModule::zero(0), SymGroupModule::zero(1), module];
    comps.extend((3..=max).map(SymGroupModule::zero));
    SymmetricSequence::new(comps, rule).unwrap()
}

fn double_factorial(k: usize) -> usize {
    (1..=k).rev().step_by(2).product()
}

#[test]
fn free_dimensions_count_binary_trees() {
    for (module, d) in [(SymGroupModule::trivial(2, 0), 1usize), (SymGroupModule::regular(2, 0), 2)] {
        let free = free_operad(&binary(module, 5, SignRule::Koszul), 5, None).unwrap();
        for n in 2..=5 {
            let shapes = double_factorial(2 * n - 3);
            assert_eq!(free.operad().dim(n), shapes * d.pow(n as u32 - 1), "n = {n}");
        }
        assert_eq!(free.operad().dim(1), 1);
    }
    let empty = free_operad(&SymmetricSequence::zero(4, SignRule::Koszul), 4, None).unwrap();
    assert_eq!(empty.operad().seq().dims(), vec![0, 1, 0, 0, 0]);
}

#[test]
fn free_operads_satisfy_the_laws() {
    for (module, rule) in [
        (SymGroupModule::trivial(2, 0), SignRule::Koszul),
        (SymGroupModule::regular(2, 0), SignRule::Koszul),
        (SymGroupModule::sign(2, 1), SignRule::Koszul),
        (SymGroupModule::trivial(2, 1), SignRule::Koszul),
    ] {
        let free = free_operad(&binary(module, 4, rule), 4, None).unwrap();
        let report = check_operad_laws(free.operad());
        assert!(report.is_empty(), "{:?}", report.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
}

#[test]
fn unary_generators_need_a_cap() {
    let mut comps = vec![SymGroupModule::zero(0), SymGroupModule::trivial(1, 2), SymGroupModule::trivial(2, 0)];
    comps.push(SymGroupModule::zero(3));
    let gens = SymmetricSequence::new(comps, SignRule::Koszul).unwrap();
    assert!(matches!(free_operad(&gens, 3, None), Err(Error::NonConvergent(_))));
    let free = free_operad(&gens, 3, Some(2)).unwrap();
    // arity one: 1 and u; arity two: the corolla with at most one u above or below
    assert_eq!(free.operad().dim(1), 2);
    assert_eq!(free.operad().dim(2), 4);
    assert!(check_operad_laws(free.operad()).is_empty());
}

#[test]
fn extension_to_assoc_is_a_surjective_morphism() {
    let free = free_operad(&binary(SymGroupModule::regular(2, 0), 4, SignRule::Koszul), 4, None).unwrap();
    let assoc = builtin_operad("assoc", 4, SignRule::Koszul).unwrap();
    let mut phi = vec![Matrix::zeros(0, 0), Matrix::zeros(1, 0), Matrix::identity(2)];
    phi.extend((3..=4).map(|_| Matrix::zeros(0, 0)));
    let phi: Vec<Matrix> = phi
        .into_iter()
        .enumerate()
        .map(|(k, m)| if k == 2 { m } else { Matrix::zeros(assoc.dim(k), 0) })
        .collect();
    let morphism = free.extend(&assoc, &phi).unwrap();
    assert!(morphism.verify().is_empty());
    for n in 1..=4 {
        assert_eq!(morphism.components[n].rank(), assoc.dim(n));
    }
}

fn partial(op: &Operad, a: usize, x: &SparseVec, p: usize, b: usize, y: &SparseVec) -> SparseVec {
    let gs: Vec<(usize, SparseVec)> =
        (0..a).map(|i| if i == p { (b, y.clone()) } else { (1, op.unit().clone()) }).collect();
    op.compose_vec(x, &gs)
}

fn quadratic_dims(module: SymGroupModule, relations: impl Fn(&Operad, &SparseVec) -> Vec<SparseVec>) -> Vec<usize> {
    let free = free_operad(&binary(module.clone(), 5, SignRule::Koszul), 5, None).unwrap();
    let mu = SparseVec::unit(free.generator(2, 0).unwrap());
    let rels = relations(free.operad(), &mu);
    let q = quadratic_operad(&module, &rels, SignRule::Koszul, 5).unwrap();
    assert!(check_operad_laws(q.operad()).is_empty());
    (1..=5).map(|n| q.operad().dim(n)).collect()
}

fn orbit(op: &Operad, v: &SparseVec) -> Vec<SparseVec> {
    let m = op.seq().component(3);
    Permutation::all(3).iter().map(|s| m.act(s, v)).collect()
}

#[test]
fn quadratic_presentations_of_the_builtins() {
    let com = quadratic_dims(SymGroupModule::trivial(2, 0), |op, mu| {
        let r = partial(op, 2, mu, 0, 2, mu).sub(&partial(op, 2, mu, 1, 2, mu));
        orbit(op, &r)
    });
    assert_eq!(com, vec![1, 1, 1, 1, 1]);
    let assoc = quadratic_dims(SymGroupModule::regular(2, 0), |op, mu| {
        let r = partial(op, 2, mu, 0, 2, mu).sub(&partial(op, 2, mu, 1, 2, mu));
        orbit(op, &r)
    });
    assert_eq!(assoc, vec![1, 2, 6, 24, 120]);
    let lie = quadratic_dims(SymGroupModule::sign(2, 0), |op, b| {
        let t = partial(op, 2, b, 0, 2, b);
        let m = op.seq().component(3);
        let cyc = Permutation::new(vec![1, 2, 0]).unwrap();
        let jacobi = t.add(&m.act(&cyc, &t)).add(&m.act(&cyc.compose(&cyc), &t));
        vec![jacobi]
    });
    assert_eq!(lie, vec![1, 1, 2, 6, 24]);
}

#[test]
fn unstable_relations_are_rejected() {
    let module = SymGroupModule::trivial(2, 0);
    let free = free_operad(&binary(module.clone(), 3, SignRule::Koszul), 3, None).unwrap();
    let r = SparseVec::unit(0).sub(&SparseVec::unit(1));
    assert_eq!(free.operad().dim(3), 3);
    assert!(matches!(quadratic_operad(&module, &[r], SignRule::Koszul, 3), Err(Error::RelationsNotStable)));
}

#[test]
fn primitive_generation() {
    for name in ["com", "assoc", "lie"] {
        let op = builtin_operad(name, 5, SignRule::Plain).unwrap();
        let report = is_primitively_generated(&op, &[1, 2], 5).unwrap();
        assert!(report.holds, "{name}: {:?}", report.witness);
    }
    let mut comps = vec![SymGroupModule::zero(0), SymGroupModule::zero(1), SymGroupModule::zero(2)];
    comps.push(SymGroupModule::trivial(3, 0));
    comps.extend((4..=5).map(SymGroupModule::zero));
    let free = free_operad(&SymmetricSequence::new(comps, SignRule::Plain).unwrap(), 5, None).unwrap();
    let report = is_primitively_generated(free.operad(), &[1, 2], 5).unwrap();
    assert!(!report.holds);
    assert_eq!(report.witness.map(|w| w.0), Some(2));
}
