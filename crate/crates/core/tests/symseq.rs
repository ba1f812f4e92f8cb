use opcalc_core::exactlin::{GradedVectorSpace, Matrix, Scalar, SignRule};
use opcalc_core::symrep::{factorial, SymGroupModule};
use opcalc_core::symseq::{compose, evaluate, poincare_series, set_partitions, SymmetricSequence};

fn com(n: usize, rule: SignRule) -> SymmetricSequence {
    let mut c = vec![SymGroupModule::zero(0)];
    c.extend((1..=n).map(|k| SymGroupModule::trivial(k, 0)));
    SymmetricSequence::new(c, rule).unwrap()
}

fn assoc(n: usize, rule: SignRule) -> SymmetricSequence {
    let mut c = vec![SymGroupModule::zero(0)];
    c.extend((1..=n).map(|k| SymGroupModule::regular(k, 0)));
    SymmetricSequence::new(c, rule).unwrap()
}

/// Truncated composition of exponential generating functions, coefficients as n!·[tⁿ].
fn egf_compose(f: &[usize], g: &[usize], n: usize) -> Vec<Scalar> {
    let fc: Vec<Scalar> = f.iter().enumerate().map(|(k, &d)| Scalar::new(d as i64, factorial(k) as i64)).collect();
    let gc: Vec<Scalar> = g.iter().enumerate().map(|(k, &d)| Scalar::new(d as i64, factorial(k) as i64)).collect();
    let mul = |a: &[Scalar], b: &[Scalar]| {
        let mut out = vec![Scalar::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
            }
        }
        out
    };
    let mut power = vec![Scalar::zero(); n + 1];
    power[0] = Scalar::one();
    let mut total = vec![Scalar::zero(); n + 1];
    for c in fc.iter().take(n + 1) {
        for i in 0..=n {
            total[i] = &total[i] + &(c * &power[i]);
        }
        power = mul(&power, &gc);
    }
    total.iter().enumerate().map(|(k, c)| c * &Scalar::from_int(factorial(k) as i64)).collect()
}

#[test]
fn com_and_assoc_on_a_line() {
    let x = GradedVectorSpace::from_pairs(&[(1, 1)]);
    for seq in [com(4, SignRule::Plain), assoc(4, SignRule::Plain)] {
        let e = evaluate(&seq, &x, 4).unwrap();
        assert_eq!(e.space().dims().values().copied().collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    }
    let s = poincare_series(&com(3, SignRule::Plain), &x, 3).unwrap();
    assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 1), (3, 1)]);
    let zero = SymmetricSequence::zero(3, SignRule::Plain);
    assert!(poincare_series(&zero, &x, 3).unwrap().is_empty());
}

#[test]
fn free_associative_words() {
    let x = GradedVectorSpace::from_pairs(&[(1, 2)]);
    let s = poincare_series(&assoc(2, SignRule::Plain), &x, 2).unwrap();
    assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![(1, 2), (2, 4)]);
}

#[test]
fn koszul_kills_odd_squares() {
    let x = GradedVectorSpace::from_pairs(&[(1, 1)]);
    let e = evaluate(&com(3, SignRule::Koszul), &x, 3).unwrap();
    assert_eq!(e.dim(), 1);
    let y = GradedVectorSpace::from_pairs(&[(2, 1)]);
    let e = evaluate(&com(3, SignRule::Koszul), &y, 6).unwrap();
    assert_eq!(e.dim(), 3);
}

#[test]
fn truncated_sequences_report_honest_caps() {
    let x = GradedVectorSpace::from_pairs(&[(1, 1)]);
    let seq = com(3, SignRule::Plain).mark_truncated(true);
    assert_eq!(evaluate(&seq, &x, 6).unwrap().honest_cap(), 3);
    let zero_deg = GradedVectorSpace::from_pairs(&[(0, 1)]);
    assert!(evaluate(&seq, &zero_deg, 6).is_err());
    assert_eq!(evaluate(&com(3, SignRule::Plain), &zero_deg, 0).unwrap().dim(), 3);
}

#[test]
fn composition_dimensions() {
    let c = com(6, SignRule::Plain);
    let cc = compose(&c, &c).unwrap();
    let dims: Vec<usize> = (2..=6).map(|n| cc.sequence().dim(n)).collect();
    assert_eq!(dims, vec![2, 5, 15, 52, 203]);
    let a = assoc(4, SignRule::Plain);
    let aa = compose(&a, &a).unwrap();
    assert_eq!(aa.sequence().dim(3), 24);
    assert_eq!(aa.sequence().dim(4), 8 * 24);
    let unit = SymmetricSequence::unit(4, SignRule::Plain);
    let au = compose(&a, &unit).unwrap();
    let ua = compose(&unit, &a).unwrap();
    for n in 0..=4 {
        assert_eq!(au.sequence().dim(n), a.dim(n));
        assert_eq!(ua.sequence().dim(n), a.dim(n));
        if n >= 1 {
            assert_eq!(au.sequence().component(n).gens(), a.component(n).gens());
        }
    }
}

#[test]
fn egf_identity_for_composites() {
    let seqs = [com(5, SignRule::Plain), assoc(5, SignRule::Plain)];
    for f in &seqs {
        for g in &seqs {
            let fg = compose(f, g).unwrap();
            let expected = egf_compose(&f.dims(), &g.dims(), 5);
            for n in 0..=5 {
                assert_eq!(Scalar::from_int(fg.sequence().dim(n) as i64), expected[n], "arity {n}");
            }
        }
    }
}

#[test]
fn evaluation_of_composite_matches_iterated_evaluation() {
    let x = GradedVectorSpace::from_pairs(&[(1, 2)]);
    let c = com(4, SignRule::Plain);
    let a = assoc(4, SignRule::Plain);
    for (f, g) in [(&c, &a), (&a, &c), (&c, &c)] {
        let fg = compose(f, g).unwrap();
        let lhs = evaluate(fg.sequence(), &x, 4).unwrap();
        let inner = evaluate(g, &x, 4).unwrap();
        let rhs = evaluate(f, inner.space(), 4).unwrap();
        assert_eq!(lhs.space().dims(), rhs.space().dims());
    }
}

#[test]
fn evaluation_is_natural() {
    let c = com(3, SignRule::Plain);
    let x = GradedVectorSpace::from_pairs(&[(1, 2)]);
    let y = GradedVectorSpace::from_pairs(&[(1, 3)]);
    let z = GradedVectorSpace::from_pairs(&[(1, 1)]);
    let f = Matrix::from_int_rows(&[&[1, 2], &[0, 1], &[3, -1]]);
    let g = Matrix::from_int_rows(&[&[1, 1, 1]]);
    let ex = evaluate(&c, &x, 3).unwrap();
    let ey = evaluate(&c, &y, 3).unwrap();
    let ez = evaluate(&c, &z, 3).unwrap();
    let composite = ex.map_to(&g.mul(&f), &ez);
    assert_eq!(composite, ey.map_to(&g, &ez).mul(&ex.map_to(&f, &ey)));
    assert!(ex.map_to(&Matrix::identity(2), &ex).is_identity());
}

#[test]
fn partitions_are_canonical() {
    for p in set_partitions(4) {
        for w in p.windows(2) {
            assert!(w[0][0] < w[1][0]);
        }
    }
}
