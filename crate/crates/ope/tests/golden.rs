use num_rational::BigRational;
use wmtc_core::liealg::root_system;
use wmtc_ope::*;

fn k() -> Scalar {
    Scalar::param("k")
}

fn lam(coeffs: Vec<Field>) -> LambdaPoly {
    LambdaPoly::from_coeffs(coeffs)
}

#[test]
fn generator_brackets() {
    let h = heisenberg();
    let hh = h.bracket(&h.gen("h").unwrap(), &h.gen("h").unwrap()).unwrap();
    assert_eq!(hh, lam(vec![Field::zero(), Field::vacuum(Scalar::one())]));

    let f = charged_fermions(1);
    let b = f.bracket(&f.gen("phi").unwrap(), &f.gen("phi*").unwrap()).unwrap();
    assert_eq!(b, LambdaPoly::constant(Field::vacuum(Scalar::one())));

    let a = affine(&root_system("A1").unwrap(), &k()).unwrap().algebra;
    let ef = a.bracket(&a.gen("e").unwrap(), &a.gen("f").unwrap()).unwrap();
    assert_eq!(ef, lam(vec![a.gen("h").unwrap(), Field::vacuum(k())]));
    let he = a.bracket(&a.gen("h").unwrap(), &a.gen("e").unwrap()).unwrap();
    assert_eq!(he, LambdaPoly::constant(a.gen("e").unwrap().scale(&Scalar::int(2))));
}

#[test]
fn heisenberg_virasoro() {
    let alg = heisenberg();
    let h = alg.gen("h").unwrap();
    let l = alg.nop(&h, &h).unwrap().scale(&Scalar::ratio(1, 2));
    let lh = alg.bracket(&l, &h).unwrap();
    assert_eq!(lh, lam(vec![alg.derivative(&h).unwrap(), h.clone()]));
    let ll = alg.bracket(&l, &l).unwrap();
    let expected = lam(vec![
        alg.derivative(&l).unwrap(),
        l.scale(&Scalar::int(2)),
        Field::zero(),
        Field::vacuum(Scalar::ratio(1, 12)),
    ]);
    assert_eq!(ll, expected);
    assert_eq!(virasoro_test(&alg, &l).unwrap().central_charge(), Some(&Scalar::one()));
}

#[test]
fn improved_stress_tensor() {
    let alg = heisenberg();
    let h = alg.gen("h").unwrap();
    let beta = Scalar::param("beta");
    let l = &alg.nop(&h, &h).unwrap().scale(&Scalar::ratio(1, 2)) + &alg.derivative(&h).unwrap().scale(&beta);
    let c = &Scalar::one() - &(&Scalar::int(12) * &(&beta * &beta));
    assert_eq!(virasoro_test(&alg, &l).unwrap().central_charge(), Some(&c));
}

#[test]
fn non_virasoro_reports_residuals() {
    let alg = heisenberg();
    match virasoro_test(&alg, &alg.gen("h").unwrap()).unwrap() {
        VirasoroOutcome::Mismatch { residuals } => assert!(!residuals.is_empty()),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn sugawara_central_charges() {
    for (t, dim, hv) in [("A1", 3, 2), ("A2", 8, 3)] {
        let (pre, l) = sugawara(&root_system(t).unwrap(), &k()).unwrap();
        let c = virasoro_test(&pre.algebra, &l).unwrap();
        let expected = (&(&Scalar::int(dim) * &k()) / &(&k() + &Scalar::int(hv))).unwrap();
        let got = c.central_charge().cloned().expect("Sugawara is Virasoro");
        assert_eq!(got, expected, "{t}");
        assert_eq!(got.limit_at_infinity("k"), Some(Scalar::int(dim)));
    }
}

#[test]
fn sugawara_primary_currents() {
    let (pre, l) = sugawara(&root_system("A1").unwrap(), &k()).unwrap();
    let alg = &pre.algebra;
    for g in ["e", "h", "f"] {
        let a = alg.gen(g).unwrap();
        assert_eq!(alg.bracket(&l, &a).unwrap(), lam(vec![alg.derivative(&a).unwrap(), a.clone()]));
    }
}

#[test]
fn sugawara_at_critical_level_rejected() {
    assert!(sugawara(&root_system("A1").unwrap(), &Scalar::int(-2)).is_err());
}

#[test]
fn fermion_currents_sl2() {
    let (alg, checks) = verify_fermion_currents(&sl2_defining()).unwrap();
    assert!(checks.iter().all(|c| c.holds), "{:?}", checks.iter().find(|c| !c.holds));
    // [F^e_lambda F^f] = F^h + lambda, [F^h_lambda F^h] = 2 lambda
    let ef = &checks[2];
    assert_eq!(ef.bracket.coeff(1), Field::vacuum(Scalar::one()));
    let fh = fermion_current(&alg, &sl2_defining()[1]).unwrap();
    assert_eq!(ef.bracket.coeff(0), fh);
    assert_eq!(checks[4].bracket, lam(vec![Field::zero(), Field::vacuum(Scalar::int(2))]));

    let zero = vec![vec![BigRational::from_integer(0.into()); 2]; 2];
    let (_, abelian) = verify_fermion_currents(&[zero.clone(), zero]).unwrap();
    assert!(abelian.iter().all(|c| c.bracket.is_zero()));
}

#[test]
fn brst_sl2() {
    let (alg, q) = brst_principal(&root_system("A1").unwrap(), &k()).unwrap();
    assert!(brst_nilpotency_abelian(&alg, &q).unwrap().nilpotent);
    let bad = alg.nop(&alg.gen("h").unwrap(), &alg.gen("phi*").unwrap()).unwrap();
    let r = brst_nilpotency_abelian(&alg, &bad).unwrap();
    assert!(!r.nilpotent);
    let p = alg.gen("phi*").unwrap();
    assert!(brst_nilpotency_abelian(&alg, &p).unwrap().nilpotent);
    assert!(brst_principal(&root_system("A2").unwrap(), &k()).is_err());
}

#[test]
fn user_tables_are_checked_for_skew_symmetry() {
    let mut b = AlgebraBuilder::new();
    b.generator("a", false, BigRational::from_integer(1.into())).unwrap();
    b.generator("b", false, BigRational::from_integer(1.into())).unwrap();
    let one = Field::vacuum(Scalar::one());
    b.bracket("a", "b", LambdaPoly::constant(one.clone())).unwrap();
    b.bracket("b", "a", LambdaPoly::constant(one)).unwrap();
    assert!(matches!(b.build(false), Err(OpeError::SkewSymmetry { .. })));
}

#[test]
fn ternary_products_are_reported() {
    let (pre, l) = sugawara(&root_system("A1").unwrap(), &k()).unwrap();
    let alg = &pre.algebra;
    let e = alg.gen("e").unwrap();
    let h = alg.gen("h").unwrap();
    // [:eh:_lambda :eh:] needs :(:ee:)h:
    let eh = alg.nop(&e, &h).unwrap();
    assert!(matches!(alg.bracket(&eh, &eh), Err(OpeError::UnsupportedDepth(_))));
    assert!(alg.nop(&l, &e).is_err());
}
