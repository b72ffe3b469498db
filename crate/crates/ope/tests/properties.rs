//! Structural identities of the bracket engine on random grammar fields.

use proptest::prelude::*;
use wmtc_core::liealg::root_system;
use wmtc_ope::*;

/// Algebra with one even and two odd generators so every parity combination occurs.
fn algebra() -> Algebra {
    tensor(heisenberg(), charged_fermions(1)).unwrap()
}

fn atom_field(alg: &Algebra, g: usize, d: u32) -> Field {
    let _ = alg;
    Field::atom(Atom::new(g, d))
}

/// Random homogeneous field: a generator derivative or a normally ordered pair.
fn field_strategy() -> impl Strategy<Value = (usize, u32, Option<(usize, u32)>, i64)> {
    (0usize..3, 0u32..2, prop::option::of((0usize..3, 0u32..2)), 1i64..4)
}

fn build(alg: &Algebra, spec: (usize, u32, Option<(usize, u32)>, i64)) -> Field {
    let (g, d, pair, c) = spec;
    let a = atom_field(alg, g, d);
    let f = match pair {
        Some((g2, d2)) => alg.nop(&a, &atom_field(alg, g2, d2)).unwrap(),
        None => a,
    };
    f.scale(&Scalar::int(c))
}

fn parity(alg: &Algebra, f: &Field) -> bool {
    let odd = |a: &Atom| alg.generators()[a.gen].odd;
    f.terms().next().map_or(false, |(m, _)| match m {
        Mono::One => false,
        Mono::Single(a) => odd(a),
        Mono::Pair(a, b) => odd(a) ^ odd(b),
    })
}

/// `sum_j (-lambda - ∂)^j X_j`
fn substitute_skew(alg: &Algebra, p: &LambdaPoly) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for (j, x) in p.coeffs().iter().enumerate() {
        // (-lambda - ∂)^j = (-1)^j sum_i C(j, i) lambda^{j-i} ∂^i
        let mut dx = x.clone();
        let mut binom = 1i64;
        for i in 0..=j {
            if i > 0 {
                dx = alg.derivative(&dx).unwrap();
                binom = binom * (j - i + 1) as i64 / i as i64;
            }
            let s = if j % 2 == 0 { binom } else { -binom };
            out.add_at(j - i, &dx.scale(&Scalar::int(s)));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn skew_symmetry(a in field_strategy(), b in field_strategy()) {
        let alg = algebra();
        let (x, y) = (build(&alg, a), build(&alg, b));
        let (Ok(xy), Ok(yx)) = (alg.bracket(&x, &y), alg.bracket(&y, &x)) else { return Ok(()); };
        let sign = if parity(&alg, &x) && parity(&alg, &y) { 1 } else { -1 };
        prop_assert_eq!(yx, substitute_skew(&alg, &xy).scale(&Scalar::int(sign)));
    }

    #[test]
    fn sesquilinearity(a in field_strategy(), b in field_strategy()) {
        let alg = algebra();
        let (x, y) = (build(&alg, a), build(&alg, b));
        let Ok(xy) = alg.bracket(&x, &y) else { return Ok(()); };
        let dx = alg.derivative(&x).unwrap();
        if let Ok(left) = alg.bracket(&dx, &y) {
            prop_assert_eq!(left, xy.shift(1).scale(&Scalar::int(-1)));
        }
        let dy = alg.derivative(&y).unwrap();
        if let Ok(right) = alg.bracket(&x, &dy) {
            let mut expected = xy.shift(1);
            for (j, f) in xy.coeffs().iter().enumerate() {
                expected.add_at(j, &alg.derivative(f).unwrap());
            }
            prop_assert_eq!(right, expected);
        }
    }

    #[test]
    fn derivative_is_a_derivation(g1 in 0usize..3, d1 in 0u32..3, g2 in 0usize..3, d2 in 0u32..3) {
        let alg = algebra();
        let (a, b) = (Atom::new(g1, d1), Atom::new(g2, d2));
        let lhs = alg.derivative(&alg.nop_atoms(a, b).unwrap()).unwrap();
        let rhs = &alg.nop_atoms(Atom::new(g1, d1 + 1), b).unwrap() + &alg.nop_atoms(a, Atom::new(g2, d2 + 1)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quasi_commutativity_round_trip(g1 in 0usize..3, d1 in 0u32..2, g2 in 0usize..3, d2 in 0u32..2) {
        // canonicalizing :ab: and :ba: must agree with ::ab: - p :ba: = int_{-∂}^0 [a_lambda b]
        let alg = algebra();
        let (a, b) = (Atom::new(g1, d1), Atom::new(g2, d2));
        let ab = alg.nop_atoms(a, b).unwrap();
        let ba = alg.nop_atoms(b, a).unwrap();
        let p = if alg.generators()[g1].odd && alg.generators()[g2].odd { -1 } else { 1 };
        let br = alg.bracket(&Field::atom(a), &Field::atom(b)).unwrap();
        let mut integral = Field::zero();
        for (j, x) in br.coeffs().iter().enumerate() {
            let s = if j % 2 == 0 { 1 } else { -1 };
            integral = &integral + &alg.derivative_n(x, j as u32 + 1).unwrap().scale(&Scalar::ratio(s, j as i64 + 1));
        }
        prop_assert_eq!(&ab - &ba.scale(&Scalar::int(p)), integral);
    }
}

#[test]
fn affine_skew_symmetry_on_currents() {
    let pre = affine(&root_system("A2").unwrap(), &Scalar::param("k")).unwrap();
    let alg = &pre.algebra;
    for a in pre.names() {
        for b in pre.names() {
            let (x, y) = (alg.gen(a).unwrap(), alg.gen(b).unwrap());
            let xy = alg.bracket(&x, &y).unwrap();
            let yx = alg.bracket(&y, &x).unwrap();
            assert_eq!(yx, substitute_skew(alg, &xy).scale(&Scalar::int(-1)), "{a} {b}");
        }
    }
}
