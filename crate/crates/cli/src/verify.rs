//! `verify`: property suites with one pass/fail line each.

use std::time::Instant;

use anyhow::{bail, Result};
use num_complex::Complex64;

use wmtc_core::affine::{default_alpha_star, make_admissible_level, principal_labels, subregular_labels};
use wmtc_core::fusion::{fusion_ring_isomorphic, verlinde, FusionTable};
use wmtc_core::liealg::{root_system, CosetChain};
use wmtc_core::modular::{conservative_rotation, degenerate_kernel, fkw_principal, kac_peterson, mat_mul, subregular_s, Label, Probe};
use wmtc_core::qseries::{brst_character, modular_transform_check, triple_product_check, ThetaSpec};
use wmtc_ope::{brst_nilpotency_abelian, brst_principal, heisenberg, sugawara, verify_fermion_currents, sl2_defining, virasoro_test, Scalar};

use crate::output::Failure;
use crate::VerifyArgs;

type Outcome = std::result::Result<String, String>;

fn check(cond: bool, detail: impl Into<String>) -> Outcome {
    let d = detail.into();
    if cond {
        Ok(d)
    } else {
        Err(d)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `(|Delta_+|, |W|, h^vee, exponents)` for the exceptional and classical types in scope.
const CLASSICAL: &[(&str, usize, u128, i64, &[i64])] = &[
    ("A1", 1, 2, 2, &[1]),
    ("A2", 3, 6, 3, &[1, 2]),
    ("A3", 6, 24, 4, &[1, 2, 3]),
    ("A4", 10, 120, 5, &[1, 2, 3, 4]),
    ("A5", 15, 720, 6, &[1, 2, 3, 4, 5]),
    ("D4", 12, 192, 6, &[1, 3, 3, 5]),
    ("D5", 20, 1920, 8, &[1, 3, 4, 5, 7]),
    ("D6", 30, 23040, 10, &[1, 3, 5, 5, 7, 9]),
    ("E6", 36, 51840, 12, &[1, 4, 5, 7, 8, 11]),
    ("E7", 63, 2903040, 18, &[1, 5, 7, 9, 11, 13, 17]),
    ("E8", 120, 696729600, 30, &[1, 7, 11, 13, 17, 19, 23, 29]),
];

fn roots_suite() -> Outcome {
    for &(t, npos, order, hv, exps) in CLASSICAL {
        let rs = root_system(t).map_err(err)?;
        let mut e = rs.exponents();
        e.sort_unstable();
        let chain = CosetChain::new(&rs);
        let ok = rs.positive_roots().len() == npos && chain.order() == order && rs.dual_coxeter() == hv && e == exps;
        if !ok {
            return Err(format!("{t} disagrees with the classical table"));
        }
    }
    Ok(format!("{} types", CLASSICAL.len()))
}

fn kac_peterson_suite(quick: bool) -> Outcome {
    let s = kac_peterson(&root_system("A1").map_err(err)?, 1).map_err(err)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let oracle = [[r, r], [r, -r]];
    let dev = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| (s.entries[a][b] - oracle[a][b]).norm()).fold(0.0, f64::max);
    if dev > 1e-10 {
        return Err(format!("sl2 k=1 deviates by {dev:e}"));
    }
    let types: &[&str] = if quick { &["A1", "A2", "B2"] } else { &["A1", "A2", "A3", "B2", "B3", "C3", "G2"] };
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for t in types {
        let rs = root_system(t).map_err(err)?;
        for k in 1..=3 {
            let s = kac_peterson(&rs, k).map_err(err)?;
            let s2 = s.square();
            let s4 = mat_mul(&s2, &s2);
            let id_dev = (0..s.len())
                .flat_map(|a| (0..s.len()).map(move |b| (a, b)))
                .map(|(a, b)| (s4[a][b] - if a == b { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).norm())
                .fold(0.0, f64::max);
            worst = worst.max(id_dev).max(s.unitarity_residual()).max(s.symmetry_residual());
            count += 1;
        }
    }
    check(worst < 1e-9, format!("{count} matrices, worst residual {worst:.1e}"))
}

fn sl2_verlinde_suite() -> Outcome {
    let rs = root_system("A1").map_err(err)?;
    let mut worst: f64 = 0.0;
    for k in 1..=6i64 {
        let f = verlinde(&kac_peterson(&rs, k).map_err(err)?).map_err(err)?;
        worst = worst.max(f.rounding_residual);
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    let cg = (a - b).abs() <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0;
                    if f.n(a as usize, b as usize, c as usize) != u32::from(cg) {
                        return Err(format!("k={k}: N_({a},{b})^{c} disagrees with Clebsch-Gordan"));
                    }
                }
            }
        }
    }
    check(worst < 1e-6, format!("k <= 6, rounding residual {worst:.1e}"))
}

/// Ising fusion: `sigma x sigma = 1 + psi`, `sigma x psi = sigma`, `psi x psi = 1`.
fn ising() -> FusionTable {
    let mut n = vec![0u32; 27];
    let mut set = |a: usize, b: usize, c: usize| {
        n[(a * 3 + b) * 3 + c] = 1;
        n[(b * 3 + a) * 3 + c] = 1;
    };
    for a in 0..3 {
        set(0, a, a);
    }
    set(1, 1, 0);
    set(1, 1, 2);
    set(1, 2, 1);
    set(2, 2, 0);
    let labels = (0..3).map(|i| Label::Integrable { lambda: vec![i] }).collect();
    FusionTable::from_coefficients(labels, 0, n, vec![1.0, 2f64.sqrt(), 1.0])
}

fn principal_suite() -> Outcome {
    let rs = root_system("A1").map_err(err)?;
    for ((p, q), n) in [((2, 3), 1), ((3, 4), 3), ((4, 5), 6)] {
        let got = principal_labels(&make_admissible_level(&rs, p, q).map_err(err)?).len();
        if got != n {
            return Err(format!("({p},{q}) has {got} labels, expected {n}"));
        }
    }
    let f = verlinde(&fkw_principal(&make_admissible_level(&rs, 3, 4).map_err(err)?).map_err(err)?).map_err(err)?;
    check(fusion_ring_isomorphic(&f, &ising()).is_some(), "counts 1, 3, 6; (3,4) is Ising")
}

fn subregular_suite(quick: bool) -> Outcome {
    let rs = root_system("D6").map_err(err)?;
    let star = default_alpha_star(&rs).map_err(err)?;
    let lv = make_admissible_level(&rs, 11, 8).map_err(err)?;
    let f = verlinde(&subregular_s(&lv, star, Probe::Default).map_err(err)?).map_err(err)?;
    f.check_axioms()?;
    if fusion_ring_isomorphic(&f, &ising()).is_none() {
        return Err("D6 at (11,8) is not Ising".into());
    }
    if quick {
        return Ok("D6 (11,8) is Ising".into());
    }
    let e8 = root_system("E8").map_err(err)?;
    let lv = make_admissible_level(&e8, 30, 29).map_err(err)?;
    let n = subregular_labels(&lv, default_alpha_star(&e8).map_err(err)?).map_err(err)?.len();
    check(n == 44, format!("D6 (11,8) is Ising; E8 (30,29) has {n} labels"))
}

fn probe_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for (t, p, q) in [("A3", 5, 3), ("D4", 7, 5)] {
        let rs = root_system(t).map_err(err)?;
        let star = default_alpha_star(&rs).map_err(err)?;
        let n = rs.rank();
        let lv = make_admissible_level(&rs, p, q).map_err(err)?;
        // the kernel is probe independent on the rotated label representatives
        let etas: Vec<Vec<i64>> = subregular_labels(&lv, star)
            .map_err(err)?
            .iter()
            .map(|l| conservative_rotation(&rs, l, star).1)
            .collect();
        for a in &etas {
            for b in &etas {
                let x = degenerate_kernel(&rs, star, &Probe::Default.values(n), p, q, a, b).map_err(err)?;
                let y = degenerate_kernel(&rs, star, &Probe::Alternate.values(n), p, q, a, b).map_err(err)?;
                worst = worst.max((x - y).norm());
            }
        }
    }
    check(worst < 1e-9, format!("A3, D4 kernels, worst deviation {worst:.1e}"))
}

fn characters_suite() -> Outcome {
    let t = triple_product_check(40, None).map_err(err)?;
    if !t.equal {
        return Err(format!("triple product mismatch at {:?}", t.first_mismatch));
    }
    let b = brst_character(20).map_err(err)?;
    check(b.matches_closed_form && b.matches_virasoro, "triple product O(q^40), BRST O(q^20)")
}

fn theta_suite() -> Outcome {
    let taus = [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.5), Complex64::new(0.25, 1.0)];
    let mut worst: f64 = 0.0;
    for (t, scale) in [("A1", 1), ("A1", 2), ("A1", 3), ("A2", 1), ("A2", 2)] {
        let spec = ThetaSpec::root_lattice(&root_system(t).map_err(err)?, scale).map_err(err)?;
        let n = spec.rank();
        for tau in taus {
            for x in [vec![Complex64::new(0.0, 0.0); n], (0..n).map(|i| Complex64::new(0.1 * (i + 1) as f64, -0.05)).collect()] {
                let r = modular_transform_check(&spec, tau, &x, 1e-13).map_err(err)?;
                worst = worst.max(r.max_residual);
            }
        }
    }
    check(worst < 1e-9, format!("A1, A2 lattices, worst residual {worst:.1e}"))
}

fn ope_suite() -> Outcome {
    let k = Scalar::param("k");
    let alg = heisenberg();
    let h = alg.gen("h").map_err(err)?;
    let beta = Scalar::param("beta");
    let l = &alg.nop(&h, &h).map_err(err)?.scale(&Scalar::ratio(1, 2)) + &alg.derivative(&h).map_err(err)?.scale(&beta);
    let c = virasoro_test(&alg, &l).map_err(err)?;
    let expected = &Scalar::one() - &(&Scalar::int(12) * &(&beta * &beta));
    if c.central_charge() != Some(&expected) {
        return Err("c(B) != 1 - 12 beta^2".into());
    }
    for (t, dim, hv) in [("A1", 3, 2), ("A2", 8, 3)] {
        let (pre, l) = sugawara(&root_system(t).map_err(err)?, &k).map_err(err)?;
        let c = virasoro_test(&pre.algebra, &l).map_err(err)?;
        let expected = (&(&Scalar::int(dim) * &k) / &(&k + &Scalar::int(hv))).map_err(err)?;
        if c.central_charge() != Some(&expected) {
            return Err(format!("Sugawara {t} central charge"));
        }
    }
    let (_, checks) = verify_fermion_currents(&sl2_defining()).map_err(err)?;
    if !checks.iter().all(|c| c.holds) {
        return Err("fermion currents do not close".into());
    }
    let (alg, q) = brst_principal(&root_system("A1").map_err(err)?, &k).map_err(err)?;
    check(brst_nilpotency_abelian(&alg, &q).map_err(err)?.nilpotent, "Heisenberg, Sugawara sl2/sl3, currents, BRST")
}

pub fn run(args: &VerifyArgs) -> Result<()> {
    let quick = args.quick;
    let suites: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("root data", Box::new(roots_suite)),
        ("kac-peterson unitarity", Box::new(move || kac_peterson_suite(quick))),
        ("verlinde integrality", Box::new(sl2_verlinde_suite)),
        ("principal labels and fusion", Box::new(principal_suite)),
        ("subregular fusion", Box::new(move || subregular_suite(quick))),
        ("probe independence", Box::new(probe_suite)),
        ("character identities", Box::new(characters_suite)),
        ("theta modular law", Box::new(theta_suite)),
        ("ope goldens", Box::new(ope_suite)),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    println!("{:<30} {:<6} {:>8}  detail", "suite", "status", "seconds");
    for (name, f) in suites {
        let t = Instant::now();
        let outcome = f();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("{name:<30} {status:<6} {:>8.2}  {detail}", t.elapsed().as_secs_f64());
        if outcome.is_err() {
            failed.push(name);
        }
    }
    println!("total {:.2} s", start.elapsed().as_secs_f64());
    if !failed.is_empty() {
        bail!(Failure::tolerance(format!("failed suites: {}", failed.join(", "))));
    }
    Ok(())
}
