use num_complex::Complex64;

use super::phase_sum::{PhaseSum, SumWeight};
use super::smatrix::{Label, Normalization, Provenance, SMatrix};
use crate::affine::{principal_labels, AdmissibleLevel, PrincipalLabel};
use crate::error::Result;
use crate::liealg::{CosetChain, RootSystem, Weight};

/// Relative tolerance for `S S^dagger = c I` before normalization.
pub const PROPORTIONALITY_TOL: f64 = 1e-8;

/// Raw factors of the principal S-matrix on a label list.
#[derive(Clone, Debug)]
pub struct PrincipalFactors {
    /// `sum_y eps(y) exp(-2 pi i (p/q) (y(eta_a), eta_b))`
    pub eta_factor: Vec<Vec<Complex64>>,
    /// `sum_w eps(w) exp(-2 pi i (q/p) (w(nu_a), nu_b))`
    pub nu_factor: Vec<Vec<Complex64>>,
    /// `exp(2 pi i ((nu_a, eta_b) + (nu_b, eta_a)))`
    pub cross: Vec<Vec<Complex64>>,
}

impl PrincipalFactors {
    pub fn raw(&self) -> Vec<Vec<Complex64>> {
        let n = self.eta_factor.len();
        (0..n)
            .map(|a| (0..n).map(|b| self.eta_factor[a][b] * self.nu_factor[a][b] * self.cross[a][b]).collect())
            .collect()
    }
}

pub(crate) fn cross_phase(rs: &RootSystem, nus: &[Vec<i64>], etas: &[Vec<i64>]) -> Vec<Vec<Complex64>> {
    let n = nus.len();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let ip = |x: &[i64], y: &[i64]| rs.ip(&Weight::from_ints(x), &Weight::from_ints(y));
                    let e = ip(&nus[a], &etas[b]) + ip(&nus[b], &etas[a]);
                    let frac = e - e.floor();
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (*frac.numer() as f64 / *frac.denom() as f64))
                })
                .collect()
        })
        .collect()
}

/// Evaluates a Weyl phase sum on the distinct entries of `items` and expands to all pairs.
pub(crate) fn pairwise_sum(
    rs: &RootSystem,
    chain: &CosetChain,
    items: &[Vec<i64>],
    r: i64,
    s: i64,
    weight: SumWeight,
) -> Result<Vec<Vec<Complex64>>> {
    let mut distinct: Vec<Vec<i64>> = items.to_vec();
    distinct.sort();
    distinct.dedup();
    let pos: Vec<usize> = items.iter().map(|x| distinct.binary_search(x).unwrap()).collect();
    let table = PhaseSum::new(rs, chain, distinct.clone(), distinct, r, s, weight)?.evaluate();
    Ok(pos.iter().map(|&a| pos.iter().map(|&b| table[a][b]).collect()).collect())
}

pub fn principal_factors(lv: &AdmissibleLevel<'_>, chain: &CosetChain, labels: &[PrincipalLabel]) -> Result<PrincipalFactors> {
    let rs = lv.root_system();
    let (p, q) = (lv.p(), lv.q());
    let etas: Vec<Vec<i64>> = labels.iter().map(|l| l.eta.clone()).collect();
    let nus: Vec<Vec<i64>> = labels.iter().map(|l| l.nu.clone()).collect();
    Ok(PrincipalFactors {
        eta_factor: pairwise_sum(rs, chain, &etas, p, q, SumWeight::Sign)?,
        nu_factor: pairwise_sum(rs, chain, &nus, q, p, SumWeight::Sign)?,
        cross: cross_phase(rs, &nus, &etas),
    })
}

/// Principal (FKW) S-matrix, normalized to unitary.
pub fn fkw_principal(lv: &AdmissibleLevel<'_>) -> Result<SMatrix> {
    lv.require_simply_laced("principal")?;
    let rs = lv.root_system();
    let chain = CosetChain::new(rs);
    let labels = principal_labels(lv);
    let factors = principal_factors(lv, &chain, &labels)?;
    let mut notes = vec!["raw entry = eta_factor * nu_factor * cross_phase".to_string()];
    if labels.iter().all(|l| l.nu == labels[0].nu) {
        notes.push("nu factor is a single constant term".into());
    }
    SMatrix {
        labels: labels.into_iter().map(Label::from).collect(),
        entries: factors.raw(),
        normalization: Normalization::Raw,
        provenance: Provenance {
            constructor: "fkw_principal".into(),
            cartan_type: rs.cartan_type().to_string(),
            params: vec![("p".into(), lv.p().to_string()), ("q".into(), lv.q().to_string())],
            notes,
        },
    }
    .normalize(PROPORTIONALITY_TOL)
}
