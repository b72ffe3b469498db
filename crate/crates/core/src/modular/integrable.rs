use num_complex::Complex64;

use super::phase_sum::{PhaseSum, SumWeight};
use super::smatrix::{Label, Normalization, Provenance, SMatrix};
use crate::affine::enumerate_p_plus_k;
use crate::error::{Error, Result};
use crate::liealg::{CosetChain, RootSystem};

/// Kac-Peterson S-matrix of the level-`k` integrable modules:
/// `i^{|Delta_+|} |P/(k+h^vee)Q^vee|^{-1/2} sum_w eps(w) exp(-2 pi i (w(lambda+rho), lambda'+rho)/(k+h^vee))`.
pub fn kac_peterson(rs: &RootSystem, k: i64) -> Result<SMatrix> {
    if k < 0 {
        return Err(Error::InvalidLevel(format!("integrable level must be nonnegative, got {k}")));
    }
    let chain = CosetChain::new(rs);
    kac_peterson_with(rs, &chain, k)
}

pub fn kac_peterson_with(rs: &RootSystem, chain: &CosetChain, k: i64) -> Result<SMatrix> {
    let kh = k + rs.dual_coxeter();
    let labels = enumerate_p_plus_k(rs, k);
    let shifted: Vec<Vec<i64>> = labels
        .iter()
        .map(|l| l.to_ints().unwrap().iter().map(|c| c + 1).collect())
        .collect();
    let sum = PhaseSum::new(rs, chain, shifted.clone(), shifted, 1, kh, SumWeight::Sign)?;
    let raw = sum.evaluate();
    let npos = rs.positive_roots().len();
    let i_pow = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][npos % 4];
    let pref = i_pow / (rs.index_p_over_n_coroot(kh) as f64).sqrt();
    let entries = raw
        .into_iter()
        .map(|row| row.into_iter().map(|z| z * pref).collect())
        .collect();
    Ok(SMatrix {
        labels: labels
            .iter()
            .map(|l| Label::Integrable { lambda: l.to_ints().unwrap() })
            .collect(),
        entries,
        normalization: Normalization::Unitary,
        provenance: Provenance {
            constructor: "kac_peterson".into(),
            cartan_type: rs.cartan_type().to_string(),
            params: vec![("k".into(), k.to_string())],
            notes: vec![],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::root_system;

    #[test]
    fn sl2_level_one() {
        let s = kac_peterson(&root_system("A1").unwrap(), 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [[h, h], [h, -h]];
        for a in 0..2 {
            for b in 0..2 {
                assert!((s.entries[a][b] - expect[a][b]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sl2_level_two_middle_column() {
        let s = kac_peterson(&root_system("A1").unwrap(), 2).unwrap();
        let col: Vec<Complex64> = (0..3).map(|a| s.entries[a][1]).collect();
        assert!(col[1].norm() < 1e-12);
        assert!((col[0] + col[2]).norm() < 1e-12);
        assert!(col[0].norm() > 0.1);
    }

    #[test]
    fn unitary_symmetric_small_types() {
        for t in ["A2", "B2", "G2", "C3"] {
            for k in 0..=2 {
                let s = kac_peterson(&root_system(t).unwrap(), k).unwrap();
                assert!(s.unitarity_residual() < 1e-9, "{t} k={k}");
                assert!(s.symmetry_residual() < 1e-9, "{t} k={k}");
            }
        }
    }
}
