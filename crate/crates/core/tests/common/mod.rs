//! Independent oracles shared by integration tests: closed-form Virasoro minimal-model
//! S-matrices and the truncated Clebsch-Gordan rule for sl2 WZW fusion.
#![allow(dead_code)]

use num_complex::Complex64;
use wmtc_core::fusion::{verlinde_with_vacuum, FusionTable};
use wmtc_core::modular::{Label, Normalization, Provenance, SMatrix};

/// Minimal model M(p, p') with labels (r, s), 1 <= r <= p'-1, 1 <= s <= p-1, modulo
/// (r, s) ~ (p'-r, p-s); S = 2 sqrt(2/(p p')) (-1)^{1+s rho+r sigma} sin(pi p r rho/p') sin(pi p' s sigma/p).
pub fn minimal_model_s(p: i64, pp: i64) -> SMatrix {
    let mut labels = Vec::new();
    for r in 1..pp {
        for s in 1..p {
            let (r2, s2) = (pp - r, p - s);
            if (r, s) <= (r2, s2) {
                labels.push((r, s));
            }
        }
    }
    let pi = std::f64::consts::PI;
    let pref = 2.0 * (2.0 / (p * pp) as f64).sqrt();
    let entries = labels
        .iter()
        .map(|&(r, s)| {
            labels
                .iter()
                .map(|&(rho, sigma)| {
                    let sign = if (1 + s * rho + r * sigma) % 2 == 0 { 1.0 } else { -1.0 };
                    let v = pref
                        * sign
                        * (pi * (p * r * rho) as f64 / pp as f64).sin()
                        * (pi * (pp * s * sigma) as f64 / p as f64).sin();
                    Complex64::new(v, 0.0)
                })
                .collect()
        })
        .collect();
    SMatrix {
        labels: labels.iter().map(|&(r, s)| Label::Integrable { lambda: vec![r, s] }).collect(),
        entries,
        normalization: Normalization::Unitary,
        provenance: Provenance::default(),
    }
}

/// Fusion table of M(p, p') with vacuum (1, 1).
pub fn minimal_model_fusion(p: i64, pp: i64) -> FusionTable {
    let s = minimal_model_s(p, pp);
    let v = s
        .labels
        .iter()
        .position(|l| *l == Label::Integrable { lambda: vec![1, 1] })
        .unwrap();
    verlinde_with_vacuum(&s, v).unwrap()
}

/// sl2 level k: N_{ab}^c = 1 iff |a-b| <= c <= min(a+b, 2k-a-b) and a+b+c even.
pub fn sl2_fusion(k: i64, a: i64, b: i64, c: i64) -> u32 {
    u32::from((a - b).abs() <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0)
}
