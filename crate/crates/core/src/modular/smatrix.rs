use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::affine::{PrincipalLabel, SubregularLabel};
use crate::error::{Error, Result};

/// A label of a simple module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Integrable { lambda: Vec<i64> },
    Principal { nu: Vec<i64>, eta: Vec<i64>, wall: Option<usize> },
    Subregular { nu: Vec<i64>, eta: Vec<i64>, wall: Option<usize> },
}

impl From<PrincipalLabel> for Label {
    fn from(l: PrincipalLabel) -> Self {
        Label::Principal { nu: l.nu, eta: l.eta, wall: None }
    }
}

impl From<SubregularLabel> for Label {
    fn from(l: SubregularLabel) -> Self {
        Label::Subregular { nu: l.nu, eta: l.eta, wall: Some(l.wall) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Raw,
    Unitary,
}

/// Which constructor produced a matrix, with its parameters and notes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub constructor: String,
    pub cartan_type: String,
    pub params: Vec<(String, String)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SMatrix {
    pub labels: Vec<Label>,
    pub entries: Vec<Vec<Complex64>>,
    pub normalization: Normalization,
    pub provenance: Provenance,
}

/// Tolerance for the unitary contract.
pub const UNITARY_TOL: f64 = 1e-9;

impl SMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `max |S S^dagger - I|`
    pub fn unitarity_residual(&self) -> f64 {
        let s = &self.entries;
        let n = s.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let v: Complex64 = (0..n).map(|j| s[a][j] * s[b][j].conj()).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    /// `max |S - S^T|`
    pub fn symmetry_residual(&self) -> f64 {
        let s = &self.entries;
        let n = s.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..a {
                worst = worst.max((s[a][b] - s[b][a]).norm());
            }
        }
        worst
    }

    pub fn square(&self) -> Vec<Vec<Complex64>> {
        mat_mul(&self.entries, &self.entries)
    }

    /// Charge conjugation read off `S^2`, if it is a signed-free permutation within `tol`.
    pub fn charge_conjugation(&self, tol: f64) -> Option<Vec<usize>> {
        let s2 = self.square();
        let n = s2.len();
        let mut perm = Vec::with_capacity(n);
        for row in &s2 {
            let hits: Vec<usize> = (0..n).filter(|&j| (row[j] - 1.0).norm() < tol).collect();
            if hits.len() != 1 || row.iter().enumerate().any(|(j, z)| j != hits[0] && z.norm() > tol) {
                return None;
            }
            perm.push(hits[0]);
        }
        Some(perm)
    }

    /// Rescales a raw matrix to unitary: requires `S S^dagger = c I` within `rel_tol`.
    pub fn normalize(mut self, rel_tol: f64) -> Result<SMatrix> {
        let n = self.len();
        let s = &self.entries;
        let c: f64 = (0..n).map(|j| s[0][j].norm_sqr()).sum();
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::Normalization { residual: f64::INFINITY });
        }
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let v: Complex64 = (0..n).map(|j| s[a][j] * s[b][j].conj()).sum::<Complex64>() / c;
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        if worst > rel_tol {
            return Err(Error::Normalization { residual: worst });
        }
        let mut scale = Complex64::new(1.0 / c.sqrt(), 0.0);
        // global phase: make S_00 positive real
        let s00 = self.entries[0][0];
        if s00.norm() > 1e-12 {
            scale *= s00.conj() / s00.norm();
        }
        for row in &mut self.entries {
            for z in row.iter_mut() {
                *z *= scale;
            }
        }
        self.normalization = Normalization::Unitary;
        Ok(self)
    }
}

pub fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = b.len();
    let m = if n == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..m).map(|j| (0..n).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}
