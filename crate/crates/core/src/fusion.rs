//! Verlinde fusion rules from a unitary S-matrix, and fusion-ring isomorphism search.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{Label, SMatrix};

/// Integrality and negativity tolerance for Verlinde coefficients.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionTable {
    pub labels: Vec<Label>,
    /// `n[(a * len + b) * len + c] = N_{ab}^c`
    pub coefficients: Vec<u32>,
    pub vacuum: usize,
    pub quantum_dimensions: Vec<f64>,
    pub max_coefficient: u32,
    /// Worst `|pre-rounding - rounded|` over all coefficients.
    pub rounding_residual: f64,
}

impl FusionTable {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        let l = self.len();
        self.coefficients[(a * l + b) * l + c]
    }

    /// Builds a table from explicit coefficients (used for oracle tables).
    pub fn from_coefficients(labels: Vec<Label>, vacuum: usize, coefficients: Vec<u32>, quantum_dimensions: Vec<f64>) -> Self {
        let max_coefficient = coefficients.iter().copied().max().unwrap_or(0);
        FusionTable { labels, coefficients, vacuum, quantum_dimensions, max_coefficient, rounding_residual: 0.0 }
    }

    /// Unit, commutativity and associativity, checked exactly.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let l = self.len();
        let v = self.vacuum;
        for a in 0..l {
            for b in 0..l {
                if self.n(v, a, b) != u32::from(a == b) {
                    return Err(format!("vacuum is not a unit at ({a},{b})"));
                }
                for c in 0..l {
                    if self.n(a, b, c) != self.n(b, a, c) {
                        return Err(format!("not commutative at ({a},{b},{c})"));
                    }
                }
            }
        }
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    for d in 0..l {
                        let lhs: u64 = (0..l).map(|e| self.n(a, b, e) as u64 * self.n(e, c, d) as u64).sum();
                        let rhs: u64 = (0..l).map(|e| self.n(b, c, e) as u64 * self.n(a, e, d) as u64).sum();
                        if lhs != rhs {
                            return Err(format!("not associative at ({a},{b},{c},{d})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Perron-Frobenius dimensions: the positive eigenvector of `sum_a N_a`, scaled so the vacuum has 1.
    pub fn frobenius_perron_dimensions(&self) -> Vec<f64> {
        let l = self.len();
        let mut m = vec![0.0f64; l * l];
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    m[b * l + c] += self.n(a, b, c) as f64;
                }
            }
        }
        let mut v = vec![1.0f64; l];
        for _ in 0..10_000 {
            // (M + I) shares the Perron vector and is aperiodic
            let mut w: Vec<f64> = (0..l).map(|c| v[c] + (0..l).map(|b| v[b] * m[b * l + c]).sum::<f64>()).collect();
            let norm = w[self.vacuum];
            w.iter_mut().for_each(|x| *x /= norm);
            let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = w;
            if delta < 1e-14 {
                break;
            }
        }
        v
    }

    /// Rows of CSV `a,b,c,N` for nonzero coefficients.
    pub fn to_csv(&self) -> String {
        let l = self.len();
        let mut out = String::from("a,b,c,N\n");
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    let n = self.n(a, b, c);
                    if n != 0 {
                        out.push_str(&format!("{a},{b},{c},{n}\n"));
                    }
                }
            }
        }
        out
    }
}

struct Candidate {
    index: usize,
    coefficients: Vec<f64>,
    residual: f64,
    qdims: Vec<Complex64>,
}

fn verlinde_raw(s: &[Vec<Complex64>], v: usize) -> Option<(Vec<f64>, f64, f64)> {
    let l = s.len();
    if s[v].iter().any(|z| z.norm() < 1e-9) {
        return None;
    }
    let inv: Vec<Complex64> = s[v].iter().map(|z| 1.0 / z).collect();
    let mut coeffs = Vec::with_capacity(l * l * l);
    let (mut residual, mut min_value): (f64, f64) = (0.0, f64::INFINITY);
    for a in 0..l {
        for b in 0..l {
            let ab: Vec<Complex64> = (0..l).map(|j| s[a][j] * s[b][j] * inv[j]).collect();
            for c in 0..l {
                let z: Complex64 = (0..l).map(|j| ab[j] * s[c][j].conj()).sum();
                let r = z.re.round();
                residual = residual.max((z - r).norm());
                min_value = min_value.min(z.re);
                coeffs.push(z.re);
            }
        }
    }
    Some((coeffs, residual, min_value))
}

fn candidates(s: &SMatrix) -> Vec<Candidate> {
    let l = s.len();
    let e = &s.entries;
    (0..l)
        .filter_map(|v| {
            let (coeffs, residual, min_value) = verlinde_raw(e, v)?;
            if residual > INTEGRALITY_TOL || min_value < -INTEGRALITY_TOL {
                return None;
            }
            let unit = (0..l).all(|a| (0..l).all(|b| (coeffs[(v * l + a) * l + b] - f64::from(u8::from(a == b))).abs() < INTEGRALITY_TOL));
            if !unit {
                return None;
            }
            let qdims = (0..l).map(|a| e[v][a] / e[v][v]).collect();
            Some(Candidate { index: v, coefficients: coeffs, residual, qdims })
        })
        .collect()
}

fn positive(qdims: &[Complex64]) -> bool {
    qdims.iter().all(|d| d.im.abs() < 1e-9 && d.re > 0.0)
}

/// Vacuum label: the index whose Verlinde table is a nonnegative integral fusion ring with that
/// index as unit. Several indices can qualify when simple currents act; an index with positive
/// quantum dimensions is preferred, otherwise the lowest index.
pub fn find_vacuum(s: &SMatrix) -> Result<usize> {
    Ok(select(s)?.index)
}

fn select(s: &SMatrix) -> Result<Candidate> {
    let mut c = candidates(s);
    if c.is_empty() {
        return Err(Error::NoVacuum("no label yields a nonnegative integral unital fusion ring".into()));
    }
    let pos = c.iter().position(|c| positive(&c.qdims)).unwrap_or(0);
    Ok(c.swap_remove(pos))
}

/// All indices that pass the vacuum test, before tie-breaking.
pub fn vacuum_candidates(s: &SMatrix) -> Vec<usize> {
    candidates(s).into_iter().map(|c| c.index).collect()
}

/// `N_{ab}^c = sum_j S_aj S_bj conj(S_cj) / S_vj` with the vacuum from [`find_vacuum`].
pub fn verlinde(s: &SMatrix) -> Result<FusionTable> {
    let c = select(s)?;
    table_from(s, c)
}

/// Verlinde with an explicitly chosen vacuum index.
pub fn verlinde_with_vacuum(s: &SMatrix, v: usize) -> Result<FusionTable> {
    let (coefficients, residual, min_value) =
        verlinde_raw(&s.entries, v).ok_or_else(|| Error::NoVacuum(format!("S has a zero in row {v}")))?;
    if residual > INTEGRALITY_TOL {
        return Err(Error::Integrality { residual });
    }
    if min_value < -INTEGRALITY_TOL {
        return Err(Error::Negativity { value: min_value });
    }
    let qdims = (0..s.len()).map(|a| s.entries[v][a] / s.entries[v][v]).collect();
    table_from(s, Candidate { index: v, coefficients, residual, qdims })
}

fn table_from(s: &SMatrix, c: Candidate) -> Result<FusionTable> {
    let coefficients: Vec<u32> = c.coefficients.iter().map(|x| x.round().max(0.0) as u32).collect();
    let max_coefficient = coefficients.iter().copied().max().unwrap_or(0);
    Ok(FusionTable {
        labels: s.labels.clone(),
        coefficients,
        vacuum: c.index,
        quantum_dimensions: c.qdims.iter().map(|z| z.re).collect(),
        max_coefficient,
        rounding_residual: c.residual,
    })
}

/// A vacuum-preserving bijection `pi` with `N1_{ab}^c = N2_{pi(a) pi(b)}^{pi(c)}`, if one exists.
pub fn fusion_ring_isomorphic(f1: &FusionTable, f2: &FusionTable) -> Option<Vec<usize>> {
    let l = f1.len();
    if l != f2.len() {
        return None;
    }
    let (d1, d2) = (f1.frobenius_perron_dimensions(), f2.frobenius_perron_dimensions());
    let mut order: Vec<usize> = (0..l).filter(|&a| a != f1.vacuum).collect();
    // constrained labels first: large dimension, then label index
    order.sort_by(|&a, &b| d1[b].total_cmp(&d1[a]).then(a.cmp(&b)));
    order.insert(0, f1.vacuum);
    let mut pi = vec![usize::MAX; l];
    let mut used = vec![false; l];
    fn consistent(f1: &FusionTable, f2: &FusionTable, pi: &[usize], assigned: &[usize]) -> bool {
        let last = *assigned.last().unwrap();
        for &a in assigned {
            for &b in assigned {
                for &c in assigned {
                    if a != last && b != last && c != last {
                        continue;
                    }
                    if f1.n(a, b, c) != f2.n(pi[a], pi[b], pi[c]) {
                        return false;
                    }
                }
            }
        }
        true
    }
    struct Ctx<'a> {
        f1: &'a FusionTable,
        f2: &'a FusionTable,
        d1: &'a [f64],
        d2: &'a [f64],
        order: &'a [usize],
    }
    fn go(cx: &Ctx<'_>, k: usize, pi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let (f1, f2, order) = (cx.f1, cx.f2, cx.order);
        if k == order.len() {
            return true;
        }
        let a = order[k];
        for t in 0..pi.len() {
            if used[t] || (k == 0) != (t == f2.vacuum) {
                continue;
            }
            if (cx.d1[a] - cx.d2[t]).abs() > 1e-6 {
                continue;
            }
            pi[a] = t;
            used[t] = true;
            if consistent(f1, f2, pi, &order[..=k]) && go(cx, k + 1, pi, used) {
                return true;
            }
            used[t] = false;
            pi[a] = usize::MAX;
        }
        false
    }
    let cx = Ctx { f1, f2, d1: &d1, d2: &d2, order: &order };
    go(&cx, 0, &mut pi, &mut used).then_some(pi)
}
