//! Exact bucketed Weyl sums `T[a][b] = sum_w f(w) exp(-2 pi i (r/s) (w(A_a), B_b))`.
//!
//! Every pairing `(w(A_a), B_b)` has denominator dividing the Gram denominator `D`, so the
//! phase is an `sD`-th root of unity and the sum is an exact integer vector over the buckets
//! `0..sD`. Workers own private bucket tables; reduction is integer addition, hence
//! bit-for-bit independent of scheduling.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{CosetChain, IMatrix, RootSystem, WeylElement};
use crate::linalg::{inverse, to_q, transpose};
use crate::par;

/// Per-element weight `f(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumWeight {
    /// `f(w) = epsilon(w)`
    Sign,
    /// `f(w) = epsilon(w) <w(alpha_*), x>` when `w(alpha_*)` is positive, else 0.
    /// `probe[i] = <alpha_i, x>`.
    Probe { alpha_star: usize, probe: Vec<i64> },
}

#[derive(Clone, Debug)]
pub struct PhaseSum<'a> {
    rs: &'a RootSystem,
    chain: &'a CosetChain,
    rows: Vec<Vec<i64>>,
    cols: Vec<Vec<i64>>,
    r: i64,
    s: i64,
    weight: SumWeight,
}

/// Exact result: `buckets[(a * cols + b) * modulus + k]` is the coefficient of `exp(-2 pi i k / modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Buckets {
    pub rows: usize,
    pub cols: usize,
    pub modulus: usize,
    pub data: Vec<i64>,
    /// Divide the evaluated sums by this.
    pub normalizer: i64,
}

impl Buckets {
    fn zeros(rows: usize, cols: usize, modulus: usize, normalizer: i64) -> Self {
        Buckets { rows, cols, modulus, data: vec![0; rows * cols * modulus], normalizer }
    }

    fn merge(mut self, other: Buckets) -> Buckets {
        for (a, b) in self.data.iter_mut().zip(other.data) {
            *a += b;
        }
        self
    }

    pub fn entry(&self, a: usize, b: usize) -> &[i64] {
        let off = (a * self.cols + b) * self.modulus;
        &self.data[off..off + self.modulus]
    }

    pub fn evaluate(&self) -> Vec<Vec<Complex64>> {
        let table = roots_of_unity(self.modulus);
        let norm = self.normalizer as f64;
        (0..self.rows)
            .map(|a| {
                (0..self.cols)
                    .map(|b| {
                        let e = self.entry(a, b);
                        let z = e
                            .iter()
                            .zip(&table)
                            .fold(Complex64::new(0.0, 0.0), |acc, (&c, z)| acc + z.conj() * c as f64);
                        z / norm
                    })
                    .collect()
            })
            .collect()
    }
}

/// `exp(2 pi i k / n)` for `k in 0..n`.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

struct Prepared {
    n: usize,
    modulus: i64,
    nrows: usize,
    ncols: usize,
    rows: Vec<i64>,
    /// per last-level representative: `(r * M_c * G * B^T) mod m`, flattened `n x ncols`
    h: Vec<Vec<i64>>,
    eps: Vec<i64>,
    /// per last-level representative: `det(A) M_c (A^T)^{-1}` applied to `1` and to the probe
    probe_height: Vec<Vec<i64>>,
    probe_value: Vec<Vec<i64>>,
    alpha_star: Option<Vec<i64>>,
    normalizer: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Checkpoint {
    fingerprint: String,
    depth: usize,
    completed: Vec<bool>,
    buckets: Buckets,
}

impl<'a> PhaseSum<'a> {
    pub fn new(
        rs: &'a RootSystem,
        chain: &'a CosetChain,
        rows: Vec<Vec<i64>>,
        cols: Vec<Vec<i64>>,
        r: i64,
        s: i64,
        weight: SumWeight,
    ) -> Result<Self> {
        assert!(s > 0, "phase denominator must be positive");
        for v in rows.iter().chain(&cols) {
            if v.len() != rs.rank() {
                return Err(Error::RankMismatch { expected: rs.rank(), got: v.len() });
            }
        }
        if let SumWeight::Probe { alpha_star, probe } = &weight {
            if probe.len() != rs.rank() {
                return Err(Error::RankMismatch { expected: rs.rank(), got: probe.len() });
            }
            if probe[*alpha_star] == 0 {
                return Err(Error::DegenerateProbe);
            }
        }
        Ok(PhaseSum { rs, chain, rows, cols, r, s, weight })
    }

    pub fn modulus(&self) -> usize {
        (self.s * self.rs.integral_gram().0) as usize
    }

    fn prepare(&self) -> Prepared {
        let rs = self.rs;
        let n = rs.rank();
        let (_, gint) = rs.integral_gram();
        let m = self.s * rs.integral_gram().0;
        let last = self.chain.level(n - 1);
        // G * B^T : n x ncols
        let gb: IMatrix = (0..n)
            .map(|k| {
                self.cols
                    .iter()
                    .map(|b| (0..n).map(|j| gint[k][j] * b[j]).sum())
                    .collect()
            })
            .collect();
        let h = last
            .iter()
            .map(|c| {
                let mut flat = Vec::with_capacity(n * self.cols.len());
                for row in &c.matrix {
                    for b in 0..self.cols.len() {
                        let v: i64 = (0..n).map(|j| row[j] * gb[j][b]).sum();
                        flat.push((self.r * v).rem_euclid(m));
                    }
                }
                flat
            })
            .collect();
        let eps = last.iter().map(|c| c.parity as i64).collect();

        let (mut probe_height, mut probe_value, mut alpha_star, mut normalizer) =
            (Vec::new(), Vec::new(), None, 1);
        if let SumWeight::Probe { alpha_star: i, probe } = &self.weight {
            let a = to_q(rs.cartan_matrix());
            let det_a = crate::linalg::det(&a).to_integer();
            let at_inv = inverse(&transpose(&a)).expect("invertible");
            // det(A) (A^T)^{-1} is integral
            let adj: IMatrix = at_inv
                .iter()
                .map(|r| r.iter().map(|x| (*x * det_a).to_integer()).collect())
                .collect();
            for c in last {
                let rc = crate::liealg::imat_mul(&c.matrix, &adj);
                probe_height.push(rc.iter().map(|row| row.iter().sum()).collect());
                probe_value.push(
                    rc.iter()
                        .map(|row| row.iter().zip(probe).map(|(x, y)| x * y).sum())
                        .collect(),
                );
            }
            alpha_star = Some(rs.simple_root(*i).to_ints().unwrap());
            normalizer = det_a * probe[*i];
        }
        Prepared {
            n,
            modulus: m,
            nrows: self.rows.len(),
            ncols: self.cols.len(),
            rows: self.rows.iter().flatten().copied().collect(),
            h,
            eps,
            probe_height,
            probe_value,
            alpha_star,
            normalizer,
        }
    }

    fn depth_for(&self, min_chunks: usize) -> usize {
        self.chain.chunk_depth(min_chunks).min(self.rs.rank() - 1)
    }

    fn run_chunk(&self, prep: &Prepared, prefix: &[usize]) -> Buckets {
        let n = prep.n;
        let m = prep.modulus;
        let mut out = Buckets::zeros(prep.nrows, prep.ncols, m as usize, prep.normalizer);
        let inner_levels = n - 1;
        let mut digits = prefix.to_vec();
        digits.resize(inner_levels, 0);
        let level_len = |l: usize| self.chain.level(l).len();
        let mut partial: Vec<WeylElement> = Vec::with_capacity(inner_levels);
        let mut acc = WeylElement::identity(n);
        for (l, &d) in digits.iter().enumerate() {
            acc = acc.then(&self.chain.level(l)[d]);
            partial.push(acc.clone());
        }
        let mut rows_p = vec![0i64; prep.nrows * n];
        let mut idx = vec![0usize; prep.ncols];
        loop {
            let mp = if inner_levels == 0 { WeylElement::identity(n) } else { partial[inner_levels - 1].clone() };
            for a in 0..prep.nrows {
                let src = &prep.rows[a * n..(a + 1) * n];
                for k in 0..n {
                    let v: i64 = (0..n).map(|i| src[i] * mp.matrix[i][k]).sum();
                    rows_p[a * n + k] = v.rem_euclid(m);
                }
            }
            let af = prep.alpha_star.as_ref().map(|a| mp_act(&mp.matrix, a));
            for (c, hc) in prep.h.iter().enumerate() {
                let sign = mp.parity as i64 * prep.eps[c];
                let wt = match &af {
                    None => sign,
                    Some(af) => {
                        let height: i64 = af.iter().zip(&prep.probe_height[c]).map(|(x, y)| x * y).sum();
                        if height < 0 {
                            continue;
                        }
                        sign * af.iter().zip(&prep.probe_value[c]).map(|(x, y)| x * y).sum::<i64>()
                    }
                };
                for a in 0..prep.nrows {
                    let ra = &rows_p[a * n..(a + 1) * n];
                    for x in idx.iter_mut() {
                        *x = 0;
                    }
                    for (k, &rk) in ra.iter().enumerate() {
                        if rk == 0 {
                            continue;
                        }
                        let hrow = &hc[k * prep.ncols..(k + 1) * prep.ncols];
                        for (x, &hv) in idx.iter_mut().zip(hrow) {
                            *x += (rk * hv) as usize;
                        }
                    }
                    let base = a * prep.ncols;
                    for (b, &x) in idx.iter().enumerate() {
                        out.data[(base + b) * m as usize + x % m as usize] += wt;
                    }
                }
            }
            // advance the free middle digits
            let mut l = inner_levels;
            loop {
                if l == prefix.len() {
                    return out;
                }
                l -= 1;
                digits[l] += 1;
                if digits[l] < level_len(l) {
                    break;
                }
                digits[l] = 0;
            }
            for j in l..inner_levels {
                let base = if j == 0 { WeylElement::identity(n) } else { partial[j - 1].clone() };
                partial[j] = base.then(&self.chain.level(j)[digits[j]]);
            }
        }
    }

    /// Exact buckets using the data-parallel path (sequential without the `parallel` feature).
    pub fn buckets(&self) -> Buckets {
        self.buckets_with(64, false)
    }

    /// Exact buckets on the calling thread only.
    pub fn buckets_sequential(&self) -> Buckets {
        self.buckets_with(1, true)
    }

    fn buckets_with(&self, min_chunks: usize, sequential: bool) -> Buckets {
        let prep = self.prepare();
        let depth = self.depth_for(min_chunks);
        let prefixes = self.chain.prefixes(depth);
        let zero = || Buckets::zeros(prep.nrows, prep.ncols, prep.modulus as usize, prep.normalizer);
        if sequential {
            par::map_reduce_seq(&prefixes, |p| self.run_chunk(&prep, p), zero, Buckets::merge)
        } else {
            par::map_reduce(&prefixes, |p| self.run_chunk(&prep, p), zero, Buckets::merge)
        }
    }

    pub fn evaluate(&self) -> Vec<Vec<Complex64>> {
        self.buckets().evaluate()
    }

    fn fingerprint(&self) -> String {
        format!(
            "{}|{:?}|{:?}|{}/{}|{:?}",
            self.rs.cartan_type(),
            self.rows,
            self.cols,
            self.r,
            self.s,
            self.weight
        )
    }

    /// Resumable run: chunks are processed in batches and the partial table is written to
    /// `path` after each batch. An existing checkpoint with the same fingerprint is resumed.
    pub fn buckets_checkpointed(
        &self,
        path: &Path,
        min_chunks: usize,
        batch: usize,
        mut progress: impl FnMut(usize, usize),
    ) -> Result<Buckets> {
        let prep = self.prepare();
        let fingerprint = self.fingerprint();
        let mut state = match std::fs::read_to_string(path) {
            Ok(s) => {
                let cp: Checkpoint = serde_json::from_str(&s)
                    .map_err(|e| Error::Checkpoint(format!("unreadable checkpoint: {e}")))?;
                if cp.fingerprint != fingerprint {
                    return Err(Error::Checkpoint("checkpoint belongs to a different computation".into()));
                }
                cp
            }
            Err(_) => {
                let depth = self.depth_for(min_chunks);
                Checkpoint {
                    fingerprint,
                    depth,
                    completed: vec![false; self.chain.prefixes(depth).len()],
                    buckets: Buckets::zeros(prep.nrows, prep.ncols, prep.modulus as usize, prep.normalizer),
                }
            }
        };
        let prefixes = self.chain.prefixes(state.depth);
        let total = prefixes.len();
        let pending: Vec<usize> = (0..total).filter(|&i| !state.completed[i]).collect();
        for group in pending.chunks(batch.max(1)) {
            let zero = || Buckets::zeros(prep.nrows, prep.ncols, prep.modulus as usize, prep.normalizer);
            let part = par::map_reduce(group, |&i| self.run_chunk(&prep, &prefixes[i]), zero, Buckets::merge);
            state.buckets = state.buckets.merge(part);
            for &i in group {
                state.completed[i] = true;
            }
            let tmp = path.with_extension("tmp");
            let json = serde_json::to_string(&state).map_err(|e| Error::Checkpoint(e.to_string()))?;
            std::fs::write(&tmp, json).map_err(|e| Error::Checkpoint(e.to_string()))?;
            std::fs::rename(&tmp, path).map_err(|e| Error::Checkpoint(e.to_string()))?;
            progress(state.completed.iter().filter(|&&c| c).count(), total);
        }
        Ok(state.buckets)
    }
}

fn mp_act(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let n = v.len();
    (0..n).map(|k| (0..n).map(|i| v[i] * m[i][k]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::root_system;

    fn brute(rs: &RootSystem, rows: &[Vec<i64>], cols: &[Vec<i64>], r: i64, s: i64, weight: &SumWeight) -> Vec<Vec<Complex64>> {
        use crate::liealg::Weight;
        let chain = CosetChain::new(rs);
        let elems: Vec<WeylElement> = chain.stream().collect();
        rows.iter()
            .map(|a| {
                cols.iter()
                    .map(|b| {
                        let (wa, wb) = (Weight::from_ints(a), Weight::from_ints(b));
                        let mut z = Complex64::new(0.0, 0.0);
                        for w in &elems {
                            let f = match weight {
                                SumWeight::Sign => w.parity as f64,
                                SumWeight::Probe { alpha_star, probe } => {
                                    let img = w.act(&rs.simple_root(*alpha_star));
                                    let c = rs.to_root_coords(&img);
                                    if c.iter().any(|x| *x < 0.into()) {
                                        continue;
                                    }
                                    let v: f64 = c.iter().zip(probe).map(|(x, y)| (*x * *y).to_integer() as f64).sum();
                                    w.parity as f64 * v / probe[*alpha_star] as f64
                                }
                            };
                            let ip = rs.ip(&w.act(&wa), &wb);
                            let ph = -2.0 * std::f64::consts::PI * (r as f64 / s as f64) * (*ip.numer() as f64 / *ip.denom() as f64);
                            z += Complex64::from_polar(f, ph);
                        }
                        z
                    })
                    .collect()
            })
            .collect()
    }

    fn close(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
        a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn matches_direct_sum() {
        for (t, r, s) in [("A2", 1, 5), ("B2", 3, 7), ("G2", 1, 6), ("A3", 5, 3)] {
            let rs = root_system(t).unwrap();
            let chain = CosetChain::new(&rs);
            let n = rs.rank();
            let rows = vec![vec![1; n], (0..n as i64).map(|i| i + 1).collect()];
            let cols = vec![vec![2; n], (0..n as i64).map(|i| 2 - i).collect()];
            let ps = PhaseSum::new(&rs, &chain, rows.clone(), cols.clone(), r, s, SumWeight::Sign).unwrap();
            assert!(close(&ps.evaluate(), &brute(&rs, &rows, &cols, r, s, &SumWeight::Sign)) < 1e-9, "{t}");
        }
    }

    #[test]
    fn probe_weight_matches_direct_sum() {
        let rs = root_system("A3").unwrap();
        let chain = CosetChain::new(&rs);
        let w = SumWeight::Probe { alpha_star: 1, probe: vec![1, 2, 3] };
        let rows = vec![vec![1, 0, 2], vec![0, 1, 1]];
        let ps = PhaseSum::new(&rs, &chain, rows.clone(), rows.clone(), 5, 3, w.clone()).unwrap();
        assert!(close(&ps.evaluate(), &brute(&rs, &rows, &rows, 5, 3, &w)) < 1e-9);
    }

    #[test]
    fn sequential_and_parallel_agree_exactly() {
        let rs = root_system("D4").unwrap();
        let chain = CosetChain::new(&rs);
        let rows = vec![vec![1, 1, 1, 1], vec![2, 1, 1, 1]];
        let ps = PhaseSum::new(&rs, &chain, rows.clone(), rows, 7, 5, SumWeight::Sign).unwrap();
        assert_eq!(ps.buckets(), ps.buckets_sequential());
    }

    #[test]
    fn checkpoint_resume_is_exact() {
        let rs = root_system("A3").unwrap();
        let chain = CosetChain::new(&rs);
        let w = SumWeight::Probe { alpha_star: 1, probe: vec![1, 2, 3] };
        let rows = vec![vec![1, 0, 2], vec![0, 1, 1]];
        let ps = PhaseSum::new(&rs, &chain, rows.clone(), rows, 5, 3, w).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let mut calls = 0;
        let full = ps.buckets_checkpointed(&path, 8, 2, |_, _| calls += 1).unwrap();
        assert!(calls >= 2);
        assert_eq!(full, ps.buckets());
        // a completed checkpoint resumes to the same answer without new work
        let again = ps.buckets_checkpointed(&path, 8, 2, |_, _| panic!("no work expected")).unwrap();
        assert_eq!(again, full);
    }

    #[test]
    fn degenerate_probe_rejected() {
        let rs = root_system("A3").unwrap();
        let chain = CosetChain::new(&rs);
        let w = SumWeight::Probe { alpha_star: 1, probe: vec![1, 0, 3] };
        assert_eq!(PhaseSum::new(&rs, &chain, vec![], vec![], 1, 1, w).unwrap_err(), Error::DegenerateProbe);
    }
}
