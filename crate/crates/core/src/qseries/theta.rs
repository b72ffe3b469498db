use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::liealg::RootSystem;
use crate::linalg::{det, inverse, QMatrix, Q};

/// Default cap on the summation radius.
pub const RADIUS_CAP: f64 = 200.0;

/// A coset `mu + L` of a positive-definite lattice `L`, everything in basis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSpec {
    gram: QMatrix,
    shift: Vec<Q>,
}

fn reduce_mod_one(q: Q) -> Q {
    q - q.floor()
}

impl ThetaSpec {
    pub fn new(gram: QMatrix, shift: Vec<Q>) -> Result<Self> {
        let n = gram.len();
        if shift.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::RankMismatch { expected: n, got: shift.len() });
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Series("Gram matrix is not symmetric".into()));
                }
            }
        }
        // Sylvester: all leading minors positive
        for k in 1..=n {
            let minor: QMatrix = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if det(&minor) <= Q::zero() {
                return Err(Error::Series("Gram matrix is not positive definite".into()));
            }
        }
        Ok(ThetaSpec { gram, shift: shift.into_iter().map(reduce_mod_one).collect() })
    }

    /// The root lattice of `rs` with every norm multiplied by `scale`.
    pub fn root_lattice(rs: &RootSystem, scale: i64) -> Result<Self> {
        let n = rs.rank();
        let roots: Vec<_> = (0..n).map(|i| rs.simple_root(i)).collect();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| rs.inner_product(&roots[i], &roots[j]).map(|x| x * scale)).collect())
            .collect::<Result<QMatrix>>()?;
        Self::new(gram, vec![Q::zero(); n])
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn shift(&self) -> &[Q] {
        &self.shift
    }

    pub fn with_shift(&self, shift: Vec<Q>) -> Result<Self> {
        Self::new(self.gram.clone(), shift)
    }

    /// Representatives of `L^* / L`, starting with `0`.
    pub fn dual_cosets(&self) -> Vec<Vec<Q>> {
        let n = self.rank();
        let ginv = inverse(&self.gram).expect("positive definite");
        let gens: Vec<Vec<Q>> = (0..n).map(|j| (0..n).map(|i| reduce_mod_one(ginv[i][j])).collect()).collect();
        let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
        let mut order = vec![vec![Q::zero(); n]];
        seen.insert(order[0].clone());
        let mut k = 0;
        while k < order.len() {
            for g in &gens {
                let next: Vec<Q> = order[k].iter().zip(g).map(|(a, b)| reduce_mod_one(a + b)).collect();
                if seen.insert(next.clone()) {
                    order.push(next);
                }
            }
            k += 1;
        }
        order
    }

    fn gram_f64(&self) -> Vec<Vec<f64>> {
        self.gram.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect()
    }

    fn is_even_integral(&self) -> bool {
        self.gram.iter().all(|r| r.iter().all(|x| x.is_integer()))
            && (0..self.rank()).all(|i| self.gram[i][i].to_integer() % 2 == 0)
    }
}

/// A theta value with its certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub radius: f64,
    /// Rigorous bound on the omitted terms.
    pub tail_bound: f64,
    pub terms: usize,
}

fn bilinear(g: &[Vec<f64>], a: &[f64], b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for i in 0..a.len() {
        for j in 0..a.len() {
            acc += b[j] * (a[i] * g[i][j]);
        }
    }
    acc
}

fn real_norm(g: &[Vec<f64>], a: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            acc += a[i] * g[i][j] * a[j];
        }
    }
    acc.max(0.0).sqrt()
}

struct Geometry {
    gram: Vec<Vec<f64>>,
    /// `x^T G x = sum_i d_i (x_i + sum_{j > i} u_ij x_j)^2`
    d: Vec<f64>,
    u: Vec<Vec<f64>>,
    lambda1: f64,
}

impl Geometry {
    fn new(spec: &ThetaSpec) -> Self {
        let ginv = inverse(&spec.gram).expect("positive definite");
        let ginv_diag: Vec<f64> = (0..spec.rank()).map(|i| ginv[i][i].to_f64().unwrap()).collect();
        // |n|^2 >= n_i^2 / (G^{-1})_ii for every nonzero integer vector
        let lambda1 = ginv_diag.iter().map(|d| 1.0 / d.sqrt()).fold(f64::INFINITY, f64::min);
        let gram = spec.gram_f64();
        let (d, u) = ldl_upper(&gram);
        Geometry { gram, d, u, lambda1 }
    }

    /// `sum_{j >= 0} #{|alpha| <= R + j + 1} * max_{|alpha| >= R + j} |term|`, valid for `R >= s / t`.
    fn tail(&self, rank: usize, r: f64, t: f64, s: f64) -> f64 {
        let f = |x: f64| (-PI * t * x * x + 2.0 * PI * s * x).exp();
        let count = |x: f64| (2.0 * x / self.lambda1 + 1.0).powi(rank as i32);
        let mut acc = 0.0;
        let mut j = 0.0;
        loop {
            let term = count(r + j + 1.0) * f(r + j);
            acc += term;
            if term <= acc * 1e-18 || term == 0.0 {
                // remaining terms decay faster than geometrically with ratio below 1/2
                return acc + term;
            }
            j += 1.0;
        }
    }
}

/// `G = U^T D U` with `U` unit upper triangular, eliminating from the last coordinate.
fn ldl_upper(g: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g.to_vec();
    let mut d = vec![0.0; n];
    let mut u = vec![vec![0.0; n]; n];
    for i in 0..n {
        d[i] = a[i][i];
        u[i][i] = 1.0;
        for j in i + 1..n {
            u[i][j] = a[i][j] / d[i];
        }
        for j in i + 1..n {
            for k in i + 1..n {
                a[j][k] -= u[i][j] * u[i][k] * d[i];
            }
        }
    }
    (d, u)
}

/// Fincke-Pohst enumeration of `mu + Z^n` inside the ball `|x| <= radius`.
fn for_points_in_ball(geo: &Geometry, mu: &[f64], radius: f64, f: &mut dyn FnMut(&[f64], f64)) {
    let n = mu.len();
    let mut x = vec![0.0; n];
    fn rec(i: usize, budget: f64, geo: &Geometry, mu: &[f64], x: &mut Vec<f64>, f: &mut dyn FnMut(&[f64], f64), r2: f64) {
        let n = x.len();
        let center = -(i + 1..n).map(|j| geo.u[i][j] * x[j]).sum::<f64>();
        let w = (budget.max(0.0) / geo.d[i]).sqrt() + 1e-9;
        let lo = (center - w - mu[i]).ceil() as i64;
        let hi = (center + w - mu[i]).floor() as i64;
        for k in lo..=hi {
            x[i] = k as f64 + mu[i];
            let part = geo.d[i] * (x[i] - center).powi(2);
            let rest = budget - part;
            if rest < -1e-9 * r2.max(1.0) {
                continue;
            }
            if i == 0 {
                let nn = r2 - rest;
                f(x, nn.max(0.0));
            } else {
                rec(i - 1, rest, geo, mu, x, f, r2);
            }
        }
    }
    if n == 0 {
        f(&x, 0.0);
        return;
    }
    let r2 = radius * radius;
    rec(n - 1, r2, geo, mu, &mut x, f, r2);
}

/// `theta_{mu + L}(tau, x) = sum_{alpha in mu + L} e^{2 pi i (alpha, x)} e^{pi i tau (alpha, alpha)}`
/// summed over the ball of the given radius; `x` is in basis coordinates.
pub fn theta_at_radius(spec: &ThetaSpec, tau: Complex64, x: &[Complex64], radius: f64) -> Result<ThetaValue> {
    let n = spec.rank();
    if x.len() != n {
        return Err(Error::RankMismatch { expected: n, got: x.len() });
    }
    if tau.im <= 0.0 {
        return Err(Error::Series(format!("Im tau = {} must be positive", tau.im)));
    }
    let geo = Geometry::new(spec);
    let mu: Vec<f64> = spec.shift.iter().map(|q| q.to_f64().unwrap()).collect();
    let mut value = Complex64::zero();
    let mut terms = 0usize;
    for_points_in_ball(&geo, &mu, radius, &mut |pt, nn| {
        let phase = bilinear(&geo.gram, pt, x) * Complex64::new(0.0, 2.0 * PI) + tau * Complex64::new(0.0, PI * nn);
        value += phase.exp();
        terms += 1;
    });
    let im_x: Vec<f64> = x.iter().map(|c| c.im).collect();
    let s = real_norm(&geo.gram, &im_x);
    let tail_bound = if radius < s / tau.im { f64::INFINITY } else { geo.tail(n, radius, tau.im, s) };
    Ok(ThetaValue { value, radius, tail_bound, terms })
}

/// Evaluates to within `eps`, growing the radius until the tail certificate allows it.
pub fn theta_eval(spec: &ThetaSpec, tau: Complex64, x: &[Complex64], eps: f64) -> Result<ThetaValue> {
    theta_eval_capped(spec, tau, x, eps, RADIUS_CAP)
}

pub fn theta_eval_capped(spec: &ThetaSpec, tau: Complex64, x: &[Complex64], eps: f64, cap: f64) -> Result<ThetaValue> {
    if tau.im <= 0.0 {
        return Err(Error::Series(format!("Im tau = {} must be positive", tau.im)));
    }
    let n = spec.rank();
    if x.len() != n {
        return Err(Error::RankMismatch { expected: n, got: x.len() });
    }
    let geo = Geometry::new(spec);
    let im_x: Vec<f64> = x.iter().map(|c| c.im).collect();
    let s = real_norm(&geo.gram, &im_x);
    let mut r = (s / tau.im).max(0.5);
    while r <= cap {
        if geo.tail(n, r, tau.im, s) <= eps {
            return theta_at_radius(spec, tau, x, r);
        }
        r += 0.25;
    }
    Err(Error::ThetaTolerance { eps, cap })
}

/// Residuals of `theta_mu(-1/tau, x/tau) = tau^{l/2} e^{pi i (x,x)/tau} sum_mu' S_{mu mu'} theta_mu'(tau, x)`
/// over all cosets of an even integral lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularReport {
    pub cosets: usize,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Bound implied by the per-value tolerance and the size of `S`.
    pub tolerance: f64,
    pub passes: bool,
}

pub fn modular_transform_check(spec: &ThetaSpec, tau: Complex64, x: &[Complex64], eps: f64) -> Result<ModularReport> {
    if !spec.is_even_integral() {
        return Err(Error::Unsupported("modular law needs an even integral lattice".into()));
    }
    let n = spec.rank();
    let g = spec.gram_f64();
    let cosets = spec.dual_cosets();
    let d = cosets.len() as f64;
    let tau_s = -tau.inv();
    let x_s: Vec<Complex64> = x.iter().map(|c| c / tau).collect();
    let half = n as f64 / 2.0;
    let xx = {
        let mut acc = Complex64::zero();
        for i in 0..n {
            for j in 0..n {
                acc += x[i] * x[j] * g[i][j];
            }
        }
        acc
    };
    let pref = tau.powf(half) * (Complex64::new(0.0, PI) * xx / tau).exp();
    let s_pref = Complex64::from_polar(1.0, -PI * half / 2.0) / d.sqrt();
    let mut rhs_vals = Vec::with_capacity(cosets.len());
    for mu in &cosets {
        rhs_vals.push(theta_eval(&spec.with_shift(mu.clone())?, tau, x, eps)?.value);
    }
    let mut residuals = Vec::new();
    let mut scale = 1.0f64;
    for mu in &cosets {
        let lhs = theta_eval(&spec.with_shift(mu.clone())?, tau_s, &x_s, eps)?.value;
        let mut acc = Complex64::zero();
        for (nu, th) in cosets.iter().zip(&rhs_vals) {
            let mf: Vec<f64> = mu.iter().map(|q| q.to_f64().unwrap()).collect();
            let nf: Vec<Complex64> = nu.iter().map(|q| Complex64::new(q.to_f64().unwrap(), 0.0)).collect();
            let ip = bilinear(&g, &mf, &nf);
            acc += s_pref * (Complex64::new(0.0, -2.0 * PI) * ip).exp() * th;
        }
        let rhs = pref * acc;
        scale = scale.max(lhs.norm()).max(rhs.norm());
        residuals.push((lhs - rhs).norm());
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    let tolerance = eps * (1.0 + pref.norm() * d.sqrt()) + 1e-13 * scale;
    Ok(ModularReport { cosets: cosets.len(), residuals, max_residual, tolerance, passes: max_residual <= tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::root_system;
    use proptest::prelude::*;

    fn a1(scale: i64) -> ThetaSpec {
        ThetaSpec::root_lattice(&root_system("A1").unwrap(), scale).unwrap()
    }

    #[test]
    fn rank_one_value() {
        let v = theta_eval(&a1(1), Complex64::i(), &[Complex64::zero()], 1e-14).unwrap();
        let direct: f64 = (-10i32..=10).map(|n| (-2.0 * PI * f64::from(n * n)).exp()).sum();
        assert!((v.value.re - direct).abs() < 1e-14 && v.value.im.abs() < 1e-14);
        assert!((v.value.re - 1.003_734_9).abs() < 1e-6);
    }

    #[test]
    fn periodic_in_lattice_shift() {
        let spec = a1(1);
        let x = [Complex64::new(0.3, 0.1)];
        let a = theta_eval(&spec, Complex64::new(0.2, 0.9), &x, 1e-13).unwrap().value;
        let b = theta_eval(&spec, Complex64::new(0.2, 0.9), &[x[0] + 1.0], 1e-13).unwrap().value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn modular_law() {
        for scale in 1..=3 {
            let r = modular_transform_check(&a1(scale), Complex64::i(), &[Complex64::zero()], 1e-13).unwrap();
            assert_eq!(r.cosets as i64, 2 * scale);
            assert!(r.max_residual < 1e-9, "{r:?}");
        }
        let a2 = ThetaSpec::root_lattice(&root_system("A2").unwrap(), 1).unwrap();
        let x = [Complex64::new(0.1, 0.05), Complex64::new(-0.2, 0.0)];
        let r = modular_transform_check(&a2, Complex64::new(0.3, 1.1), &x, 1e-13).unwrap();
        assert_eq!(r.cosets, 3);
        assert!(r.max_residual < 1e-9, "{r:?}");
        let e8 = ThetaSpec::root_lattice(&root_system("E8").unwrap(), 1).unwrap();
        let r = modular_transform_check(&e8, Complex64::new(0.0, 1.0), &[Complex64::zero(); 8], 1e-12).unwrap();
        assert_eq!(r.cosets, 1);
        assert!(r.max_residual < 1e-9, "{r:?}");
    }

    #[test]
    fn unreachable_tolerance() {
        let r = theta_eval_capped(&a1(1), Complex64::new(0.0, 1e-4), &[Complex64::zero()], 1e-15, 5.0);
        assert!(matches!(r, Err(Error::ThetaTolerance { .. })));
    }

    proptest! {
        #[test]
        fn doubling_radius_stays_within_tail(t in 0.3f64..2.0, re in -1.0f64..1.0, xr in -1.0f64..1.0, xi in -0.3f64..0.3) {
            let spec = a1(2);
            let tau = Complex64::new(re, t);
            let x = [Complex64::new(xr, xi)];
            let v = theta_eval(&spec, tau, &x, 1e-8).unwrap();
            let w = theta_at_radius(&spec, tau, &x, 2.0 * v.radius).unwrap();
            prop_assert!((v.value - w.value).norm() <= v.tail_bound + 1e-14 * w.value.norm().max(1.0));
        }
    }
}
