use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use super::series::{eta_like_product, Coeff, QSeries};
use super::two_var::{ProductForm, TwoVarCharacter};
use crate::affine::AffineWeight;
use crate::error::{Error, Result};
use crate::liealg::{CosetChain, RootSystem, Weight, WeylElement};
use crate::linalg::{inverse, lcm_of_denominators, Q};

/// `t_beta w`: apply the finite element `w`, then translate by `beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWeylElement {
    pub w: WeylElement,
    pub beta: Weight,
}

impl AffineWeylElement {
    pub fn identity(rank: usize) -> Self {
        AffineWeylElement { w: WeylElement::identity(rank), beta: Weight::zero(rank) }
    }

    pub fn translation(beta: Weight) -> Self {
        AffineWeylElement { w: WeylElement::identity(beta.rank()), beta }
    }

    pub fn finite(w: WeylElement) -> Self {
        let n = w.rank();
        AffineWeylElement { w, beta: Weight::zero(n) }
    }

    pub fn parity(&self) -> i8 {
        self.w.parity
    }

    pub fn act(&self, rs: &RootSystem, l: &AffineWeight) -> AffineWeight {
        let moved = AffineWeight::new(self.w.act(&l.finite), l.level, l.delta);
        translate(rs, &self.beta, &moved)
    }

    /// First `self`, then `other`: `t_b' w' t_b w = t_{b' + w'(b)} w' w`.
    pub fn then(&self, other: &AffineWeylElement) -> AffineWeylElement {
        AffineWeylElement { w: self.w.then(&other.w), beta: &other.beta + &other.w.act(&self.beta) }
    }

    pub fn inverse(&self) -> AffineWeylElement {
        let wi = self.w.inverse();
        let beta = -&wi.act(&self.beta);
        AffineWeylElement { w: wi, beta }
    }
}

fn translate(rs: &RootSystem, beta: &Weight, l: &AffineWeight) -> AffineWeight {
    let k = l.level;
    let finite = &l.finite + &beta.scale(k);
    let shift = ip(rs, beta, &l.finite) + ip(rs, beta, beta) / 2 * k;
    AffineWeight::new(finite, k, l.delta - shift)
}

fn ip(rs: &RootSystem, a: &Weight, b: &Weight) -> Q {
    rs.inner_product(a, b).expect("ranks checked by caller")
}

fn norm(rs: &RootSystem, a: &Weight) -> f64 {
    ip(rs, a, a).to_f64().unwrap_or(0.0).max(0.0).sqrt()
}

/// The integral Weyl group of a weight, `y (W ⋉ t_{s Q^vee}) y^{-1}`, or the identity alone.
#[derive(Clone, Debug)]
pub enum ReflectionGroup {
    Trivial,
    Conjugated { conj: AffineWeylElement, scale: i64 },
}

impl ReflectionGroup {
    /// The full affine Weyl group.
    pub fn affine_weyl(rank: usize) -> Self {
        ReflectionGroup::Conjugated { conj: AffineWeylElement::identity(rank), scale: 1 }
    }
}

/// `prod_{n >= 1} (1 - q^n)^{-rank} prod_{alpha in Delta} (1 - e^alpha q^n)^{-1}`: the affine part
/// of the inverse Weyl-Kac denominator. The finite part `prod_{alpha > 0} (1 - e^{-alpha})` is
/// never expanded; characters in this module are numerators over it.
pub fn affine_denominator_inverse(rs: &RootSystem, order: i64) -> Result<TwoVarCharacter> {
    let n = rs.rank();
    let mut pf = ProductForm::new();
    for m in 1..=order {
        pf.push(&vec![0; n], m, -(n as i64));
        for r in rs.positive_roots() {
            let w = r.weight.to_ints().expect("roots are integral");
            let neg: Vec<i64> = w.iter().map(|x| -x).collect();
            pf.push(&w, m, -1);
            pf.push(&neg, m, -1);
        }
    }
    pf.expand(n, order)
}

fn delta_exponent(l: &AffineWeight) -> Q {
    -l.delta
}

/// Verma module character `e^lambda prod_{alpha hat > 0} (1 - e^{-alpha hat})^{-mult}` through
/// `q^order`, as a numerator over the finite Weyl denominator.
pub fn verma_character(rs: &RootSystem, lambda: &AffineWeight, order: i64) -> Result<TwoVarCharacter> {
    rs.check_rank(&lambda.finite)?;
    let e = delta_exponent(lambda);
    let den = *e.denom();
    let head = TwoVarCharacter::monomial(
        lambda.finite.clone(),
        QSeries::monomial(Coeff::from_integer(1.into()), *e.numer(), den, order * den + den - 1),
    );
    Ok(&head * &affine_denominator_inverse(rs, order)?)
}

/// Smallest `|gamma|` beyond which no term `y w t_{s gamma} y^{-1} ∘ lambda` reaches `q^order`.
pub fn required_radius(rs: &RootSystem, lambda: &AffineWeight, group: &ReflectionGroup, order: i64) -> Result<f64> {
    let (conj, s) = match group {
        ReflectionGroup::Trivial => return Ok(0.0),
        ReflectionGroup::Conjugated { conj, scale } => (conj, *scale as f64),
    };
    let shifted = &AffineWeight::new(lambda.finite.clone(), lambda.level, lambda.delta)
        + &AffineWeight::affine_rho(rs);
    let kappa = shifted.level.to_f64().unwrap();
    if kappa <= 0.0 {
        return Err(Error::InvalidLevel(format!("k + h^vee = {} must be positive", shifted.level)));
    }
    let pre = conj.inverse().act(rs, &shifted);
    let lam = norm(rs, &pre.finite);
    let b = norm(rs, &conj.beta);
    let d0 = pre.delta.to_f64().unwrap();
    // degree >= A r^2 - B r + C with r = |gamma|
    let a = s * s * kappa / 2.0;
    let bb = s * lam + b * kappa * s;
    let c = -d0 + b * b * kappa / 2.0 - b * lam;
    let disc = bb * bb + 4.0 * a * (order as f64 - c);
    Ok(if disc < 0.0 { 0.0 } else { (bb + disc.sqrt()) / (2.0 * a) * (1.0 + 1e-9) + 1e-9 })
}

/// Elements of `Q^vee` with norm at most `radius`.
fn coroot_ball(rs: &RootSystem, radius: f64) -> Vec<Weight> {
    let n = rs.rank();
    let cor: Vec<Weight> = (0..n).map(|i| rs.simple_coroot(i)).collect();
    let gram: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| ip(rs, &cor[i], &cor[j])).collect()).collect();
    let ginv = inverse(&gram).expect("coroot Gram matrix is invertible");
    let bounds: Vec<i64> = (0..n)
        .map(|i| (radius * ginv[i][i].to_f64().unwrap().sqrt()).floor() as i64)
        .collect();
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    fn rec(i: usize, c: &mut Vec<i64>, bounds: &[i64], f: &mut dyn FnMut(&[i64])) {
        if i == c.len() {
            f(c);
            return;
        }
        for v in -bounds[i]..=bounds[i] {
            c[i] = v;
            rec(i + 1, c, bounds, f);
        }
    }
    let r2 = radius * radius * (1.0 + 1e-12) + 1e-12;
    rec(0, &mut c, &bounds, &mut |c| {
        let g = c.iter().enumerate().fold(Weight::zero(n), |acc, (i, &k)| &acc + &(&cor[i] * k));
        let nn = ip(rs, &g, &g).to_f64().unwrap();
        if nn <= r2 {
            out.push(g);
        }
    });
    out
}

fn assemble(rank: usize, terms: BTreeMap<(Weight, Q), i64>, order: i64) -> TwoVarCharacter {
    let den = lcm_of_denominators(terms.keys().map(|(_, e)| e)).max(1);
    let prec = order * den + den - 1;
    let mut by_weight: BTreeMap<Weight, Vec<(i64, i64)>> = BTreeMap::new();
    for ((mu, e), c) in terms {
        if c != 0 {
            by_weight.entry(mu).or_default().push(((e * den).to_integer(), c));
        }
    }
    let mut out = TwoVarCharacter::zero(rank, den, prec);
    for (mu, cs) in by_weight {
        let f = cs.into_iter().fold(QSeries::zero(den, prec), |acc, (e, c)| {
            &acc + &QSeries::monomial(Coeff::from_integer(c.into()), e, den, prec)
        });
        out = &out + &TwoVarCharacter::monomial(mu, f);
    }
    out
}

/// `sum_{w in W(lambda)} epsilon(w) e^{w ∘ lambda}` through `q^order`.
///
/// With `radius = None` the translation window is the one certified by [`required_radius`];
/// an explicit radius below it is rejected.
pub fn kw_numerator(
    rs: &RootSystem,
    lambda: &AffineWeight,
    group: &ReflectionGroup,
    order: i64,
    radius: Option<f64>,
) -> Result<TwoVarCharacter> {
    rs.check_rank(&lambda.finite)?;
    let n = rs.rank();
    let need = required_radius(rs, lambda, group, order)?;
    let r = match radius {
        Some(r) if r + 1e-12 < need => return Err(Error::TruncationBound { radius: r, required: need }),
        Some(r) => r,
        None => need,
    };
    let mut terms: BTreeMap<(Weight, Q), i64> = BTreeMap::new();
    let (conj, s) = match group {
        ReflectionGroup::Trivial => {
            terms.insert((lambda.finite.clone(), delta_exponent(lambda)), 1);
            return Ok(assemble(n, terms, order));
        }
        ReflectionGroup::Conjugated { conj, scale } => (conj, *scale),
    };
    let rho = AffineWeight::affine_rho(rs);
    let shifted = lambda + &rho;
    let inv = conj.inverse();
    let pre = inv.act(rs, &shifted);
    let chain = CosetChain::new(rs);
    let ball = coroot_ball(rs, r);
    for w in chain.stream() {
        for g in &ball {
            let t = translate(rs, &(g * s), &pre);
            let moved = AffineWeight::new(w.act(&t.finite), t.level, t.delta);
            let img = &conj.act(rs, &moved) - &rho;
            let e = delta_exponent(&img);
            if e > Q::from_integer(order) {
                continue;
            }
            *terms.entry((img.finite, e)).or_insert(0) += i64::from(w.parity);
        }
    }
    Ok(assemble(n, terms, order))
}

/// Kac-Wakimoto character of `L(lambda)`: [`kw_numerator`] times the affine denominator, over
/// the finite Weyl denominator.
pub fn irreducible_character(
    rs: &RootSystem,
    lambda: &AffineWeight,
    group: &ReflectionGroup,
    order: i64,
    radius: Option<f64>,
) -> Result<TwoVarCharacter> {
    let num = kw_numerator(rs, lambda, group, order, radius)?;
    Ok(&num * &affine_denominator_inverse(rs, order)?)
}

/// Weyl-Kac character of the integrable module `L(k Lambda_0 + lambda)`, summed directly over
/// `t_gamma w` with `gamma in Q^vee`.
pub fn weyl_kac_character(rs: &RootSystem, k: i64, lambda: &Weight, order: i64) -> Result<TwoVarCharacter> {
    rs.check_rank(lambda)?;
    if !lambda.is_integral() || !lambda.is_dominant() || rs.level_of(lambda) > Q::from_integer(k) {
        return Err(Error::InvalidLevel(format!("{lambda} is not integrable at level {k}")));
    }
    let n = rs.rank();
    let kappa = Q::from_integer(k + rs.dual_coxeter());
    let lr = lambda + &rs.rho();
    let kf = kappa.to_f64().unwrap();
    let lam = norm(rs, &lr);
    // deg(t_gamma w) = (gamma, w(lambda+rho)) + kappa |gamma|^2 / 2 >= kappa r^2/2 - |lambda+rho| r
    let radius = (lam + (lam * lam + 2.0 * kf * order as f64).sqrt()) / kf + 1e-9;
    let ball = coroot_ball(rs, radius);
    let chain = CosetChain::new(rs);
    let rho = rs.rho();
    let mut terms: BTreeMap<(Weight, Q), i64> = BTreeMap::new();
    for w in chain.stream() {
        let wl = w.act(&lr);
        for g in &ball {
            let deg = ip(rs, g, &wl) + ip(rs, g, g) * kappa / 2;
            if deg > Q::from_integer(order) {
                continue;
            }
            let mu = &(&wl + &g.scale(kappa)) - &rho;
            *terms.entry((mu, deg)).or_insert(0) += i64::from(w.parity);
        }
    }
    let num = assemble(n, terms, order);
    Ok(&num * &affine_denominator_inverse(rs, order)?)
}

/// Honest `y = 1` value of a numerator over `prod_{alpha > 0}(1 - e^{-alpha})`, via the Weyl
/// dimension formula; requires `e^rho * numerator` to be `W`-anti-invariant at every `q`-power.
pub fn weyl_dimensions(rs: &RootSystem, numerator: &TwoVarCharacter) -> Result<QSeries> {
    let n = rs.rank();
    let rho = rs.rho();
    let pos: Vec<Weight> = rs.positive_roots().iter().map(|r| r.weight.clone()).collect();
    let (den, prec) = (numerator.den(), numerator.prec());
    let mut by_power: BTreeMap<i64, BTreeMap<Weight, Coeff>> = BTreeMap::new();
    for (mu, f) in numerator.terms() {
        for (e, c) in f.with_den(den).terms() {
            by_power.entry(e).or_default().insert(mu + &rho, c.clone());
        }
    }
    let mut out = QSeries::zero(den, prec);
    for (e, coeffs) in by_power {
        let mut total = Coeff::zero();
        for (mu, c) in &coeffs {
            let (dom, sign) = to_dominant(rs, mu);
            let regular = dom.0.iter().all(|x| !x.is_zero());
            let at_dom = coeffs.get(&dom).cloned().unwrap_or_else(Coeff::zero);
            let consistent = if regular { *c == &at_dom * Coeff::from_integer(sign.into()) } else { c.is_zero() };
            if !consistent {
                return Err(Error::Series(format!(
                    "numerator is not Weyl anti-invariant at weight {} (q-exponent {e}/{den})",
                    &dom - &rho
                )));
            }
            if &dom == mu && regular {
                let dim = pos.iter().fold(Q::from_integer(1), |acc, a| acc * ip(rs, mu, a) / ip(rs, &rho, a));
                total += c * Coeff::new(dim.numer().to_owned().into(), dim.denom().to_owned().into());
            }
        }
        out = &out + &QSeries::monomial(total, e, den, prec);
    }
    let _ = n;
    Ok(out)
}

fn to_dominant(rs: &RootSystem, mu: &Weight) -> (Weight, i64) {
    let mut w = mu.clone();
    let mut sign = 1;
    while let Some(i) = w.0.iter().position(|x| *x < Q::zero()) {
        w = rs.simple_reflection(i, &w);
        sign = -sign;
    }
    (w, sign)
}

/// Generator-tower vacuum character `prod_i prod_{n >= d_i} (1 - q^n)^{-1}`.
pub fn w_vacuum_character(gen_weights: &[i64], order: i64) -> Result<QSeries> {
    if let Some(d) = gen_weights.iter().find(|&&d| d < 1) {
        return Err(Error::Series(format!("generator weight {d} must be at least 1")));
    }
    let factors: Vec<(i64, i64, i64)> = gen_weights.iter().map(|&d| (d, -1, 1)).collect();
    Ok(eta_like_product(&factors, order))
}

/// Principal generator weights `m_i + 1` from the exponents.
pub fn principal_generator_weights(rs: &RootSystem) -> Vec<i64> {
    rs.exponents().iter().map(|m| m + 1).collect()
}
