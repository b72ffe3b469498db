use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::series::{Coeff, QSeries};
use crate::error::{Error, Result};
use crate::liealg::Weight;
use crate::linalg::Q;

/// `sum_mu e^mu f_mu(q)` with every `f_mu` on the same denominator and precision.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoVarCharacter {
    rank: usize,
    den: i64,
    prec: i64,
    terms: BTreeMap<Weight, QSeries>,
}

impl TwoVarCharacter {
    pub fn zero(rank: usize, den: i64, prec: i64) -> Self {
        TwoVarCharacter { rank, den, prec, terms: BTreeMap::new() }
    }

    /// `e^mu f(q)`
    pub fn monomial(mu: Weight, f: QSeries) -> Self {
        let mut c = Self::zero(mu.rank(), f.den(), f.prec());
        c.insert(mu, f);
        c
    }

    fn insert(&mut self, mu: Weight, f: QSeries) {
        if !f.is_zero() {
            self.terms.insert(mu, f);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &QSeries)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e^mu q^{e/den}`.
    pub fn coeff(&self, mu: &Weight, e: i64) -> Option<Coeff> {
        if e > self.prec {
            return None;
        }
        Some(
            self.terms
                .get(mu)
                .map(|f| f.with_den(self.den).coeff(e).unwrap_or_default())
                .unwrap_or_else(Coeff::zero),
        )
    }

    /// All nonzero `(mu, c)` at `q^{e/den}`.
    pub fn at_power(&self, e: i64) -> BTreeMap<Weight, Coeff> {
        self.terms
            .iter()
            .filter_map(|(mu, f)| {
                let c = f.coeff(e)?;
                (!c.is_zero()).then(|| (mu.clone(), c))
            })
            .collect()
    }

    fn normalized(mut self) -> Self {
        let den = self.terms.values().fold(self.den, |d, f| d.lcm(&f.den()));
        if den != self.den {
            self.prec = self.prec * (den / self.den) + (den / self.den - 1);
            self.den = den;
        }
        let (den, prec) = (self.den, self.prec);
        self.terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(mu, f)| (mu, f.with_den(den).truncate(prec)))
            .filter(|(_, f)| !f.is_zero())
            .collect();
        self
    }

    /// Lowers the precision to `q^{prec/den}`.
    pub fn truncate(&self, prec: i64) -> Self {
        let mut c = self.clone();
        c.prec = c.prec.min(prec);
        c.normalized()
    }

    /// Multiplies by `e^mu`.
    pub fn shift_weight(&self, mu: &Weight) -> Self {
        let mut c = Self::zero(self.rank, self.den, self.prec);
        for (nu, f) in &self.terms {
            c.insert(nu + mu, f.clone());
        }
        c
    }

    /// Multiplies every coefficient by a one-variable series.
    pub fn mul_series(&self, g: &QSeries) -> Self {
        let mut c = Self::zero(self.rank, self.den, self.prec);
        let mut prec = None::<(i64, i64)>;
        for (nu, f) in &self.terms {
            let p = f * g;
            prec.get_or_insert((p.prec(), p.den()));
            c.insert(nu.clone(), p);
        }
        if let Some((p, d)) = prec {
            c.den = d;
            c.prec = p;
        } else {
            let p = &QSeries::zero(self.den, self.prec) * g;
            c.den = p.den();
            c.prec = p.prec();
        }
        c.normalized()
    }

    /// `y = 1`: sums all weight coefficients.
    pub fn specialize_y1(&self) -> QSeries {
        self.terms
            .values()
            .fold(QSeries::zero(self.den, self.prec), |acc, f| &acc + f)
    }

    /// `e^mu -> y^{<mu, x>}` for a cocharacter `x` in simple-coroot coordinates.
    pub fn specialize(&self, x: &[Q]) -> Result<BTreeMap<Q, QSeries>> {
        if x.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: x.len() });
        }
        let mut out: BTreeMap<Q, QSeries> = BTreeMap::new();
        for (mu, f) in &self.terms {
            let e = mu.0.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
            let slot = out.entry(e).or_insert_with(|| QSeries::zero(self.den, self.prec));
            *slot = &*slot + f;
        }
        out.retain(|_, f| !f.is_zero());
        Ok(out)
    }

    /// `true` if both agree through the smaller precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// First `(mu, exponent numerator, den)` where the two characters differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Weight, i64, i64)> {
        let den = self.den.lcm(&other.den);
        let prec = (self.prec * (den / self.den)).min(other.prec * (den / other.den));
        let a = self.clone().with_den(den).truncate(prec);
        let b = other.clone().with_den(den).truncate(prec);
        let mut best: Option<(Weight, i64, i64)> = None;
        let keys: std::collections::BTreeSet<&Weight> = a.terms.keys().chain(b.terms.keys()).collect();
        for mu in keys {
            let fa = a.terms.get(mu).cloned().unwrap_or_else(|| QSeries::zero(den, prec));
            let fb = b.terms.get(mu).cloned().unwrap_or_else(|| QSeries::zero(den, prec));
            if let Some((e, _)) = fa.first_difference(&fb) {
                if best.as_ref().map_or(true, |(_, be, _)| e < *be) {
                    best = Some((mu.clone(), e, den));
                }
            }
        }
        best
    }

    fn with_den(mut self, den: i64) -> Self {
        if den != self.den {
            let f = den / self.den;
            self.prec = self.prec * f + (f - 1);
            self.den = den;
        }
        self.normalized()
    }
}

impl Add for &TwoVarCharacter {
    type Output = TwoVarCharacter;
    fn add(self, rhs: &TwoVarCharacter) -> TwoVarCharacter {
        assert_eq!(self.rank, rhs.rank);
        let den = self.den.lcm(&rhs.den);
        let prec = (self.prec * (den / self.den)).min(rhs.prec * (den / rhs.den));
        let mut out = TwoVarCharacter::zero(self.rank, den, prec);
        for (mu, f) in self.terms.iter().chain(rhs.terms.iter()) {
            let sum = match out.terms.get(mu) {
                Some(g) => g + f,
                None => f.with_den(den).truncate(prec),
            };
            out.terms.insert(mu.clone(), sum);
        }
        out.normalized()
    }
}

impl Neg for &TwoVarCharacter {
    type Output = TwoVarCharacter;
    fn neg(self) -> TwoVarCharacter {
        let mut c = self.clone();
        c.terms.values_mut().for_each(|f| *f = -&*f);
        c
    }
}

impl Sub for &TwoVarCharacter {
    type Output = TwoVarCharacter;
    fn sub(self, rhs: &TwoVarCharacter) -> TwoVarCharacter {
        self + &(-rhs)
    }
}

impl Mul for &TwoVarCharacter {
    type Output = TwoVarCharacter;
    fn mul(self, rhs: &TwoVarCharacter) -> TwoVarCharacter {
        assert_eq!(self.rank, rhs.rank);
        // pairwise precisions realize min(prec_a + val_b, prec_b + val_a)
        let products: Vec<(Weight, QSeries)> = self
            .terms
            .iter()
            .flat_map(|(mu, f)| rhs.terms.iter().map(move |(nu, g)| (mu + nu, f * g)))
            .collect();
        let fallback = &QSeries::zero(self.den, self.prec) * &QSeries::zero(rhs.den, rhs.prec);
        let den = products.iter().fold(fallback.den(), |d, (_, p)| d.lcm(&p.den()));
        let prec = products
            .iter()
            .map(|(_, p)| p.with_den(den).prec())
            .min()
            .unwrap_or_else(|| fallback.with_den(den).prec());
        let mut out = TwoVarCharacter::zero(self.rank, den, prec);
        for (key, p) in products {
            let p = p.with_den(den).truncate(prec);
            let sum = match out.terms.remove(&key) {
                Some(h) => &h + &p,
                None => p,
            };
            out.terms.insert(key, sum);
        }
        out.normalized()
    }
}

/// A finite product `prod (1 - e^mu q^b)^e` kept in factored form so that cancellation is exact
/// before expansion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProductForm {
    factors: BTreeMap<(Vec<i64>, i64), i64>,
}

impl ProductForm {
    pub fn new() -> Self {
        Self::default()
    }

    /// Multiplies by `(1 - e^mu q^b)^e`.
    pub fn factor(mut self, mu: &[i64], b: i64, e: i64) -> Self {
        self.push(mu, b, e);
        self
    }

    pub fn push(&mut self, mu: &[i64], b: i64, e: i64) {
        let slot = self.factors.entry((mu.to_vec(), b)).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&(mu.to_vec(), b));
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (&[i64], i64, i64)> {
        self.factors.iter().map(|((mu, b), e)| (mu.as_slice(), *b, *e))
    }

    /// Expands through `q^order`. Fails when a `q`-free factor with nontrivial weight is inverted,
    /// which has no expansion as a polynomial in `e^mu` per `q`-power.
    pub fn expand(&self, rank: usize, order: i64) -> Result<TwoVarCharacter> {
        let mut acc = TwoVarCharacter::monomial(Weight::zero(rank), QSeries::one(order));
        for ((mu, b), e) in &self.factors {
            if mu.len() != rank {
                return Err(Error::RankMismatch { expected: rank, got: mu.len() });
            }
            let trivial = mu.iter().all(|&m| m == 0);
            if *b == 0 && trivial {
                return Err(Error::Series("factor (1 - 1) in product".into()));
            }
            if *b == 0 && *e < 0 {
                return Err(Error::Series(format!(
                    "inverse of q-free factor (1 - e^{mu:?}) is not a q-series with polynomial coefficients"
                )));
            }
            if *b > order {
                continue;
            }
            acc = &acc * &binomial_factor(rank, mu, *b, *e, order);
        }
        Ok(acc)
    }
}

impl Mul for &ProductForm {
    type Output = ProductForm;
    fn mul(self, rhs: &ProductForm) -> ProductForm {
        let mut out = self.clone();
        for ((mu, b), e) in &rhs.factors {
            out.push(mu, *b, *e);
        }
        out
    }
}

/// `(1 - e^mu q^b)^e` through `q^order`.
fn binomial_factor(rank: usize, mu: &[i64], b: i64, e: i64, order: i64) -> TwoVarCharacter {
    let mut out = TwoVarCharacter::zero(rank, 1, order);
    let mu_w = Weight::from_ints(mu);
    let kmax = if e >= 0 { e } else if b == 0 { 0 } else { order / b };
    let mut binom = BigInt::one();
    for k in 0..=kmax {
        if k * b > order {
            break;
        }
        if k > 0 {
            // (-1)^k C(e, k) for e >= 0, C(-e + k - 1, k) for e < 0
            binom = if e >= 0 {
                binom * BigInt::from(e - k + 1) / BigInt::from(k)
            } else {
                binom * BigInt::from(-e + k - 1) / BigInt::from(k)
            };
        }
        let sign = if e >= 0 && k % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        let c = Coeff::from_integer(&binom * sign);
        let term = TwoVarCharacter::monomial(mu_w.scale(Q::from_integer(k)), QSeries::monomial(c, k * b, 1, order));
        out = &out + &term;
    }
    out
}
