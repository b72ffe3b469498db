use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

/// A truncated power series `sum_e c_e q^{e / den}` known for all exponents `e <= prec`.
///
/// Exponents are stored as numerators over the fixed denominator `den`. Products keep the
/// smaller of the two induced precisions.
#[derive(Clone, Debug)]
pub struct QSeries {
    den: i64,
    start: i64,
    coeffs: Vec<Coeff>,
    prec: i64,
}

impl QSeries {
    /// The zero series known through `q^{prec/den}`.
    pub fn zero(den: i64, prec: i64) -> Self {
        assert!(den > 0);
        QSeries { den, start: prec + 1, coeffs: Vec::new(), prec }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(Coeff::one(), 0, 1, order)
    }

    /// `c q^{e/den}` known through `q^{prec/den}`.
    pub fn monomial(c: Coeff, e: i64, den: i64, prec: i64) -> Self {
        let mut s = Self::zero(den, prec);
        if e <= prec {
            s.start = e;
            s.coeffs = vec![c];
        }
        s.trim()
    }

    /// Integer-exponent series from dense coefficients `c_0 + c_1 q + ..`, known through `q^order`.
    pub fn from_ints(coeffs: &[i64], order: i64) -> Self {
        let mut s = Self::zero(1, order);
        s.start = 0;
        s.coeffs = coeffs
            .iter()
            .take((order + 1).max(0) as usize)
            .map(|&c| Coeff::from_integer(BigInt::from(c)))
            .collect();
        s.trim()
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Largest known exponent numerator.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Largest known exponent as a rational `(num, den)`.
    pub fn order(&self) -> (i64, i64) {
        (self.prec, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Numerator of the lowest exponent with nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Coefficient of `q^{e/den}`; `None` beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<Coeff> {
        if e > self.prec {
            return None;
        }
        if e < self.start || e >= self.start + self.coeffs.len() as i64 {
            return Some(Coeff::zero());
        }
        Some(self.coeffs[(e - self.start) as usize].clone())
    }

    /// Nonzero terms `(exponent numerator, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Dense integer coefficients for exponents `0..=prec` (den 1 only); `None` if any is not integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        if self.den != 1 {
            return None;
        }
        (0..=self.prec)
            .map(|e| {
                let c = self.coeff(e)?;
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    fn trim(mut self) -> Self {
        let keep = (self.prec - self.start + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = self.prec + 1;
        }
        self
    }

    /// Re-expresses with denominator `den`, which must be a multiple of the current one.
    pub fn with_den(&self, den: i64) -> Self {
        assert!(den % self.den == 0, "denominator {den} is not a multiple of {}", self.den);
        let f = den / self.den;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = vec![Coeff::zero(); (self.coeffs.len().max(1) - 1) * f as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f as usize] = c.clone();
        }
        // known through the last multiple of f below (prec+1)*f
        QSeries { den, start: self.start * f, coeffs, prec: self.prec * f + (f - 1) }.trim()
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let d = a.den.lcm(&b.den);
        (a.with_den(d), b.with_den(d))
    }

    /// Drops everything above `q^{prec/den}`.
    pub fn truncate(&self, prec: i64) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        s.trim()
    }

    /// Multiplies by `q^{e/den}`.
    pub fn shift(&self, e: i64) -> Self {
        let mut s = self.clone();
        s.start += e;
        s.prec += e;
        s
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut s = self.clone();
        s.coeffs.iter_mut().for_each(|x| *x = &*x * c);
        s.trim()
    }

    /// Multiplicative inverse; the lowest coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| Error::Series("cannot invert zero".into()))?;
        let rel = self.prec - v;
        let a0 = self.coeffs[0].clone();
        let mut out: Vec<Coeff> = Vec::with_capacity(rel as usize + 1);
        for n in 0..=rel as usize {
            let mut acc = if n == 0 { Coeff::one() } else { Coeff::zero() };
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc -= &self.coeffs[k] * &out[n - k];
            }
            out.push(acc / &a0);
        }
        Ok(QSeries { den: self.den, start: -v, coeffs: out, prec: rel - v }.trim())
    }

    /// `true` when both agree on every exponent known to both.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        let p = a.prec.min(b.prec);
        let lo = a.start.min(b.start);
        (lo..=p).all(|e| a.coeff(e) == b.coeff(e))
    }

    /// First exponent numerator (in the common denominator) where the two differ.
    pub fn first_difference(&self, other: &Self) -> Option<(i64, i64)> {
        let (a, b) = Self::common(self, other);
        let p = a.prec.min(b.prec);
        let lo = a.start.min(b.start);
        (lo..=p).find(|&e| a.coeff(e) != b.coeff(e)).map(|e| (e, a.den))
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.prec == b.prec && a.start == b.start && a.coeffs == b.coeffs
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let (a, b) = QSeries::common(self, rhs);
        let prec = a.prec.min(b.prec);
        let start = a.start.min(b.start).min(prec + 1);
        let len = (prec - start + 1).max(0) as usize;
        let coeffs = (0..len)
            .map(|i| {
                let e = start + i as i64;
                a.coeff(e).unwrap() + b.coeff(e).unwrap()
            })
            .collect();
        QSeries { den: a.den, start, coeffs, prec }.trim()
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        let mut s = self.clone();
        s.coeffs.iter_mut().for_each(|c| *c = -&*c);
        s
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let (a, b) = QSeries::common(self, rhs);
        // a known through a.prec, b starts at b.start: product known through a.prec + b.start
        let va = a.valuation().unwrap_or(a.prec + 1);
        let vb = b.valuation().unwrap_or(b.prec + 1);
        let prec = (a.prec + vb).min(b.prec + va);
        if a.is_zero() || b.is_zero() {
            return QSeries::zero(a.den, prec);
        }
        let start = a.start + b.start;
        let len = (prec - start + 1).max(0) as usize;
        let mut coeffs = vec![Coeff::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() || i >= len {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    coeffs[i + j] += x * y;
                }
            }
        }
        QSeries { den: a.den, start, coeffs, prec }.trim()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let exp = BigRational::new(e.into(), self.den.into());
            let show_coeff = !mag.is_one() || exp.is_zero();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if !exp.is_zero() {
                if exp.is_one() {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{exp}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", BigRational::new((self.prec + 1).into(), self.den.into()))
    }
}

/// `prod_{(n0, sign, m)} prod_{n >= n0} (1 - q^n)^{sign * m}`, known through `q^order`.
pub fn eta_like_product(factors: &[(i64, i64, i64)], order: i64) -> QSeries {
    let mut acc = QSeries::one(order);
    for &(n0, sign, mult) in factors {
        for n in n0.max(1)..=order {
            let base = &QSeries::one(order) - &QSeries::monomial(Coeff::one(), n, 1, order);
            let f = if sign * mult >= 0 { base } else { base.inverse().expect("unit constant term") };
            for _ in 0..(sign * mult).abs() {
                acc = &acc * &f;
            }
        }
    }
    acc
}
