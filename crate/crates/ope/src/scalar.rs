use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{OpeError, Result};

/// A monomial in named parameters: sorted `(name, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn exp(&self, name: &str) -> u32 {
        self.0.iter().find(|(n, _)| n == name).map_or(0, |(_, e)| *e)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut m: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &o.0 {
            *m.entry(n.clone()).or_insert(0) += e;
        }
        Monomial(m.into_iter().collect())
    }

    fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut m: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &o.0 {
            let slot = m.get_mut(n)?;
            if *slot < *e {
                return None;
            }
            *slot -= e;
        }
        Some(Monomial(m.into_iter().filter(|(_, e)| *e > 0).collect()))
    }
}

/// Lexicographic order with variables ranked alphabetically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let names: BTreeSet<&String> = self.0.iter().chain(other.0.iter()).map(|(n, _)| n).collect();
        for n in names {
            match self.exp(n).cmp(&other.exp(n)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Monomial::var(name), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(n, _)| n.clone())).collect()
    }

    fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Lex division: `self = q * d + r` with no term of `r` divisible by the leading term of `d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let (lm, lc) = d.leading().expect("division by zero polynomial");
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut q = Poly::zero();
        let mut r = Poly::zero();
        let mut p = self.clone();
        while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(&lm) {
                Some(t) => {
                    let f = c / &lc;
                    let mut step = Poly::zero();
                    step.terms.insert(t, f);
                    q = &q + &step;
                    p = &p - &(&step * d);
                }
                None => {
                    r.add_term(m.clone(), c);
                    p.terms.remove(&m);
                }
            }
        }
        (q, r)
    }

    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Monic gcd when both are polynomials in at most one common variable; `None` otherwise.
    pub fn univariate_gcd(&self, o: &Poly) -> Option<Poly> {
        let vars: BTreeSet<String> = self.variables().union(&o.variables()).cloned().collect();
        if vars.len() > 1 {
            return None;
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        Some(a.monic())
    }

    /// Substitutes a rational value for a parameter.
    pub fn substitute(&self, name: &str, v: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(name);
            let rest = Monomial(m.0.iter().filter(|(n, _)| n != name).cloned().collect());
            let mut f = c.clone();
            for _ in 0..e {
                f *= v;
            }
            out.add_term(rest, f);
        }
        out
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms.keys().map(|m| m.exp(name)).max().unwrap_or(0)
    }

    /// Coefficient polynomial of `name^e`.
    pub fn coefficient_of(&self, name: &str, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(name) == e {
                out.add_term(Monomial(m.0.iter().filter(|(n, _)| n != name).cloned().collect()), c.clone());
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                p.add_term(m.mul(n), c * d);
            }
        }
        p
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            match (mag.is_one(), vars.is_empty()) {
                (_, true) => write!(f, "{}", fmt_rational(&mag))?,
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{}*{}", fmt_rational(&mag), vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// A rational function of the declared parameters. Equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::constant(BigRational::one()) }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    pub fn rational(c: BigRational) -> Self {
        Scalar { num: Poly::constant(c), den: Poly::constant(BigRational::one()) }
    }

    pub fn param(name: &str) -> Self {
        Scalar { num: Poly::var(name), den: Poly::constant(BigRational::one()) }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::constant(BigRational::one()) }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(OpeError::DivisionByZero);
        }
        Ok(Scalar { num, den }.normalized())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return Scalar::zero();
        }
        if let Some(g) = self.num.univariate_gcd(&self.den) {
            if g.as_constant().is_none() {
                self.num = self.num.div_exact(&g).expect("gcd divides");
                self.den = self.den.div_exact(&g).expect("gcd divides");
            }
        } else if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = Poly::constant(BigRational::one());
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        let inv = lc.recip();
        Scalar { num: self.num.scale(&inv), den: self.den.scale(&inv) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(OpeError::DivisionByZero);
        }
        Scalar::new(self.den.clone(), self.num.clone())
    }

    pub fn substitute(&self, name: &str, v: &BigRational) -> Result<Self> {
        Scalar::new(self.num.substitute(name, v), self.den.substitute(name, v))
    }

    pub fn parameters(&self) -> BTreeSet<String> {
        self.num.variables().union(&self.den.variables()).cloned().collect()
    }

    /// Limit as `name -> infinity`, if finite.
    pub fn limit_at_infinity(&self, name: &str) -> Option<Scalar> {
        let (dn, dd) = (self.num.degree_in(name), self.den.degree_in(name));
        if dn > dd {
            return None;
        }
        if dn < dd {
            return Some(Scalar::zero());
        }
        Scalar::new(self.num.coefficient_of(name, dn), self.den.coefficient_of(name, dd)).ok()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.den == o.den {
            return Scalar { num: &self.num + &o.num, den: self.den.clone() }.normalized();
        }
        Scalar { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }.normalized()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: &self.num * &o.num, den: &self.den * &o.den }.normalized()
    }
}

impl Div for &Scalar {
    type Output = Result<Scalar>;
    fn div(self, o: &Scalar) -> Result<Scalar> {
        Ok(self * &o.recip()?)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.den.as_constant() {
            if c.is_one() {
                return write!(f, "{}", self.num);
            }
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.terms.len() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Scalar {
        Scalar::param("k")
    }

    #[test]
    fn cancellation() {
        let two = Scalar::int(2);
        let kp2 = &k() + &two;
        let x = (&(&k() * &kp2) / &kp2).unwrap();
        assert_eq!(x, k());
        assert_eq!(x.denominator().as_constant(), Some(BigRational::one()));
        let c = (&(&Scalar::int(3) * &k()) / &kp2).unwrap();
        assert_eq!(c.to_string(), "3*k/(k + 2)");
        assert_eq!(c.limit_at_infinity("k"), Some(Scalar::int(3)));
    }

    #[test]
    fn multivariate_equality() {
        let b = Scalar::param("beta");
        let lhs = &(&k() + &b) * &(&k() - &b);
        let rhs = &(&k() * &k()) - &(&b * &b);
        assert_eq!(lhs, rhs);
        let q = (&lhs / &(&k() + &b)).unwrap();
        assert_eq!(q, &k() - &b);
    }

    #[test]
    fn substitution() {
        let c = (&(&Scalar::int(3) * &k()) / &(&k() + &Scalar::int(2))).unwrap();
        assert_eq!(c.substitute("k", &BigRational::from_integer(1.into())).unwrap(), Scalar::int(1));
        assert!(Scalar::zero().recip().is_err());
    }
}
