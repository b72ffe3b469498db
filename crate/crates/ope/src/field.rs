use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// `∂^d g` for generator index `gen`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub gen: usize,
    pub d: u32,
}

impl Atom {
    pub fn new(gen: usize, d: u32) -> Self {
        Atom { gen, d }
    }
}

/// `1`, `∂^m g`, or `:(∂^m g)(∂^n h):`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mono {
    One,
    Single(Atom),
    Pair(Atom, Atom),
}

/// Finite linear combination of monomials.
#[derive(Clone, Debug, Default)]
pub struct Field {
    terms: BTreeMap<Mono, Scalar>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Field {
    pub fn zero() -> Self {
        Field::default()
    }

    pub fn mono(m: Mono, c: Scalar) -> Self {
        let mut f = Field::zero();
        f.add_term(m, c);
        f
    }

    pub fn vacuum(c: Scalar) -> Self {
        Self::mono(Mono::One, c)
    }

    pub fn atom(a: Atom) -> Self {
        Self::mono(Mono::Single(a), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Field {
        let mut f = Field::zero();
        for (m, x) in &self.terms {
            f.add_term(m.clone(), x * c);
        }
        f
    }

    /// Maximum number of atoms in any monomial.
    pub fn depth(&self) -> usize {
        self.terms
            .keys()
            .map(|m| match m {
                Mono::One => 0,
                Mono::Single(_) => 1,
                Mono::Pair(..) => 2,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> Field {
        let mut out = Field::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl std::ops::Add for &Field {
    type Output = Field;
    fn add(self, o: &Field) -> Field {
        let mut f = self.clone();
        for (m, c) in &o.terms {
            f.add_term(m.clone(), c.clone());
        }
        f
    }
}

impl std::ops::Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scale(&Scalar::int(-1))
    }
}

impl std::ops::Sub for &Field {
    type Output = Field;
    fn sub(self, o: &Field) -> Field {
        self + &(-o)
    }
}

/// `sum_j lambda^j X_j`, ordinary (not divided) powers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LambdaPoly {
    coeffs: Vec<Field>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn constant(f: Field) -> Self {
        Self::monomial(0, f)
    }

    pub fn monomial(j: usize, f: Field) -> Self {
        let mut p = LambdaPoly::zero();
        p.add_at(j, &f);
        p
    }

    pub fn from_coeffs(coeffs: Vec<Field>) -> Self {
        let mut p = LambdaPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Field::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, j: usize) -> Field {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Field] {
        &self.coeffs
    }

    pub fn add_at(&mut self, j: usize, f: &Field) {
        if f.is_zero() {
            return;
        }
        if self.coeffs.len() <= j {
            self.coeffs.resize(j + 1, Field::zero());
        }
        self.coeffs[j] = &self.coeffs[j] + f;
        self.trim();
    }

    pub fn add(&self, o: &LambdaPoly) -> LambdaPoly {
        let mut p = self.clone();
        for (j, f) in o.coeffs.iter().enumerate() {
            p.add_at(j, f);
        }
        p
    }

    pub fn scale(&self, c: &Scalar) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|f| f.scale(c)).collect())
    }

    /// Multiplies by `lambda^k`.
    pub fn shift(&self, k: usize) -> LambdaPoly {
        let mut coeffs = vec![Field::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        LambdaPoly::from_coeffs(coeffs)
    }

    /// Multiplies by `(-lambda)^k`.
    pub fn times_neg_lambda_pow(&self, k: u32) -> LambdaPoly {
        let sign = if k % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
        self.shift(k as usize).scale(&sign)
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}
