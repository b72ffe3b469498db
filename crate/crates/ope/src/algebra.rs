use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Mutex;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{OpeError, Result};
use crate::field::{binomial, Atom, Field, LambdaPoly, Mono};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub odd: bool,
    /// Conformal weight; bookkeeping only.
    pub weight: BigRational,
}

/// Declares generators and their pairwise lambda-brackets.
#[derive(Clone, Debug, Default)]
pub struct AlgebraBuilder {
    gens: Vec<Generator>,
    table: HashMap<(usize, usize), LambdaPoly>,
}

impl AlgebraBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(&mut self, name: &str, odd: bool, weight: BigRational) -> Result<Atom> {
        if self.gens.iter().any(|g| g.name == name) {
            return Err(OpeError::DuplicateGenerator(name.into()));
        }
        self.gens.push(Generator { name: name.into(), odd, weight });
        Ok(Atom::new(self.gens.len() - 1, 0))
    }

    pub fn atom(&self, name: &str) -> Result<Atom> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| Atom::new(i, 0))
            .ok_or_else(|| OpeError::UnknownGenerator(name.into()))
    }

    /// Sets `[a_lambda b]`. Coefficients must be linear in the generators.
    pub fn bracket(&mut self, a: &str, b: &str, value: LambdaPoly) -> Result<()> {
        let (a, b) = (self.atom(a)?.gen, self.atom(b)?.gen);
        if let Some(f) = value.coeffs().iter().find(|f| f.depth() > 1) {
            let _ = f;
            return Err(OpeError::Unsupported("generator brackets must be linear in the generators".into()));
        }
        self.table.insert((a, b), value);
        Ok(())
    }

    /// Completes the table by skew-symmetry and checks pairs given in both orders.
    pub fn build(self, jacobi_verified: bool) -> Result<Algebra> {
        let given = self.table.clone();
        let alg = Algebra { gens: self.gens, table: self.table, jacobi_verified, cache: Mutex::default() };
        let mut table = alg.table.clone();
        for (&(a, b), p) in &given {
            let expected = alg.skew(p, alg.sign_atoms(a, b))?;
            match given.get(&(b, a)) {
                Some(q) => {
                    let res = q.add(&expected.scale(&Scalar::int(-1)));
                    if !res.is_zero() {
                        return Err(OpeError::SkewSymmetry {
                            a: alg.gens[a].name.clone(),
                            b: alg.gens[b].name.clone(),
                            residual: alg.fmt_lambda(&res),
                        });
                    }
                }
                None => {
                    table.insert((b, a), expected);
                }
            }
        }
        Ok(Algebra { table, ..alg })
    }
}

/// A conformal algebra on finitely many generators with a lambda-bracket table.
///
/// Brackets of composite fields are reduced to the table by sesquilinearity, the right Wick
/// formula, skew-symmetry and quasi-commutativity. Monomials are at most binary; anything that
/// would need `:(:ab:)c:` is reported as [`OpeError::UnsupportedDepth`]. The Jacobi identity of
/// the table is not checked.
#[derive(Debug)]
pub struct Algebra {
    gens: Vec<Generator>,
    table: HashMap<(usize, usize), LambdaPoly>,
    jacobi_verified: bool,
    cache: Mutex<HashMap<(Mono, Atom), LambdaPoly>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra {
            gens: self.gens.clone(),
            table: self.table.clone(),
            jacobi_verified: self.jacobi_verified,
            cache: Mutex::default(),
        }
    }
}

impl Algebra {
    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// `false` for user tables: Jacobi is the caller's responsibility.
    pub fn jacobi_verified(&self) -> bool {
        self.jacobi_verified
    }

    pub fn atom(&self, name: &str) -> Result<Atom> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| Atom::new(i, 0))
            .ok_or_else(|| OpeError::UnknownGenerator(name.into()))
    }

    pub fn gen(&self, name: &str) -> Result<Field> {
        Ok(Field::atom(self.atom(name)?))
    }

    /// Generator-level table entry `[a_lambda b]`.
    pub fn table_entry(&self, a: usize, b: usize) -> LambdaPoly {
        self.table.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub(crate) fn into_parts(self) -> (Vec<Generator>, HashMap<(usize, usize), LambdaPoly>, bool) {
        (self.gens, self.table, self.jacobi_verified)
    }

    pub(crate) fn from_parts(gens: Vec<Generator>, table: HashMap<(usize, usize), LambdaPoly>, jacobi: bool) -> Self {
        Algebra { gens, table, jacobi_verified: jacobi, cache: Mutex::default() }
    }

    fn odd_atom(&self, a: Atom) -> bool {
        self.gens[a.gen].odd
    }

    fn odd_mono(&self, m: &Mono) -> bool {
        match m {
            Mono::One => false,
            Mono::Single(a) => self.odd_atom(*a),
            Mono::Pair(a, b) => self.odd_atom(*a) ^ self.odd_atom(*b),
        }
    }

    fn sign_atoms(&self, a: usize, b: usize) -> Scalar {
        Scalar::int(if self.gens[a].odd && self.gens[b].odd { -1 } else { 1 })
    }

    fn sign(p: bool, q: bool) -> Scalar {
        Scalar::int(if p && q { -1 } else { 1 })
    }

    // ---- derivative and normal ordering ----

    pub fn derivative(&self, f: &Field) -> Result<Field> {
        let mut out = Field::zero();
        for (m, c) in f.terms() {
            let d = match m {
                Mono::One => Field::zero(),
                Mono::Single(a) => Field::atom(Atom::new(a.gen, a.d + 1)),
                Mono::Pair(a, b) => {
                    &self.nop_atoms(Atom::new(a.gen, a.d + 1), *b)? + &self.nop_atoms(*a, Atom::new(b.gen, b.d + 1))?
                }
            };
            out = &out + &d.scale(c);
        }
        Ok(out)
    }

    pub fn derivative_n(&self, f: &Field, n: u32) -> Result<Field> {
        (0..n).try_fold(f.clone(), |acc, _| self.derivative(&acc))
    }

    /// `int_{-∂}^0 [a_lambda b] dlambda = sum_j (-1)^j ∂^{j+1} X_j / (j+1)`
    fn quasi_correction(&self, a: Atom, b: Atom) -> Result<Field> {
        let br = self.atom_bracket(a, b)?;
        let mut out = Field::zero();
        for (j, x) in br.coeffs().iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let d = self.derivative_n(x, j as u32 + 1)?;
            out = &out + &d.scale(&Scalar::ratio(sign, j as i64 + 1));
        }
        Ok(out)
    }

    /// Canonical `:ab:` with atoms in ascending order.
    pub fn nop_atoms(&self, a: Atom, b: Atom) -> Result<Field> {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => Ok(Field::mono(Mono::Pair(a, b), Scalar::one())),
            Equal if !self.odd_atom(a) => Ok(Field::mono(Mono::Pair(a, a), Scalar::one())),
            // :aa: = -:aa: + corr for odd a
            Equal => Ok(self.quasi_correction(a, a)?.scale(&Scalar::ratio(1, 2))),
            Greater => {
                let swapped = Field::mono(Mono::Pair(b, a), self.sign_atoms(a.gen, b.gen));
                Ok(&swapped + &self.quasi_correction(a, b)?)
            }
        }
    }

    /// Normally ordered product within the binary grammar.
    pub fn nop(&self, x: &Field, y: &Field) -> Result<Field> {
        let mut out = Field::zero();
        for (m, c) in x.terms() {
            for (n, d) in y.terms() {
                let f = match (m, n) {
                    (Mono::One, other) | (other, Mono::One) => Field::mono(other.clone(), Scalar::one()),
                    (Mono::Single(a), Mono::Single(b)) => self.nop_atoms(*a, *b)?,
                    _ => {
                        return Err(OpeError::UnsupportedDepth(format!(
                            ":({})({}):",
                            self.fmt_mono(m),
                            self.fmt_mono(n)
                        )))
                    }
                };
                out = &out + &f.scale(&(c * d));
            }
        }
        Ok(out)
    }

    // ---- lambda-polynomial helpers ----

    /// `(lambda + ∂)^n P`
    fn lambda_plus_d_pow(&self, p: &LambdaPoly, n: u32) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (j, x) in p.coeffs().iter().enumerate() {
            let mut dx = x.clone();
            for i in 0..=n {
                if i > 0 {
                    dx = self.derivative(&dx)?;
                }
                out.add_at(j + (n - i) as usize, &dx.scale(&Scalar::int(binomial(n, i))));
            }
        }
        Ok(out)
    }

    /// `-sign * P(-lambda - ∂)`: the skew-symmetric partner of `P`.
    fn skew(&self, p: &LambdaPoly, sign: Scalar) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (j, x) in p.coeffs().iter().enumerate() {
            let j = j as u32;
            let mut dx = x.clone();
            for i in 0..=j {
                if i > 0 {
                    dx = self.derivative(&dx)?;
                }
                let s = if j % 2 == 0 { 1 } else { -1 } * binomial(j, i);
                out.add_at((j - i) as usize, &dx.scale(&Scalar::int(s)));
            }
        }
        Ok(out.scale(&(&Scalar::int(-1) * &sign)))
    }

    // ---- brackets ----

    /// `[∂^m a_lambda ∂^n b] = (-lambda)^m (lambda + ∂)^n [a_lambda b]`
    pub fn atom_bracket(&self, a: Atom, b: Atom) -> Result<LambdaPoly> {
        let base = self.table_entry(a.gen, b.gen);
        if base.is_zero() {
            return Ok(base);
        }
        Ok(self.lambda_plus_d_pow(&base, b.d)?.times_neg_lambda_pow(a.d))
    }

    /// `[X_lambda Y]` for arbitrary grammar fields.
    pub fn bracket(&self, x: &Field, y: &Field) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (m, c) in y.terms() {
            let part = match m {
                Mono::One => LambdaPoly::zero(),
                Mono::Single(b) => self.bracket_atom_right(x, *b)?,
                Mono::Pair(b, d) => self.wick(x, *b, *d)?,
            };
            out = out.add(&part.scale(c));
        }
        Ok(out)
    }

    fn bracket_atom_right(&self, x: &Field, b: Atom) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (m, c) in x.terms() {
            out = out.add(&self.bracket_mono_atom(m, b)?.scale(c));
        }
        Ok(out)
    }

    fn bracket_mono_atom(&self, m: &Mono, b: Atom) -> Result<LambdaPoly> {
        let key = (m.clone(), b);
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = match m {
            Mono::One => LambdaPoly::zero(),
            Mono::Single(a) => self.atom_bracket(*a, b)?,
            Mono::Pair(a1, a2) => {
                let rev = self.wick(&Field::atom(b), *a1, *a2)?;
                self.skew(&rev, Self::sign(self.odd_mono(m), self.odd_atom(b)))?
            }
        };
        self.cache.lock().expect("cache poisoned").insert(key, v.clone());
        Ok(v)
    }

    /// Right Wick formula `[X_lambda :bc:] = :[X_lambda b] c: + p(X,b) :b [X_lambda c]: + int_0^lambda [[X_lambda b]_mu c] dmu`,
    /// applied separately to the even and odd parts of `X`.
    fn wick(&self, x: &Field, b: Atom, c: Atom) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for odd in [false, true] {
            let mut part = Field::zero();
            for (m, s) in x.terms() {
                if self.odd_mono(m) == odd {
                    part.add_term(m.clone(), s.clone());
                }
            }
            if part.is_zero() {
                continue;
            }
            let xb = self.bracket_atom_right(&part, b)?;
            let xc = self.bracket_atom_right(&part, c)?;
            let sign = Self::sign(odd, self.odd_atom(b));
            for (j, f) in xb.coeffs().iter().enumerate() {
                out.add_at(j, &self.nop(f, &Field::atom(c))?);
                let inner = self.bracket_atom_right(f, c)?;
                for (k, z) in inner.coeffs().iter().enumerate() {
                    out.add_at(j + k + 1, &z.scale(&Scalar::ratio(1, k as i64 + 1)));
                }
            }
            for (j, f) in xc.coeffs().iter().enumerate() {
                out.add_at(j, &self.nop(&Field::atom(b), f)?.scale(&sign));
            }
        }
        Ok(out)
    }

    // ---- formatting ----

    pub fn fmt_atom(&self, a: Atom) -> String {
        let name = &self.gens[a.gen].name;
        match a.d {
            0 => name.clone(),
            1 => format!("∂{name}"),
            d => format!("∂^{d}{name}"),
        }
    }

    pub fn fmt_mono(&self, m: &Mono) -> String {
        match m {
            Mono::One => "1".into(),
            Mono::Single(a) => self.fmt_atom(*a),
            Mono::Pair(a, b) => format!(":{} {}:", self.fmt_atom(*a), self.fmt_atom(*b)),
        }
    }

    pub fn fmt_field(&self, f: &Field) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in f.terms().enumerate() {
            let neg = c.as_rational().is_some_and(|r| r < BigRational::from_integer(0.into()));
            let mag = if neg { -c } else { c.clone() };
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let cs = mag.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            match (cs.as_str(), m) {
                ("1", _) => s.push_str(&self.fmt_mono(m)),
                (_, Mono::One) => s.push_str(&cs),
                _ => {
                    let _ = write!(s, "{cs}*{}", self.fmt_mono(m));
                }
            }
        }
        s
    }

    pub fn fmt_lambda(&self, p: &LambdaPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(j, f)| {
                let body = self.fmt_field(f);
                let body = if f.len() > 1 || body.starts_with('-') { format!("({body})") } else { body };
                match j {
                    0 => body,
                    1 => format!("λ {body}"),
                    _ => format!("λ^{j} {body}"),
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn field_json(&self, f: &Field) -> FieldJson {
        FieldJson {
            terms: f
                .terms()
                .map(|(m, c)| TermJson { coeff: c.to_string(), monomial: self.mono_json(m) })
                .collect(),
        }
    }

    pub fn lambda_json(&self, p: &LambdaPoly) -> Vec<LambdaTermJson> {
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(j, f)| LambdaTermJson { degree: j, field: self.field_json(f) })
            .collect()
    }

    fn atom_json(&self, a: Atom) -> AtomJson {
        AtomJson { generator: self.gens[a.gen].name.clone(), derivatives: a.d }
    }

    fn mono_json(&self, m: &Mono) -> MonoJson {
        match m {
            Mono::One => MonoJson::Vacuum,
            Mono::Single(a) => MonoJson::Single(self.atom_json(*a)),
            Mono::Pair(a, b) => MonoJson::Pair { left: self.atom_json(*a), right: self.atom_json(*b) },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomJson {
    pub generator: String,
    pub derivatives: u32,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonoJson {
    Vacuum,
    Single(AtomJson),
    Pair { left: AtomJson, right: AtomJson },
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: MonoJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaTermJson {
    pub degree: usize,
    pub field: FieldJson,
}
