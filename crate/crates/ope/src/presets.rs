use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use wmtc_core::linalg::{inverse, to_q};
use wmtc_core::liealg::RootSystem;

use crate::algebra::{Algebra, AlgebraBuilder};
use crate::error::{OpeError, Result};
use crate::field::{Field, LambdaPoly, Mono};
use crate::lie::{unit, Basis, LieAlgebra, Vector};
use crate::scalar::Scalar;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn to_big(x: wmtc_core::linalg::Q) -> BigRational {
    BigRational::new((*x.numer()).into(), (*x.denom()).into())
}

/// `[h_lambda h] = lambda`
pub fn heisenberg() -> Algebra {
    let mut b = AlgebraBuilder::new();
    b.generator("h", false, q(1, 1)).expect("fresh name");
    b.bracket("h", "h", LambdaPoly::monomial(1, Field::vacuum(Scalar::one()))).expect("known generator");
    b.build(true).expect("skew-symmetric")
}

/// Generator names `(phi_i, phi_i*)` for `i < dim`.
pub fn fermion_names(dim: usize) -> Vec<(String, String)> {
    if dim == 1 {
        return vec![("phi".into(), "phi*".into())];
    }
    (1..=dim).map(|i| (format!("phi{i}"), format!("phi{i}*"))).collect()
}

/// Odd generators `phi_i` and `phi_i*` with `[phi_i lambda phi_j*] = delta_ij`.
pub fn charged_fermions(dim: usize) -> Algebra {
    let mut b = AlgebraBuilder::new();
    let names = fermion_names(dim);
    for (p, s) in &names {
        b.generator(p, true, q(1, 2)).expect("fresh name");
        b.generator(s, true, q(1, 2)).expect("fresh name");
    }
    for (p, s) in &names {
        b.bracket(p, s, LambdaPoly::constant(Field::vacuum(Scalar::one()))).expect("known generator");
    }
    b.build(true).expect("skew-symmetric")
}

/// Generators of `a` followed by those of `b`, mutually commuting.
pub fn tensor(a: Algebra, b: Algebra) -> Result<Algebra> {
    let (mut gens, mut table, ja) = a.into_parts();
    let (gb, tb, jb) = b.into_parts();
    let off = gens.len();
    for g in &gb {
        if gens.iter().any(|x| x.name == g.name) {
            return Err(OpeError::DuplicateGenerator(g.name.clone()));
        }
    }
    gens.extend(gb);
    for ((x, y), p) in tb {
        let shifted = LambdaPoly::from_coeffs(p.coeffs().iter().map(|f| shift_field(f, off)).collect());
        table.insert((x + off, y + off), shifted);
    }
    Ok(Algebra::from_parts(gens, table, ja && jb))
}

fn shift_field(f: &Field, off: usize) -> Field {
    let mut out = Field::zero();
    for (m, c) in f.terms() {
        let sh = |a: crate::field::Atom| crate::field::Atom::new(a.gen + off, a.d);
        let m = match m {
            Mono::One => Mono::One,
            Mono::Single(a) => Mono::Single(sh(*a)),
            Mono::Pair(a, b) => Mono::Pair(sh(*a), sh(*b)),
        };
        out.add_term(m, c.clone());
    }
    out
}

/// The universal affine vertex algebra `V^k(g)` in a Chevalley basis `h_i, e_alpha, f_alpha`
/// with `(e_alpha, f_alpha) = 1` and `(theta, theta) = 2`.
#[derive(Debug)]
pub struct AffinePreset {
    pub algebra: Algebra,
    pub lie: LieAlgebra,
    pub level: Scalar,
    names: Vec<String>,
    vectors: Vec<Vector>,
    index: HashMap<Basis, (usize, BigRational)>,
}

fn root_label(c: &[i64]) -> String {
    c.iter().map(|x| x.to_string()).collect()
}

impl AffinePreset {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Generator field for a Lie algebra vector.
    pub fn field_of(&self, v: &Vector) -> Field {
        let mut f = Field::zero();
        for (b, c) in v {
            let (i, s) = &self.index[b];
            f.add_term(Mono::Single(crate::field::Atom::new(*i, 0)), Scalar::rational(c * s));
        }
        f
    }

    pub fn vector(&self, name: &str) -> Result<&Vector> {
        let i = self.names.iter().position(|n| n == name).ok_or_else(|| OpeError::UnknownGenerator(name.into()))?;
        Ok(&self.vectors[i])
    }
}

pub fn affine(rs: &RootSystem, k: &Scalar) -> Result<AffinePreset> {
    let lie = LieAlgebra::new(rs)?;
    let n = lie.rank();
    let mut names = Vec::new();
    let mut vectors = Vec::new();
    let rank_one = n == 1;
    for (idx, r) in lie.positive_roots().iter().enumerate() {
        let _ = idx;
        names.push(if rank_one { "e".into() } else { format!("e{}", root_label(r)) });
        vectors.push(unit(Basis::E(r.clone())));
    }
    for i in 0..n {
        names.push(if rank_one { "h".into() } else { format!("h{}", i + 1) });
        vectors.push(unit(Basis::H(i)));
    }
    for r in lie.positive_roots() {
        names.push(if rank_one { "f".into() } else { format!("f{}", root_label(r)) });
        let neg: Vec<i64> = r.iter().map(|x| -x).collect();
        let mut v = Vector::new();
        v.insert(Basis::E(neg), -BigRational::one());
        vectors.push(v);
    }
    let mut index = HashMap::new();
    for (i, v) in vectors.iter().enumerate() {
        let (b, c) = v.iter().next().expect("unit vectors");
        index.insert(b.clone(), (i, c.recip()));
    }
    let mut builder = AlgebraBuilder::new();
    for name in &names {
        builder.generator(name, false, q(1, 1))?;
    }
    let mut preset = AffinePreset {
        algebra: AlgebraBuilder::new().build(true)?,
        lie,
        level: k.clone(),
        names,
        vectors,
        index,
    };
    for (i, a) in preset.vectors.iter().enumerate() {
        for (j, b) in preset.vectors.iter().enumerate() {
            let br = preset.field_of(&preset.lie.bracket(a, b));
            let form = preset.lie.form(a, b);
            let mut p = LambdaPoly::constant(br);
            if !form.is_zero() {
                p.add_at(1, &Field::vacuum(&Scalar::rational(form) * k));
            }
            if !p.is_zero() {
                builder.bracket(&preset.names[i], &preset.names[j], p)?;
            }
        }
    }
    preset.algebra = builder.build(true)?;
    Ok(preset)
}

/// `L = 1/(2(k + h^vee)) sum_i :a_i a^i:` over dual bases; the preset and its field.
pub fn sugawara(rs: &RootSystem, k: &Scalar) -> Result<(AffinePreset, Field)> {
    let kh = k + &Scalar::int(rs.dual_coxeter());
    if kh.is_zero() {
        return Err(OpeError::Unsupported("Sugawara vector needs k != -h^vee".into()));
    }
    let pre = affine(rs, k)?;
    let n = pre.lie.rank();
    let ainv = inverse(&to_q(pre.lie.cartan())).expect("Cartan matrix is invertible");
    let alg = &pre.algebra;
    let mut sum = Field::zero();
    for i in 0..n {
        for j in 0..n {
            if ainv[i][j] == wmtc_core::linalg::Q::from_integer(0) {
                continue;
            }
            let hi = pre.field_of(&unit(Basis::H(i)));
            let hj = pre.field_of(&unit(Basis::H(j)));
            sum = &sum + &alg.nop(&hi, &hj)?.scale(&Scalar::rational(to_big(ainv[i][j])));
        }
    }
    for r in pre.lie.positive_roots() {
        let e = alg.gen(&if n == 1 { "e".to_string() } else { format!("e{}", root_label(r)) })?;
        let f = alg.gen(&if n == 1 { "f".to_string() } else { format!("f{}", root_label(r)) })?;
        sum = &(&sum + &alg.nop(&e, &f)?) + &alg.nop(&f, &e)?;
    }
    let coeff = (&Scalar::one() / &(&Scalar::int(2) * &kh))?;
    let l = sum.scale(&coeff);
    Ok((pre, l))
}

pub type Matrix = Vec<Vec<BigRational>>;

/// `F^x = sum_i :(sigma(x) phi_i) phi_i*:` in `charged_fermions(N)`, with `alg` containing those generators.
pub fn fermion_current(alg: &Algebra, sigma: &Matrix) -> Result<Field> {
    let n = sigma.len();
    if let Some(row) = sigma.iter().find(|r| r.len() != n) {
        return Err(OpeError::Dimension { expected: n, got: row.len() });
    }
    let names = fermion_names(n);
    let mut out = Field::zero();
    for i in 0..n {
        let star = alg.gen(&names[i].1)?;
        for j in 0..n {
            if sigma[j][i].is_zero() {
                continue;
            }
            let phi = alg.gen(&names[j].0)?;
            out = &out + &alg.nop(&phi, &star)?.scale(&Scalar::rational(sigma[j][i].clone()));
        }
    }
    Ok(out)
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

/// Outcome of comparing `[F^a_lambda F^b]` with `F^{[a,b]} + lambda tr(sigma(a) sigma(b))`.
#[derive(Clone, Debug)]
pub struct CurrentCheck {
    pub a: usize,
    pub b: usize,
    pub bracket: LambdaPoly,
    pub expected: LambdaPoly,
    pub holds: bool,
}

pub fn verify_fermion_currents(mats: &[Matrix]) -> Result<(Algebra, Vec<CurrentCheck>)> {
    let n = mats.first().map_or(0, Vec::len);
    if let Some(m) = mats.iter().find(|m| m.len() != n) {
        return Err(OpeError::Dimension { expected: n, got: m.len() });
    }
    let alg = charged_fermions(n.max(1));
    let currents: Vec<Field> = mats.iter().map(|m| fermion_current(&alg, m)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (a, ma) in mats.iter().enumerate() {
        for (b, mb) in mats.iter().enumerate() {
            let ab = mat_mul(ma, mb);
            let ba = mat_mul(mb, ma);
            let comm: Matrix = ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect();
            let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &ab[i][i]);
            let mut expected = LambdaPoly::constant(fermion_current(&alg, &comm)?);
            expected.add_at(1, &Field::vacuum(Scalar::rational(tr)));
            let bracket = alg.bracket(&currents[a], &currents[b])?;
            let holds = bracket == expected;
            out.push(CurrentCheck { a, b, bracket, expected, holds });
        }
    }
    Ok((alg, out))
}

/// Defining representation of `sl_2` on `C^2`: matrices of `e`, `h`, `f`.
pub fn sl2_defining() -> Vec<Matrix> {
    let z = || BigRational::zero();
    let o = || BigRational::one();
    vec![
        vec![vec![z(), o()], vec![z(), z()]],
        vec![vec![o(), z()], vec![z(), -o()]],
        vec![vec![z(), z()], vec![o(), z()]],
    ]
}

/// BRST complex `V^k(g) ⊗ F(n)` for the principal nilpotent with abelian `n`, and the charge
/// `Q = sum_alpha :e_alpha phi_alpha*: + sum_{simple} phi_alpha*`.
pub fn brst_principal(rs: &RootSystem, k: &Scalar) -> Result<(Algebra, Field)> {
    let pre = affine(rs, k)?;
    let pos = pre.lie.positive_roots().to_vec();
    let abelian = pos.iter().all(|a| {
        pos.iter().all(|b| {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            !pos.contains(&s)
        })
    });
    if !abelian {
        return Err(OpeError::Unsupported(format!(
            "{} has non-abelian n; the charge needs a cubic ghost term outside the binary grammar",
            rs.cartan_type()
        )));
    }
    let names = fermion_names(pos.len());
    let alg = tensor(pre.algebra, charged_fermions(pos.len()))?;
    let mut qf = Field::zero();
    for (r, (_, star)) in pos.iter().zip(&names) {
        let e = alg.gen(&if rs.rank() == 1 { "e".to_string() } else { format!("e{}", root_label(r)) })?;
        let s = alg.gen(star)?;
        qf = &qf + &alg.nop(&e, &s)?;
        if r.iter().sum::<i64>() == 1 {
            qf = &qf + &s;
        }
    }
    Ok((alg, qf))
}
