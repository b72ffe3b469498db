//! Chevalley-type bases of simply-laced Lie algebras from the Frenkel-Kac sign cocycle.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use wmtc_core::liealg::RootSystem;

use crate::error::{OpeError, Result};

/// Basis element: `H_i` or `E_alpha` with `alpha` in root coordinates (either sign).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    H(usize),
    E(Vec<i64>),
}

pub type Vector = BTreeMap<Basis, BigRational>;

/// `g = h + sum C E_alpha` with `[E_a, E_b] = eps(a, b) E_{a+b}`, `[E_a, E_{-a}] = -a`,
/// `(E_a, E_{-a}) = -1` and `(H_i, H_j) = a_ij`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    cartan: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn add_to(v: &mut Vector, b: Basis, c: BigRational) {
    let slot = v.entry(b.clone()).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        v.remove(&b);
    }
}

impl LieAlgebra {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        if !rs.cartan_type().is_simply_laced() {
            return Err(OpeError::Unsupported(format!(
                "structure constants are built for simply-laced types only, got {}",
                rs.cartan_type()
            )));
        }
        let mut roots: Vec<Vec<i64>> = rs.positive_roots().iter().map(|r| r.root_coords.clone()).collect();
        let neg: Vec<Vec<i64>> = roots.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        roots.extend(neg);
        Ok(LieAlgebra { cartan: rs.cartan_matrix().to_vec(), roots })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.roots.len() / 2]
    }

    pub fn dimension(&self) -> usize {
        self.rank() + self.roots.len()
    }

    pub fn basis(&self) -> Vec<Basis> {
        (0..self.rank()).map(Basis::H).chain(self.roots.iter().cloned().map(Basis::E)).collect()
    }

    fn is_root(&self, a: &[i64]) -> bool {
        self.roots.iter().any(|r| r == a)
    }

    fn eps(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.rank();
        let mut e = 0i64;
        for i in 0..n {
            e += a[i] * b[i];
            for j in i + 1..n {
                if self.cartan[i][j] == -1 {
                    e += a[i] * b[j];
                }
            }
        }
        if e.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `(H_i, alpha)`
    fn pair_h(&self, i: usize, a: &[i64]) -> i64 {
        (0..self.rank()).map(|j| self.cartan[i][j] * a[j]).sum()
    }

    pub fn bracket_basis(&self, x: &Basis, y: &Basis) -> Vector {
        let mut out = Vector::new();
        match (x, y) {
            (Basis::H(_), Basis::H(_)) => {}
            (Basis::H(i), Basis::E(a)) => add_to(&mut out, y.clone(), big(self.pair_h(*i, a))),
            (Basis::E(a), Basis::H(i)) => add_to(&mut out, x.clone(), big(-self.pair_h(*i, a))),
            (Basis::E(a), Basis::E(b)) => {
                let s: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                if s.iter().all(|&c| c == 0) {
                    for (i, c) in a.iter().enumerate() {
                        add_to(&mut out, Basis::H(i), big(-c));
                    }
                } else if self.is_root(&s) {
                    add_to(&mut out, Basis::E(s), big(self.eps(a, b)));
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::new();
        for (bx, cx) in x {
            for (by, cy) in y {
                for (b, c) in self.bracket_basis(bx, by) {
                    add_to(&mut out, b, c * cx * cy);
                }
            }
        }
        out
    }

    pub fn form_basis(&self, x: &Basis, y: &Basis) -> BigRational {
        match (x, y) {
            (Basis::H(i), Basis::H(j)) => big(self.cartan[*i][*j]),
            (Basis::E(a), Basis::E(b)) if a.iter().zip(b).all(|(p, q)| p + q == 0) => -BigRational::one(),
            _ => BigRational::zero(),
        }
    }

    pub fn form(&self, x: &Vector, y: &Vector) -> BigRational {
        let mut acc = BigRational::zero();
        for (bx, cx) in x {
            for (by, cy) in y {
                acc += self.form_basis(bx, by) * cx * cy;
            }
        }
        acc
    }
}

pub fn unit(b: Basis) -> Vector {
    let mut v = Vector::new();
    v.insert(b, BigRational::one());
    v
}
