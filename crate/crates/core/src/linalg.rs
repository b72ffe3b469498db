//! Small dense exact linear algebra over `Rational64`.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Q = Rational64;
pub type QMatrix = Vec<Vec<Q>>;

pub fn to_q(m: &[Vec<i64>]) -> QMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| Q::from_integer(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> QMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + row[k] * b[k][j]))
                .collect()
        })
        .collect()
}

/// Determinant by Gaussian elimination with exact pivots.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: QMatrix = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
        }
    }
    d
}

/// Inverse by Gauss-Jordan; `None` when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m.to_vec();
    let mut inv = identity(n);
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let piv = a[c][c];
        for k in 0..n {
            a[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c];
            for k in 0..n {
                let (ack, ick) = (a[c][k], inv[c][k]);
                a[r][k] -= f * ack;
                inv[r][k] -= f * ick;
            }
        }
    }
    Some(inv)
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    (0..cols)
        .map(|j| v.iter().zip(m).fold(Q::zero(), |acc, (x, row)| acc + *x * row[j]))
        .collect()
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Q>) -> i64 {
    it.into_iter()
        .fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()))
}
