use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::cartan::CartanType;
use super::weight::Weight;
use crate::error::{Error, Result};
use crate::linalg::{det, inverse, lcm_of_denominators, to_q, transpose, vec_mat, QMatrix, Q};

/// A positive root, stored in both bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Root {
    pub root_coords: Vec<i64>,
    pub weight: Weight,
    pub height: i64,
    /// `(alpha, alpha) / 2`
    pub half_norm: Q,
}

/// Exact root-system data for a finite simple Lie algebra, normalized so `(theta, theta) = 2`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    half_norms: Vec<Q>,
    positive: Vec<Root>,
    lookup: HashMap<Vec<i64>, usize>,
    gram: QMatrix,
    gram_den: i64,
    gram_int: Vec<Vec<i64>>,
    fund_to_root: QMatrix,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    dual_coxeter: i64,
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> Self {
        let cartan = cartan_type.cartan_matrix();
        let n = cartan_type.rank();
        let half_norms = half_norms(&cartan);
        let positive = close_roots(&cartan, &half_norms);
        let lookup = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.root_coords.clone(), k))
            .collect();

        let a = to_q(&cartan);
        let a_inv = inverse(&a).expect("Cartan matrix of finite type is invertible");
        // (w_i, w_j) = (A^{-1})_{ji} d_j
        let gram: QMatrix = (0..n)
            .map(|i| (0..n).map(|j| a_inv[j][i] * half_norms[j]).collect())
            .collect();
        let gram_den = lcm_of_denominators(gram.iter().flatten());
        let gram_int = gram
            .iter()
            .map(|row| row.iter().map(|g| (*g * gram_den).to_integer()).collect())
            .collect();
        let fund_to_root = inverse(&transpose(&a)).expect("invertible");

        let theta = positive.last().expect("nonempty root system");
        let marks = theta.root_coords.clone();
        let comarks: Vec<i64> = marks
            .iter()
            .zip(&half_norms)
            .map(|(m, d)| (*d * *m).to_integer())
            .collect();
        let dual_coxeter = 1 + comarks.iter().sum::<i64>();

        RootSystem {
            cartan_type,
            cartan,
            half_norms,
            positive,
            lookup,
            gram,
            gram_den,
            gram_int,
            fund_to_root,
            marks,
            comarks,
            dual_coxeter,
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `(alpha_i, alpha_i) / 2` for each simple root.
    pub fn half_norms(&self) -> &[Q] {
        &self.half_norms
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::from_ints(&(0..self.rank()).map(|j| self.cartan[j][i]).collect::<Vec<_>>())
    }

    pub fn simple_roots(&self) -> Vec<Weight> {
        (0..self.rank()).map(|i| self.simple_root(i)).collect()
    }

    /// Simple coroot `alpha_i^vee` in fundamental coordinates.
    pub fn simple_coroot(&self, i: usize) -> Weight {
        self.simple_root(i).scale(Q::one() / self.half_norms[i])
    }

    /// Positive roots ordered by height, then lexicographically.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn highest_root(&self) -> &Root {
        self.positive.last().expect("nonempty")
    }

    pub fn rho(&self) -> Weight {
        Weight::from_ints(&vec![1; self.rank()])
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    /// Coefficients of the highest root in the simple roots.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// Coefficients of the highest coroot in the simple coroots; `<lambda, theta^vee> = sum a_i^vee lambda_i`.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    /// `<lambda, theta^vee>`
    pub fn level_of(&self, w: &Weight) -> Q {
        w.0.iter()
            .zip(&self.comarks)
            .fold(Q::zero(), |acc, (c, a)| acc + *c * *a)
    }

    /// Gram matrix of the fundamental weights.
    pub fn weight_gram(&self) -> &QMatrix {
        &self.gram
    }

    /// `(den, G * den)` with `G * den` integral.
    pub fn integral_gram(&self) -> (i64, &[Vec<i64>]) {
        (self.gram_den, &self.gram_int)
    }

    pub fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: w.rank(),
            });
        }
        Ok(())
    }

    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Result<Q> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        Ok(self.ip(a, b))
    }

    pub(crate) fn ip(&self, a: &Weight, b: &Weight) -> Q {
        let mut acc = Q::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                acc += *ai * self.gram[i][j] * *bj;
            }
        }
        acc
    }

    pub fn to_root_coords(&self, w: &Weight) -> Vec<Q> {
        vec_mat(&w.0, &self.fund_to_root)
    }

    pub fn from_root_coords(&self, c: &[Q]) -> Weight {
        let n = self.rank();
        Weight(
            (0..n)
                .map(|i| (0..n).fold(Q::zero(), |acc, j| acc + c[j] * self.cartan[i][j]))
                .collect(),
        )
    }

    /// Index of a root (positive or negative) given in root coordinates.
    pub fn find_root(&self, root_coords: &[i64]) -> Option<(usize, bool)> {
        if let Some(&k) = self.lookup.get(root_coords) {
            return Some((k, true));
        }
        let neg: Vec<i64> = root_coords.iter().map(|c| -c).collect();
        self.lookup.get(&neg).map(|&k| (k, false))
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        let c = self.to_root_coords(w);
        c.iter().all(|x| x.is_integer())
            && self
                .find_root(&c.iter().map(|x| x.to_integer()).collect::<Vec<_>>())
                .is_some()
    }

    pub fn simple_reflection(&self, i: usize, w: &Weight) -> Weight {
        let c = w.0[i];
        Weight(
            (0..self.rank())
                .map(|j| w.0[j] - c * self.cartan[j][i])
                .collect(),
        )
    }

    /// Reflection in an arbitrary root `r`.
    pub fn reflect(&self, r: &Weight, w: &Weight) -> Weight {
        let pairing = self.ip(w, r) * 2 / self.ip(r, r);
        w - &r.scale(pairing)
    }

    /// Exponents as the transpose of the height partition of the positive roots.
    pub fn exponents(&self) -> Vec<i64> {
        let max_h = self.highest_root().height as usize;
        let mut counts = vec![0usize; max_h + 2];
        for r in &self.positive {
            counts[r.height as usize] += 1;
        }
        let mut out = Vec::new();
        for h in 1..=max_h {
            for _ in counts[h + 1]..counts[h] {
                out.push(h as i64);
            }
        }
        out
    }

    /// `|P / Q|`
    pub fn index_p_over_q(&self) -> i64 {
        det(&to_q(&self.cartan)).to_integer().abs()
    }

    /// `|P / n Q^vee|`, with coroots embedded through the normalized form.
    pub fn index_p_over_n_coroot(&self, n: i64) -> i64 {
        let m: QMatrix = (0..self.rank()).map(|i| self.simple_coroot(i).0).collect();
        let d = det(&m);
        assert!(d.is_integer(), "coroot lattice index must be integral");
        n.pow(self.rank() as u32) * d.to_integer().abs()
    }

    pub fn dimension(&self) -> usize {
        self.rank() + 2 * self.positive.len()
    }
}

fn half_norms(cartan: &[Vec<i64>]) -> Vec<Q> {
    let n = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(Q::one());
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if j != i && cartan[i][j] != 0 && d[j].is_none() {
                // a_ij d_i = a_ji d_j
                d[j] = Some(d[i].unwrap() * cartan[i][j] / cartan[j][i]);
                stack.push(j);
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let max = *d.iter().max().unwrap();
    d.into_iter().map(|x| x / max).collect()
}

fn close_roots(cartan: &[Vec<i64>], half: &[Q]) -> Vec<Root> {
    let n = cartan.len();
    let fund = |c: &[i64]| -> Vec<i64> {
        (0..n)
            .map(|i| (0..n).map(|j| c[j] * cartan[i][j]).sum())
            .collect()
    };
    let mut known: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut all = Vec::new();
    while !layer.is_empty() {
        for r in &layer {
            known.insert(r.clone(), ());
        }
        let mut next: Vec<Vec<i64>> = Vec::new();
        for r in &layer {
            let f = fund(r);
            for i in 0..n {
                // alpha-string: r + alpha_i is a root iff p - <r, alpha_i^vee> > 0
                let mut p = 0;
                let mut down = r.clone();
                loop {
                    down[i] -= 1;
                    if known.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - f[i] > 0 {
                    let mut up = r.clone();
                    up[i] += 1;
                    if !known.contains_key(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(layer);
        next.sort();
        layer = next;
    }
    let mut roots: Vec<Root> = all
        .into_iter()
        .map(|c| {
            let w = Weight::from_ints(&fund(&c));
            // (r, r)/2 = sum_ij c_i c_j a_ij d_i / 2
            let mut nn = Q::zero();
            for i in 0..n {
                for j in 0..n {
                    nn += Q::from_integer(c[i] * c[j] * cartan[i][j]) * half[i];
                }
            }
            Root {
                height: c.iter().sum(),
                half_norm: nn / 2,
                weight: w,
                root_coords: c,
            }
        })
        .collect();
    roots.sort_by(|a, b| a.height.cmp(&b.height).then(a.root_coords.cmp(&b.root_coords)));
    roots
}
