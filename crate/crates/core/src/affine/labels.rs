use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::level::AdmissibleLevel;
use crate::error::{Error, Result};
use crate::liealg::{longest_element, Family, RootSystem, Weight, WeylElement};

/// All dominant integral weights with `<lambda, theta^vee> <= k`, in lexicographic order.
pub fn enumerate_p_plus_k(rs: &RootSystem, k: i64) -> Vec<Weight> {
    alcove_points(rs, k).into_iter().map(|c| Weight::from_ints(&c)).collect()
}

/// Integer points of the closed level-`m` alcove, lexicographic.
pub(crate) fn alcove_points(rs: &RootSystem, m: i64) -> Vec<Vec<i64>> {
    fn rec(comarks: &[i64], budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == comarks.len() {
            out.push(cur.clone());
            return;
        }
        let a = comarks[cur.len()];
        for c in 0..=budget / a {
            cur.push(c);
            rec(comarks, budget - a * c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 0 {
        rec(rs.comarks(), m, &mut Vec::new(), &mut out);
    }
    out
}

/// Regular dominant weights `nu` with `<nu, alpha_i^vee> >= 1` and `<nu, theta^vee> < m`.
pub fn enumerate_regular(rs: &RootSystem, m: i64) -> Vec<Weight> {
    let shift = m - rs.dual_coxeter();
    alcove_points(rs, shift)
        .into_iter()
        .map(|c| Weight::from_ints(&c.iter().map(|x| x + 1).collect::<Vec<_>>()))
        .collect()
}

/// Wall quantities `(<eta, alpha_1^vee>, .., <eta, alpha_l^vee>, q - <eta, theta^vee>)`.
pub fn wall_values(rs: &RootSystem, eta: &[i64], q: i64) -> Vec<i64> {
    let level: i64 = eta.iter().zip(rs.comarks()).map(|(a, b)| a * b).sum();
    let mut v = eta.to_vec();
    v.push(q - level);
    v
}

/// Dominant weights of level at most `q` lying on exactly one wall of the level-`q` alcove.
/// Wall `i < l` is `<eta, alpha_i^vee> = 0`; wall `l` is the affine wall.
pub fn enumerate_subregular_eta(rs: &RootSystem, q: i64) -> Vec<(Weight, usize)> {
    alcove_points(rs, q)
        .into_iter()
        .filter_map(|c| {
            let walls = wall_values(rs, &c, q);
            let zeros: Vec<usize> = (0..walls.len()).filter(|&i| walls[i] == 0).collect();
            (zeros.len() == 1).then(|| (Weight::from_ints(&c), zeros[0]))
        })
        .collect()
}

/// The outer automorphism group acting on the level-`m` alcove: `lambda -> m w_j + w_j(lambda)`
/// for each special node `j`, with `w_j = w_0^{(j)} w_0`.
#[derive(Clone, Debug)]
pub struct OuterAutomorphisms {
    maps: Vec<(usize, WeylElement)>,
    rank: usize,
}

impl OuterAutomorphisms {
    pub fn new(rs: &RootSystem) -> Self {
        let n = rs.rank();
        let all: Vec<usize> = (0..n).collect();
        let w0 = longest_element(rs, &all);
        let maps = (0..n)
            .filter(|&j| rs.marks()[j] == 1)
            .map(|j| {
                let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
                // first w0, then w0^{(j)}
                (j, w0.then(&longest_element(rs, &others)))
            })
            .collect();
        OuterAutomorphisms { maps, rank: n }
    }

    /// Group order, including the identity.
    pub fn order(&self) -> usize {
        self.maps.len() + 1
    }

    /// Applies element `g` (0 = identity) at level `m`.
    pub fn apply(&self, g: usize, m: i64, lambda: &[i64]) -> Vec<i64> {
        if g == 0 {
            return lambda.to_vec();
        }
        let (j, w) = &self.maps[g - 1];
        let mut out = w.act_int(lambda);
        out[*j] += m;
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrincipalLabel {
    pub nu: Vec<i64>,
    pub eta: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubregularLabel {
    pub nu: Vec<i64>,
    pub eta: Vec<i64>,
    pub wall: usize,
}

/// Quotients `nus x etas` by the diagonal outer-automorphism action; canonical = lexicographic minimum.
fn diagonal_classes(
    omega: &OuterAutomorphisms,
    p: i64,
    q: i64,
    nus: &[Vec<i64>],
    etas: &[Vec<i64>],
) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut seen = BTreeSet::new();
    let mut classes = BTreeSet::new();
    for nu in nus {
        for eta in etas {
            let pair = (nu.clone(), eta.clone());
            if seen.contains(&pair) {
                continue;
            }
            let orbit: BTreeSet<_> = (0..omega.order())
                .map(|g| (omega.apply(g, p, nu), omega.apply(g, q, eta)))
                .collect();
            classes.insert(orbit.iter().next().unwrap().clone());
            seen.extend(orbit);
        }
    }
    classes.into_iter().collect()
}

/// `P_+^{p,reg} x P_+^{q,reg}` modulo the diagonal outer automorphisms.
pub fn principal_labels(lv: &AdmissibleLevel<'_>) -> Vec<PrincipalLabel> {
    let rs = lv.root_system();
    let omega = OuterAutomorphisms::new(rs);
    let ints = |v: Vec<Weight>| -> Vec<Vec<i64>> { v.iter().map(|w| w.to_ints().unwrap()).collect() };
    let nus = ints(enumerate_regular(rs, lv.p()));
    let etas = ints(enumerate_regular(rs, lv.q()));
    diagonal_classes(&omega, lv.p(), lv.q(), &nus, &etas)
        .into_iter()
        .map(|(nu, eta)| PrincipalLabel { nu, eta })
        .collect()
}

/// The distinguished simple root for the subregular pipeline: trivalent node for D and E,
/// middle node for odd-rank A.
pub fn default_alpha_star(rs: &RootSystem) -> Result<usize> {
    let t = rs.cartan_type();
    let n = t.rank();
    match t.family() {
        Family::D => Ok(n - 3),
        Family::E => Ok(3),
        Family::A if n >= 3 && n % 2 == 1 => Ok(n / 2),
        Family::A if n == 1 => Err(Error::Unsupported("A1 has no subregular nilpotent distinct from zero".into())),
        Family::A => Err(Error::Unsupported(format!("{t}: even-rank type A is not supported by the subregular pipeline"))),
        _ => Err(Error::Unsupported(format!("{t}: subregular pipeline needs a simply-laced type"))),
    }
}

/// Subregular labels: `nu` regular at level `p`, `eta` on exactly one wall at level `q`,
/// modulo the diagonal outer automorphisms.
pub fn subregular_labels(lv: &AdmissibleLevel<'_>, alpha_star: usize) -> Result<Vec<SubregularLabel>> {
    let rs = lv.root_system();
    lv.require_simply_laced("subregular")?;
    let t = rs.cartan_type();
    if t.family() == Family::A && t.rank() == 1 {
        return Err(Error::Unsupported("A1 has no subregular nilpotent distinct from zero".into()));
    }
    if alpha_star >= rs.rank() {
        return Err(Error::Unsupported(format!("alpha_* index {alpha_star} out of range")));
    }
    let omega = OuterAutomorphisms::new(rs);
    let nus: Vec<Vec<i64>> = enumerate_regular(rs, lv.p())
        .iter()
        .map(|w| w.to_ints().unwrap())
        .collect();
    let etas: Vec<Vec<i64>> = enumerate_subregular_eta(rs, lv.q())
        .iter()
        .map(|(w, _)| w.to_ints().unwrap())
        .collect();
    Ok(diagonal_classes(&omega, lv.p(), lv.q(), &nus, &etas)
        .into_iter()
        .map(|(nu, eta)| {
            let walls = wall_values(rs, &eta, lv.q());
            let wall = walls.iter().position(|&w| w == 0).expect("exactly one wall");
            SubregularLabel { nu, eta, wall }
        })
        .collect())
}
