//! Weyl groups as integer matrices, enumerated through a chain of parabolic subgroups.
//!
//! With `W_i = <s_0, .., s_i>`, every element factors uniquely as
//! `c_{l-1} ∘ .. ∘ c_0` with `c_i` drawn from a fixed set of coset representatives of
//! `W_i / W_{i-1}`. The representatives for level `i` are indexed by the orbit of the
//! fundamental weight `w_i` under `W_i`, so `|W|` is the product of the orbit sizes and the
//! stream holds only one partial product per level.

use std::collections::HashMap;

use super::roots::RootSystem;
use super::weight::Weight;
use crate::linalg::Q;

pub type IMatrix = Vec<Vec<i64>>;

/// A Weyl group element acting on row vectors of fundamental coordinates: `lambda -> lambda * M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: IMatrix,
    /// `epsilon(w) = (-1)^{length}`
    pub parity: i8,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            matrix: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
            parity: 1,
        }
    }

    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        let n = rs.rank();
        let a = rs.cartan_matrix();
        let mut m = Self::identity(n).matrix;
        // new_j = lambda_j - lambda_i * a_ji
        for (j, entry) in m[i].iter_mut().enumerate() {
            *entry -= a[j][i];
        }
        WeylElement { matrix: m, parity: -1 }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            matrix: imat_mul(&self.matrix, &other.matrix),
            parity: self.parity * other.parity,
        }
    }

    pub fn act(&self, w: &Weight) -> Weight {
        let n = self.rank();
        Weight(
            (0..n)
                .map(|j| {
                    (0..n).fold(Q::from_integer(0), |acc, i| acc + w.0[i] * self.matrix[i][j])
                })
                .collect(),
        )
    }

    pub fn act_int(&self, w: &[i64]) -> Vec<i64> {
        let n = self.rank();
        (0..n)
            .map(|j| (0..n).map(|i| w[i] * self.matrix[i][j]).sum())
            .collect()
    }

    /// `w ∘ lambda = w(lambda + rho) - rho`
    pub fn dot(&self, rs: &RootSystem, w: &Weight) -> Weight {
        let rho = rs.rho();
        &self.act(&(w + &rho)) - &rho
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.rank();
        // W is finite, so M^{-1} = M^{|M|-1}; compute via exact rational inverse instead.
        let q: Vec<Vec<Q>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
            .collect();
        let inv = crate::linalg::inverse(&q).expect("Weyl matrices are invertible");
        WeylElement {
            matrix: (0..n)
                .map(|i| (0..n).map(|j| inv[i][j].to_integer()).collect())
                .collect(),
            parity: self.parity,
        }
    }

    pub fn determinant(&self) -> i64 {
        let q: Vec<Vec<Q>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
            .collect();
        crate::linalg::det(&q).to_integer()
    }
}

pub fn imat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IMatrix {
    let n = b.len();
    let m = if n == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..m).map(|j| (0..n).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

/// Coset representatives for the parabolic chain `W_0 < W_1 < .. < W_{l-1} = W`.
#[derive(Clone, Debug)]
pub struct CosetChain {
    rank: usize,
    levels: Vec<Vec<WeylElement>>,
}

impl CosetChain {
    pub fn new(rs: &RootSystem) -> Self {
        let n = rs.rank();
        let gens: Vec<WeylElement> = (0..n).map(|i| WeylElement::simple(rs, i)).collect();
        let levels = (0..n)
            .map(|level| {
                let start = Weight::fundamental(n, level).to_ints().unwrap();
                let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
                seen.insert(start.clone(), 0);
                let mut reps = vec![(start, WeylElement::identity(n))];
                let mut head = 0;
                while head < reps.len() {
                    let (mu, c) = reps[head].clone();
                    head += 1;
                    for g in &gens[..=level] {
                        let next = g.act_int(&mu);
                        if !seen.contains_key(&next) {
                            seen.insert(next.clone(), reps.len());
                            reps.push((next, c.then(g)));
                        }
                    }
                }
                reps.into_iter().map(|(_, c)| c).collect()
            })
            .collect();
        CosetChain { rank: n, levels }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn level(&self, i: usize) -> &[WeylElement] {
        &self.levels[i]
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.len() as u128).product()
    }

    /// Element with digits `d`, i.e. `c_{l-1}[d_{l-1}] ∘ .. ∘ c_0[d_0]`.
    pub fn element(&self, digits: &[usize]) -> WeylElement {
        digits
            .iter()
            .enumerate()
            .fold(WeylElement::identity(self.rank), |acc, (lvl, &d)| {
                acc.then(&self.levels[lvl][d])
            })
    }

    /// All digit prefixes of the given depth, in stream order.
    pub fn prefixes(&self, depth: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for lvl in 0..depth.min(self.rank) {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..self.levels[lvl].len()).map(move |d| {
                        let mut q = p.clone();
                        q.push(d);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Smallest prefix depth that yields at least `min_chunks` chunks.
    pub fn chunk_depth(&self, min_chunks: usize) -> usize {
        let mut count = 1usize;
        for (d, l) in self.levels.iter().enumerate() {
            if count >= min_chunks {
                return d;
            }
            count = count.saturating_mul(l.len());
        }
        self.rank
    }

    /// Streams every element of `W` once; the last level varies fastest.
    pub fn stream(&self) -> WeylStream<'_> {
        self.stream_from(&[])
    }

    /// Streams the elements whose leading digits equal `prefix`.
    pub fn stream_from(&self, prefix: &[usize]) -> WeylStream<'_> {
        let n = self.rank;
        let mut digits = prefix.to_vec();
        digits.resize(n, 0);
        let mut partial = Vec::with_capacity(n);
        let mut acc = WeylElement::identity(n);
        for (lvl, &d) in digits.iter().enumerate() {
            acc = acc.then(&self.levels[lvl][d]);
            partial.push(acc.clone());
        }
        WeylStream {
            chain: self,
            fixed: prefix.len(),
            digits,
            partial,
            done: n == 0,
            emitted_identity_rank0: false,
        }
    }
}

/// Lazy enumeration of a Weyl group (or of a prefix block of it).
pub struct WeylStream<'a> {
    chain: &'a CosetChain,
    fixed: usize,
    digits: Vec<usize>,
    partial: Vec<WeylElement>,
    done: bool,
    emitted_identity_rank0: bool,
}

impl Iterator for WeylStream<'_> {
    type Item = WeylElement;

    fn next(&mut self) -> Option<WeylElement> {
        let n = self.chain.rank;
        if n == 0 {
            if self.emitted_identity_rank0 {
                return None;
            }
            self.emitted_identity_rank0 = true;
            return Some(WeylElement::identity(0));
        }
        if self.done {
            return None;
        }
        let out = self.partial[n - 1].clone();
        // advance the mixed-radix counter over the free digits
        let mut lvl = n;
        loop {
            if lvl == self.fixed {
                self.done = true;
                break;
            }
            lvl -= 1;
            self.digits[lvl] += 1;
            if self.digits[lvl] < self.chain.levels[lvl].len() {
                break;
            }
            self.digits[lvl] = 0;
        }
        if !self.done {
            for l in lvl..n {
                let base = if l == 0 {
                    WeylElement::identity(n)
                } else {
                    self.partial[l - 1].clone()
                };
                self.partial[l] = base.then(&self.chain.levels[l][self.digits[l]]);
            }
        }
        Some(out)
    }
}

/// Longest element of the parabolic subgroup generated by the simple reflections in `nodes`.
pub fn longest_element(rs: &RootSystem, nodes: &[usize]) -> WeylElement {
    let n = rs.rank();
    let mut rho: Vec<i64> = vec![0; n];
    for &i in nodes {
        rho[i] = 1;
    }
    let gens: Vec<WeylElement> = (0..n).map(|i| WeylElement::simple(rs, i)).collect();
    let mut w = WeylElement::identity(n);
    // reflect rho_J to the antidominant chamber of W_J
    while let Some(&i) = nodes.iter().find(|&&i| rho[i] > 0) {
        rho = gens[i].act_int(&rho);
        w = w.then(&gens[i]);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn chain(s: &str) -> (RootSystem, CosetChain) {
        let rs = RootSystem::new(s.parse().unwrap());
        let c = CosetChain::new(&rs);
        (rs, c)
    }

    #[test]
    fn a2_stream() {
        let (_, c) = chain("A2");
        let all: Vec<_> = c.stream().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().map(|w| w.parity as i64).sum::<i64>(), 0);
    }

    #[test]
    fn d4_has_192_distinct_elements() {
        let (_, c) = chain("D4");
        let set: HashSet<_> = c.stream().map(|w| w.matrix).collect();
        assert_eq!(set.len(), 192);
    }

    #[test]
    fn e8_orbit_sizes() {
        let (_, c) = chain("E8");
        assert_eq!(c.level_sizes(), vec![2, 2, 3, 10, 16, 27, 56, 240]);
        assert_eq!(c.order(), 696_729_600);
    }

    #[test]
    fn prefix_blocks_partition_the_group() {
        let (_, c) = chain("B3");
        let depth = c.chunk_depth(4);
        let mut set = HashSet::new();
        let mut total = 0;
        for p in c.prefixes(depth) {
            for w in c.stream_from(&p) {
                set.insert(w.matrix);
                total += 1;
            }
        }
        assert_eq!(total, 48);
        assert_eq!(set.len(), 48);
    }

    #[test]
    fn simple_reflection_is_odd_involution() {
        let (rs, _) = chain("C3");
        for i in 0..3 {
            let s = WeylElement::simple(&rs, i);
            assert_eq!(s.parity, -1);
            assert_eq!(s.then(&s), WeylElement::identity(3));
            assert_eq!(s.determinant(), -1);
        }
    }

    #[test]
    fn dot_action_examples() {
        let (rs, _) = chain("A1");
        let s = WeylElement::simple(&rs, 0);
        let zero = Weight::zero(1);
        assert_eq!(WeylElement::identity(1).dot(&rs, &zero), zero);
        assert_eq!(s.dot(&rs, &zero), -&rs.simple_root(0));

        let (rs, _) = chain("A2");
        let w0 = longest_element(&rs, &[0, 1]);
        let rho = rs.rho();
        assert_eq!(w0.dot(&rs, &rho), &w0.act(&(&rho * 2)) - &rho);
        assert_eq!(w0.dot(&rs, &rho), &rho * -3);
    }

    #[test]
    fn longest_element_negates_rho_in_d4() {
        let (rs, _) = chain("D4");
        let w0 = longest_element(&rs, &[0, 1, 2, 3]);
        assert_eq!(w0.act(&rs.rho()), -&rs.rho());
    }
}
