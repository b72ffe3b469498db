use std::collections::{HashMap, VecDeque};
use std::path::Path;

use num_complex::Complex64;

use super::phase_sum::{Buckets, PhaseSum, SumWeight};
use super::principal::{cross_phase, pairwise_sum, PROPORTIONALITY_TOL};
use super::smatrix::{Label, Normalization, Provenance, SMatrix};
use crate::affine::{subregular_labels, AdmissibleLevel, SubregularLabel};
use crate::error::{Error, Result};
use crate::liealg::{CosetChain, RootSystem, Weight, WeylElement};
use crate::linalg::Q;

/// Probe coweight selectors: `<alpha_i, x> = i` (default) or `2i + 1` (alternate), 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Default,
    Alternate,
}

impl Probe {
    pub fn values(self, rank: usize) -> Vec<i64> {
        (1..=rank as i64)
            .map(|i| match self {
                Probe::Default => i,
                Probe::Alternate => 2 * i + 1,
            })
            .collect()
    }
}

/// `sum_{y : y(alpha_*) > 0} eps(y) <y(alpha_*), x>/<alpha_*, x> exp(-2 pi i (p/q) (y(eta), eta'))`
pub fn degenerate_kernel(
    rs: &RootSystem,
    alpha_star: usize,
    probe: &[i64],
    p: i64,
    q: i64,
    eta: &[i64],
    eta2: &[i64],
) -> Result<Complex64> {
    let chain = CosetChain::new(rs);
    let w = SumWeight::Probe { alpha_star, probe: probe.to_vec() };
    Ok(PhaseSum::new(rs, &chain, vec![eta.to_vec()], vec![eta2.to_vec()], p, q, w)?.evaluate()[0][0])
}

/// The kernel at `eta' = 0` is the rational number `sum eps(y) <y(alpha_*), x>/<alpha_*, x>`.
pub fn degenerate_kernel_at_zero(rs: &RootSystem, alpha_star: usize, probe: &[i64]) -> Result<Q> {
    let chain = CosetChain::new(rs);
    let n = rs.rank();
    let w = SumWeight::Probe { alpha_star, probe: probe.to_vec() };
    let b: Buckets = PhaseSum::new(rs, &chain, vec![vec![0; n]], vec![vec![0; n]], 0, 1, w)?.buckets();
    Ok(Q::new(b.data.iter().sum(), b.normalizer))
}

/// A Weyl element `y` with `y(beta) = alpha_*`, by breadth-first search over the root orbit.
pub fn rotation_to(rs: &RootSystem, beta: &Weight, alpha_star: usize) -> Option<WeylElement> {
    let n = rs.rank();
    let target = rs.simple_root(alpha_star).to_ints()?;
    let start = beta.to_ints()?;
    let gens: Vec<WeylElement> = (0..n).map(|i| WeylElement::simple(rs, i)).collect();
    let mut seen: HashMap<Vec<i64>, WeylElement> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone(), WeylElement::identity(n));
    queue.push_back(start);
    while let Some(r) = queue.pop_front() {
        let y = seen[&r].clone();
        if r == target {
            return Some(y);
        }
        for g in &gens {
            let next = g.act_int(&r);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), y.then(g));
                queue.push_back(next);
            }
        }
    }
    None
}

/// The wall root: `alpha_i` for a finite wall, `-theta` for the affine wall.
pub fn wall_root(rs: &RootSystem, wall: usize) -> Weight {
    if wall < rs.rank() {
        rs.simple_root(wall)
    } else {
        -&rs.highest_root().weight
    }
}

/// Conservative rotation of a label: `(eps(y), y(eta))` with `y(wall root) = alpha_*`.
pub fn conservative_rotation(rs: &RootSystem, label: &SubregularLabel, alpha_star: usize) -> (i64, Vec<i64>) {
    let y = rotation_to(rs, &wall_root(rs, label.wall), alpha_star).expect("simply-laced roots form one orbit");
    (y.parity as i64, y.act_int(&label.eta))
}

/// Options for the subregular construction.
#[derive(Clone, Debug)]
pub struct SubregularOptions<'p> {
    pub probe: Probe,
    /// Resumable checkpoint file for the kernel sum.
    pub checkpoint: Option<&'p Path>,
    pub min_chunks: usize,
    pub batch: usize,
}

impl Default for SubregularOptions<'_> {
    fn default() -> Self {
        SubregularOptions { probe: Probe::Default, checkpoint: None, min_chunks: 64, batch: 64 }
    }
}

/// Raw factors of the subregular S-matrix.
#[derive(Clone, Debug)]
pub struct SubregularFactors {
    pub signs: Vec<i64>,
    pub kernel: Vec<Vec<Complex64>>,
    pub nu_factor: Vec<Vec<Complex64>>,
    pub cross: Vec<Vec<Complex64>>,
}

impl SubregularFactors {
    pub fn raw(&self) -> Vec<Vec<Complex64>> {
        let n = self.signs.len();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (self.signs[a] * self.signs[b]) as f64
                            * self.kernel[a][b]
                            * self.nu_factor[a][b]
                            * self.cross[a][b]
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn subregular_factors(
    lv: &AdmissibleLevel<'_>,
    alpha_star: usize,
    labels: &[SubregularLabel],
    opts: &SubregularOptions<'_>,
    progress: impl FnMut(usize, usize),
) -> Result<SubregularFactors> {
    let rs = lv.root_system();
    let chain = CosetChain::new(rs);
    let (p, q) = (lv.p(), lv.q());
    let rotated: Vec<(i64, Vec<i64>)> = labels.iter().map(|l| conservative_rotation(rs, l, alpha_star)).collect();
    let weight = SumWeight::Probe { alpha_star, probe: opts.probe.values(rs.rank()) };
    let etas: Vec<Vec<i64>> = rotated.iter().map(|(_, e)| e.clone()).collect();
    let kernel = match opts.checkpoint {
        None => pairwise_sum(rs, &chain, &etas, p, q, weight)?,
        Some(path) => {
            let mut distinct = etas.clone();
            distinct.sort();
            distinct.dedup();
            let pos: Vec<usize> = etas.iter().map(|x| distinct.binary_search(x).unwrap()).collect();
            let sum = PhaseSum::new(rs, &chain, distinct.clone(), distinct, p, q, weight)?;
            let table = sum.buckets_checkpointed(path, opts.min_chunks, opts.batch, progress)?.evaluate();
            pos.iter().map(|&a| pos.iter().map(|&b| table[a][b]).collect()).collect()
        }
    };
    let nus: Vec<Vec<i64>> = labels.iter().map(|l| l.nu.clone()).collect();
    let label_etas: Vec<Vec<i64>> = labels.iter().map(|l| l.eta.clone()).collect();
    Ok(SubregularFactors {
        signs: rotated.iter().map(|(s, _)| *s).collect(),
        kernel,
        nu_factor: pairwise_sum(rs, &chain, &nus, q, p, SumWeight::Sign)?,
        cross: cross_phase(rs, &nus, &label_etas),
    })
}

/// Subregular S-matrix, normalized to unitary.
pub fn subregular_s(lv: &AdmissibleLevel<'_>, alpha_star: usize, probe: Probe) -> Result<SMatrix> {
    let opts = SubregularOptions { probe, ..Default::default() };
    subregular_s_with(lv, alpha_star, &opts, |_, _| {})
}

pub fn subregular_s_with(
    lv: &AdmissibleLevel<'_>,
    alpha_star: usize,
    opts: &SubregularOptions<'_>,
    progress: impl FnMut(usize, usize),
) -> Result<SMatrix> {
    let rs = lv.root_system();
    let labels = subregular_labels(lv, alpha_star)?;
    if opts.probe.values(rs.rank())[alpha_star] == 0 {
        return Err(Error::DegenerateProbe);
    }
    let factors = subregular_factors(lv, alpha_star, &labels, opts, progress)?;
    let mut notes = vec!["raw entry = eps(y_a) eps(y_b) * kernel(y_a eta_a, y_b eta_b) * nu_factor * cross_phase".to_string()];
    if labels.iter().all(|l| l.nu == labels[0].nu) {
        notes.push("nu factor is a single constant term".into());
    }
    SMatrix {
        labels: labels.into_iter().map(Label::from).collect(),
        entries: factors.raw(),
        normalization: Normalization::Raw,
        provenance: Provenance {
            constructor: "subregular_s".into(),
            cartan_type: rs.cartan_type().to_string(),
            params: vec![
                ("p".into(), lv.p().to_string()),
                ("q".into(), lv.q().to_string()),
                ("alpha_star".into(), (alpha_star + 1).to_string()),
                ("probe".into(), format!("{:?}", opts.probe)),
            ],
            notes,
        },
    }
    .normalize(PROPORTIONALITY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::make_admissible_level;
    use crate::liealg::root_system;

    #[test]
    fn rotation_maps_wall_root_to_alpha_star() {
        let rs = root_system("D5").unwrap();
        for wall in 0..=5 {
            let beta = wall_root(&rs, wall);
            let y = rotation_to(&rs, &beta, 2).unwrap();
            assert_eq!(y.act(&beta), rs.simple_root(2));
        }
    }

    #[test]
    fn kernel_at_zero_is_rational_and_probe_independent() {
        let rs = root_system("A3").unwrap();
        let a = degenerate_kernel_at_zero(&rs, 1, &Probe::Default.values(3)).unwrap();
        let b = degenerate_kernel_at_zero(&rs, 1, &Probe::Alternate.values(3)).unwrap();
        assert_eq!(a, b);
        let z = degenerate_kernel(&rs, 1, &[1, 2, 3], 5, 3, &[1, 0, 1], &[0, 0, 0]).unwrap();
        assert!((z - *a.numer() as f64 / *a.denom() as f64).norm() < 1e-12);
    }

    #[test]
    fn kernel_is_probe_independent_on_rotated_labels() {
        for (t, p, q) in [("A3", 5, 3), ("D4", 7, 5)] {
            let rs = root_system(t).unwrap();
            let star = crate::affine::default_alpha_star(&rs).unwrap();
            let lv = make_admissible_level(&rs, p, q).unwrap();
            let labels = subregular_labels(&lv, star).unwrap();
            let etas: Vec<Vec<i64>> = labels.iter().map(|l| conservative_rotation(&rs, l, star).1).collect();
            let n = rs.rank();
            for a in etas.iter().take(4) {
                for b in etas.iter().take(4) {
                    let k1 = degenerate_kernel(&rs, star, &Probe::Default.values(n), p, q, a, b).unwrap();
                    let k2 = degenerate_kernel(&rs, star, &Probe::Alternate.values(n), p, q, a, b).unwrap();
                    let scaled: Vec<i64> = Probe::Default.values(n).iter().map(|x| 3 * x).collect();
                    let k3 = degenerate_kernel(&rs, star, &scaled, p, q, a, b).unwrap();
                    assert!((k1 - k2).norm() < 1e-9, "{t}");
                    assert!((k1 - k3).norm() < 1e-12, "{t}");
                }
            }
        }
    }

    #[test]
    fn d6_at_eleven_eighths_is_unitary() {
        let rs = root_system("D6").unwrap();
        let lv = make_admissible_level(&rs, 11, 8).unwrap();
        let s = subregular_s(&lv, 3, Probe::Default).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.unitarity_residual() < 1e-9);
        assert!(s.symmetry_residual() < 1e-9);
    }
}
