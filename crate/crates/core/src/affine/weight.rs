use std::ops::{Add, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{RootSystem, Weight};
use crate::linalg::{inverse, vec_mat, QMatrix, Q};

/// `finite + level * Lambda_0 + delta_coeff * delta`
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineWeight {
    pub finite: Weight,
    pub level: Q,
    pub delta: Q,
}

impl AffineWeight {
    pub fn new(finite: Weight, level: Q, delta: Q) -> Self {
        AffineWeight { finite, level, delta }
    }

    pub fn lambda0(rank: usize) -> Self {
        AffineWeight::new(Weight::zero(rank), Q::one(), Q::zero())
    }

    pub fn delta(rank: usize) -> Self {
        AffineWeight::new(Weight::zero(rank), Q::zero(), Q::one())
    }

    pub fn finite_part(w: Weight) -> Self {
        AffineWeight::new(w, Q::zero(), Q::zero())
    }

    /// `rho_hat = h^vee Lambda_0 + rho`
    pub fn affine_rho(rs: &RootSystem) -> Self {
        AffineWeight::new(rs.rho(), Q::from_integer(rs.dual_coxeter()), Q::zero())
    }

    /// Pairing with the central element `K`.
    pub fn pairing_k(&self) -> Q {
        self.level
    }
}

impl Add for &AffineWeight {
    type Output = AffineWeight;
    fn add(self, o: &AffineWeight) -> AffineWeight {
        AffineWeight::new(&self.finite + &o.finite, self.level + o.level, self.delta + o.delta)
    }
}

impl Sub for &AffineWeight {
    type Output = AffineWeight;
    fn sub(self, o: &AffineWeight) -> AffineWeight {
        AffineWeight::new(&self.finite - &o.finite, self.level - o.level, self.delta - o.delta)
    }
}

/// Coordinates of `alpha` in the simple coroot basis, if it lies in `Q^vee`.
pub fn coroot_coords(rs: &RootSystem, alpha: &Weight) -> Option<Vec<i64>> {
    let m: QMatrix = (0..rs.rank()).map(|i| rs.simple_coroot(i).0).collect();
    let inv = inverse(&m).expect("coroots are independent");
    let c = vec_mat(&alpha.0, &inv);
    c.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// `t_alpha(lambda) = lambda + lambda(K) alpha - ((alpha, lambda) + |alpha|^2/2 lambda(K)) delta`
pub fn affine_translation(rs: &RootSystem, alpha: &Weight, lambda: &AffineWeight) -> Result<AffineWeight> {
    rs.check_rank(alpha)?;
    rs.check_rank(&lambda.finite)?;
    if coroot_coords(rs, alpha).is_none() {
        return Err(Error::NotInCorootLattice(alpha.to_string()));
    }
    Ok(translate_unchecked(rs, alpha, lambda))
}

pub(crate) fn translate_unchecked(rs: &RootSystem, alpha: &Weight, lambda: &AffineWeight) -> AffineWeight {
    let k = lambda.level;
    let finite = &lambda.finite + &alpha.scale(k);
    let shift = rs.ip(alpha, &lambda.finite) + rs.ip(alpha, alpha) / 2 * k;
    AffineWeight::new(finite, k, lambda.delta - shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::root_system;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let rs = root_system("A1").unwrap();
        let l0 = AffineWeight::lambda0(1);
        let zero = Weight::zero(1);
        assert_eq!(affine_translation(&rs, &zero, &l0).unwrap(), l0);
        let a = rs.simple_coroot(0);
        let t = affine_translation(&rs, &a, &l0).unwrap();
        assert_eq!(t, AffineWeight::new(rs.simple_root(0), Q::one(), -Q::one()));
        let lam = AffineWeight::finite_part(Weight::from_ints(&[3]));
        let t = affine_translation(&rs, &a, &lam).unwrap();
        assert_eq!(t.finite, lam.finite);
        assert_eq!(t.delta, -rs.ip(&a, &lam.finite));
    }

    #[test]
    fn rejects_weights_outside_coroot_lattice() {
        let rs = root_system("A1").unwrap();
        let l0 = AffineWeight::lambda0(1);
        assert!(affine_translation(&rs, &Weight::from_ints(&[1]), &l0).is_err());
    }

    proptest! {
        #[test]
        fn translations_compose(a in prop::collection::vec(-3i64..=3, 3),
                                b in prop::collection::vec(-3i64..=3, 3),
                                lam in prop::collection::vec(-5i64..=5, 3),
                                lev in -4i64..=4, del in -4i64..=4) {
            let rs = root_system("B3").unwrap();
            let to_coroot = |c: &[i64]| (0..3).fold(Weight::zero(3), |acc, i| &acc + &rs.simple_coroot(i).scale(Q::from_integer(c[i])));
            let (ta, tb) = (to_coroot(&a), to_coroot(&b));
            let l = AffineWeight::new(Weight::from_ints(&lam), Q::from_integer(lev), Q::from_integer(del));
            let lhs = affine_translation(&rs, &ta, &affine_translation(&rs, &tb, &l).unwrap()).unwrap();
            let rhs = affine_translation(&rs, &(&ta + &tb), &l).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
