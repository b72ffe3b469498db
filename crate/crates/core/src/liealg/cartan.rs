use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det, to_q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A finite Cartan type with Bourbaki node numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let bad = |reason| Error::InvalidCartanType {
            family: family.letter(),
            rank,
            reason,
        };
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(bad(match family {
                Family::A => "rank must be at least 1",
                Family::B | Family::C => "rank must be at least 2",
                Family::D => "rank must be at least 3",
                Family::E => "rank must be 6, 7 or 8",
                Family::F => "rank must be 4",
                Family::G => "rank must be 2",
            }));
        }
        Ok(CartanType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Cartan matrix with `a[i][j] = <alpha_i^vee, alpha_j>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => (1..n).for_each(|i| link(i, i + 1)),
            Family::D => {
                (1..n - 1).for_each(|i| link(i, i + 1));
                link(n - 2, n);
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 2] = 0;
            }
            Family::E => {
                for (i, j) in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)] {
                    if j <= n {
                        link(i, j);
                    }
                }
            }
            Family::F => (1..4).for_each(|i| link(i, i + 1)),
            Family::G => link(1, 2),
        }
        match self.family {
            // alpha_n short
            Family::B => a[n - 1][n - 2] = -2,
            // alpha_n long
            Family::C => a[n - 2][n - 1] = -2,
            // alpha_1, alpha_2 long
            Family::F => a[2][1] = -2,
            // alpha_1 short
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }

    /// Checks the leading principal minors of the symmetrized Cartan matrix.
    pub fn is_finite_type(&self) -> bool {
        let a = to_q(&self.cartan_matrix());
        (1..=self.rank).all(|k| {
            let minor: Vec<Vec<_>> = a[..k].iter().map(|r| r[..k].to_vec()).collect();
            det(&minor) > 0.into()
        })
    }

    pub fn dimension(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 2),
            Family::B | Family::C => n * (2 * n + 1),
            Family::D => n * (2 * n - 1),
            Family::E => [78, 133, 248][n - 6],
            Family::F => 52,
            Family::G => 14,
        }
    }

    /// Classical order of the Weyl group.
    pub fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |m: u128| (1..=m).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => [51_840, 2_903_040, 696_729_600][self.rank - 6],
            Family::F => 1152,
            Family::G => 12,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().map(|c| c.to_ascii_uppercase());
        let family = match letter {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => {
                return Err(Error::InvalidCartanType {
                    family: letter.unwrap_or('?'),
                    rank: chars.as_str().parse().unwrap_or(0),
                    reason: "unknown family",
                })
            }
        };
        let rank = chars.as_str().parse::<usize>().map_err(|_| Error::InvalidCartanType {
            family: family.letter(),
            rank: 0,
            reason: "rank is not a positive integer",
        })?;
        CartanType::new(family, rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_constraints() {
        assert!(CartanType::new(Family::E, 5).is_err());
        assert!(CartanType::new(Family::D, 2).is_err());
        assert!(CartanType::new(Family::G, 3).is_err());
        assert!(CartanType::new(Family::B, 1).is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert_eq!("d6".parse::<CartanType>().unwrap().to_string(), "D6");
    }

    #[test]
    fn all_small_types_are_finite() {
        for fam in [Family::A, Family::B, Family::C, Family::D] {
            for n in 1..=8 {
                if let Ok(t) = CartanType::new(fam, n) {
                    assert!(t.is_finite_type(), "{t}");
                }
            }
        }
        for t in ["E6", "E7", "E8", "F4", "G2"] {
            assert!(t.parse::<CartanType>().unwrap().is_finite_type(), "{t}");
        }
    }

    #[test]
    fn non_simply_laced_conventions() {
        let b2 = CartanType::new(Family::B, 2).unwrap().cartan_matrix();
        assert_eq!(b2, vec![vec![2, -1], vec![-2, 2]]);
        let g2 = CartanType::new(Family::G, 2).unwrap().cartan_matrix();
        assert_eq!(g2, vec![vec![2, -3], vec![-1, 2]]);
    }
}
