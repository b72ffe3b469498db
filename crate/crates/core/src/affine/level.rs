use num_integer::Integer;

use crate::error::{Error, Result};
use crate::liealg::RootSystem;
use crate::linalg::Q;

/// An admissible level `k = -h^vee + p/q`.
#[derive(Clone, Copy, Debug)]
pub struct AdmissibleLevel<'a> {
    rs: &'a RootSystem,
    p: i64,
    q: i64,
}

impl<'a> AdmissibleLevel<'a> {
    pub fn new(rs: &'a RootSystem, p: i64, q: i64) -> Result<Self> {
        if p < 1 || q < 1 {
            return Err(Error::InvalidLevel(format!("p={p}, q={q} must be positive")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidLevel(format!("gcd(p, q) = gcd({p}, {q}) != 1")));
        }
        let h = rs.dual_coxeter();
        if p < h {
            return Err(Error::InvalidLevel(format!("p={p} is below h^vee={h}")));
        }
        Ok(AdmissibleLevel { rs, p, q })
    }

    pub fn root_system(&self) -> &'a RootSystem {
        self.rs
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn k(&self) -> Q {
        Q::new(self.p, self.q) - self.rs.dual_coxeter()
    }

    pub fn require_simply_laced(&self, pipeline: &str) -> Result<()> {
        if self.rs.cartan_type().is_simply_laced() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{pipeline} pipeline needs a simply-laced type, got {}",
                self.rs.cartan_type()
            )))
        }
    }
}

pub fn make_admissible_level(rs: &RootSystem, p: i64, q: i64) -> Result<AdmissibleLevel<'_>> {
    AdmissibleLevel::new(rs, p, q)
}
