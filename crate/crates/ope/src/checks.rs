use crate::algebra::Algebra;
use crate::error::Result;
use crate::field::{Field, LambdaPoly, Mono};
use crate::scalar::Scalar;

/// Result of matching `[L_lambda L]` against `∂L + 2 lambda L + c/12 lambda^3`.
#[derive(Clone, Debug)]
pub enum VirasoroOutcome {
    Virasoro { central_charge: Scalar },
    /// Nonzero `lambda^j` components of the difference from the closest Virasoro shape.
    Mismatch { residuals: Vec<(usize, Field)> },
}

impl VirasoroOutcome {
    pub fn central_charge(&self) -> Option<&Scalar> {
        match self {
            VirasoroOutcome::Virasoro { central_charge } => Some(central_charge),
            VirasoroOutcome::Mismatch { .. } => None,
        }
    }
}

pub fn virasoro_test(alg: &Algebra, l: &Field) -> Result<VirasoroOutcome> {
    let br = alg.bracket(l, l)?;
    let c12 = br.coeff(3).coeff(&Mono::One);
    let mut expected = LambdaPoly::constant(alg.derivative(l)?);
    expected.add_at(1, &l.scale(&Scalar::int(2)));
    expected.add_at(3, &Field::vacuum(c12.clone()));
    let diff = br.add(&expected.scale(&Scalar::int(-1)));
    if diff.is_zero() {
        return Ok(VirasoroOutcome::Virasoro { central_charge: &c12 * &Scalar::int(12) });
    }
    let residuals = diff
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_zero())
        .map(|(j, f)| (j, f.clone()))
        .collect();
    Ok(VirasoroOutcome::Mismatch { residuals })
}

#[derive(Clone, Debug)]
pub struct NilpotencyReport {
    pub nilpotent: bool,
    pub bracket: LambdaPoly,
}

/// `[Q_lambda Q] = 0` identically in `lambda` and the parameters.
pub fn brst_nilpotency_abelian(alg: &Algebra, q: &Field) -> Result<NilpotencyReport> {
    let bracket = alg.bracket(q, q)?;
    Ok(NilpotencyReport { nilpotent: bracket.is_zero(), bracket })
}
