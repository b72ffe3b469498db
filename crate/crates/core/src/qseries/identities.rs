use num_traits::One;

use super::series::{eta_like_product, Coeff, QSeries};
use super::two_var::{ProductForm, TwoVarCharacter};
use crate::error::Result;
use crate::liealg::Weight;

fn y(k: i64) -> Weight {
    Weight::from_ints(&[k])
}

/// Outcome of the Jacobi-type triple product comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleProductReport {
    pub order: i64,
    pub equal: bool,
    /// `(q-power, y-power, lhs, rhs)` of the lowest mismatch.
    pub first_mismatch: Option<(i64, i64, Coeff, Coeff)>,
}

/// Compares `prod_{n >= 1}(1 - y^{-1} q^{n-1})(1 - y q^n) sum_m y^m q^{m^2}` with
/// `sum_n y^{3n} q^{3n^2+n} - sum_n y^{3n-1} q^{3n^2-n}` through `q^order`.
///
/// `drop_factor = Some(n)` omits `(1 - y^{-1} q^{n-1})` from the product.
pub fn triple_product_check(order: i64, drop_factor: Option<i64>) -> Result<TripleProductReport> {
    let mut pf = ProductForm::new();
    for n in 1..=order + 1 {
        if drop_factor != Some(n) {
            pf.push(&[-1], n - 1, 1);
        }
        pf.push(&[1], n, 1);
    }
    let mut theta = TwoVarCharacter::zero(1, 1, order);
    let mut m = 0i64;
    while m * m <= order {
        for s in if m == 0 { vec![0] } else { vec![m, -m] } {
            theta = &theta + &TwoVarCharacter::monomial(y(s), QSeries::monomial(Coeff::one(), m * m, 1, order));
        }
        m += 1;
    }
    let lhs = &pf.expand(1, order)? * &theta;

    let mut rhs = TwoVarCharacter::zero(1, 1, order);
    let bound = (order as f64 / 3.0).sqrt() as i64 + 2;
    for n in -bound..=bound {
        let plus = 3 * n * n + n;
        if plus <= order {
            rhs = &rhs + &TwoVarCharacter::monomial(y(3 * n), QSeries::monomial(Coeff::one(), plus, 1, order));
        }
        let minus = 3 * n * n - n;
        if minus <= order {
            rhs = &rhs + &TwoVarCharacter::monomial(y(3 * n - 1), QSeries::monomial(-Coeff::one(), minus, 1, order));
        }
    }
    let first_mismatch = lhs.first_difference(&rhs).map(|(mu, e, _)| {
        let ypow = mu.0[0].to_integer();
        (e, ypow, lhs.coeff(&mu, e).unwrap_or_default(), rhs.coeff(&mu, e).unwrap_or_default())
    });
    Ok(TripleProductReport { order, equal: first_mismatch.is_none(), first_mismatch })
}

/// `chi_V * chi_F` for the principal sl2 BRST complex, in two variables and at `y = 1`.
#[derive(Clone, Debug)]
pub struct BrstCharacter {
    pub two_var: TwoVarCharacter,
    pub closed_form: TwoVarCharacter,
    pub matches_closed_form: bool,
    pub y1: QSeries,
    pub matches_virasoro: bool,
}

/// Factored `chi_V = prod 1/((1 - y^{-1} q^{n-1})(1 - q^n)(1 - y q^{n+1}))` and
/// `chi_F = prod (1 - y^{-1} q^{n-1})(1 - y q^n)` through `q^order`.
pub fn brst_factors(order: i64) -> (ProductForm, ProductForm) {
    let mut v = ProductForm::new();
    let mut f = ProductForm::new();
    for n in 1..=order + 1 {
        v.push(&[-1], n - 1, -1);
        v.push(&[0], n, -1);
        v.push(&[1], n + 1, -1);
        f.push(&[-1], n - 1, 1);
        f.push(&[1], n, 1);
    }
    (v, f)
}

/// `(1 - y q) prod_{n >= 1} (1 - q^n)^{-1}`
pub fn brst_closed_form(order: i64) -> Result<TwoVarCharacter> {
    let mut pf = ProductForm::new().factor(&[1], 1, 1);
    for n in 1..=order {
        pf.push(&[0], n, -1);
    }
    pf.expand(1, order)
}

pub fn brst_character(order: i64) -> Result<BrstCharacter> {
    let (v, f) = brst_factors(order);
    let two_var = (&v * &f).expand(1, order)?;
    let closed_form = brst_closed_form(order)?;
    let y1 = two_var.specialize_y1();
    let vir = eta_like_product(&[(2, -1, 1)], order);
    Ok(BrstCharacter {
        matches_closed_form: two_var.agrees_with(&closed_form),
        matches_virasoro: y1.agrees_with(&vir),
        two_var,
        closed_form,
        y1,
    })
}
