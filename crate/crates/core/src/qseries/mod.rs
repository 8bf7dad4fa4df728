//! q-Pochhammer symbols, weighted q-products, theta functions, the Dedekind
//! eta function and the divisor-sum series. These are the ground-truth
//! evaluators the continued fractions are checked against.

mod eta;
mod product;
mod series;
mod theta;

pub use eta::dedekind_eta;
pub use product::{euler_f, pochhammer, product_form, ProductSpec, ProductTerm, Terms};
pub use series::{
    bilateral_theta, character_fraction_series, log_rstar_coefficient, log_rstar_series,
    m_series, y2_fraction_series_as_printed, y2_log_series, y2_product, OCTIC_WEIGHTS,
    X2_WEIGHTS, Y2_WEIGHTS,
};
pub use theta::{theta2, theta3, theta4, theta4_shift, theta_sum};

pub(crate) use eta::eta_raw;
pub(crate) use product::{euler_f_raw, qpoch_inf};
pub(crate) use theta::{theta4_shift_raw, theta_null, theta_sum_raw, ThetaNull};

use rug::Float;

use crate::error::{Error, Result};

/// `0 ≤ q < 1`.
pub(crate) fn check_nome(op: &'static str, q: &Float) -> Result<()> {
    if q.is_nan() || *q < 0 || *q >= 1 {
        return Err(Error::domain(op, format!("nome {} outside [0, 1)", q.to_f64())));
    }
    Ok(())
}

/// `0 < q < 1`.
pub(crate) fn check_open_nome(op: &'static str, q: &Float) -> Result<()> {
    check_nome(op, q)?;
    if q.is_zero() {
        return Err(Error::domain(op, "nome must be positive"));
    }
    Ok(())
}
