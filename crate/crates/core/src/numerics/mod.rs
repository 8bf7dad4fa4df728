//! Precision policy, guarded evaluation, numerical differentiation,
//! quadrature and the character / divisor-sum kernels used everywhere else.

mod arith;
mod diff;
mod precision;
mod quad;

pub use arith::{character, divisor_sum_chi, CharModulus};
pub use diff::num_derivative;
pub use precision::{to_decimal, BigReal, PrecisionContext};
pub use quad::{integrate, integrate_with_cap, DEFAULT_LEVEL_CAP};
