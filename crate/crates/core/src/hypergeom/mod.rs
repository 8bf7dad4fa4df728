//! Gauss and Appell hypergeometric series, the antiderivative of `η(iτ)⁴`,
//! and the integral identities checked against quadrature.

mod glasser;
mod series;

pub use glasser::{
    eta4_antiderivative, eta4_bracket, eta4_integrand, eta4_inverted_integrand, glasser10_rhs,
    glasser8_integrand, glasser8_rhs, glasser9_integrand, glasser9_rhs, glasser_argument,
    glasser_suite, recover_parameter, transformation_sides, GlasserIntegrals, Recovery,
    C_CANDIDATES,
};
pub use series::{appell_f1, gauss_2f1};
