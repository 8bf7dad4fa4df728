use rug::Float;

use super::product::{qpoch_inf, ETA_DIRECT_MIN};
use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext};

/// Dedekind eta on the imaginary axis, `η(it) = e^{-πt/12} (e^{-2πt}; e^{-2πt})_∞`.
///
/// For `t < 1/8` the product converges slowly and the value is taken from
/// `η(it) = η(i/t) / √t` instead.
pub fn dedekind_eta(t: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(eta_raw(t, ctx)?))
}

pub(crate) fn eta_raw(t: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *t <= 0 {
        return Err(Error::domain("dedekind_eta", "argument must be positive"));
    }
    let p = ctx.internal_bits();
    if *t < ETA_DIRECT_MIN {
        let inv = Float::with_val(p, 1) / t;
        let root = Float::with_val(p, t.sqrt_ref());
        return Ok(eta_direct(&inv, ctx)? / root);
    }
    eta_direct(t, ctx)
}

/// The defining product, without any modular transformation.
pub(crate) fn eta_direct(t: &Float, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.internal_bits();
    let pi_t = Float::with_val(p, t * ctx.pi());
    let nome = Float::with_val(p, &pi_t * -2i32).exp();
    let prefactor = (pi_t / -12i32).exp();
    if nome.is_zero() {
        return Ok(prefactor);
    }
    Ok(prefactor * qpoch_inf(&nome, &nome, ctx)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn eta_at_i_is_gamma_quarter_value() {
        let ctx = PrecisionContext::new(256).unwrap();
        let v = dedekind_eta(&ctx.float(1), &ctx).unwrap();
        // Γ(1/4) / (2 π^{3/4})
        let g = ctx.float(0.25).gamma();
        let expected = g / (ctx.pi().pow(0.75f64) * 2u32);
        assert!(v.approx_eq(&expected, &ctx.target_tolerance()));
    }

    #[test]
    fn functional_equation_from_direct_products() {
        let ctx = PrecisionContext::new(256).unwrap();
        for t in [0.5f64, 2.0, 5.0] {
            let t = ctx.float(t);
            let inv = ctx.float(1) / &t;
            let lhs = eta_direct(&inv, &ctx).unwrap();
            let rhs = eta_direct(&t, &ctx).unwrap() * t.sqrt();
            let lhs = BigReal::new(lhs);
            assert!(lhs.approx_eq(&rhs, &ctx.target_tolerance()));
        }
    }

    #[test]
    fn transformed_branch_agrees_with_direct_product() {
        let ctx = PrecisionContext::new(192).unwrap();
        let t = ctx.float(0.1);
        let via_transform = dedekind_eta(&t, &ctx).unwrap();
        let direct = eta_direct(&t, &ctx).unwrap();
        assert!(via_transform.approx_eq(&direct, &ctx.target_tolerance()));
    }

    #[test]
    fn rejects_non_positive_argument() {
        let ctx = PrecisionContext::new(64).unwrap();
        assert!(matches!(dedekind_eta(&ctx.float(0), &ctx), Err(Error::Domain { .. })));
    }
}
