use rug::Float;

use super::precision::{BigReal, PrecisionContext};
use crate::error::Result;

/// Central difference `(f(x+h) − f(x−h)) / 2h` with `h = 2^{-p/3}`.
///
/// `f` is evaluated at three times the working precision, so cancellation
/// is negligible and the result carries roughly `2p/3` correct bits. This is
/// the independent cross-check for the analytic derivatives in `modular`.
pub fn num_derivative<F>(f: F, x: &Float, ctx: &PrecisionContext) -> Result<BigReal>
where
    F: Fn(&Float, &PrecisionContext) -> Result<BigReal>,
{
    let inner = ctx.scaled(3);
    let bits = inner.internal_bits();
    let h = Float::with_val(bits, 1) >> (ctx.working_bits() / 3);
    let x = Float::with_val(bits, x);
    let plus = f(&Float::with_val(bits, &x + &h), &inner)?;
    let minus = f(&Float::with_val(bits, &x - &h), &inner)?;
    let diff = Float::with_val(bits, plus.as_float() - minus.as_float());
    let slope = diff / (h * 2u32);
    Ok(ctx.finish(slope))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_square() {
        let ctx = PrecisionContext::new(128).unwrap();
        let one = ctx.float(1);
        let d = num_derivative(|x, c| Ok(c.finish(c.float(x))), &one, &ctx).unwrap();
        assert!(d.approx_eq(&ctx.float(1), &ctx.pow2(-80)));

        let three = ctx.float(3);
        let d = num_derivative(|x, c| Ok(c.finish(c.float(x * x))), &three, &ctx).unwrap();
        assert!(d.approx_eq(&ctx.float(6), &ctx.pow2(-80)));
    }

    #[test]
    fn exp_derivative_has_two_thirds_precision() {
        let ctx = PrecisionContext::new(192).unwrap();
        let x = ctx.float(0.75);
        let d = num_derivative(|x, c| Ok(c.finish(c.float(x).exp())), &x, &ctx).unwrap();
        let exact = ctx.float(&x).exp();
        assert!(d.approx_eq(&exact, &ctx.pow2(-120)));
    }
}
