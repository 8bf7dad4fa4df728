//! Tanh-sinh (double-exponential) quadrature.
//!
//! The substitution `x = tanh(π/2 · sinh t)` maps `[a, b]` onto the real line
//! and makes the transformed integrand decay double exponentially, which
//! absorbs algebraic endpoint singularities such as `q^{-5/6}` at 0.
//!
//! Abscissae are formed from the distance to the nearest endpoint,
//! `d = 1 − tanh(u) = 2 / (1 + e^{2u})`, so nodes near `a` keep full relative
//! precision however close they get. A node whose image rounds onto an
//! endpoint is skipped.

use rug::Float;

use super::precision::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// Default number of step halvings before giving up.
pub const DEFAULT_LEVEL_CAP: u32 = 12;

/// Transformed-variable cutoff; `d` is below `e^{-10^5}` there.
const T_CAP: f64 = 12.0;

/// Minimum level before two successive estimates may be accepted.
const MIN_LEVEL: u32 = 3;

pub fn integrate<F>(f: F, a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<BigReal>
where
    F: Fn(&Float, &PrecisionContext) -> Result<BigReal>,
{
    integrate_with_cap(f, a, b, ctx, DEFAULT_LEVEL_CAP)
}

pub fn integrate_with_cap<F>(
    f: F,
    a: &Float,
    b: &Float,
    ctx: &PrecisionContext,
    level_cap: u32,
) -> Result<BigReal>
where
    F: Fn(&Float, &PrecisionContext) -> Result<BigReal>,
{
    if !(a < b) {
        return Err(Error::domain("integrate", "lower limit must be below upper limit"));
    }
    let p = ctx.internal_bits();
    let inner = ctx.elevated();
    let eval = |x: &Float| -> Result<Float> { Ok(f(x, &inner)?.into_float()) };

    let a = Float::with_val(p, a);
    let b = Float::with_val(p, b);
    let half = Float::with_val(p, &b - &a) / 2u32;
    let mid = Float::with_val(p, &a + &half);
    let half_pi = ctx.pi() / 2u32;
    let eps = ctx.negligible() >> 4;

    // Σ w·(f(left) + f(right)) over every node visited so far.
    let mut sum = Float::with_val(p, eval(&mid)? * &half_pi);

    let node = |t: &Float| -> (Float, Float) {
        let u = Float::with_val(p, t.sinh_ref()) * &half_pi;
        let e2u = Float::with_val(p, &u * 2u32).exp();
        let d = Float::with_val(p, 2u32) / (e2u + 1u32);
        let cosh_u = u.cosh();
        let w = Float::with_val(p, t.cosh_ref()) * &half_pi / cosh_u.square();
        (d, w)
    };

    let pair = |d: &Float, w: &Float| -> Result<Float> {
        let offset = Float::with_val(p, &half * d);
        let left = Float::with_val(p, &a + &offset);
        let right = Float::with_val(p, &b - &offset);
        let mut s = Float::with_val(p, 0);
        if left != a {
            s += eval(&left)?;
        }
        if right != b {
            s += eval(&right)?;
        }
        Ok(s * w)
    };

    // Level 0: walk outward with unit step until the pairs are negligible.
    let mut t_max = 0u32;
    let mut quiet = 0;
    for k in 1.. {
        let t = Float::with_val(p, k);
        if k as f64 > T_CAP {
            break;
        }
        let (d, w) = node(&t);
        let contribution = pair(&d, &w)?;
        let scale = Float::with_val(p, sum.abs_ref()).max(&Float::with_val(p, 1));
        if Float::with_val(p, contribution.abs_ref()) < Float::with_val(p, &scale * &eps) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        sum += contribution;
        t_max = k;
        if quiet >= 2 {
            break;
        }
    }
    let mut estimate = Float::with_val(p, &sum * &half);

    for level in 1..=level_cap {
        let step = Float::with_val(p, 1) >> level;
        let count = (t_max as u64) << level;
        for k in (1..=count).step_by(2) {
            let t = Float::with_val(p, &step * k);
            let (d, w) = node(&t);
            sum += pair(&d, &w)?;
        }
        let next = Float::with_val(p, &sum * &half) * &step;
        let diff = Float::with_val(p, &next - &estimate).abs();
        estimate = next;
        if level >= MIN_LEVEL {
            let scale = Float::with_val(p, estimate.abs_ref()).max(&Float::with_val(p, 1));
            if diff < ctx.target_tolerance() * scale {
                return Ok(ctx.finish(estimate));
            }
        }
        if level == level_cap {
            return Err(Error::Divergence {
                levels: level_cap,
                difference: diff.to_f64().to_string(),
            });
        }
    }
    Err(Error::Divergence {
        levels: level_cap,
        difference: "no levels evaluated".into(),
    })
}
