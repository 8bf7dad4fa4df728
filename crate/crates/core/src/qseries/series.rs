use rug::ops::Pow;
use rug::{Float, Rational};

use super::check_nome;
use crate::error::{Error, Result};
use crate::numerics::{character, divisor_sum_chi, BigReal, CharModulus, PrecisionContext};

/// Coefficient of `x^n` in `log R*(x)`: `−Σ_{d|n} X2(d) d / n`.
pub fn log_rstar_coefficient(n: u64) -> Rational {
    Rational::from((-divisor_sum_chi(n, CharModulus::Five), n as i64))
}

/// `−Σ_{n≥1} (x^n / n) Σ_{d|n} χ(d) d`.
///
/// `|Σ_{d|n} χ(d) d| ≤ σ(n) ≤ n(1 + ln n)`, which gives the truncation bound.
fn character_log_series(x: &Float, modulus: CharModulus, ctx: &PrecisionContext) -> Float {
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let one_minus = Float::with_val(p, 1) - x;
    let mut power = Float::with_val(p, 1);
    let mut sum = Float::with_val(p, 0);
    let mut n = 1u64;
    loop {
        power *= x;
        if power.is_zero() {
            break;
        }
        let s = divisor_sum_chi(n, modulus);
        if s != 0 {
            sum -= Float::with_val(p, &power * s) / n;
        }
        let bound = Float::with_val(p, &power * (2.0 + (n as f64).ln())) / &one_minus;
        if bound < eps {
            break;
        }
        n += 1;
    }
    sum
}

/// `log R*(x)` from its divisor-sum expansion.
pub fn log_rstar_series(x: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    check_nome("log_rstar_series", x)?;
    Ok(ctx.finish(character_log_series(x, CharModulus::Five, ctx)))
}

fn step_nome(op: &'static str, x_step: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *x_step <= 0 {
        return Err(Error::domain(op, "step must be positive"));
    }
    Ok(Float::with_val(ctx.internal_bits(), -x_step).exp())
}

/// The mod-3 analogue `exp(−Σ (e^{−nx}/n) Σ_{d|n} Y2(d) d)`.
pub fn y2_log_series(x_step: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    let q = step_nome("y2_log_series", x_step, ctx)?;
    Ok(ctx.finish(character_log_series(&q, CharModulus::Three, ctx).exp()))
}

/// `∏_{n≥1} (1 − e^{−nx})^{Y2(n)}`.
pub fn y2_product(x_step: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    let q = step_nome("y2_product", x_step, ctx)?;
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let mut num = Float::with_val(p, 1);
    let mut den = Float::with_val(p, 1);
    let mut power = Float::with_val(p, 1);
    let mut n = 1u64;
    loop {
        power *= &q;
        if power < eps {
            break;
        }
        match character(n, CharModulus::Three) {
            1 => num *= Float::with_val(p, 1) - &power,
            -1 => den *= Float::with_val(p, 1) - &power,
            _ => {}
        }
        n += 1;
    }
    Ok(ctx.finish(num / den))
}

/// `exp(−Σ_n (1/n) Σ_{j<N} w_j e^{−jnx} / (1 − e^{−Nnx}))`, which equals
/// `∏_k (1 − e^{−kx})^{w_{k mod N}}`.
///
/// With `N = 3`, `w = (0, 1, −1)` this is the rational-fraction form of the
/// mod-3 series; `N = 5` with the quadratic character gives `R*`, and `N = 8`
/// with `(0, 1, 0, −1, 0, −1, 0, 1)` the octic fraction without prefactor.
pub fn character_fraction_series(
    x_step: &Float,
    weights: &[i8],
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    let q = step_nome("character_fraction_series", x_step, ctx)?;
    Ok(ctx.finish(character_fraction_raw(&q, weights, ctx)))
}

fn character_fraction_raw(q: &Float, weights: &[i8], ctx: &PrecisionContext) -> Float {
    let p = ctx.internal_bits();
    let period = weights.len() as u32;
    let eps = ctx.negligible();
    let mut sum = Float::with_val(p, 0);
    let mut qn = Float::with_val(p, 1);
    let mut n = 1u32;
    loop {
        qn *= q;
        if qn < eps {
            break;
        }
        let mut numerator = Float::with_val(p, 0);
        let mut power = Float::with_val(p, 1);
        for &w in weights.iter().skip(1) {
            power *= &qn;
            match w {
                0 => {}
                w => numerator += Float::with_val(p, &power * w as i32),
            }
        }
        let denominator = Float::with_val(p, 1) - Float::with_val(p, (&qn).pow(period));
        sum += numerator / denominator / n;
        n += 1;
    }
    (-sum).exp()
}

pub const Y2_WEIGHTS: [i8; 3] = [0, 1, -1];
pub const X2_WEIGHTS: [i8; 5] = [0, 1, -1, -1, 1];
pub const OCTIC_WEIGHTS: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// The mod-3 rational-fraction series with the numerator `e^{nx} − e^{2nx}`
/// exactly as printed in the source identity. It is the reciprocal of
/// [`y2_log_series`]; kept so the harness can report the discrepancy.
pub fn y2_fraction_series_as_printed(x_step: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    let q = step_nome("y2_fraction_series_as_printed", x_step, ctx)?;
    let v = character_fraction_raw(&q, &Y2_WEIGHTS, ctx);
    Ok(ctx.finish(v.recip()))
}

/// `M(c, q) = Σ_{k≥0} c^k q^{k(k+1)/2}`.
pub fn m_series(c: &Float, q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    check_nome("m_series", q)?;
    Ok(ctx.finish(one_sided(c, q, ctx)))
}

/// Terms `t_0 = 1`, `t_{k+1} = t_k · c · q^{k+1}`, summed until past the peak
/// and negligible against the largest term seen.
fn one_sided(c: &Float, q: &Float, ctx: &PrecisionContext) -> Float {
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let mut term = Float::with_val(p, 1);
    let mut ratio = Float::with_val(p, c * q);
    let mut largest = Float::with_val(p, 1);
    let mut sum = Float::with_val(p, 0);
    loop {
        sum += &term;
        let magnitude = Float::with_val(p, term.abs_ref());
        if magnitude > largest {
            largest = magnitude.clone();
        }
        let shrinking = Float::with_val(p, ratio.abs_ref()) < 1;
        if term.is_zero() || (shrinking && magnitude < Float::with_val(p, &largest * &eps)) {
            break;
        }
        term *= &ratio;
        ratio *= q;
    }
    sum
}

/// `Σ_{k∈ℤ} c^k q^{k(k+1)/2}`, summing both tails directly.
pub fn bilateral_theta(c: &Float, q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    check_nome("bilateral_theta", q)?;
    if c.is_zero() {
        return Err(Error::domain("bilateral_theta", "c must be non-zero"));
    }
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let mut sum = one_sided(c, q, ctx);
    // k = −j: c^{−j} q^{j(j−1)/2}; t_{−1} = 1/c, t_{−(j+1)} = t_{−j} q^j / c
    let inv = Float::with_val(p, c.recip_ref());
    let mut term = inv.clone();
    let mut ratio = Float::with_val(p, q * &inv);
    let mut largest = Float::with_val(p, term.abs_ref());
    loop {
        sum += &term;
        let magnitude = Float::with_val(p, term.abs_ref());
        if magnitude > largest {
            largest = magnitude.clone();
        }
        let shrinking = Float::with_val(p, ratio.abs_ref()) < 1;
        if term.is_zero() || (shrinking && magnitude < Float::with_val(p, &largest * &eps)) {
            break;
        }
        term *= &ratio;
        ratio *= q;
    }
    Ok(ctx.finish(sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{product_form, ProductSpec};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn log_series_matches_product() {
        let ctx = ctx();
        let x = ctx.float(0.1);
        let series = log_rstar_series(&x, &ctx).unwrap();
        let product = product_form(&ProductSpec::rogers_ramanujan_star(), &x, &ctx).unwrap();
        assert!(series.approx_eq(&product.as_float().clone().ln(), &ctx.target_tolerance()));
    }

    #[test]
    fn log_series_vanishes_at_zero() {
        let ctx = ctx();
        let v = log_rstar_series(&ctx.float(0), &ctx).unwrap();
        assert!(v.is_zero());
    }

    /// Expand log ∏(1 − x^k)^{X2(k)} as a formal power series with exact
    /// rationals: log P = ∫ P'/P, with P built by polynomial multiplication.
    #[test]
    fn log_series_coefficients_from_formal_product() {
        const N: usize = 50;
        let mut prod = vec![Rational::new(); N + 1];
        prod[0] = Rational::from(1);
        let mul = |poly: &mut Vec<Rational>, k: usize, inverse: bool| {
            // multiply by (1 − x^k) or by 1/(1 − x^k) = Σ x^{jk}
            if inverse {
                for i in k..=N {
                    let prev = poly[i - k].clone();
                    poly[i] += prev;
                }
            } else {
                for i in (k..=N).rev() {
                    let prev = poly[i - k].clone();
                    poly[i] -= prev;
                }
            }
        };
        for k in 1..=N {
            match character(k as u64, CharModulus::Five) {
                1 => mul(&mut prod, k, false),
                -1 => mul(&mut prod, k, true),
                _ => {}
            }
        }
        // L = log P satisfies n L_n = n P_n − Σ_{j=1}^{n−1} j L_j P_{n−j}  (P_0 = 1)
        let mut log = vec![Rational::new(); N + 1];
        for n in 1..=N {
            let mut acc = Rational::from(&prod[n] * n as u32);
            for j in 1..n {
                acc -= Rational::from(&log[j] * j as u32) * &prod[n - j];
            }
            log[n] = acc / n as u32;
        }
        for n in 1..=N {
            assert_eq!(log[n], log_rstar_coefficient(n as u64), "n = {n}");
        }
    }

    #[test]
    fn y2_forms_agree() {
        let ctx = ctx();
        for x in [1.0f64, 0.5] {
            let x = ctx.float(x);
            let a = y2_log_series(&x, &ctx).unwrap();
            let b = y2_product(&x, &ctx).unwrap();
            let c = character_fraction_series(&x, &Y2_WEIGHTS, &ctx).unwrap();
            assert!(a.approx_eq(&b, &ctx.target_tolerance()));
            assert!(a.approx_eq(&c, &ctx.target_tolerance()));
        }
    }

    #[test]
    fn y2_printed_fraction_is_reciprocal() {
        let ctx = ctx();
        let x = ctx.float(1);
        let a = y2_log_series(&x, &ctx).unwrap();
        let printed = y2_fraction_series_as_printed(&x, &ctx).unwrap();
        assert!(!a.approx_eq(&printed, &ctx.pow2(-10)));
        let product = Float::with_val(300, a.as_float() * printed.as_float());
        assert!((product - 1u32).abs() < ctx.pow2(-250));
    }

    #[test]
    fn y2_large_step_tends_to_one() {
        let ctx = ctx();
        let v = y2_log_series(&ctx.float(1000), &ctx).unwrap();
        assert!(v.approx_eq(&ctx.float(1), &ctx.pow2(-250)));
        assert!(matches!(y2_log_series(&ctx.float(0), &ctx), Err(Error::Domain { .. })));
    }

    #[test]
    fn m_series_and_bilateral_identity() {
        let ctx = ctx();
        let q = ctx.float(0.3);
        let zero = m_series(&ctx.float(0), &q, &ctx).unwrap();
        assert!(zero.approx_eq(&ctx.float(1), &ctx.target_tolerance()));
        for c in [0.5f64, 1.0, 2.0, -3.0] {
            let c = ctx.float(c);
            let inv = Float::with_val(ctx.internal_bits(), c.recip_ref());
            let lhs = Float::with_val(ctx.internal_bits(), m_series(&c, &q, &ctx).unwrap().as_float())
                + m_series(&inv, &q, &ctx).unwrap().as_float() * &inv;
            let rhs = bilateral_theta(&c, &q, &ctx).unwrap();
            assert!(rhs.approx_eq(&lhs, &ctx.pow2(-250)));
        }
        assert!(bilateral_theta(&ctx.float(0), &q, &ctx).is_err());
    }
}
