use rug::{Float, Rational};

use super::{check_nome, check_open_nome};
use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext};

/// Upper limit on the index at which a shifted theta series peaks.
const MAX_PEAK_INDEX: f64 = 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaNull {
    Two,
    Three,
    Four,
}

/// `ϑ3(q) = Σ_{k∈ℤ} q^{k²}`.
pub fn theta3(q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(theta_null(ThetaNull::Three, q, ctx)?))
}

/// `ϑ2(q) = Σ_{k∈ℤ} q^{(k+1/2)²}`.
pub fn theta2(q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(theta_null(ThetaNull::Two, q, ctx)?))
}

/// `ϑ4(q) = Σ_{k∈ℤ} (−1)^k q^{k²}`.
pub fn theta4(q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(theta_null(ThetaNull::Four, q, ctx)?))
}

pub(crate) fn theta_null(kind: ThetaNull, q: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_nome("theta", q)?;
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let q2 = Float::with_val(p, q.square_ref());
    match kind {
        ThetaNull::Three | ThetaNull::Four => {
            let alternate = kind == ThetaNull::Four;
            // q^{n²} advanced by q^{2n+1}
            let mut power = Float::with_val(p, q);
            let mut step = Float::with_val(p, &q2 * q);
            let mut sum = Float::with_val(p, 0);
            let mut n = 1u64;
            while power > eps {
                if alternate && n % 2 == 1 {
                    sum -= &power;
                } else {
                    sum += &power;
                }
                power *= &step;
                step *= &q2;
                n += 1;
            }
            Ok(sum * 2u32 + 1u32)
        }
        ThetaNull::Two => {
            if q.is_zero() {
                return Ok(Float::with_val(p, 0));
            }
            // 2 q^{1/4} Σ_{n≥0} q^{n(n+1)}, each term advanced by q^{2n+2}
            let mut power = Float::with_val(p, 1);
            let mut step = q2.clone();
            let mut sum = Float::with_val(p, 0);
            while power > eps {
                sum += &power;
                power *= &step;
                step *= &q2;
            }
            let quarter = Float::with_val(p, q.sqrt_ref()).sqrt();
            Ok(sum * quarter * 2u32)
        }
    }
}

/// `Σ_{v∈ℤ} q^{a v² + b v + c}` for rational `a > 0`, `b`, `c`.
///
/// Summation starts at the vertex of the exponent and walks outward in both
/// directions until the terms fall below the working tolerance relative to
/// the running sum.
pub fn theta_sum(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    q: &Float,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    Ok(ctx.finish(theta_sum_raw(a, b, c, q, ctx)?))
}

pub(crate) fn theta_sum_raw(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    q: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    if *a <= 0 {
        return Err(Error::domain("theta_sum", "quadratic coefficient must be positive"));
    }
    check_open_nome("theta_sum", q)?;
    let p = ctx.internal_bits();
    let log_q = Float::with_val(p, q.ln_ref());
    let term = |v: i64| -> Float {
        let v = Rational::from(v);
        let e = Rational::from(a * &v) * &v + Rational::from(b * &v) + c;
        (Float::with_val(p, &e) * &log_q).exp()
    };
    let vertex = Rational::from(-b) / Rational::from(a * 2u32);
    let start = vertex.to_f64().round() as i64;
    let eps = ctx.negligible();
    let mut sum = term(start);
    for direction in [1i64, -1] {
        let mut v = start + direction;
        loop {
            let t = term(v);
            let small = t < Float::with_val(p, &sum * &eps);
            sum += &t;
            let past_vertex = if direction > 0 {
                v > vertex
            } else {
                v < vertex
            };
            if small && past_vertex {
                break;
            }
            v += direction;
        }
    }
    Ok(sum)
}

/// `ϑ4(iy, q) = 1 + 2 Σ_{n≥1} (−1)^n q^{n²} cosh(2ny)`, in real arithmetic.
///
/// The terms peak near `n = y / log(1/q)`; the working precision is raised
/// by the bit size of that peak so the alternating sum keeps full accuracy.
pub fn theta4_shift(y: &Float, q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(theta4_shift_raw(y, q, ctx)?))
}

pub(crate) fn theta4_shift_raw(y: &Float, q: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_nome("theta4_shift", q)?;
    let p = ctx.internal_bits();
    if q.is_zero() {
        return Ok(Float::with_val(p, 1));
    }
    let y_abs = Float::with_val(p, y.abs_ref());
    let decay = -Float::with_val(p, q.ln_ref());
    let peak = Float::with_val(p, &y_abs / &decay).to_f64();
    if !peak.is_finite() || peak > MAX_PEAK_INDEX {
        return Err(Error::domain(
            "theta4_shift",
            format!("series peaks near n = {peak:e}; effectively divergent"),
        ));
    }
    // log2 of the largest term, q^{n²} e^{2ny} at n = peak
    let peak_bits = (peak * y_abs.to_f64() / std::f64::consts::LN_2).max(0.0).ceil() as u32;
    let wp = p + peak_bits;
    let log_q = -Float::with_val(wp, &decay);
    let two_y = Float::with_val(wp, &y_abs * 2u32);
    let eps = Float::with_val(wp, 1) >> (p as i32);
    let mut sum = Float::with_val(wp, 0);
    let mut previous: Option<Float> = None;
    let mut n = 1u64;
    loop {
        let nf = Float::with_val(wp, n);
        let base = Float::with_val(wp, nf.square_ref()) * &log_q;
        let shift = Float::with_val(wp, &two_y * &nf);
        let up = Float::with_val(wp, &base + &shift).exp();
        let down = Float::with_val(wp, &base - &shift).exp();
        let magnitude = up + down;
        if n % 2 == 1 {
            sum -= &magnitude;
        } else {
            sum += &magnitude;
        }
        if n as f64 > peak {
            if let Some(prev) = &previous {
                if magnitude > *prev {
                    return Err(Error::domain(
                        "theta4_shift",
                        "terms are not decreasing past the peak",
                    ));
                }
            }
            let scale = Float::with_val(wp, sum.abs_ref()).max(&Float::with_val(wp, 1));
            if magnitude < scale * &eps {
                break;
            }
        }
        previous = Some(magnitude);
        n += 1;
    }
    Ok(Float::with_val(p, sum + 1u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn jacobi_quartic_identity() {
        let ctx = ctx();
        let q = ctx.float(0.3);
        let t2 = theta2(&q, &ctx).unwrap().as_float().clone().pow(4u32);
        let t3 = theta3(&q, &ctx).unwrap().as_float().clone().pow(4u32);
        let t4 = theta4(&q, &ctx).unwrap().as_float().clone().pow(4u32);
        let lhs = BigReal::new(t3);
        assert!(lhs.approx_eq(&(t2 + t4), &ctx.pow2(-250)));
    }

    #[test]
    fn theta3_at_zero_is_one() {
        let ctx = ctx();
        let v = theta3(&ctx.float(0), &ctx).unwrap();
        assert!(v.approx_eq(&ctx.float(1), &ctx.target_tolerance()));
    }

    #[test]
    fn theta_sum_reductions() {
        let ctx = ctx();
        let q = ctx.float(0.37);
        let one = Rational::from(1);
        let zero = Rational::new();
        let s = theta_sum(&one, &zero, &zero, &q, &ctx).unwrap();
        let t3 = theta3(&q, &ctx).unwrap();
        assert!(s.approx_eq(&t3, &ctx.target_tolerance()));

        // Σ q^{k(k+1)/2} by direct term matching
        let half = Rational::from((1, 2));
        let s = theta_sum(&half, &half, &zero, &q, &ctx).unwrap();
        let mut direct = ctx.float(0);
        for k in -60i64..=60 {
            direct += ctx.float(&q).pow(k * (k + 1) / 2);
        }
        assert!(s.approx_eq(&direct, &ctx.target_tolerance()));
    }

    #[test]
    fn theta_sum_rejects_non_positive_quadratic() {
        let ctx = ctx();
        let q = ctx.float(0.5);
        let r = theta_sum(&Rational::new(), &Rational::from(1), &Rational::new(), &q, &ctx);
        assert!(matches!(r, Err(Error::Domain { .. })));
    }

    #[test]
    fn shifted_theta_reductions() {
        let ctx = ctx();
        let q = ctx.float(0.45);
        let shifted = theta4_shift(&ctx.float(0), &q, &ctx).unwrap();
        let t4 = theta4(&q, &ctx).unwrap();
        assert!(shifted.approx_eq(&t4, &ctx.target_tolerance()));

        let tiny = ctx.pow2(-400);
        let v = theta4_shift(&ctx.float(2), &tiny, &ctx).unwrap();
        assert!(v.approx_eq(&ctx.float(1), &ctx.target_tolerance()));
    }

    #[test]
    fn shifted_theta_with_large_peak_keeps_precision() {
        // compare against a cosine-free direct evaluation at much higher precision
        let ctx = ctx();
        let q = ctx.float(0.9);
        let y = ctx.float(3);
        let v = theta4_shift(&y, &q, &ctx).unwrap();
        let wp = 2000;
        let qh = Float::with_val(wp, 0.9);
        let yh = Float::with_val(wp, 3);
        let mut s = Float::with_val(wp, 1);
        for n in 1..400i64 {
            let term = Float::with_val(wp, qh.clone().pow(n * n)) * (Float::with_val(wp, &yh * (2 * n))).cosh() * 2u32;
            if n % 2 == 1 {
                s -= term;
            } else {
                s += term;
            }
        }
        // value ≈ 7.6e26; check relative accuracy
        let tol = ctx.target_tolerance() * Float::with_val(wp, s.abs_ref());
        assert!(v.approx_eq(&s, &tol));
    }

    #[test]
    fn shifted_theta_rejects_runaway_peak() {
        let ctx = ctx();
        let q = ctx.float(1) - ctx.pow2(-40);
        let r = theta4_shift(&ctx.float(10), &q, &ctx);
        assert!(matches!(r, Err(Error::Domain { .. })));
    }
}
