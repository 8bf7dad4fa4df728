//! Elliptic-modular quantities from theta null values, closed forms of the
//! Rogers–Ramanujan fraction, and analytic derivatives of q-products.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{num_derivative, BigReal, PrecisionContext};
use crate::qseries::{
    check_open_nome, eta_raw, euler_f_raw, theta4_shift_raw, theta_null, theta_sum_raw,
    ProductSpec, ThetaNull,
};

/// Singular modulus data at `q = e^{−π√r}`.
#[derive(Debug, Clone)]
pub struct ModularPoint {
    pub r: Rational,
    pub q: BigReal,
    pub k: BigReal,
    pub k_prime: BigReal,
    pub big_k: BigReal,
}

pub(crate) struct RawPoint {
    pub q: Float,
    pub k: Float,
    pub k_prime: Float,
    pub big_k: Float,
}

/// `e^{−π√r}`.
pub fn nome_for(r: &Rational, ctx: &PrecisionContext) -> Result<Float> {
    if *r <= 0 {
        return Err(Error::domain("modular_point", "r must be positive"));
    }
    let root = ctx.float(r).sqrt();
    Ok((-(root * ctx.pi())).exp())
}

pub(crate) fn point_raw(r: &Rational, ctx: &PrecisionContext) -> Result<RawPoint> {
    let q = nome_for(r, ctx)?;
    let t2 = theta_null(ThetaNull::Two, &q, ctx)?.square();
    let t3 = theta_null(ThetaNull::Three, &q, ctx)?.square();
    let t4 = theta_null(ThetaNull::Four, &q, ctx)?.square();
    let big_k = ctx.pi() * &t3 / 2u32;
    Ok(RawPoint {
        k: Float::with_val(ctx.internal_bits(), &t2 / &t3),
        k_prime: t4 / &t3,
        q,
        big_k,
    })
}

/// `k = ϑ2²/ϑ3²`, `k′ = ϑ4²/ϑ3²`, `K = (π/2)ϑ3²` at `q = e^{−π√r}`.
pub fn modular_point(r: &Rational, ctx: &PrecisionContext) -> Result<ModularPoint> {
    let raw = point_raw(r, ctx)?;
    Ok(ModularPoint {
        r: r.clone(),
        q: ctx.finish(raw.q),
        k: ctx.finish(raw.k),
        k_prime: ctx.finish(raw.k_prime),
        big_k: ctx.finish(raw.big_k),
    })
}

/// `R(e^{−x}) = e^{−x/5} ϑ4(3ix/4, e^{−5x/2}) / ϑ4(ix/4, e^{−5x/2})`.
pub fn rr_theta_quotient(x: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    if *x <= 0 {
        return Err(Error::domain("rr_theta_quotient", "x must be positive"));
    }
    let nome = (ctx.float(x * -5i32) / 2u32).exp();
    if nome.is_zero() {
        return Ok(ctx.finish(ctx.float(x / -5i32).exp()));
    }
    let quarter = ctx.float(x / 4u32);
    let num = theta4_shift_raw(&ctx.float(&quarter * 3u32), &nome, ctx)?;
    let den = theta4_shift_raw(&quarter, &nome, ctx)?;
    Ok(ctx.finish(ctx.float(x / -5i32).exp() * num / den))
}

/// `x1(τ) = η(iτ/5) / η(5iτ)`.
pub fn eta_ratio(tau: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(eta_ratio_raw(tau, ctx)?))
}

fn eta_ratio_raw(tau: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *tau <= 0 {
        return Err(Error::domain("eta_ratio", "tau must be positive"));
    }
    let num = eta_raw(&ctx.float(tau / 5u32), ctx)?;
    let den = eta_raw(&ctx.float(tau * 5u32), ctx)?;
    Ok(num / den)
}

fn rr_from_ratio(x: &Float, ctx: &PrecisionContext) -> Float {
    let s = radical(x, ctx);
    (s - x - 1u32) / 2u32
}

/// `√(x² + 2x + 5)`.
fn radical(x: &Float, ctx: &PrecisionContext) -> Float {
    (ctx.float(x.square_ref()) + ctx.float(x * 2u32) + 5u32).sqrt()
}

/// `R(e^{−2πτ}) = (√(x² + 2x + 5) − x − 1)/2` with `x = x1(τ)`.
pub fn rr_eta_quotient(tau: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    if *tau <= 0 {
        return Err(Error::domain("rr_eta_quotient", "tau must be positive"));
    }
    let x = eta_ratio_raw(tau, ctx)?;
    Ok(ctx.finish(rr_from_ratio(&x, ctx)))
}

/// `d/dq` of a q-product by logarithmic differentiation:
/// `P(q) · [α/q − Σ_j e_j Σ_{k≥0} (p_j + k a_j) q^{p_j + k a_j − 1} / (1 − q^{p_j + k a_j})]`.
pub fn product_log_derivative(spec: &ProductSpec, q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(product_log_derivative_raw(spec, q, ctx)?))
}

pub(crate) fn product_log_derivative_raw(
    spec: &ProductSpec,
    q: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    check_open_nome("product_log_derivative", q)?;
    let value = spec.eval_raw(q, ctx)?;
    let eps = ctx.negligible();
    let mut log_slope = ctx.float(&spec.prefactor_exponent);
    for t in &spec.terms {
        let step = ctx.rational_power(q, &t.modulus);
        let one_minus_step = ctx.float(1) - &step;
        let tail_factor = ctx.float(one_minus_step.square_ref());
        let modulus = ctx.float(&t.modulus);
        let mut exponent = ctx.float(&t.offset);
        let mut power = ctx.float(ctx.rational_power(q, &t.offset));
        let mut sum = ctx.float(0);
        loop {
            let one_minus = ctx.float(1) - &power;
            let term = ctx.float(&exponent * &power) / &one_minus;
            sum += &term;
            // Σ_{j≥k} (p + ja) u_j/(1−u_j) ≤ term / (1 − q^a)²
            let bound = ctx.float(&term / &tail_factor) / &one_minus;
            if bound.abs() < eps {
                break;
            }
            power *= &step;
            exponent += &modulus;
        }
        log_slope -= sum * t.exponent;
    }
    Ok(value * log_slope / q)
}

/// Right side of
/// `R′(q) = 2·2^{1/3} k^{1/3} k′^{4/3} K² / (5π² q) · R · (1/R⁵ − 11 − R⁵)^{1/6}`
/// with `k, k′, K` taken at `q = e^{−π√r}`. `q` must match `r` to the working
/// tolerance.
pub fn rr_derivative_formula(q: &Float, r: &Rational, ctx: &PrecisionContext) -> Result<BigReal> {
    let point = point_raw(r, ctx)?;
    let gap = ctx.float(q - &point.q).abs();
    if gap > ctx.float(&point.q * ctx.target_tolerance()) * 256u32 {
        return Err(Error::domain(
            "rr_derivative_formula",
            format!("q is not e^(-pi*sqrt({r}))"),
        ));
    }
    let q = &point.q;
    let rr = ProductSpec::rogers_ramanujan().eval_raw(q, ctx)?;
    let r5 = ctx.float((&rr).pow(5u32));
    let inner = ctx.float(r5.recip_ref()) - 11u32 - &r5;
    let sixth = ctx.rational_power(&inner, &Rational::from((1, 6)));
    let third = Rational::from((1, 3));
    let k_term = ctx.rational_power(&point.k, &third);
    let kp_term = ctx.rational_power(&point.k_prime, &Rational::from((4, 3)));
    let cube_root_two = ctx.rational_power(&ctx.float(2), &third);
    let pi2 = ctx.float(ctx.pi().square_ref());
    let numerator = cube_root_two * 2u32 * k_term * kp_term * ctx.float(point.big_k.square_ref());
    let denominator = pi2 * 5u32 * q;
    Ok(ctx.finish(numerator / denominator * rr * sixth))
}

/// Both sides of `1/R − 1 − R = f(−q^{1/5}) / (q^{1/5} f(−q⁵))`.
pub fn eq2_sides(q: &Float, ctx: &PrecisionContext) -> Result<(BigReal, BigReal)> {
    check_open_nome("eq2_sides", q)?;
    let rr = ProductSpec::rogers_ramanujan().eval_raw(q, ctx)?;
    let lhs = ctx.float(rr.recip_ref()) - 1u32 - rr;
    let fifth = ctx.rational_power(q, &Rational::from((1, 5)));
    let num = euler_f_raw(&fifth, ctx)?;
    let den = euler_f_raw(&ctx.float(q.pow(5u32)), ctx)? * fifth;
    Ok((ctx.finish(lhs), ctx.finish(num / den)))
}

/// Both sides of `1/R⁵ − 11 − R⁵ = f⁶(−q) / (q f⁶(−q⁵))`.
pub fn eq3_sides(q: &Float, ctx: &PrecisionContext) -> Result<(BigReal, BigReal)> {
    check_open_nome("eq3_sides", q)?;
    let rr = ProductSpec::rogers_ramanujan().eval_raw(q, ctx)?;
    let r5 = ctx.float(rr.pow(5u32));
    let lhs = ctx.float(r5.recip_ref()) - 11u32 - r5;
    let num = euler_f_raw(q, ctx)?.pow(6u32);
    let den = euler_f_raw(&ctx.float(q.pow(5u32)), ctx)?.pow(6u32) * q;
    Ok((ctx.finish(lhs), ctx.finish(num / den)))
}

/// `F(w) = 10 / (−11 + 32/w⁵ − w⁵/32)^{1/6}`.
fn big_f(w: &Float, ctx: &PrecisionContext) -> Float {
    let w5 = ctx.float(w.pow(5u32));
    let inner = ctx.float(32u32) / &w5 - 11u32 - w5 / 32u32;
    ctx.float(10u32) / ctx.rational_power(&inner, &Rational::from((1, 6)))
}

/// `(1/π) d/dτ log x1(τ)` by central differences, and
/// `4η(iτ)⁴ √(x1² + 2x1 + 5) / (x1 F(√(x1² + 2x1 + 5) − x1 − 1))`.
///
/// The left side carries about two thirds of the working bits.
pub fn eq11_sides(tau: &Float, ctx: &PrecisionContext) -> Result<(BigReal, BigReal)> {
    if *tau <= 0 {
        return Err(Error::domain("eq11_sides", "tau must be positive"));
    }
    let slope = num_derivative(
        |t, c| Ok(c.finish(eta_ratio_raw(t, c)?.ln())),
        tau,
        ctx,
    )?;
    let lhs = ctx.float(slope.as_float()) / ctx.pi();
    let x = eta_ratio_raw(tau, ctx)?;
    let s = radical(&x, ctx);
    let w = ctx.float(&s - &x) - 1u32;
    let eta4 = eta_raw(tau, ctx)?.pow(4u32);
    let rhs = eta4 * 4u32 * &s / (x * big_f(&w, ctx));
    Ok((ctx.finish(lhs), ctx.finish(rhs)))
}

/// `(q^{(b²−4ac)/4a} √(π/K) Σ_v q^{a v² + b v + c})⁸` at `q = e^{−π√r}`.
pub fn normalized_theta_sum(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    r: &Rational,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    let point = point_raw(r, ctx)?;
    let sum = theta_sum_raw(a, b, c, &point.q, ctx)?;
    let shift = (Rational::from(b * b) - Rational::from(a * c) * 4u32) / Rational::from(a * 4u32);
    let pre = ctx.rational_power(&point.q, &shift);
    let root = (ctx.pi() / &point.big_k).sqrt();
    Ok(ctx.finish((pre * root * sum).pow(8u32)))
}

/// `(M(q^a, q) + q^{−a} M(q^{−a}, q)) · q^{a²/2 + a/2 + 1/8} / √(K/π)` at
/// `q = e^{−π√r}`, where the bracket is the bilateral sum
/// `Σ_k q^{k²/2 + (a+1/2)k}`.
pub fn normalized_bilateral_m(a: &Rational, r: &Rational, ctx: &PrecisionContext) -> Result<BigReal> {
    let point = point_raw(r, ctx)?;
    let half = Rational::from((1, 2));
    let linear = Rational::from(a + &half);
    let sum = theta_sum_raw(&half, &linear, &Rational::new(), &point.q, ctx)?;
    let shift = Rational::from(a * a) / 2u32 + Rational::from(a / 2u32) + Rational::from((1, 8));
    let pre = ctx.rational_power(&point.q, &shift);
    let root = (ctx.float(&point.big_k) / ctx.pi()).sqrt();
    Ok(ctx.finish(pre * sum / root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac::{eval_cf, rr};
    use crate::qseries::product_form;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    fn closed_form_r_2pi(ctx: &PrecisionContext) -> Float {
        let root5 = ctx.float(5).sqrt();
        let radical = ((root5.clone() + 5u32) / 2u32).sqrt();
        radical - (root5 + 1u32) / 2u32
    }

    #[test]
    fn k_at_r1() {
        let ctx = ctx();
        let p = modular_point(&Rational::from(1), &ctx).unwrap();
        let g = ctx.float(0.25).gamma();
        let expected = g.square() / (ctx.pi().sqrt() * 4u32);
        assert!(p.big_k.approx_eq(&expected, &ctx.target_tolerance()));
        let half_root = ctx.float(0.5).sqrt();
        assert!(p.k.approx_eq(&half_root, &ctx.target_tolerance()));
        assert!(p.k_prime.approx_eq(&half_root, &ctx.target_tolerance()));
    }

    #[test]
    fn complementary_moduli() {
        let ctx = ctx();
        for r in [1, 2, 3, 4, 7] {
            let p = modular_point(&Rational::from(r), &ctx).unwrap();
            let s = ctx.float(p.k.square_ref()) + ctx.float(p.k_prime.square_ref());
            assert!((s - 1u32).abs() < ctx.pow2(-250), "r = {r}");
        }
    }

    #[test]
    fn four_routes_to_rr() {
        let ctx = ctx();
        let tol = ctx.target_tolerance();
        let pi = ctx.pi();
        for x in [ctx.float(1), pi.clone(), pi.clone() * 2u32] {
            let q = ctx.float(-&x).exp();
            let product = product_form(&ProductSpec::rogers_ramanujan(), &q, &ctx).unwrap();
            let theta = rr_theta_quotient(&x, &ctx).unwrap();
            let tau = ctx.float(&x / &pi) / 2u32;
            let eta = rr_eta_quotient(&tau, &ctx).unwrap();
            let cf = eval_cf(&rr(&q, &ctx).unwrap(), &ctx).unwrap();
            assert!(theta.approx_eq(&product, &tol));
            assert!(eta.approx_eq(&product, &tol));
            assert!(cf.value.approx_eq(&product, &tol));
        }
        let at_2pi = rr_eta_quotient(&ctx.float(1), &ctx).unwrap();
        assert!(at_2pi.approx_eq(&closed_form_r_2pi(&ctx), &tol));
    }

    #[test]
    fn theta_quotient_asymptotic() {
        let ctx = ctx();
        let x = ctx.float(400);
        let v = rr_theta_quotient(&x, &ctx).unwrap();
        let lead = (ctx.float(-&x) / 5u32).exp();
        let rel = ctx.float(v.as_float() / &lead) - 1u32;
        assert!(rel.abs() < ctx.pow2(-250));
    }

    #[test]
    fn domain_errors() {
        let ctx = ctx();
        assert!(matches!(rr_theta_quotient(&ctx.float(0), &ctx), Err(Error::Domain { .. })));
        assert!(matches!(rr_eta_quotient(&ctx.float(-1), &ctx), Err(Error::Domain { .. })));
        assert!(matches!(modular_point(&Rational::new(), &ctx), Err(Error::Domain { .. })));
        let q = ctx.float(0.1);
        assert!(matches!(
            rr_derivative_formula(&q, &Rational::from(1), &ctx),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn log_derivative_matches_finite_difference() {
        let ctx = ctx();
        let spec = ProductSpec::rogers_ramanujan();
        for q in [ctx.float(0.1), (-ctx.pi()).exp()] {
            let analytic = product_log_derivative(&spec, &q, &ctx).unwrap();
            let numeric =
                num_derivative(|x, c| product_form(&spec, x, c), &q, &ctx).unwrap();
            assert!(analytic.approx_eq(&numeric, &ctx.pow2(-128)));
        }
    }

    #[test]
    fn derivative_formula_matches_product() {
        let ctx = ctx();
        for r in [1, 4] {
            let r = Rational::from(r);
            let q = nome_for(&r, &ctx).unwrap();
            let formula = rr_derivative_formula(&q, &r, &ctx).unwrap();
            let analytic =
                product_log_derivative(&ProductSpec::rogers_ramanujan(), &q, &ctx).unwrap();
            let tol = ctx.float(analytic.as_float().abs_ref()) * ctx.pow2(-250);
            assert!(formula.approx_eq(&analytic, &tol));
        }
    }

    #[test]
    fn eq2_eq3_hold() {
        let ctx = ctx();
        let pi = ctx.pi();
        for q in [
            ctx.float(0.05),
            ctx.float(0.1),
            ctx.float(-&pi).exp(),
            (ctx.float(-&pi) * 2u32).exp(),
        ] {
            for (lhs, rhs) in [eq2_sides(&q, &ctx).unwrap(), eq3_sides(&q, &ctx).unwrap()] {
                let tol = ctx.float(rhs.as_float().abs_ref()) * ctx.pow2(-250);
                assert!(lhs.approx_eq(&rhs, &tol), "q = {}", q.to_f64());
            }
        }
    }

    #[test]
    fn eq11_sides_agree() {
        let ctx = ctx();
        for tau in [ctx.float(1), ctx.float(0.5)] {
            let (lhs, rhs) = eq11_sides(&tau, &ctx).unwrap();
            assert!(lhs.approx_eq(&rhs, &ctx.pow2(-150)));
        }
    }

    #[test]
    fn substitution_in_f() {
        // F(2R) has denominator (1/R⁵ − 11 − R⁵)^{1/6}
        let ctx = ctx();
        let r = closed_form_r_2pi(&ctx);
        let f = big_f(&ctx.float(&r * 2u32), &ctx);
        let r5 = ctx.float((&r).pow(5u32));
        let inner = ctx.float(r5.recip_ref()) - 11u32 - r5;
        let expected = ctx.float(10) / ctx.rational_power(&inner, &Rational::from((1, 6)));
        assert!((f - expected).abs() < ctx.pow2(-240));
    }

    #[test]
    fn pentagonal_example() {
        let ctx = ctx();
        let v = normalized_theta_sum(
            &Rational::from((3, 2)),
            &Rational::from((-1, 2)),
            &Rational::new(),
            &Rational::from(1),
            &ctx.elevated(),
        )
        .unwrap();
        let root3 = ctx.float(3).sqrt();
        let inner = ctx.float(2048) / 243u32 + ctx.float(3584) / (ctx.float(243) * &root3);
        let expected = ctx.float(14) / 27u32 + ctx.float(8) / (ctx.float(3) * &root3) + inner.sqrt() / 2u32;
        assert!(v.approx_eq(&expected, &ctx.target_tolerance()));
    }
}
