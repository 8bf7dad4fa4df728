//! Closed-form right sides the identity cases compare against.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::Result;
use crate::modular::product_log_derivative_raw;
use crate::numerics::PrecisionContext;
use crate::qseries::{ProductSpec, ProductTerm};

/// Printed degree-8 polynomial for `ρ`, constant term first.
pub const RHO_POLYNOMIAL: [i64; 9] = [16, 0, -240, 800, -2900, -6000, -6500, 17500, 625];

pub fn rho_polynomial() -> Vec<Integer> {
    RHO_POLYNOMIAL.iter().map(|&c| Integer::from(c)).collect()
}

fn sqrt(v: impl Into<Float>) -> Float {
    v.into().sqrt()
}

/// `√((5+√5)/2) − (√5+1)/2`.
pub fn rr_at_2pi(ctx: &PrecisionContext) -> Float {
    let root5 = ctx.float(5).sqrt();
    sqrt((root5.clone() + 5u32) / 2u32) - (root5 + 1u32) / 2u32
}

/// `√(1 + 2√2 − 2√(2+√2))`.
pub fn h_half_pi(ctx: &PrecisionContext) -> Float {
    let root2 = ctx.float(2).sqrt();
    let inner = sqrt(root2.clone() + 2u32) * 2u32;
    sqrt(root2 * 2u32 + 1u32 - inner)
}

/// `√(3 + 2√2 − 2√(4+3√2))`.
pub fn h_half_pi_root2(ctx: &PrecisionContext) -> Float {
    let root2 = ctx.float(2).sqrt();
    let inner = sqrt(root2.clone() * 3u32 + 4u32) * 2u32;
    sqrt(root2 * 2u32 + 3u32 - inner)
}

/// `Γ(1/4)² / (4√π)`.
pub fn k_singular_r1(ctx: &PrecisionContext) -> Float {
    ctx.float(0.25).gamma().square() / (ctx.pi().sqrt() * 4u32)
}

/// `14/27 + 8/(3√3) + (1/2)√(2048/243 + 3584/(243√3))`.
pub fn pentagonal_eighth(ctx: &PrecisionContext) -> Float {
    let root3 = ctx.float(3).sqrt();
    let a = ctx.float(Rational::from((14, 27)));
    let b = ctx.float(8u32) / (root3.clone() * 3u32);
    let inner = ctx.float(Rational::from((2048, 243))) + ctx.float(3584u32) / (root3 * 243u32);
    a + b + sqrt(inner) / 2u32
}

/// `8√((2/5)(9 + 5√5 − 2√(50 + 22√5))) e^{2π} Γ(5/4)⁴ / π³`.
pub fn rr_derivative_at_2pi(ctx: &PrecisionContext) -> Float {
    let root5 = ctx.float(5).sqrt();
    let inner = sqrt(root5.clone() * 22u32 + 50u32) * 2u32;
    let radicand = (root5 * 5u32 + 9u32 - inner) * 2u32 / 5u32;
    let gamma = ctx.float(1.25).gamma().square().square();
    let pi = ctx.pi();
    let e2pi = ctx.float(&pi * 2u32).exp();
    sqrt(radicand) * 8u32 * e2pi * gamma / pi.pow(3u32)
}

/// `e^π Γ(1/4)⁴ / π³`, the common scale of the derivative examples at `e^{−π}`.
fn quartic_scale(ctx: &PrecisionContext) -> Float {
    let pi = ctx.pi();
    let gamma = ctx.float(0.25).gamma().square().square();
    ctx.float(pi.exp_ref()) * gamma / pi.pow(3u32)
}

/// `Q^{1/8} (Q³;Q⁴)(Q;Q⁴)/(Q²;Q⁴)²`.
pub fn quarter_quotient() -> ProductSpec {
    ProductSpec {
        prefactor_exponent: Rational::from((1, 8)),
        terms: vec![ProductTerm::new(3, 4, 1), ProductTerm::new(1, 4, 1), ProductTerm::new(2, 4, -2)],
    }
}

/// `Q^{−1/24} (Q³;Q⁴)(Q;Q⁴)`.
pub fn quarter_pair() -> ProductSpec {
    ProductSpec {
        prefactor_exponent: Rational::from((-1, 24)),
        terms: vec![ProductTerm::new(3, 4, 1), ProductTerm::new(1, 4, 1)],
    }
}

/// `e^π Γ(1/4)⁴ / (64 · 2^{5/8} π³)`.
pub fn quarter_quotient_derivative(ctx: &PrecisionContext) -> Float {
    let two = ctx.rational_power(&ctx.float(2), &Rational::from((5, 8)));
    quartic_scale(ctx) / (two * 64u32)
}

/// `−e^π Γ(1/4)⁴ / (32 · 2^{7/8} π³)`.
pub fn quarter_pair_derivative(ctx: &PrecisionContext) -> Float {
    let two = ctx.rational_power(&ctx.float(2), &Rational::from((7, 8)));
    -(quartic_scale(ctx) / (two * 32u32))
}

/// `ρ = R′(e^{−π}) · 16π³ / (e^π Γ(1/4)⁴)`.
pub fn rho(ctx: &PrecisionContext) -> Result<Float> {
    let q = (-ctx.pi()).exp();
    let d = product_log_derivative_raw(&ProductSpec::rogers_ramanujan(), &q, ctx)?;
    Ok(d * 16u32 / quartic_scale(ctx))
}
