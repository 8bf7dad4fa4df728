use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::lll::lll_reduce;
use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext};

/// Smallest working precision accepted for relation finding.
pub const MIN_PRECISION_BITS: u32 = 256;

/// Candidates with a coefficient above this are treated as noise.
pub const HEIGHT_CAP: f64 = 1e30;

/// Bits dropped from the lattice scale below what the value supports.
const SCALE_GUARD_BITS: i64 = 8;

/// Integer polynomial found for a numerical value; coefficients are listed
/// from the constant term upward.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicCandidate {
    pub coefficients: Vec<Integer>,
    pub degree: usize,
    pub height: Integer,
    /// `|P(x)|` at the discovery precision.
    #[serde(serialize_with = "decimal")]
    pub residual: BigReal,
    /// `|P(x)| < 2^{-working_bits}` with `x` recomputed at twice the precision.
    pub confirmed: bool,
    #[serde(serialize_with = "decimal")]
    pub confirmation_residual: BigReal,
}

fn decimal<S: serde::Serializer>(v: &BigReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_decimal(6))
}

impl AlgebraicCandidate {
    /// `c_0 + c_1 x + …` in human-readable form.
    pub fn display(&self) -> String {
        format_polynomial(&self.coefficients)
    }
}

pub fn format_polynomial(coefficients: &[Integer]) -> String {
    let mut parts = Vec::new();
    for (i, c) in coefficients.iter().enumerate().rev() {
        if *c == 0 {
            continue;
        }
        let mag = Integer::from(c.abs_ref());
        let sign = if *c < 0 { "-" } else { "+" };
        let body = match (i, mag == 1) {
            (0, _) => mag.to_string(),
            (1, true) => "x".to_string(),
            (1, false) => format!("{mag}*x"),
            (_, true) => format!("x^{i}"),
            (_, false) => format!("{mag}*x^{i}"),
        };
        parts.push((sign, body));
    }
    let mut out = String::new();
    for (n, (sign, body)) in parts.iter().enumerate() {
        match (n, *sign) {
            (0, "-") => out.push('-'),
            (0, _) => {}
            (_, s) => {
                out.push(' ');
                out.push_str(s);
                out.push(' ');
            }
        }
        out.push_str(body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Horner evaluation of `c_0 + c_1 x + … + c_d x^d`.
pub fn eval_poly(coefficients: &[Integer], x: &Float, ctx: &PrecisionContext) -> BigReal {
    ctx.finish(eval_poly_raw(coefficients, x, ctx.internal_bits()))
}

fn eval_poly_raw(coefficients: &[Integer], x: &Float, bits: u32) -> Float {
    let mut acc = Float::with_val(bits, 0);
    for c in coefficients.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

/// Divide by the content, strip trailing zeros and factors of `x`, and make
/// the leading coefficient positive.
pub fn normalize(mut coefficients: Vec<Integer>) -> Vec<Integer> {
    while coefficients.last().is_some_and(|c| *c == 0) {
        coefficients.pop();
    }
    let leading_zeros = coefficients.iter().take_while(|c| **c == 0).count();
    coefficients.drain(..leading_zeros);
    if coefficients.is_empty() {
        return coefficients;
    }
    let mut content = Integer::new();
    for c in &coefficients {
        content.gcd_mut(c);
    }
    if content > 1 {
        for c in &mut coefficients {
            *c /= &content;
        }
    }
    if coefficients.last().is_some_and(|c| *c < 0) {
        for c in &mut coefficients {
            *c = Integer::from(-&*c);
        }
    }
    coefficients
}

/// The shortest relation `Σ c_i x^i ≈ 0` with `i ≤ degree` found by reducing
/// `[I | round(2^s x^i)]`, normalized, or `None` when the reduced basis
/// holds no vector whose residual passes `2^{-0.6·working_bits}`.
pub fn find_relation(x: &Float, degree: usize, ctx: &PrecisionContext) -> Result<Option<Vec<Integer>>> {
    check_precision(ctx)?;
    if degree == 0 {
        return Err(Error::param("degree", "must be at least 1"));
    }
    let bits = ctx.internal_bits();
    let x = Float::with_val(bits, x);
    if x.is_zero() {
        return Ok(Some(vec![Integer::new(), Integer::from(1)]));
    }
    let mut powers = Vec::with_capacity(degree + 1);
    let mut p = Float::with_val(bits, 1);
    for _ in 0..=degree {
        powers.push(p.clone());
        p *= &x;
    }
    let largest = powers
        .iter()
        .map(|v| v.clone().abs().get_exp().unwrap_or(0) as i64)
        .max()
        .unwrap_or(0);
    let scale = ctx.working_bits() as i64 - SCALE_GUARD_BITS - largest.max(0);
    if scale < 16 {
        return Ok(None);
    }
    let mut basis: Vec<Vec<Integer>> = Vec::with_capacity(degree + 1);
    for (i, power) in powers.iter().enumerate() {
        let mut row = vec![Integer::new(); degree + 2];
        row[i] = Integer::from(1);
        let scaled = Float::with_val(bits, power << scale as i32);
        row[degree + 1] = scaled.round().to_integer().unwrap_or_default();
        basis.push(row);
    }
    lll_reduce(&mut basis, &Rational::from((99, 100)));

    let threshold = ctx.pow2(-(ctx.working_bits() as i32 * 3 / 5));
    let cap = Integer::from_f64(HEIGHT_CAP).unwrap_or_default();
    let mut best: Option<(Vec<Integer>, Integer)> = None;
    for row in &basis {
        let coefficients = normalize(row[..=degree].to_vec());
        if coefficients.len() < 2 {
            continue;
        }
        let h = height(&coefficients);
        if h > cap {
            continue;
        }
        let residual = eval_poly_raw(&coefficients, &x, bits).abs();
        if residual >= threshold {
            continue;
        }
        let better = match &best {
            None => true,
            Some((c, bh)) => coefficients.len() < c.len() || (coefficients.len() == c.len() && h < *bh),
        };
        if better {
            best = Some((coefficients, h));
        }
    }
    Ok(best.map(|(c, _)| c))
}

fn height(coefficients: &[Integer]) -> Integer {
    coefficients
        .iter()
        .map(|c| Integer::from(c.abs_ref()))
        .max()
        .unwrap_or_default()
}

fn check_precision(ctx: &PrecisionContext) -> Result<()> {
    if ctx.working_bits() < MIN_PRECISION_BITS {
        return Err(Error::Precondition {
            op: "min_poly",
            reason: format!(
                "working precision {} is below the {MIN_PRECISION_BITS}-bit floor",
                ctx.working_bits()
            ),
        });
    }
    Ok(())
}

/// Degrees tried in turn: powers of two below `max_degree`, then `max_degree`.
pub fn degree_sweep(max_degree: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 1;
    while d < max_degree {
        out.push(d);
        d *= 2;
    }
    out.push(max_degree);
    out
}

/// Minimal polynomial search for the value produced by `value`.
///
/// `value` is called at `ctx` for discovery and at twice the precision for
/// confirmation. Degrees follow [`degree_sweep`]; once a confirmed relation
/// of degree `n` appears, the degrees between the previous sweep step and `n`
/// are searched as well so the lowest-degree relation is returned.
pub fn min_poly<F>(value: F, max_degree: usize, ctx: &PrecisionContext) -> Result<Option<AlgebraicCandidate>>
where
    F: Fn(&PrecisionContext) -> Result<BigReal>,
{
    check_precision(ctx)?;
    if max_degree == 0 {
        return Err(Error::param("max_degree", "must be at least 1"));
    }
    let x = value(ctx)?.into_float();
    let doubled = ctx.scaled(2);
    let mut confirm_value: Option<Float> = None;
    let mut confirm = |coefficients: &[Integer]| -> Result<(bool, Float)> {
        if confirm_value.is_none() {
            confirm_value = Some(value(&doubled)?.into_float());
        }
        let y = confirm_value.as_ref().expect("set above");
        let r = eval_poly_raw(coefficients, y, doubled.internal_bits()).abs();
        Ok((r < ctx.target_tolerance(), r))
    };

    let mut lower = 0usize;
    for degree in degree_sweep(max_degree) {
        if let Some(found) = find_relation(&x, degree, ctx)? {
            let (ok, _) = confirm(&found)?;
            if ok {
                let mut best = found;
                for d in lower + 1..best.len() - 1 {
                    if let Some(c) = find_relation(&x, d, ctx)? {
                        if c.len() < best.len() && confirm(&c)?.0 {
                            best = c;
                            break;
                        }
                    }
                }
                let (confirmed, cres) = confirm(&best)?;
                let residual = eval_poly_raw(&best, &x, ctx.internal_bits()).abs();
                return Ok(Some(AlgebraicCandidate {
                    degree: best.len() - 1,
                    height: height(&best),
                    residual: ctx.finish(residual),
                    confirmed,
                    confirmation_residual: BigReal::new(cres),
                    coefficients: best,
                }));
            }
        }
        lower = degree;
    }
    Ok(None)
}
