use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::{check_nome, check_open_nome};
use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext};

/// Hard cap on the number of factors of one infinite product.
const MAX_FACTORS: u64 = 20_000_000;

/// Length of a q-Pochhammer symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terms {
    Finite(u64),
    Infinite,
}

/// `(a; q)_n = ∏_{k<n} (1 − a q^k)`.
///
/// The infinite product stops at the first `K` with
/// `2|a| q^K / (1 − q) < 2^{-(working + guard)}`, which bounds the logarithm
/// of the discarded tail.
pub fn pochhammer(a: &Float, q: &Float, n: Terms, ctx: &PrecisionContext) -> Result<BigReal> {
    let value = match n {
        Terms::Finite(n) => {
            check_nome("pochhammer", q)?;
            let p = ctx.internal_bits();
            let mut term = Float::with_val(p, a);
            let mut prod = Float::with_val(p, 1);
            for _ in 0..n {
                let factor = Float::with_val(p, 1) - &term;
                if factor.is_zero() {
                    return Err(Error::domain("pochhammer", "a·q^k = 1 for some k"));
                }
                prod *= factor;
                term *= q;
            }
            prod
        }
        Terms::Infinite => qpoch_inf(a, q, ctx)?,
    };
    Ok(ctx.finish(value))
}

pub(crate) fn qpoch_inf(a: &Float, q: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_nome("pochhammer", q)?;
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let tail = Float::with_val(p, 2u32) / (Float::with_val(p, 1) - q);
    let mut term = Float::with_val(p, a);
    let mut prod = Float::with_val(p, 1);
    let mut k = 0u64;
    loop {
        let magnitude = Float::with_val(p, term.abs_ref());
        if magnitude <= 0.5 && magnitude * &tail < eps {
            break;
        }
        let factor = Float::with_val(p, 1) - &term;
        if factor.is_zero() {
            return Err(Error::domain("pochhammer", "a·q^k = 1 for some k"));
        }
        prod *= factor;
        term *= q;
        k += 1;
        if k > MAX_FACTORS {
            return Err(Error::convergence(
                "pochhammer",
                format!("more than {MAX_FACTORS} factors; q is too close to 1"),
            ));
        }
    }
    Ok(prod)
}

/// One factor `(q^offset; q^modulus)_∞^exponent` of a [`ProductSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub offset: Rational,
    pub modulus: Rational,
    pub exponent: i32,
}

impl ProductTerm {
    pub fn new(offset: impl Into<Rational>, modulus: impl Into<Rational>, exponent: i32) -> Self {
        Self {
            offset: offset.into(),
            modulus: modulus.into(),
            exponent,
        }
    }
}

/// `q^α ∏_j (q^{p_j}; q^{a_j})_∞^{e_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    pub prefactor_exponent: Rational,
    pub terms: Vec<ProductTerm>,
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

impl ProductSpec {
    pub fn new(prefactor_exponent: impl Into<Rational>, terms: Vec<ProductTerm>) -> Result<Self> {
        let spec = Self {
            prefactor_exponent: prefactor_exponent.into(),
            terms,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if t.offset <= 0 || t.modulus <= 0 {
                return Err(Error::domain(
                    "ProductSpec",
                    format!("offset {} and modulus {} must be positive", t.offset, t.modulus),
                ));
            }
        }
        Ok(())
    }

    /// `q^{1/5} (q;q⁵)(q⁴;q⁵) / ((q²;q⁵)(q³;q⁵))`, the Rogers–Ramanujan product.
    pub fn rogers_ramanujan() -> Self {
        Self {
            prefactor_exponent: ratio(1, 5),
            ..Self::rogers_ramanujan_star()
        }
    }

    /// The Rogers–Ramanujan product without its `q^{1/5}` prefactor.
    pub fn rogers_ramanujan_star() -> Self {
        Self {
            prefactor_exponent: Rational::new(),
            terms: vec![
                ProductTerm::new(1, 5, 1),
                ProductTerm::new(4, 5, 1),
                ProductTerm::new(2, 5, -1),
                ProductTerm::new(3, 5, -1),
            ],
        }
    }

    /// `q^{1/3} (q;q⁶)(q⁵;q⁶) / (q³;q⁶)²`.
    pub fn cubic() -> Self {
        Self {
            prefactor_exponent: ratio(1, 3),
            terms: vec![
                ProductTerm::new(1, 6, 1),
                ProductTerm::new(5, 6, 1),
                ProductTerm::new(3, 6, -2),
            ],
        }
    }

    /// `q^{1/3} (q;q²) / (q³;q⁶)³`, the second product form of the cubic fraction.
    pub fn cubic_alt() -> Self {
        Self {
            prefactor_exponent: ratio(1, 3),
            terms: vec![ProductTerm::new(1, 2, 1), ProductTerm::new(3, 6, -3)],
        }
    }

    /// `q^{1/2} (q;q⁸)(q⁷;q⁸) / ((q³;q⁸)(q⁵;q⁸))`.
    pub fn octic() -> Self {
        Self {
            prefactor_exponent: ratio(1, 2),
            terms: vec![
                ProductTerm::new(1, 8, 1),
                ProductTerm::new(7, 8, 1),
                ProductTerm::new(3, 8, -1),
                ProductTerm::new(5, 8, -1),
            ],
        }
    }

    /// `q^{1/2} (q⁴;q⁴)² / (q²;q⁴)²`.
    pub fn item_vi() -> Self {
        Self {
            prefactor_exponent: ratio(1, 2),
            terms: vec![ProductTerm::new(4, 4, 2), ProductTerm::new(2, 4, -2)],
        }
    }

    /// `q^{a/12 − p/2 + p²/(2a)} (q^{a−p}; q^a)(q^p; q^a)`.
    pub fn weighted_pair(a: &Rational, p: &Rational) -> Result<Self> {
        let alpha = Rational::from(a / 12u32) - Rational::from(p / 2u32)
            + Rational::from(p * p) / Rational::from(a * 2u32);
        Self::new(
            alpha,
            vec![
                ProductTerm::new(Rational::from(a - p), a.clone(), 1),
                ProductTerm::new(p.clone(), a.clone(), 1),
            ],
        )
    }

    /// The eighth power of [`ProductSpec::weighted_pair`], whose prefactor is
    /// `q^{2a/3 − 4p + 4p²/a}`.
    pub fn weighted_pair_eighth(a: &Rational, p: &Rational) -> Result<Self> {
        let base = Self::weighted_pair(a, p)?;
        Ok(base.pow(8))
    }

    pub fn pow(&self, n: i32) -> Self {
        Self {
            prefactor_exponent: Rational::from(&self.prefactor_exponent * n),
            terms: self
                .terms
                .iter()
                .map(|t| ProductTerm {
                    exponent: t.exponent * n,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub(crate) fn eval_raw(&self, q: &Float, ctx: &PrecisionContext) -> Result<Float> {
        self.validate()?;
        check_open_nome("product_form", q)?;
        let mut value = ctx.rational_power(q, &self.prefactor_exponent);
        for t in &self.terms {
            let start = ctx.rational_power(q, &t.offset);
            let step = ctx.rational_power(q, &t.modulus);
            let factor = qpoch_inf(&start, &step, ctx)?;
            if t.exponent >= 0 {
                value *= factor.pow(t.exponent as u32);
            } else {
                value /= factor.pow((-t.exponent) as u32);
            }
        }
        Ok(value)
    }
}

pub fn product_form(spec: &ProductSpec, q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(spec.eval_raw(q, ctx)?))
}

/// Below this `t = −log(q)/2π` the Euler function is evaluated through the
/// eta transformation `η(it) = η(i/t)/√t`.
pub(crate) const ETA_DIRECT_MIN: f64 = 0.125;

/// `f(−q) = (q; q)_∞`.
pub fn euler_f(q: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(ctx.finish(euler_f_raw(q, ctx)?))
}

pub(crate) fn euler_f_raw(q: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_nome("euler_f", q)?;
    let p = ctx.internal_bits();
    if q.is_zero() {
        return Ok(Float::with_val(p, 1));
    }
    let two_pi = ctx.pi() * 2u32;
    let t = -Float::with_val(p, q.ln_ref()) / &two_pi;
    if t >= ETA_DIRECT_MIN {
        return qpoch_inf(q, q, ctx);
    }
    // f(−q) = q^{-1/24} η(it) = e^{πt/12} η(i/t) / √t
    let shift = (Float::with_val(p, &t * ctx.pi()) / 12u32).exp();
    let inv = Float::with_val(p, 1) / &t;
    Ok(shift * super::eta::eta_direct(&inv, ctx)? / t.sqrt())
}
