use std::fmt;
use std::ops::Deref;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Binary precision policy shared by every evaluator.
///
/// Results are asserted accurate to `2^-working_bits`; the arithmetic that
/// produces them runs at `working_bits + guard_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    working_bits: u32,
    guard_bits: u32,
}

impl PrecisionContext {
    pub const MIN_WORKING_BITS: u32 = 64;
    pub const DEFAULT_GUARD_BITS: u32 = 64;

    pub fn new(working_bits: u32) -> Result<Self> {
        Self::with_guard(working_bits, Self::DEFAULT_GUARD_BITS)
    }

    pub fn with_guard(working_bits: u32, guard_bits: u32) -> Result<Self> {
        if working_bits < Self::MIN_WORKING_BITS {
            return Err(Error::Precondition {
                op: "PrecisionContext",
                reason: format!(
                    "working_bits must be at least {}, got {working_bits}",
                    Self::MIN_WORKING_BITS
                ),
            });
        }
        Ok(Self {
            working_bits,
            guard_bits,
        })
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Precision of the intermediate arithmetic.
    pub fn internal_bits(&self) -> u32 {
        self.working_bits + self.guard_bits
    }

    /// Same guard policy, `factor` times the working precision.
    pub fn scaled(&self, factor: u32) -> Self {
        Self {
            working_bits: self.working_bits * factor,
            guard_bits: self.guard_bits,
        }
    }

    /// Context whose working precision covers this context's guard bits.
    ///
    /// Callers that compare two routes at `2^-working_bits` evaluate both
    /// routes here so the final rounding does not eat into the tolerance.
    pub fn elevated(&self) -> Self {
        Self {
            working_bits: self.internal_bits(),
            guard_bits: self.guard_bits,
        }
    }

    /// `2^-working_bits`.
    pub fn target_tolerance(&self) -> Float {
        self.pow2(-(self.working_bits as i32))
    }

    /// `2^-internal_bits`, the magnitude below which terms are dropped.
    pub fn negligible(&self) -> Float {
        self.pow2(-(self.internal_bits() as i32))
    }

    pub fn pow2(&self, exponent: i32) -> Float {
        Float::with_val(self.internal_bits(), 1) << exponent
    }

    /// A value at the internal precision.
    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.internal_bits(), value)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.internal_bits(), Constant::Pi)
    }

    /// `x^e` for rational `e`, computed as `exp(e log x)`.
    pub fn rational_power(&self, x: &Float, exponent: &rug::Rational) -> Float {
        if *exponent.numer() == 0 {
            return self.float(1);
        }
        if *exponent.denom() == 1 {
            if let Some(e) = exponent.numer().to_i32() {
                return self.float(x).pow(e);
            }
        }
        let e = self.float(exponent);
        (self.float(x).ln() * e).exp()
    }

    /// Round an internal value once to the working precision.
    pub fn finish(&self, value: Float) -> BigReal {
        BigReal::new(Float::with_val(self.working_bits, value))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            working_bits: 256,
            guard_bits: Self::DEFAULT_GUARD_BITS,
        }
    }
}

/// Arbitrary-precision real together with the precision it was produced at.
///
/// There is deliberately no `PartialEq`; compare with [`BigReal::approx_eq`].
#[derive(Debug, Clone)]
pub struct BigReal(Float);

impl BigReal {
    pub fn new(value: Float) -> Self {
        BigReal(value)
    }

    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn abs_diff(&self, other: &Float) -> Float {
        let prec = self.bits().max(other.prec());
        Float::with_val(prec, &self.0 - other).abs()
    }

    pub fn approx_eq(&self, other: &Float, tolerance: &Float) -> bool {
        self.abs_diff(other) < *tolerance
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        to_decimal(&self.0, digits)
    }
}

impl Deref for BigReal {
    type Target = Float;

    fn deref(&self) -> &Float {
        &self.0
    }
}

impl From<Float> for BigReal {
    fn from(value: Float) -> Self {
        BigReal(value)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.bits() as f64 * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

/// Scientific-notation decimal string of `x` with `digits` significant digits.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    // rug prints `1.234e-5`; normalise an explicit `e+` away for stable output.
    s.replace("e+", "e")
}
