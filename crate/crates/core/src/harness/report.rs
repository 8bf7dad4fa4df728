use std::fmt;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::numerics::{to_decimal, PrecisionContext};

/// Decimal digits written for values and errors.
pub const OUTPUT_DIGITS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    CfProduct,
    FunctionalEquation,
    Derivative,
    Integral,
    Algebraicity,
    ClosedForm,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::CfProduct,
        Category::FunctionalEquation,
        Category::Derivative,
        Category::Integral,
        Category::Algebraicity,
        Category::ClosedForm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::CfProduct => "cf-product",
            Category::FunctionalEquation => "functional-equation",
            Category::Derivative => "derivative",
            Category::Integral => "integral",
            Category::Algebraicity => "algebraicity",
            Category::ClosedForm => "closed-form",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotFound,
    Flagged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotFound => "not-found",
            Status::Flagged => "flagged",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Acceptance criterion for a comparison.
#[derive(Debug, Clone)]
pub enum Tolerance {
    /// `|lhs − rhs| < bound`.
    Absolute(Float),
    /// `|lhs − rhs| < bound · |rhs|`.
    Relative(Float),
}

impl Tolerance {
    /// `2^-working_bits`, absolute.
    pub fn working(ctx: &PrecisionContext) -> Self {
        Tolerance::Absolute(ctx.target_tolerance())
    }

    pub fn absolute_decimal(exponent: i32, ctx: &PrecisionContext) -> Self {
        Tolerance::Absolute(ctx.float(10).pow(exponent))
    }

    pub fn relative_bits(bits: i32, ctx: &PrecisionContext) -> Self {
        Tolerance::Relative(ctx.pow2(-bits))
    }

    pub fn accepts(&self, abs_error: &Float, rel_error: &Float) -> bool {
        match self {
            Tolerance::Absolute(t) => abs_error < t,
            Tolerance::Relative(t) => rel_error < t,
        }
    }

    pub fn describe(&self) -> String {
        let (kind, bound) = match self {
            Tolerance::Absolute(t) => ("abs", t),
            Tolerance::Relative(t) => ("rel", t),
        };
        format!("tolerance {kind} < {}", to_decimal(bound, 3))
    }
}

/// Outcome of one identity check. Numbers are decimal strings so the JSON
/// form loses no precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub case: String,
    pub category: Category,
    pub lhs: String,
    pub rhs: String,
    pub abs_error: String,
    pub rel_error: String,
    pub precision_bits: u32,
    pub status: Status,
    pub notes: String,
}

impl Report {
    /// Compare two values and set `pass` or `fail`.
    pub fn compare(
        case: impl Into<String>,
        category: Category,
        lhs: &Float,
        rhs: &Float,
        tolerance: &Tolerance,
        ctx: &PrecisionContext,
    ) -> Self {
        let (abs_error, rel_error) = errors(lhs, rhs, ctx);
        let status = if tolerance.accepts(&abs_error, &rel_error) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            case: case.into(),
            category,
            lhs: to_decimal(lhs, OUTPUT_DIGITS),
            rhs: to_decimal(rhs, OUTPUT_DIGITS),
            abs_error: to_decimal(&abs_error, 6),
            rel_error: to_decimal(&rel_error, 6),
            precision_bits: ctx.working_bits(),
            status,
            notes: tolerance.describe(),
        }
    }

    /// A report carrying text in place of values, such as a polynomial or a
    /// recovered parameter.
    pub fn textual(
        case: impl Into<String>,
        category: Category,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        status: Status,
        ctx: &PrecisionContext,
    ) -> Self {
        Self {
            case: case.into(),
            category,
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_error: String::new(),
            rel_error: String::new(),
            precision_bits: ctx.working_bits(),
            status,
            notes: String::new(),
        }
    }

    /// A case whose evaluation raised an error.
    pub fn errored(case: impl Into<String>, category: Category, err: &crate::Error, ctx: &PrecisionContext) -> Self {
        let mut r = Self::textual(case, category, "", "", Status::Fail, ctx);
        r.notes = format!("error: {err}");
        r
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// `|lhs − rhs|` and that divided by `|rhs|` (or by 1 when `rhs = 0`).
pub fn errors(lhs: &Float, rhs: &Float, ctx: &PrecisionContext) -> (Float, Float) {
    let p = ctx.internal_bits().max(lhs.prec()).max(rhs.prec());
    let abs_error = Float::with_val(p, lhs - rhs).abs();
    let scale = Float::with_val(p, rhs.abs_ref());
    let rel_error = if scale.is_zero() {
        abs_error.clone()
    } else {
        Float::with_val(p, &abs_error / &scale)
    };
    (abs_error, rel_error)
}
