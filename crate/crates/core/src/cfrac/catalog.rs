use rug::ops::Pow;
use rug::{Float, Rational};

use super::engine::CfSpec;
use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;
use crate::qseries::check_open_nome;

fn pow(q: &Float, n: u64, ctx: &PrecisionContext) -> Float {
    Float::with_val(ctx.internal_bits(), q.pow(n as u32))
}

fn captured(q: &Float, ctx: &PrecisionContext) -> Float {
    ctx.float(q)
}

/// `1 + 1/(1 + 1/(1 + …))`.
pub fn golden(ctx: &PrecisionContext) -> CfSpec {
    CfSpec::new("golden", ctx.float(1), |_, c| (c.float(1), c.float(1)))
}

/// `q^{1/5} / (1 + q/(1 + q²/(1 + …)))`.
pub fn rr(q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    check_open_nome("rr", q)?;
    let qc = captured(q, ctx);
    let pre = ctx.rational_power(q, &Rational::from((1, 5)));
    Ok(CfSpec::new("rr", ctx.float(0), move |n, c| {
        if n == 1 {
            (c.float(1), c.float(1))
        } else {
            (pow(&qc, n - 1, c), c.float(1))
        }
    })
    .with_prefactor(pre))
}

/// `q^{1/3} / (1 + (q+q²)/(1 + (q²+q⁴)/(1 + …)))`.
pub fn cubic(q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    check_open_nome("cubic", q)?;
    let qc = captured(q, ctx);
    let pre = ctx.rational_power(q, &Rational::from((1, 3)));
    Ok(CfSpec::new("cubic", ctx.float(0), move |n, c| {
        if n == 1 {
            return (c.float(1), c.float(1));
        }
        let m = n - 1;
        (pow(&qc, m, c) + pow(&qc, 2 * m, c), c.float(1))
    })
    .with_prefactor(pre))
}

/// `q^{1/2} / ((1+q) + q²/((1+q³) + q⁴/((1+q⁵) + …)))`.
pub fn octic(q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    check_open_nome("octic", q)?;
    let qc = captured(q, ctx);
    let pre = ctx.rational_power(q, &Rational::from((1, 2)));
    Ok(CfSpec::new("octic", ctx.float(0), move |n, c| {
        if n == 1 {
            return (c.float(1), pow(&qc, 1, c) + 1u32);
        }
        let m = n - 1;
        (pow(&qc, 2 * m, c), pow(&qc, 2 * m + 1, c) + 1u32)
    })
    .with_prefactor(pre))
}

/// `H(x)`, the octic fraction at `q = e^{−x}`.
pub fn h(x: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    if *x <= 0 {
        return Err(Error::domain("h", "argument must be positive"));
    }
    let q = Float::with_val(ctx.internal_bits(), -x).exp();
    let mut spec = octic(&q, ctx)?;
    spec.name = "h".into();
    Ok(spec)
}

/// `1/(1 + cq/(1 + c(q²−q)/(1 + cq³/(1 + c(q⁴−q²)/(1 + …)))))`, equal to
/// `Σ_{k≥0} (−c)^k q^{k(k+1)/2}`.
pub fn m_cf_plus(c: &Float, q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    check_open_nome("m_cf_plus", q)?;
    let qc = captured(q, ctx);
    let cc = captured(c, ctx);
    Ok(CfSpec::new("m_cf_plus", ctx.float(0), move |n, x| {
        if n == 1 {
            return (x.float(1), x.float(1));
        }
        let m = n - 1;
        let a = if m % 2 == 1 {
            pow(&qc, m, x)
        } else {
            pow(&qc, m, x) - pow(&qc, m / 2, x)
        };
        (a * &cc, x.float(1))
    }))
}

/// `1/(1 − cq/(1 + c(q−q²)/(1 − cq³/(1 + c(q²−q⁴)/(1 − …)))))`, equal to
/// `M(c, q) = Σ_{k≥0} c^k q^{k(k+1)/2}`. The signs sit in the numerators.
pub fn m_cf_alt(c: &Float, q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    check_open_nome("m_cf_alt", q)?;
    let qc = captured(q, ctx);
    let cc = captured(c, ctx);
    Ok(CfSpec::new("m_cf_alt", ctx.float(0), move |n, x| {
        if n == 1 {
            return (x.float(1), x.float(1));
        }
        let m = n - 1;
        let a = if m % 2 == 1 {
            -pow(&qc, m, x)
        } else {
            pow(&qc, m / 2, x) - pow(&qc, m, x)
        };
        (a * &cc, x.float(1))
    }))
}

/// `q^{(a+1)²/4} / (1 − q^{a+2}/(1 − q^a(q⁴−q²)/(1 − q^{a+6}/(1 − …))))` for
/// odd positive `a`, equal to `1/2 − Σ_{k=0}^{(a−1)/2} q^{k²} + ϑ3(q)/2`.
pub fn odd_a_cf(a: u64, q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    if a.is_multiple_of(2) {
        return Err(Error::domain("odd_a_cf", format!("a = {a} is not an odd positive integer")));
    }
    check_open_nome("odd_a_cf", q)?;
    let qc = captured(q, ctx);
    let half = a.div_ceil(2);
    let pre = pow(q, half * half, ctx);
    Ok(CfSpec::new("odd_a_cf", ctx.float(0), move |n, x| {
        if n == 1 {
            return (x.float(1), x.float(1));
        }
        let m = n - 1;
        let a_n = if m % 2 == 1 {
            -pow(&qc, a + 2 * m, x)
        } else {
            let j = m / 2;
            -(pow(&qc, 4 * j, x) - pow(&qc, 2 * j, x)) * pow(&qc, a, x)
        };
        (a_n, x.float(1))
    })
    .with_prefactor(pre))
}

/// The item-vi fraction read literally from its typesetting:
/// `q^{1/2} / ((1−q) + q²/((1−q)(q²+1) + q⁴/((1−q)(q⁴+1) + …)))`.
///
/// This reading does not reproduce `q^{1/2}(q⁴;q⁴)²/(q²;q⁴)²`; the product
/// form is the normative value and the harness reports the mismatch.
pub fn vi_cf(q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    check_open_nome("vi_cf", q)?;
    let qc = captured(q, ctx);
    let pre = ctx.rational_power(q, &Rational::from((1, 2)));
    Ok(CfSpec::new("vi_cf", ctx.float(0), move |n, x| {
        let one_minus = x.float(1) - &qc;
        if n == 1 {
            return (x.float(1), one_minus);
        }
        let m = n - 1;
        let q2m = pow(&qc, 2 * m, x);
        let b = (q2m.clone() + 1u32) * one_minus;
        (q2m, b)
    })
    .with_prefactor(pre))
}

/// `1/(1 + q/(1 + (q²+q)/(1 + q³/(1 + (q⁴+q²)/(1 + …)))))`, continuing with
/// `a = q^m` for odd `m` and `q^m + q^{m/2}` for even `m`.
pub fn ratio8(q: &Float, ctx: &PrecisionContext) -> Result<CfSpec> {
    check_open_nome("ratio8", q)?;
    let qc = captured(q, ctx);
    Ok(CfSpec::new("ratio8", ctx.float(0), move |n, x| {
        if n == 1 {
            return (x.float(1), x.float(1));
        }
        let m = n - 1;
        let a = if m % 2 == 1 {
            pow(&qc, m, x)
        } else {
            pow(&qc, m, x) + pow(&qc, m / 2, x)
        };
        (a, x.float(1))
    }))
}

/// Names accepted by [`cf_catalog`].
pub const CATALOG_NAMES: [&str; 10] = [
    "golden", "rr", "cubic", "octic", "h", "m_cf_plus", "m_cf_alt", "odd_a_cf", "vi_cf", "ratio8",
];

/// Parameters for [`cf_catalog`]; entries that a constructor does not use are
/// ignored.
#[derive(Debug, Clone, Default)]
pub struct CatalogParams {
    pub q: Option<Float>,
    pub x: Option<Float>,
    pub c: Option<Float>,
    pub a: Option<u64>,
}

/// Build a catalog fraction by name.
pub fn cf_catalog(name: &str, params: &CatalogParams, ctx: &PrecisionContext) -> Result<CfSpec> {
    let need = |v: &Option<Float>, key: &'static str| {
        v.clone().ok_or_else(|| Error::param(key, format!("required by `{name}`")))
    };
    match name {
        "golden" => Ok(golden(ctx)),
        "rr" => rr(&need(&params.q, "q")?, ctx),
        "cubic" => cubic(&need(&params.q, "q")?, ctx),
        "octic" => octic(&need(&params.q, "q")?, ctx),
        "h" => h(&need(&params.x, "x")?, ctx),
        "m_cf_plus" => m_cf_plus(&need(&params.c, "c")?, &need(&params.q, "q")?, ctx),
        "m_cf_alt" => m_cf_alt(&need(&params.c, "c")?, &need(&params.q, "q")?, ctx),
        "odd_a_cf" => {
            let a = params.a.ok_or_else(|| Error::param("a", "required by `odd_a_cf`"))?;
            odd_a_cf(a, &need(&params.q, "q")?, ctx)
        }
        "vi_cf" => vi_cf(&need(&params.q, "q")?, ctx),
        "ratio8" => ratio8(&need(&params.q, "q")?, ctx),
        other => Err(Error::UnknownQuantity(other.to_string())),
    }
}
