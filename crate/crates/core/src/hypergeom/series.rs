use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext};

/// Hard cap on the number of series terms.
const MAX_TERMS: u64 = 10_000_000;

fn check_lower(op: &'static str, c: &Rational) -> Result<()> {
    if *c.denom() == 1 && *c <= 0 {
        return Err(Error::domain(op, format!("c = {c} is a non-positive integer")));
    }
    Ok(())
}

fn check_unit(op: &'static str, z: &Float) -> Result<()> {
    if z.is_nan() || *z.as_abs() >= 1 {
        return Err(Error::domain(op, format!("|{}| ≥ 1", z.to_f64())));
    }
    Ok(())
}

/// `₂F₁(a, b; c; z) = Σ (a)_n (b)_n / ((c)_n n!) z^n` for `|z| < 1`.
pub fn gauss_2f1(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    z: &Float,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    Ok(ctx.finish(gauss_2f1_raw(a, b, c, z, ctx)?))
}

/// Once `c + n > 0`, the term ratio is bounded for all later indices by
/// `M_n |z|` with `M_n = (1 + |a − c|/(c + n))(1 + |b − 1|/(n + 1))`, which
/// decreases in `n`; the tail is then at most `|t_{n+1}| / (1 − M_n |z|)`.
pub(crate) fn gauss_2f1_raw(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    z: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    check_lower("gauss_2f1", c)?;
    check_unit("gauss_2f1", z)?;
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let (af, bf, cf) = (ctx.float(a), ctx.float(b), ctx.float(c));
    let a_gap = ctx.float(Rational::from(a - c)).abs();
    let b_gap = ctx.float(Rational::from(b - 1u32)).abs();
    let z_abs = ctx.float(z.abs_ref());
    let mut term = ctx.float(1);
    let mut sum = ctx.float(1);
    let mut n = 0u64;
    loop {
        if term.is_zero() {
            break;
        }
        let nf = Float::with_val(p, n);
        let ratio = Float::with_val(p, &af + &nf) * Float::with_val(p, &bf + &nf)
            / (Float::with_val(p, &cf + &nf) * Float::with_val(p, &nf + 1u32));
        term *= ratio;
        term *= z;
        sum += &term;
        n += 1;
        let c_n = Float::with_val(p, &cf + n);
        if c_n > 0 {
            let m = (Float::with_val(p, &a_gap / &c_n) + 1u32)
                * (Float::with_val(p, &b_gap / (n + 1)) + 1u32);
            let rho = m * &z_abs;
            if rho < 1 {
                let bound = Float::with_val(p, term.abs_ref()) * &rho / (Float::with_val(p, 1) - &rho);
                let scale = Float::with_val(p, sum.abs_ref()).max(&Float::with_val(p, 1));
                if bound < scale * &eps {
                    break;
                }
            }
        }
        if n > MAX_TERMS {
            return Err(Error::convergence("gauss_2f1", "series did not converge"));
        }
    }
    Ok(sum)
}

/// Appell `F₁(a; b1, b2; c; x, y) = Σ_{m,n} (a)_{m+n} (b1)_m (b2)_n / (m! n! (c)_{m+n}) x^m y^n`,
/// summed as `Σ_m (a)_m (b1)_m / ((c)_m m!) x^m ₂F₁(a+m, b2; c+m; y)`.
///
/// With `0 < a ≤ c` and `b2 > 0` every row obeys `|₂F₁(a+m, b2; c+m; y)| ≤ (1 − |y|)^{−b2}`,
/// so the outer tail is bounded like a one-variable series. Otherwise the
/// bound uses twice the largest row seen.
pub fn appell_f1(
    a: &Rational,
    b1: &Rational,
    b2: &Rational,
    c: &Rational,
    x: &Float,
    y: &Float,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    Ok(ctx.finish(appell_f1_raw(a, b1, b2, c, x, y, ctx)?))
}

pub(crate) fn appell_f1_raw(
    a: &Rational,
    b1: &Rational,
    b2: &Rational,
    c: &Rational,
    x: &Float,
    y: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    check_lower("appell_f1", c)?;
    check_unit("appell_f1", x)?;
    check_unit("appell_f1", y)?;
    let p = ctx.internal_bits();
    let eps = ctx.negligible();
    let rigorous = *a > 0 && a <= c && *b2 > 0;
    let row_bound = if rigorous {
        let one_minus = ctx.float(1) - ctx.float(y.abs_ref());
        Some(ctx.rational_power(&one_minus, &Rational::from(-b2)))
    } else {
        None
    };
    let a_gap = ctx.float(Rational::from(a - c)).abs();
    let b_gap = ctx.float(Rational::from(b1 - 1u32)).abs();
    let x_abs = ctx.float(x.abs_ref());
    let mut coefficient = ctx.float(1);
    let mut largest_row = ctx.float(0);
    let mut sum = ctx.float(0);
    let mut m = 0u64;
    loop {
        let am = Rational::from(a + m);
        let cm = Rational::from(c + m);
        let row = gauss_2f1_raw(&am, b2, &cm, y, ctx)?;
        let row_abs = Float::with_val(p, row.abs_ref());
        if row_abs > largest_row {
            largest_row = row_abs;
        }
        sum += Float::with_val(p, &coefficient * &row);
        let step = ctx.float(&am) * ctx.float(Rational::from(b1 + m))
            / (ctx.float(&cm) * ctx.float(m + 1));
        coefficient *= step;
        coefficient *= x;
        m += 1;
        if coefficient.is_zero() {
            break;
        }
        let c_m = ctx.float(Rational::from(c + m));
        if c_m > 0 {
            let factor = (Float::with_val(p, &a_gap / &c_m) + 1u32)
                * (Float::with_val(p, &b_gap / (m + 1)) + 1u32);
            let rho = factor * &x_abs;
            if rho < 1 {
                let rows = match &row_bound {
                    Some(b) => b.clone(),
                    None => Float::with_val(p, &largest_row * 2u32),
                };
                let bound = Float::with_val(p, coefficient.abs_ref()) * rows
                    / (Float::with_val(p, 1) - &rho);
                let scale = Float::with_val(p, sum.abs_ref()).max(&Float::with_val(p, 1));
                if bound < scale * &eps {
                    break;
                }
            }
        }
        if m > MAX_TERMS {
            return Err(Error::convergence("appell_f1", "series did not converge"));
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn value_at_zero_is_one() {
        let ctx = ctx();
        let v = gauss_2f1(&q(1, 3), &q(2, 7), &q(5, 2), &ctx.float(0), &ctx).unwrap();
        assert!(v.approx_eq(&ctx.float(1), &ctx.target_tolerance()));
        let f = appell_f1(&q(1, 6), &q(1, 6), &q(1, 6), &q(7, 6), &ctx.float(0), &ctx.float(0), &ctx).unwrap();
        assert!(f.approx_eq(&ctx.float(1), &ctx.target_tolerance()));
    }

    #[test]
    fn logarithm_reduction() {
        let ctx = ctx();
        let z = ctx.float(0.5);
        let v = gauss_2f1(&q(1, 1), &q(1, 1), &q(2, 1), &z, &ctx).unwrap();
        let expected = -(ctx.float(1) - &z).ln() / &z;
        assert!(v.approx_eq(&expected, &ctx.target_tolerance()));
    }

    #[test]
    fn binomial_reduction() {
        // ₂F₁(a, b; b; z) = (1 − z)^{−a}
        let ctx = ctx();
        let z = ctx.float(-0.7);
        let v = gauss_2f1(&q(1, 3), &q(3, 4), &q(3, 4), &z, &ctx).unwrap();
        let expected = ctx.rational_power(&(ctx.float(1) - &z), &q(-1, 3));
        assert!(v.approx_eq(&expected, &ctx.target_tolerance()));
    }

    #[test]
    fn arcsine_reduction() {
        // ₂F₁(1/2, 1/2; 3/2; z²) = arcsin(z)/z
        let ctx = ctx();
        let z = ctx.float(0.9);
        let v = gauss_2f1(&q(1, 2), &q(1, 2), &q(3, 2), &ctx.float(z.square_ref()), &ctx).unwrap();
        let expected = ctx.float(z.asin_ref()) / &z;
        assert!(v.approx_eq(&expected, &ctx.target_tolerance()));
    }

    #[test]
    fn appell_axis_reductions() {
        let ctx = ctx();
        let (a, b1, b2, c) = (q(1, 6), q(1, 6), q(1, 6), q(7, 6));
        let x = ctx.float(0.1);
        let zero = ctx.float(0);
        let f = appell_f1(&a, &b1, &b2, &c, &x, &zero, &ctx).unwrap();
        let g = gauss_2f1(&a, &b1, &c, &x, &ctx).unwrap();
        assert!(f.approx_eq(&g, &ctx.target_tolerance()));
        let f = appell_f1(&a, &b1, &b2, &c, &zero, &x, &ctx).unwrap();
        let g = gauss_2f1(&a, &b2, &c, &x, &ctx).unwrap();
        assert!(f.approx_eq(&g, &ctx.target_tolerance()));
    }

    #[test]
    fn appell_equal_arguments() {
        // F₁(a; b1, b2; c; x, x) = ₂F₁(a, b1 + b2; c; x)
        let ctx = ctx();
        let x = ctx.float(0.35);
        let f = appell_f1(&q(1, 3), &q(1, 5), &q(2, 7), &q(3, 2), &x, &x, &ctx).unwrap();
        let g = gauss_2f1(&q(1, 3), &(q(1, 5) + q(2, 7)), &q(3, 2), &x, &ctx).unwrap();
        assert!(f.approx_eq(&g, &ctx.target_tolerance()));
    }

    #[test]
    fn domain_errors() {
        let ctx = ctx();
        let z = ctx.float(0.5);
        assert!(matches!(gauss_2f1(&q(1, 2), &q(1, 2), &q(-2, 1), &z, &ctx), Err(Error::Domain { .. })));
        assert!(matches!(gauss_2f1(&q(1, 2), &q(1, 2), &q(1, 1), &ctx.float(1), &ctx), Err(Error::Domain { .. })));
        assert!(matches!(
            appell_f1(&q(1, 2), &q(1, 2), &q(1, 2), &q(1, 1), &z, &ctx.float(-1.5), &ctx),
            Err(Error::Domain { .. })
        ));
    }
}
