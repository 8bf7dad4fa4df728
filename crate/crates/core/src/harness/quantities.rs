use std::sync::Arc;

use super::constants;
use super::params::{Args, ParamMap};
use crate::algid::suite_instances;
use crate::cfrac::{self, eval_cf};
use crate::error::{Error, Result};
use crate::hypergeom::{
    appell_f1, eta4_antiderivative, eta4_integrand, eta4_inverted_integrand, gauss_2f1,
    glasser8_integrand, glasser9_integrand,
};
use crate::modular::{
    modular_point, normalized_bilateral_m, normalized_theta_sum, nome_for, product_log_derivative,
    rr_derivative_formula, rr_eta_quotient, rr_theta_quotient,
};
use crate::numerics::{integrate, BigReal, PrecisionContext};
use rug::Float;
use crate::qseries::{
    bilateral_theta, dedekind_eta, euler_f, log_rstar_series, m_series, product_form, theta2,
    theta3, theta4, y2_log_series, y2_product, ProductSpec,
};

pub type QuantityFn = Arc<dyn Fn(&Args, &PrecisionContext) -> Result<BigReal> + Send + Sync>;

/// A named scalar that `eval` and `minpoly` can compute.
#[derive(Clone)]
pub struct Quantity {
    pub name: String,
    pub description: String,
    /// Accepted parameter names.
    pub params: Vec<&'static str>,
    pub eval: QuantityFn,
}

impl std::fmt::Debug for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Quantity")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl Quantity {
    pub fn evaluate(&self, overrides: &ParamMap, ctx: &PrecisionContext) -> Result<BigReal> {
        let args = Args::resolve(&ParamMap::new(), overrides, &self.params)?;
        args.validate(ctx)?;
        (self.eval)(&args, ctx)
    }
}

const NOME: &[&str] = &["q", "x"];

fn quantity<F>(name: &str, params: &[&'static str], description: &str, f: F) -> Quantity
where
    F: Fn(&Args, &PrecisionContext) -> Result<BigReal> + Send + Sync + 'static,
{
    Quantity {
        name: name.to_string(),
        description: description.to_string(),
        params: params.to_vec(),
        eval: Arc::new(f),
    }
}

fn cf_value(spec: Result<cfrac::CfSpec>, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(eval_cf(&spec?, ctx)?.value)
}

fn product(spec: ProductSpec) -> impl Fn(&Args, &PrecisionContext) -> Result<BigReal> {
    move |a, c| product_form(&spec, &a.nome(c)?, c)
}

/// Every registered quantity, sorted by name.
pub fn quantities() -> Vec<Quantity> {
    let mut out = vec![
        quantity("golden", &[], "1 + 1/(1 + 1/(1 + ...))", |_, c| cf_value(Ok(cfrac::golden(c)), c)),
        quantity("rr", NOME, "Rogers-Ramanujan fraction R(q), product form", product(ProductSpec::rogers_ramanujan())),
        quantity("rr-cf", NOME, "R(q) by continued fraction", |a, c| cf_value(cfrac::rr(&a.nome(c)?, c), c)),
        quantity("rr-theta", &["x"], "R(e^-x) as a theta quotient", |a, c| rr_theta_quotient(&a.real("x", c)?, c)),
        quantity("rr-eta", &["tau"], "R(e^(-2 pi tau)) from the eta quotient", |a, c| {
            rr_eta_quotient(&a.real("tau", c)?, c)
        }),
        quantity("rr-log-series", NOME, "q^(1/5) exp(log R*(q)) from the divisor-sum series", |a, c| {
            let q = a.nome(c)?;
            let log = log_rstar_series(&q, c)?;
            let fifth = c.rational_power(&q, &rug::Rational::from((1, 5)));
            Ok(c.finish(fifth * c.float(log.as_float()).exp()))
        }),
        quantity("cubic", NOME, "cubic fraction, product form", product(ProductSpec::cubic())),
        quantity("cubic-cf", NOME, "cubic fraction by continued fraction", |a, c| cf_value(cfrac::cubic(&a.nome(c)?, c), c)),
        quantity("octic", NOME, "octic fraction, product form", product(ProductSpec::octic())),
        quantity("octic-cf", NOME, "octic fraction by continued fraction", |a, c| cf_value(cfrac::octic(&a.nome(c)?, c), c)),
        quantity("h", &["x"], "H(x), the octic fraction at e^-x", |a, c| cf_value(cfrac::h(&a.real("x", c)?, c), c)),
        quantity("item-vi", NOME, "q^(1/2)(q^4;q^4)^2/(q^2;q^4)^2", product(ProductSpec::item_vi())),
        quantity("vi-cf", NOME, "the item-vi fraction read literally", |a, c| cf_value(cfrac::vi_cf(&a.nome(c)?, c), c)),
        quantity("ratio8-cf", NOME, "the (-q^2;q^2)/(-q;q^2) fraction", |a, c| cf_value(cfrac::ratio8(&a.nome(c)?, c), c)),
        quantity("m-cf-plus", &["c", "q"], "fraction equal to M(-c, q)", |a, c| {
            cf_value(cfrac::m_cf_plus(&a.real("c", c)?, &a.real("q", c)?, c), c)
        }),
        quantity("m-cf-alt", &["c", "q"], "fraction equal to M(c, q)", |a, c| {
            cf_value(cfrac::m_cf_alt(&a.real("c", c)?, &a.real("q", c)?, c), c)
        }),
        quantity("odd-a-cf", &["a", "q"], "the odd-a fraction", |a, c| {
            cf_value(cfrac::odd_a_cf(a.unsigned("a", c)?, &a.real("q", c)?, c), c)
        }),
        quantity("m-series", &["c", "q"], "M(c, q) = sum c^k q^(k(k+1)/2), k >= 0", |a, c| {
            m_series(&a.real("c", c)?, &a.real("q", c)?, c)
        }),
        quantity("bilateral-theta", &["c", "q"], "sum over all k of c^k q^(k(k+1)/2)", |a, c| {
            bilateral_theta(&a.real("c", c)?, &a.real("q", c)?, c)
        }),
        quantity("euler-f", NOME, "f(-q) = (q;q)_inf", |a, c| euler_f(&a.nome(c)?, c)),
        quantity("eta", &["t"], "Dedekind eta(i t)", |a, c| dedekind_eta(&a.real("t", c)?, c)),
        quantity("theta2", NOME, "theta_2(q)", |a, c| theta2(&a.nome(c)?, c)),
        quantity("theta3", NOME, "theta_3(q)", |a, c| theta3(&a.nome(c)?, c)),
        quantity("theta4", NOME, "theta_4(q)", |a, c| theta4(&a.nome(c)?, c)),
        quantity("k", &["r"], "singular modulus k_r", |a, c| Ok(modular_point(&a.rational("r", c)?, c)?.k)),
        quantity("k-prime", &["r"], "complementary modulus k'_r", |a, c| {
            Ok(modular_point(&a.rational("r", c)?, c)?.k_prime)
        }),
        quantity("big-k", &["r"], "complete elliptic integral K(k_r)", |a, c| {
            Ok(modular_point(&a.rational("r", c)?, c)?.big_k)
        }),
        quantity("log-rstar", NOME, "log R*(q) from its divisor-sum series", |a, c| log_rstar_series(&a.nome(c)?, c)),
        quantity("y2-product", &["x"], "product of (1 - e^(-n x))^Y2(n)", |a, c| y2_product(&a.real("x", c)?, c)),
        quantity("y2-log-series", &["x"], "mod-3 divisor-sum series", |a, c| y2_log_series(&a.real("x", c)?, c)),
        quantity("gauss-2f1", &["a", "b", "c", "z"], "2F1(a, b; c; z)", |a, c| {
            gauss_2f1(&a.rational("a", c)?, &a.rational("b", c)?, &a.rational("c", c)?, &a.real("z", c)?, c)
        }),
        quantity("appell-f1", &["a", "b1", "b2", "c", "x", "y"], "Appell F1(a; b1, b2; c; x, y)", |a, c| {
            appell_f1(
                &a.rational("a", c)?,
                &a.rational("b1", c)?,
                &a.rational("b2", c)?,
                &a.rational("c", c)?,
                &a.real("x", c)?,
                &a.real("y", c)?,
                c,
            )
        }),
        quantity("eta4-antiderivative", &["y"], "antiderivative of 2 pi eta(i y)^4", |a, c| {
            eta4_antiderivative(&a.real("y", c)?, c)
        }),
        quantity("rr-derivative", NOME, "R'(q) by logarithmic differentiation", |a, c| {
            product_log_derivative(&ProductSpec::rogers_ramanujan(), &a.nome(c)?, c)
        }),
        quantity("rr-derivative-formula", &["r"], "R'(e^(-pi sqrt r)) from k, k', K", |a, c| {
            let r = a.rational("r", c)?;
            rr_derivative_formula(&nome_for(&r, c)?, &r, c)
        }),
        quantity("theta-sum-normalized", &["a", "b", "c", "r"], "(q^((b^2-4ac)/4a) sqrt(pi/K) sum q^(a v^2 + b v + c))^8", |a, c| {
            normalized_theta_sum(
                &a.rational("a", c)?,
                &a.rational("b", c)?,
                &a.rational("c", c)?,
                &a.rational("r", c)?,
                c,
            )
        }),
        quantity("weighted-pair-eighth", &["a", "p", "r"], "q^(2a/3-4p+4p^2/a)(q^(a-p);q^a)^8(q^p;q^a)^8 at e^(-pi sqrt r)", |a, c| {
            let spec = ProductSpec::weighted_pair_eighth(&a.rational("a", c)?, &a.rational("p", c)?)?;
            product_form(&spec, &nome_for(&a.rational("r", c)?, c)?, c)
        }),
        quantity("bilateral-m-normalized", &["a", "r"], "bilateral M sum over q^(-1/8) sqrt(K/pi), shifted by a", |a, c| {
            normalized_bilateral_m(&a.rational("a", c)?, &a.rational("r", c)?, c)
        }),
        quantity("rho", &[], "R'(e^-pi) 16 pi^3 / (e^pi Gamma(1/4)^4)", |_, c| Ok(c.finish(constants::rho(c)?))),
    ];
    for instance in suite_instances() {
        if out.iter().any(|q| q.name == instance.name) {
            continue;
        }
        let (label, eval) = instance.normalizations[0].clone();
        let description = if label.is_empty() {
            instance.description.clone()
        } else {
            format!("{} (normalized by {label})", instance.description)
        };
        out.push(quantity(&instance.name, &[], &description, move |_, c| eval(c)));
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

pub fn find_quantity(name: &str) -> Result<Quantity> {
    quantities()
        .into_iter()
        .find(|q| q.name == name)
        .ok_or_else(|| Error::UnknownQuantity(name.to_string()))
}

/// Evaluate a quantity by name.
pub fn eval_quantity(name: &str, overrides: &ParamMap, ctx: &PrecisionContext) -> Result<BigReal> {
    find_quantity(name)?.evaluate(overrides, ctx)
}

/// A one-variable function the `integrate` command can integrate.
pub type IntegrandFn = fn(&Float, &PrecisionContext) -> Result<BigReal>;

/// Registered integrands as `(name, description, function)`.
pub const INTEGRANDS: [(&str, &str, IntegrandFn); 4] = [
    ("eta4", "eta(i x)^4", eta4_integrand),
    ("eta4-inverted", "eta(i/u)^4 / u^2", eta4_inverted_integrand),
    ("glasser8", "f(-q)^4 q^(-5/6)", glasser8_integrand),
    ("glasser9", "f(-q^5)^4 q^(-1/6)", glasser9_integrand),
];

/// Tanh-sinh quadrature of a registered integrand over `[a, b]`.
pub fn integrate_named(name: &str, a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<BigReal> {
    let (_, _, f) = INTEGRANDS
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| Error::UnknownQuantity(name.to_string()))?;
    integrate(f, a, b, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::params::parse_assignments;

    #[test]
    fn names_are_unique() {
        let q = quantities();
        let mut names: Vec<_> = q.iter().map(|q| q.name.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), q.len());
    }

    #[test]
    fn rr_by_step() {
        let ctx = PrecisionContext::new(256).unwrap();
        let p = parse_assignments(&["x=2*pi"]).unwrap();
        let v = eval_quantity("rr", &p, &ctx.elevated()).unwrap();
        assert!(v.approx_eq(&constants::rr_at_2pi(&ctx.elevated()), &ctx.target_tolerance()));
        let w = eval_quantity("rr-cf", &p, &ctx.elevated()).unwrap();
        assert!(w.approx_eq(v.as_float(), &ctx.target_tolerance()));
    }

    #[test]
    fn errors() {
        let ctx = PrecisionContext::new(128).unwrap();
        assert!(matches!(eval_quantity("nope", &ParamMap::new(), &ctx), Err(Error::UnknownQuantity(_))));
        let bad = parse_assignments(&["z=1"]).unwrap();
        assert!(matches!(eval_quantity("rr", &bad, &ctx), Err(Error::InvalidParameter { .. })));
        let missing = ParamMap::new();
        assert!(matches!(eval_quantity("rr", &missing, &ctx), Err(Error::InvalidParameter { .. })));
        let outside = parse_assignments(&["q=2"]).unwrap();
        assert!(matches!(eval_quantity("rr", &outside, &ctx), Err(Error::Domain { .. })));
    }

    #[test]
    fn suite_instances_are_quantities() {
        let ctx = PrecisionContext::new(256).unwrap();
        let v = eval_quantity("plus-odd-eighth-r1", &ParamMap::new(), &ctx.elevated()).unwrap();
        assert!(v.approx_eq(&ctx.float(4), &ctx.target_tolerance()));
    }

    #[test]
    fn named_integrand() {
        let ctx = PrecisionContext::new(128).unwrap();
        let v = integrate_named("eta4", &ctx.float(1), &ctx.float(2), &ctx).unwrap();
        let oracle = ctx.float(rug::Float::parse("0.2171520172100100206611300887166859251541").unwrap());
        assert!(v.approx_eq(&oracle, &ctx.pow2(-120)));
        assert!(integrate_named("nope", &ctx.float(0), &ctx.float(1), &ctx).is_err());
    }
}
