use std::sync::Arc;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};

use super::minpoly::{min_poly, AlgebraicCandidate};
use crate::error::Result;
use crate::harness::{Category, Report, Status};
use crate::modular::{nome_for, normalized_bilateral_m, normalized_theta_sum, point_raw};
use crate::numerics::{BigReal, PrecisionContext};
use crate::qseries::{qpoch_inf, ProductSpec};

/// Default degree bound for the sweep.
pub const DEFAULT_MAX_DEGREE: usize = 16;

/// Default working precision for the sweep.
pub const DEFAULT_SUITE_BITS: u32 = 512;

pub type Evaluator = Arc<dyn Fn(&PrecisionContext) -> Result<BigReal> + Send + Sync>;

/// A quantity claimed to be algebraic. When several normalizations are
/// listed, the first one with a confirmed polynomial is reported.
#[derive(Clone)]
pub struct AlgebraicInstance {
    pub name: String,
    pub description: String,
    pub normalizations: Vec<(String, Evaluator)>,
}

impl std::fmt::Debug for AlgebraicInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlgebraicInstance")
            .field("name", &self.name)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

impl AlgebraicInstance {
    fn single(name: impl Into<String>, description: impl Into<String>, eval: Evaluator) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            normalizations: vec![(String::new(), eval)],
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn product_at(spec: ProductSpec, r: Rational) -> Evaluator {
    Arc::new(move |ctx| {
        let nome = nome_for(&r, ctx)?;
        Ok(ctx.finish(spec.eval_raw(&nome, ctx)?))
    })
}

/// `(−q^s; q^t)_∞`.
fn plus_pochhammer(nome: &Float, s: u32, t: u32, ctx: &PrecisionContext) -> Result<Float> {
    let start = -ctx.float(nome.pow(s));
    qpoch_inf(&start, &ctx.float(nome.pow(t)), ctx)
}

/// `q^{1/2}(q⁴;q⁴)²/(q²;q⁴)²` divided by `(K/π)^e` at `r = 1`.
fn vi_normalized(exponent: Rational) -> Evaluator {
    Arc::new(move |ctx| {
        let point = point_raw(&Rational::from(1), ctx)?;
        let value = ProductSpec::item_vi().eval_raw(&point.q, ctx)?;
        let scale = ctx.rational_power(&(ctx.float(&point.big_k) / ctx.pi()), &exponent);
        Ok(ctx.finish(value / scale))
    })
}

/// The instances run by [`algebraicity_suite`].
pub fn suite_instances() -> Vec<AlgebraicInstance> {
    let mut out = Vec::new();
    for (a, p, r) in [(5, 1, 1), (5, 2, 1), (6, 1, 2)] {
        let spec = ProductSpec::weighted_pair_eighth(&q(a, 1), &q(p, 1)).expect("positive offsets");
        out.push(AlgebraicInstance::single(
            format!("weighted-pair-a{a}-p{p}-r{r}"),
            format!("q^(2a/3-4p+4p^2/a) (q^(a-p);q^a)^8 (q^p;q^a)^8, a={a}, p={p}, q=e^(-pi*sqrt({r}))"),
            product_at(spec, q(r, 1)),
        ));
    }
    let theta_cases = [
        ("theta-sum-pentagonal-r1", q(3, 2), q(-1, 2), q(0, 1), 1),
        ("theta-sum-square-r1", q(1, 1), q(0, 1), q(0, 1), 1),
        ("theta-sum-shifted-r2", q(1, 1), q(1, 2), q(0, 1), 2),
    ];
    for (name, a, b, c, r) in theta_cases {
        let description = format!("(q^((b^2-4ac)/4a) sqrt(pi/K) sum q^(a v^2+b v+c))^8, (a,b,c)=({a},{b},{c}), r={r}");
        out.push(AlgebraicInstance::single(
            name,
            description,
            Arc::new(move |ctx| normalized_theta_sum(&a, &b, &c, &q(r, 1), ctx)),
        ));
    }
    for r in [1, 2] {
        out.push(AlgebraicInstance::single(
            format!("rr-r{r}"),
            format!("R(e^(-pi*sqrt({r})))"),
            product_at(ProductSpec::rogers_ramanujan(), q(r, 1)),
        ));
    }
    out.push(AlgebraicInstance::single(
        "cubic-r1",
        "cubic fraction at e^(-pi)",
        product_at(ProductSpec::cubic(), q(1, 1)),
    ));
    out.push(AlgebraicInstance::single(
        "octic-r1",
        "octic fraction at e^(-pi)",
        product_at(ProductSpec::octic(), q(1, 1)),
    ));
    out.push(AlgebraicInstance::single(
        "plus-even-eighth-r1",
        "q^(2/3) (-q^2;q^2)^8 at e^(-pi)",
        Arc::new(|ctx| {
            let nome = nome_for(&q(1, 1), ctx)?;
            let v = plus_pochhammer(&nome, 2, 2, ctx)?.pow(8u32);
            Ok(ctx.finish(v * ctx.rational_power(&nome, &q(2, 3))))
        }),
    ));
    out.push(AlgebraicInstance::single(
        "plus-odd-eighth-r1",
        "q^(-1/3) (-q;q^2)^8 at e^(-pi)",
        Arc::new(|ctx| {
            let nome = nome_for(&q(1, 1), ctx)?;
            let v = plus_pochhammer(&nome, 1, 2, ctx)?.pow(8u32);
            Ok(ctx.finish(v * ctx.rational_power(&nome, &q(-1, 3))))
        }),
    ));
    out.push(AlgebraicInstance {
        name: "item-vi-r1".into(),
        description: "q^(1/2)(q^4;q^4)^2/(q^2;q^4)^2 over K/pi or sqrt(K/pi) at e^(-pi)".into(),
        normalizations: vec![
            ("K/pi".into(), vi_normalized(q(1, 1))),
            ("sqrt(K/pi)".into(), vi_normalized(q(1, 2))),
        ],
    });
    out.push(AlgebraicInstance::single(
        "ratio8-r1",
        "q ((-q^2;q^2)/(-q;q^2))^8 at e^(-pi)",
        Arc::new(|ctx| {
            let nome = nome_for(&q(1, 1), ctx)?;
            let ratio = plus_pochhammer(&nome, 2, 2, ctx)? / plus_pochhammer(&nome, 1, 2, ctx)?;
            Ok(ctx.finish(ratio.pow(8u32) * nome))
        }),
    ));
    out.push(AlgebraicInstance::single(
        "bilateral-m-a0-r1",
        "sum q^(k(k+1)/2) over q^(-1/8) sqrt(K/pi) at e^(-pi)",
        Arc::new(|ctx| normalized_bilateral_m(&Rational::new(), &q(1, 1), ctx)),
    ));
    out
}

/// Outcome of one instance: the normalization used and the candidate, if any.
#[derive(Debug, Clone)]
pub struct InstanceOutcome {
    pub normalization: String,
    pub value: BigReal,
    pub candidate: Option<AlgebraicCandidate>,
}

pub fn run_instance(
    instance: &AlgebraicInstance,
    max_degree: usize,
    ctx: &PrecisionContext,
) -> Result<InstanceOutcome> {
    let mut first: Option<InstanceOutcome> = None;
    for (label, eval) in &instance.normalizations {
        let value = eval(ctx)?;
        let found = min_poly(|c| eval(c), max_degree, ctx)?;
        let outcome = InstanceOutcome {
            normalization: label.clone(),
            value,
            candidate: found.clone(),
        };
        if found.is_some_and(|c| c.confirmed) {
            return Ok(outcome);
        }
        first.get_or_insert(outcome);
    }
    Ok(first.expect("at least one normalization"))
}

pub fn instance_report(
    instance: &AlgebraicInstance,
    max_degree: usize,
    ctx: &PrecisionContext,
) -> Report {
    let case = format!("algebraic-{}", instance.name);
    let outcome = match run_instance(instance, max_degree, ctx) {
        Ok(o) => o,
        Err(e) => return Report::errored(case, Category::Algebraicity, &e, ctx),
    };
    let value = outcome.value.to_decimal(crate::harness::OUTPUT_DIGITS);
    let mut report = match &outcome.candidate {
        Some(c) if c.confirmed => {
            let mut r = Report::textual(&case, Category::Algebraicity, value, c.display(), Status::Pass, ctx);
            r.abs_error = c.residual.to_decimal(6);
            r.rel_error = c.confirmation_residual.to_decimal(6);
            r.note(format!(
                "degree {}, height {}, coefficients {:?}",
                c.degree,
                c.height,
                c.coefficients.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            ))
        }
        _ => Report::textual(&case, Category::Algebraicity, value, "", Status::NotFound, ctx)
            .note(format!("no confirmed relation up to degree {max_degree}")),
    };
    report = report.note(&instance.description);
    if !outcome.normalization.is_empty() {
        report = report.note(format!("normalization {}", outcome.normalization));
    }
    report
}

/// Run min_poly on every instance of [`suite_instances`] in parallel.
pub fn algebraicity_suite(ctx: &PrecisionContext) -> Vec<Report> {
    algebraicity_suite_with(DEFAULT_MAX_DEGREE, ctx)
}

pub fn algebraicity_suite_with(max_degree: usize, ctx: &PrecisionContext) -> Vec<Report> {
    let instances = suite_instances();
    let mut reports: Vec<Report> = instances
        .par_iter()
        .map(|i| instance_report(i, max_degree, ctx))
        .collect();
    reports.sort_by(|a, b| a.case.cmp(&b.case));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(name: &str) -> AlgebraicInstance {
        suite_instances().into_iter().find(|i| i.name == name).unwrap()
    }

    #[test]
    fn eighth_powers_are_rational() {
        let ctx = PrecisionContext::new(256).unwrap();
        for (name, expected) in [("plus-even-eighth-r1", q(1, 8)), ("plus-odd-eighth-r1", q(4, 1)), ("ratio8-r1", q(1, 32))] {
            let v = (find(name).normalizations[0].1)(&ctx.elevated()).unwrap();
            assert!(v.approx_eq(&ctx.float(&expected), &ctx.target_tolerance()), "{name}");
        }
    }

    #[test]
    fn vi_uses_first_power_of_k() {
        let ctx = PrecisionContext::new(256).unwrap();
        let outcome = run_instance(&find("item-vi-r1"), 4, &ctx).unwrap();
        assert_eq!(outcome.normalization, "K/pi");
        let c = outcome.candidate.unwrap();
        assert_eq!(c.display(), "8*x^2 - 1");
    }

    #[test]
    fn rr_at_r1() {
        let ctx = PrecisionContext::new(512).unwrap();
        let r = instance_report(&find("rr-r1"), 16, &ctx);
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!(r.notes.contains("degree 8"));
    }
}
