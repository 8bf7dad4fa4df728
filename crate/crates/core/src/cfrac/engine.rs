use std::fmt;
use std::sync::Arc;

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{BigReal, PrecisionContext};

pub const INITIAL_DEPTH: u64 = 32;
pub const MAX_DEPTH: u64 = 1 << 20;

/// Partial numerator and denominator `(a_n, b_n)` for `n ≥ 1`.
pub type TermRule = Arc<dyn Fn(u64, &PrecisionContext) -> (Float, Float) + Send + Sync>;

/// `prefactor · (b0 + a_1/(b_1 + a_2/(b_2 + …)))`.
///
/// A zero partial numerator truncates the fraction at that index. The
/// prefactor is applied after the recurrence so fractional powers such as
/// `q^{1/5}` never enter it.
#[derive(Clone)]
pub struct CfSpec {
    pub name: String,
    pub b0: Float,
    pub prefactor: Option<Float>,
    rule: TermRule,
}

impl CfSpec {
    pub fn new<F>(name: impl Into<String>, b0: Float, rule: F) -> Self
    where
        F: Fn(u64, &PrecisionContext) -> (Float, Float) + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            b0,
            prefactor: None,
            rule: Arc::new(rule),
        }
    }

    pub fn with_prefactor(mut self, prefactor: Float) -> Self {
        self.prefactor = Some(prefactor);
        self
    }

    pub fn term(&self, n: u64, ctx: &PrecisionContext) -> (Float, Float) {
        (self.rule)(n, ctx)
    }
}

impl fmt::Debug for CfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CfSpec")
            .field("name", &self.name)
            .field("b0", &self.b0)
            .field("prefactor", &self.prefactor)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub struct CfEvaluation {
    pub value: BigReal,
    /// Depth of the accepted backward recurrence.
    pub depth: u64,
    /// A vanishing denominator was nudged by one ulp during the recurrence.
    pub perturbed: bool,
    /// The fraction terminated on a zero partial numerator.
    pub finite: bool,
}

/// Evaluate by the tail-zero backward recurrence, doubling the depth from
/// [`INITIAL_DEPTH`] until two successive depths agree to the target
/// tolerance.
pub fn eval_cf(spec: &CfSpec, ctx: &PrecisionContext) -> Result<CfEvaluation> {
    let p = ctx.internal_bits();
    let tol = ctx.target_tolerance();
    let mut terms: Vec<(Float, Float)> = Vec::new();
    let mut finite_at: Option<u64> = None;

    let extend = |terms: &mut Vec<(Float, Float)>, depth: u64, finite_at: &mut Option<u64>| {
        while finite_at.is_none() && (terms.len() as u64) < depth {
            let n = terms.len() as u64 + 1;
            let (a, b) = spec.term(n, ctx);
            if a.is_zero() {
                *finite_at = Some(n - 1);
            } else {
                terms.push((a, b));
            }
        }
    };

    let finish = |tail: Float, depth: u64, perturbed: bool, finite: bool| {
        let mut value = Float::with_val(p, &spec.b0 + &tail);
        if let Some(pre) = &spec.prefactor {
            value *= pre;
        }
        CfEvaluation {
            value: ctx.finish(value),
            depth,
            perturbed,
            finite,
        }
    };

    let mut depth = INITIAL_DEPTH;
    extend(&mut terms, depth, &mut finite_at);
    if let Some(len) = finite_at {
        let (tail, perturbed) = backward(&terms[..len as usize], p);
        return Ok(finish(tail, len, perturbed, true));
    }
    let (mut previous, mut perturbed) = backward(&terms, p);
    loop {
        depth *= 2;
        if depth > MAX_DEPTH {
            return Err(Error::convergence(
                "eval_cf",
                format!("`{}` did not stabilise by depth {MAX_DEPTH}", spec.name),
            ));
        }
        extend(&mut terms, depth, &mut finite_at);
        if let Some(len) = finite_at {
            let (tail, flag) = backward(&terms[..len as usize], p);
            return Ok(finish(tail, len, perturbed || flag, true));
        }
        let (current, flag) = backward(&terms, p);
        perturbed |= flag;
        let diff = Float::with_val(p, &current - &previous).abs();
        let scale = Float::with_val(p, current.abs_ref()).max(&Float::with_val(p, 1));
        if diff < Float::with_val(p, &tol * &scale) {
            return Ok(finish(current, depth, perturbed, false));
        }
        previous = current;
    }
}

/// `a_1/(b_1 + a_2/(b_2 + … a_N/b_N))` with a zero tail.
fn backward(terms: &[(Float, Float)], p: u32) -> (Float, bool) {
    let mut tail = Float::with_val(p, 0);
    let mut perturbed = false;
    for (a, b) in terms.iter().rev() {
        let mut denominator = Float::with_val(p, b + &tail);
        if denominator.is_zero() {
            denominator = Float::with_val(p, 1) >> p as i32;
            perturbed = true;
        }
        tail = Float::with_val(p, a / &denominator);
    }
    (tail, perturbed)
}
