//! Integer-relation detection: minimal polynomials of numerical constants by
//! lattice reduction, confirmed at doubled precision.

mod lll;
mod minpoly;
mod suite;

pub use lll::lll_reduce;
pub use minpoly::{
    degree_sweep, eval_poly, find_relation, format_polynomial, min_poly, normalize,
    AlgebraicCandidate, HEIGHT_CAP, MIN_PRECISION_BITS,
};
pub use suite::{
    algebraicity_suite, algebraicity_suite_with, instance_report, run_instance, suite_instances,
    AlgebraicInstance, Evaluator, InstanceOutcome, DEFAULT_MAX_DEGREE, DEFAULT_SUITE_BITS,
};
