//! Identity registry, suite runner and report serialization.

mod cases;
mod config;
mod constants;
mod expr;
mod params;
mod quantities;
mod report;

pub use cases::{label, run_identity, run_suite, CaseFn, CaseGroup, IdentityCase, Registry};
pub use config::{AlgidConfig, Config, Grids, CONFIG_ENV};
pub use constants::{rho, rho_polynomial, RHO_POLYNOMIAL};
pub use expr::{evaluate, Value};
pub use params::{parse_assignments, Args, ParamMap};
pub use quantities::{
    eval_quantity, find_quantity, integrate_named, quantities, IntegrandFn, Quantity, QuantityFn,
    INTEGRANDS,
};
pub use report::{errors, Category, Report, Status, Tolerance, OUTPUT_DIGITS};
