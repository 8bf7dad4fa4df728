//! Continued-fraction evaluation by depth-doubling backward recurrence, and
//! the catalog of q-continued fractions paired with their product forms.

mod catalog;
mod engine;

pub use catalog::{
    cf_catalog, cubic, golden, h, m_cf_alt, m_cf_plus, octic, odd_a_cf, ratio8, rr, vi_cf,
    CatalogParams, CATALOG_NAMES,
};
pub use engine::{eval_cf, CfEvaluation, CfSpec, TermRule, INITIAL_DEPTH, MAX_DEPTH};
