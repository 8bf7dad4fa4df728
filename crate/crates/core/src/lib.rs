//! High-precision evaluation and verification of Ramanujan-type continued
//! fractions and q-series.
//!
//! Every quantity is computed along several independent routes (continued
//! fraction, infinite product, divisor-sum series, theta or eta quotient) so
//! the identities relating them can be checked numerically, and claimed
//! algebraic values are pinned down by integer-relation detection.

pub mod algid;
pub mod cfrac;
pub mod error;
pub mod harness;
pub mod hypergeom;
pub mod modular;
pub mod numerics;
pub mod qseries;

pub use error::{Error, Result};
pub use numerics::{BigReal, PrecisionContext};
