//! Exponential-divisor arithmetic functions: exact evaluation, bulk sieving,
//! Dirichlet-series algebra, Euler-product constants and residual fitting.

// Negated float comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arith;
pub mod bench;
pub mod constants;
pub mod dirichlet;
pub mod error;
pub mod expfunc;
pub mod format;
pub mod summatory;

pub use error::{Error, Result};
