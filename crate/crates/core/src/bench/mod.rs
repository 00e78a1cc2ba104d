//! Residual fits and verification suites.

pub mod fit;
pub mod suite;

pub use fit::{fit_power_model, fit_residual_slope, main_term_for, FitResult, ModelId};
pub use suite::{fit_window, run_suite, Check, SuiteConfig, SuiteId, SuiteReport};
