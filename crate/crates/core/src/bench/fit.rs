//! Residual-exponent fits with main-term constants taken from the presets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{preset_value, zeta_real, PresetId};
use crate::error::{Error, Result};
use crate::expfunc::ExpFunctionId;
use crate::format::extended_f64;
use crate::summatory::{CheckpointSeries, FnId, MainTerm};

pub const MIN_CHECKPOINTS: usize = 6;
pub const MIN_DECADES: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Linear,
    LinearSqrt,
    QuadraticHalf,
}

impl ModelId {
    pub fn name(self) -> &'static str {
        match self {
            ModelId::Linear => "linear",
            ModelId::LinearSqrt => "linear_sqrt",
            ModelId::QuadraticHalf => "quadratic_half",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ModelId::Linear),
            "linear_sqrt" => Ok(ModelId::LinearSqrt),
            "quadratic_half" => Ok(ModelId::QuadraticHalf),
            _ => Err(Error::InvalidArgument(format!("unknown model {s}"))),
        }
    }
}

const CONSTANT_TARGET: f64 = 1e-12;

/// Main term of `sum_{n <= x} f(n)` under `model`, with constants from
/// the constants module.
pub fn main_term_for(f: &FnId, model: ModelId) -> Result<MainTerm> {
    let unsupported = || Error::InvalidArgument(format!("no {model} main term for {}", f.name()));
    let preset = |id: PresetId| preset_value(id, CONSTANT_TARGET).map(|r| r.value);
    match (f, model) {
        (FnId::Exp(id), ModelId::Linear) => {
            let p = PresetId::mean_value_of(*id).ok_or_else(unsupported)?;
            Ok(MainTerm::Linear { m: preset(p)? })
        }
        (FnId::Exp(ExpFunctionId::TE), ModelId::LinearSqrt) => Ok(MainTerm::LinearSqrt {
            c1: preset(PresetId::C1)?,
            c2: preset(PresetId::C2)?,
        }),
        (FnId::Exp(ExpFunctionId::KappaE), ModelId::QuadraticHalf) => Ok(MainTerm::QuadraticHalf {
            c: preset(PresetId::CKappa)?,
        }),
        (FnId::Tau12, ModelId::LinearSqrt) => Ok(MainTerm::LinearSqrt {
            c1: zeta_real(2.0, CONSTANT_TARGET)?,
            c2: zeta_real(0.5, CONSTANT_TARGET)?,
        }),
        (FnId::Tau12, ModelId::Linear) => Ok(MainTerm::Linear {
            m: zeta_real(2.0, CONSTANT_TARGET)?,
        }),
        (FnId::One, ModelId::Linear) => Ok(MainTerm::Linear { m: 1.0 }),
        (FnId::Identity, ModelId::QuadraticHalf) => Ok(MainTerm::QuadraticHalf { c: 1.0 }),
        _ => Err(unsupported()),
    }
}

/// Least-squares fit of `log|residual| = alpha log x + beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub function: String,
    pub model: Option<ModelId>,
    pub parameters: Option<MainTerm>,
    /// Residual slope; `-inf` when every residual vanishes.
    #[serde(with = "extended_f64")]
    pub alpha: f64,
    #[serde(with = "extended_f64")]
    pub intercept: f64,
    pub checkpoint_count: usize,
    /// Points with a non-zero residual that entered the fit.
    pub fitted_points: usize,
    pub r_squared: f64,
    pub x_min: u64,
    pub x_max: u64,
}

/// Fits the residual slope of `series` after subtracting `main`.
pub fn fit_power_model(series: &CheckpointSeries, main: MainTerm) -> Result<FitResult> {
    let with_main = series.clone().with_main_term(main);
    let mut fit = fit_residual_slope(&with_main.checkpoints, &with_main.residuals)?;
    fit.function = series.function.clone();
    fit.model = Some(match main {
        MainTerm::Linear { .. } => ModelId::Linear,
        MainTerm::LinearSqrt { .. } => ModelId::LinearSqrt,
        MainTerm::QuadraticHalf { .. } => ModelId::QuadraticHalf,
    });
    fit.parameters = Some(main);
    Ok(fit)
}

/// Fits `log|r| = alpha log x + beta` over the non-zero residuals.
pub fn fit_residual_slope(xs: &[u64], residuals: &[f64]) -> Result<FitResult> {
    if xs.len() != residuals.len() {
        return Err(Error::InvalidArgument(
            "checkpoint and residual counts differ".into(),
        ));
    }
    if xs.len() < MIN_CHECKPOINTS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_CHECKPOINTS} checkpoints, got {}",
            xs.len()
        )));
    }
    let x_min = *xs.iter().min().unwrap();
    let x_max = *xs.iter().max().unwrap();
    if x_min == 0 || ((x_max as f64) / (x_min as f64)).log10() < MIN_DECADES - 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "checkpoints must span {MIN_DECADES} decades, got [{x_min}, {x_max}]"
        )));
    }
    let points: Vec<(f64, f64)> = xs
        .iter()
        .zip(residuals)
        .filter(|(_, r)| **r != 0.0)
        .map(|(&x, r)| ((x as f64).ln(), r.abs().ln()))
        .collect();
    let base = FitResult {
        function: String::new(),
        model: None,
        parameters: None,
        alpha: f64::NEG_INFINITY,
        intercept: f64::NEG_INFINITY,
        checkpoint_count: xs.len(),
        fitted_points: points.len(),
        r_squared: 0.0,
        x_min,
        x_max,
    };
    if points.len() < 2 {
        return Ok(base);
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all fitted checkpoints coincide".into()));
    }
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(FitResult {
        alpha,
        intercept,
        r_squared,
        ..base
    })
}
