//! Named Euler-product constants and their cross-checked reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::euler::{
    euler_product, truncated_product_oracle, EulerParams, EulerProductResult, HalfExp,
    LocalFactorExpansion, ProductMethod, ProductParams,
};
use super::zeta::zeta_bounded;
use crate::dirichlet::v_closed_form;
use crate::error::{Error, Result};
use crate::expfunc::{kernel, ExpFunctionId};

/// Inner sums over `a` stop at this exponent.
pub const EXPONENT_CUTOFF: u32 = 64;

/// Half-exponent cutoff for the `p^{-a/2}` series.
pub const HALF_EXPONENT_CUTOFF: u32 = 128;

pub const DEFAULT_ORACLE_CUTOFF: u64 = 1_000_000;

pub const DEFAULT_TARGET: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresetId {
    #[serde(rename = "m_mu_e")]
    MMuE,
    #[serde(rename = "m_mu_star_e")]
    MMuStarE,
    #[serde(rename = "m_F")]
    MF,
    #[serde(rename = "density_e_squarefree")]
    DensityESquarefree,
    C1,
    C2,
    #[serde(rename = "C_kappa")]
    CKappa,
}

impl PresetId {
    pub const ALL: [PresetId; 7] = [
        PresetId::MMuE,
        PresetId::MMuStarE,
        PresetId::MF,
        PresetId::DensityESquarefree,
        PresetId::C1,
        PresetId::C2,
        PresetId::CKappa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::MMuE => "m_mu_e",
            PresetId::MMuStarE => "m_mu_star_e",
            PresetId::MF => "m_F",
            PresetId::DensityESquarefree => "density_e_squarefree",
            PresetId::C1 => "C1",
            PresetId::C2 => "C2",
            PresetId::CKappa => "C_kappa",
        }
    }

    /// Mean value preset for a p-independent exponential function, if any.
    pub fn mean_value_of(id: ExpFunctionId) -> Option<PresetId> {
        match id {
            ExpFunctionId::MuE => Some(PresetId::MMuE),
            ExpFunctionId::MuStarE => Some(PresetId::MMuStarE),
            ExpFunctionId::FLambda => Some(PresetId::MF),
            ExpFunctionId::AbsMuE => Some(PresetId::DensityESquarefree),
            ExpFunctionId::TE => Some(PresetId::C1),
            ExpFunctionId::KappaE => None,
        }
    }

    /// The local factor whose product is this constant (for `C2`, without
    /// the `zeta(1/2)` prefactor).
    pub fn factor(self) -> LocalFactorExpansion {
        let built = match self {
            PresetId::MMuE => mean_value_factor(|a| ExpFunctionId::MuE.prime_power(2, a).unwrap()),
            PresetId::MMuStarE => {
                mean_value_factor(|a| ExpFunctionId::MuStarE.prime_power(2, a).unwrap())
            }
            PresetId::MF => {
                mean_value_factor(|a| ExpFunctionId::FLambda.prime_power(2, a).unwrap())
            }
            PresetId::DensityESquarefree => {
                mean_value_factor(|a| ExpFunctionId::AbsMuE.prime_power(2, a).unwrap())
            }
            PresetId::C1 => mean_value_factor(|a| ExpFunctionId::TE.prime_power(2, a).unwrap()),
            PresetId::C2 => c2_factor(),
            PresetId::CKappa => c_kappa_factor(),
        };
        built.expect("preset factors are well formed")
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PresetId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown constant id {s}")))
    }
}

/// `1 + sum_{a=2}^{A} (g(a) - g(a-1)) p^{-a}`, assuming `|g(a) - g(a-1)| <= a`.
fn mean_value_factor(g: impl Fn(u32) -> i64) -> Result<LocalFactorExpansion> {
    let terms = (2..=EXPONENT_CUTOFF).map(|a| (HalfExp::integer(a), (g(a) - g(a - 1)) as f64));
    // sum_{a > A} a 2^{-a} = (A + 2) 2^{-A}
    let a = EXPONENT_CUTOFF as f64;
    let tail = (a + 2.0) * 2f64.powf(-a);
    LocalFactorExpansion::new(terms, HalfExp::integer(EXPONENT_CUTOFF), tail)
}

/// `1 + sum_{a >= 4} v(p^a) p^{-a/2}` with `|v(p^a)| <= 4a`.
fn c2_factor() -> Result<LocalFactorExpansion> {
    let terms = (4..=HALF_EXPONENT_CUTOFF).map(|a| (HalfExp(a), v_closed_form(a as u64) as f64));
    let a = HALF_EXPONENT_CUTOFF as f64;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let tail = 4.0 * (a + 1.0) * r.powf(a + 1.0) / (1.0 - r).powi(2);
    LocalFactorExpansion::new(terms, HalfExp(HALF_EXPONENT_CUTOFF), tail)
}

/// Mean value of `f(n) = kappa_e(n) / n`:
/// `1 + sum_{a >= 4} (p^{kappa(a) - 2a} - p^{1 + kappa(a-1) - 2a})`.
fn c_kappa_factor() -> Result<LocalFactorExpansion> {
    let e_max = EXPONENT_CUTOFF;
    let mut terms = Vec::new();
    let mut dropped = 0.0;
    for a in 2..=e_max {
        let plus = 2 * a - kernel(a as u64) as u32;
        let minus = 2 * a - 1 - kernel(a as u64 - 1) as u32;
        if plus == minus {
            continue;
        }
        for (e, c) in [(plus, 1.0), (minus, -1.0)] {
            if e <= e_max {
                terms.push((HalfExp::integer(e), c));
            } else {
                dropped += 2f64.powf(-(e as f64));
            }
        }
    }
    // every term with a > A has exponent >= a
    let a = e_max as f64;
    let tail = dropped + 2.0 * 2f64.powf(-a);
    LocalFactorExpansion::new(terms, HalfExp::integer(e_max), tail)
}

/// Evaluation settings for [`preset_constant`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetOptions {
    pub target: f64,
    pub oracle_cutoff: u64,
    /// Allowed oracle gap; `None` means the sum of both error estimates.
    pub oracle_tolerance: Option<f64>,
}

impl Default for PresetOptions {
    fn default() -> Self {
        PresetOptions {
            target: DEFAULT_TARGET,
            oracle_cutoff: DEFAULT_ORACLE_CUTOFF,
            oracle_tolerance: None,
        }
    }
}

/// A preset constant with its independent checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub id: PresetId,
    pub value: f64,
    pub method: ProductMethod,
    pub params: ProductParams,
    pub error_estimate: f64,
    pub oracle_value: f64,
    pub oracle_error_estimate: f64,
    pub oracle_gap: f64,
    pub oracle_consistent: bool,
    /// Change in value when the series cut is doubled and the zeta target halved.
    pub refinement_shift: f64,
    pub refinement_stable: bool,
    /// Every local factor positive for `p <= 1000`, with the tail bound
    /// covering larger primes.
    pub factor_positive: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl ConstantReport {
    pub fn passed(&self) -> bool {
        self.oracle_consistent && self.refinement_stable && self.factor_positive
    }
}

fn params_for(target: f64) -> EulerParams {
    EulerParams {
        zeta_target: (target * 1e-5).min(1e-15),
        ..EulerParams::default()
    }
}

/// Value of a preset via the log expansion, without the oracle.
pub fn preset_value(id: PresetId, target: f64) -> Result<EulerProductResult> {
    evaluate(id, &id.factor(), params_for(target))
}

fn evaluate(
    id: PresetId,
    factor: &LocalFactorExpansion,
    params: EulerParams,
) -> Result<EulerProductResult> {
    let r = euler_product(factor, params)?;
    Ok(if id == PresetId::C2 {
        scale_by_zeta_half(r, params.zeta_target)?
    } else {
        r
    })
}

fn scale_by_zeta_half(r: EulerProductResult, target: f64) -> Result<EulerProductResult> {
    let z = zeta_bounded(0.5, target)?;
    Ok(EulerProductResult {
        value: z.value * r.value,
        error_estimate: z.value.abs() * r.error_estimate
            + r.value.abs() * z.error
            + 2.0 * f64::EPSILON * (z.value * r.value).abs(),
        ..r
    })
}

/// Evaluates a preset, cross-checks it against the truncated product and a
/// refined evaluation, and checks local positivity.
pub fn preset_constant(id: PresetId, options: PresetOptions) -> Result<ConstantReport> {
    let factor = id.factor();
    let params = params_for(options.target);
    let main = evaluate(id, &factor, params)?;
    let refined = evaluate(id, &factor, params.refined())?;

    let mut oracle = truncated_product_oracle(&factor, options.oracle_cutoff, factor.e_max())?;
    if id == PresetId::C2 {
        oracle = scale_by_zeta_half(oracle, params.zeta_target)?;
    }
    let oracle_gap = (main.value - oracle.value).abs();
    let allowed = options
        .oracle_tolerance
        .unwrap_or(main.error_estimate + oracle.error_estimate);
    let refinement_shift = (refined.value - main.value).abs();

    let note = match id {
        PresetId::CKappa => Some(
            "local terms divided by p^(2a): mean value of kappa_e(n)/n; the sum of kappa_e(n) for n <= x is ~ (C/2) x^2"
                .to_string(),
        ),
        PresetId::C2 => Some("zeta(1/2) times the product over p of 1 + sum_{a>=4} v(p^a) p^(-a/2)".to_string()),
        _ => None,
    };

    Ok(ConstantReport {
        id,
        value: main.value,
        method: main.method,
        params: main.params,
        error_estimate: main.error_estimate,
        oracle_value: oracle.value,
        oracle_error_estimate: oracle.error_estimate,
        oracle_gap,
        oracle_consistent: oracle_gap <= allowed,
        refinement_shift,
        refinement_stable: refinement_shift <= main.error_estimate,
        factor_positive: factor.is_positive_everywhere(1000),
        note,
    })
}
