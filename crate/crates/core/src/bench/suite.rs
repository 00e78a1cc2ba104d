//! Verification suites. Each suite is a fixed list of checks; a suite
//! passes iff every check passes.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::fit::{fit_power_model, main_term_for, ModelId};
use crate::arith::{primes_up_to, SpfTable};
use crate::constants::{
    preset_constant, preset_value, zeta_eta, zeta_real, PresetId, PresetOptions,
};
use crate::dirichlet::{
    derive_u, derive_v, derive_w, dirichlet_convolve, verify_squarefull_identity, DEFAULT_DEGREE,
};
use crate::error::{Error, Result};
use crate::expfunc::{
    e_convolve, e_divisors, e_inverse_local, e_squarefree_e_divisors, exact, exp_eval,
    is_e_squarefree, mobius, ExpFunctionId, MultiplicativeFunctionSpec,
};
use crate::format::extended_f64;
use crate::summatory::{
    build_table, champion_ratio, direct_s, geometric_checkpoints_from, mobius_sieve,
    summatory_segmented, sup_scan, CheckpointSeries, CoefficientTable, FnId, SquarefreeCounter,
    DEFAULT_SEGMENT_SIZE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteId {
    Identities,
    Dirichlet,
    Constants,
    Asymptotics,
    Limsup,
}

impl SuiteId {
    pub const ALL: [SuiteId; 5] = [
        SuiteId::Identities,
        SuiteId::Dirichlet,
        SuiteId::Constants,
        SuiteId::Asymptotics,
        SuiteId::Limsup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Identities => "identities",
            SuiteId::Dirichlet => "dirichlet",
            SuiteId::Constants => "constants",
            SuiteId::Asymptotics => "asymptotics",
            SuiteId::Limsup => "limsup",
        }
    }

    pub fn default_limit(self) -> Option<u64> {
        match self {
            SuiteId::Identities | SuiteId::Asymptotics | SuiteId::Limsup => Some(1_000_000),
            SuiteId::Dirichlet => Some(100_000),
            SuiteId::Constants => None,
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(with = "extended_f64")]
    pub measured: f64,
    #[serde(with = "extended_f64")]
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    /// Wall-clock seconds; only recorded when timings are requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_s: Option<f64>,
}

impl Check {
    /// Passes when `measured <= bound`.
    fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            passed: measured <= bound,
            measured,
            bound,
            detail: None,
            runtime_s: None,
        }
    }

    /// Passes when `measured < bound`.
    fn below(name: &str, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            passed: measured < bound,
            measured,
            bound,
            detail: None,
            runtime_s: None,
        }
    }

    /// A count of mismatches that must be zero.
    fn exact(name: &str, mismatches: u64, first: Option<u64>) -> Self {
        let mut c = Check::at_most(name, mismatches as f64, 0.0);
        c.detail = first.map(|n| format!("first mismatch at n = {n}"));
        c
    }

    fn failed(name: &str, err: &Error) -> Self {
        Check {
            name: name.into(),
            passed: false,
            measured: f64::INFINITY,
            bound: 0.0,
            detail: Some(err.to_string()),
            runtime_s: None,
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub limit: Option<u64>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Overrides the suite's default limit.
    pub limit: Option<u64>,
    pub segment_size: u64,
    pub timings: bool,
    pub constants: PresetOptions,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            limit: None,
            segment_size: DEFAULT_SEGMENT_SIZE,
            timings: false,
            constants: PresetOptions::default(),
        }
    }
}

type CheckFn<'a> = Box<dyn FnOnce() -> Result<Vec<Check>> + 'a>;

pub fn run_suite(id: SuiteId, config: &SuiteConfig) -> Result<SuiteReport> {
    let limit = config.limit.or(id.default_limit());
    let tasks: Vec<(&str, CheckFn)> = match id {
        SuiteId::Identities => identities(limit.unwrap())?,
        SuiteId::Dirichlet => dirichlet(limit.unwrap())?,
        SuiteId::Constants => constants(config.constants),
        SuiteId::Asymptotics => asymptotics(limit.unwrap(), config.segment_size)?,
        SuiteId::Limsup => limsup(limit.unwrap())?,
    };
    let mut checks = Vec::new();
    for (name, task) in tasks {
        let start = Instant::now();
        let mut produced = task().unwrap_or_else(|e| vec![Check::failed(name, &e)]);
        if config.timings {
            let secs = start.elapsed().as_secs_f64() / produced.len().max(1) as f64;
            produced.iter_mut().for_each(|c| c.runtime_s = Some(secs));
        }
        checks.extend(produced);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: id,
        limit,
        passed,
        checks,
    })
}

fn exp_table(id: ExpFunctionId, limit: u64, spf: &SpfTable) -> Result<CoefficientTable> {
    build_table(&FnId::Exp(id), limit, spf)
}

fn table(name: &str, limit: u64) -> Result<CoefficientTable> {
    crate::summatory::build_table_fresh(&name.parse()?, limit)
}

fn compare(name: &str, a: &[i64], b: &[i64]) -> Check {
    let mismatches =
        a.iter().zip(b).filter(|(x, y)| x != y).count() as u64 + a.len().abs_diff(b.len()) as u64;
    let first = a
        .iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .map(|i| i as u64 + 1);
    Check::exact(name, mismatches, first)
}

fn need_limit(limit: u64, min: u64) -> Result<()> {
    if limit < min {
        return Err(Error::InvalidArgument(format!(
            "limit must be at least {min}, got {limit}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------

const POINTWISE_LIMIT: u64 = 100_000;
const E_CONVOLVE_LIMIT: u64 = 2_000;

fn identities(limit: u64) -> Result<Vec<(&'static str, CheckFn<'static>)>> {
    need_limit(limit, 1)?;
    Ok(vec![
        (
            "e_mobius_sum",
            Box::new(move || {
                // sum over e-divisors of mu_e equals mu^2
                let spf = SpfTable::build(limit)?;
                let mu_e = exp_table(ExpFunctionId::MuE, limit, &spf)?;
                let mu = mobius_sieve(limit);
                let mut bad = 0u64;
                let mut first = None;
                for n in 1..=limit {
                    let f = spf.factorize(n)?;
                    let s: i64 = e_divisors(&f).into_iter().map(|d| mu_e.get(d)).sum();
                    if s != (mu[n as usize] as i64).abs() {
                        bad += 1;
                        first.get_or_insert(n);
                    }
                }
                Ok(vec![Check::exact("e_mobius_sum", bad, first)])
            }),
        ),
        (
            "tables_match_pointwise",
            Box::new(move || {
                let n_max = limit.min(POINTWISE_LIMIT);
                let spf = SpfTable::build(n_max)?;
                let mut out = Vec::new();
                for id in ExpFunctionId::ALL {
                    let t = exp_table(id, n_max, &spf)?;
                    let pointwise: Vec<i64> = (1..=n_max)
                        .map(|n| exp_eval(id, &spf.factorize(n)?))
                        .collect::<Result<_>>()?;
                    out.push(compare(
                        &format!("table_matches_pointwise_{}", id.name()),
                        t.values(),
                        &pointwise,
                    ));
                }
                Ok(out)
            }),
        ),
        (
            "e_squarefree_divisors",
            Box::new(move || {
                // t_e counts and kappa_e maximizes the e-squarefree e-divisors;
                // |mu_e| indicates e-squarefree integers
                let n_max = limit.min(POINTWISE_LIMIT);
                let spf = SpfTable::build(n_max)?;
                let t_e = exp_table(ExpFunctionId::TE, n_max, &spf)?;
                let kappa_e = exp_table(ExpFunctionId::KappaE, n_max, &spf)?;
                let abs_mu_e = exp_table(ExpFunctionId::AbsMuE, n_max, &spf)?;
                let (mut bad_t, mut bad_k, mut bad_sf) = (0u64, 0u64, 0u64);
                for n in 1..=n_max {
                    let f = spf.factorize(n)?;
                    let ds = e_squarefree_e_divisors(&f);
                    bad_t += (ds.len() as i64 != t_e.get(n)) as u64;
                    bad_k +=
                        (ds.iter().copied().max().unwrap_or(0) as i64 != kappa_e.get(n)) as u64;
                    bad_sf += (is_e_squarefree(&f) as i64 != abs_mu_e.get(n)) as u64;
                }
                Ok(vec![
                    Check::exact("t_e_counts_e_squarefree_e_divisors", bad_t, None),
                    Check::exact("kappa_e_is_largest_e_squarefree_e_divisor", bad_k, None),
                    Check::exact("abs_mu_e_indicates_e_squarefree", bad_sf, None),
                ])
            }),
        ),
        (
            "e_convolution",
            Box::new(move || {
                let n_max = limit.min(E_CONVOLVE_LIMIT);
                let spf = SpfTable::build(n_max)?;
                let one = MultiplicativeFunctionSpec::one();
                let mu_e = MultiplicativeFunctionSpec::exp(ExpFunctionId::MuE);
                let mut bad = 0u64;
                let mut first = None;
                for n in 1..=n_max {
                    let f = spf.factorize(n)?;
                    let expected = exact(crate::expfunc::is_squarefree(n) as i64);
                    if e_convolve(&mu_e, &one, &f) != expected {
                        bad += 1;
                        first.get_or_insert(n);
                    }
                }
                let mut inverse_bad = 0u64;
                for p in [2u64, 3, 5] {
                    let inv = e_inverse_local(&one, p, DEFAULT_DEGREE as u32)?;
                    inverse_bad += (1..=DEFAULT_DEGREE)
                        .filter(|&a| inv[a - 1] != exact(mobius(a as u64)))
                        .count() as u64;
                }
                Ok(vec![
                    Check::exact("mu_e_e_convolve_one_is_mu_squared", bad, first),
                    Check::exact("e_inverse_of_one_is_mu_of_exponent", inverse_bad, None),
                ])
            }),
        ),
        (
            "kappa_e_below_identity",
            Box::new(move || {
                let spf = SpfTable::build(limit)?;
                let kappa = exp_table(ExpFunctionId::KappaE, limit, &spf)?;
                let bad = (1..=limit).filter(|&n| kappa.get(n) > n as i64).count() as u64;
                Ok(vec![Check::exact("kappa_e_at_most_n", bad, None)])
            }),
        ),
    ])
}

// ---------------------------------------------------------------------------

/// `direct_s` runs the literal double loop, so it is evaluated only here.
const DIRECT_S_POINTS: [u64; 6] = [1, 10, 100, 1_000, 10_000, 100_000];

fn dirichlet(limit: u64) -> Result<Vec<(&'static str, CheckFn<'static>)>> {
    need_limit(limit, 1)?;
    Ok(vec![
        (
            "u_local",
            Box::new(|| {
                Ok(vec![match derive_u(DEFAULT_DEGREE) {
                    Ok(_) => Check::exact("u_vanishes_below_five_and_is_below_square", 0, None),
                    Err(e) => Check::failed("u_vanishes_below_five_and_is_below_square", &e),
                }])
            }),
        ),
        (
            "v_local",
            Box::new(|| {
                Ok(vec![match derive_v(DEFAULT_DEGREE) {
                    Ok(_) => Check::exact("v_closed_form", 0, None),
                    Err(e) => Check::failed("v_closed_form", &e),
                }])
            }),
        ),
        (
            "mu_e_factorization",
            Box::new(move || {
                let u = derive_u(DEFAULT_DEGREE)?.table(limit)?;
                let rebuilt = dirichlet_convolve(
                    &dirichlet_convolve(&table("mu_squared", limit)?, &table("mu_2", limit)?)?,
                    &u,
                )?;
                Ok(vec![compare(
                    "mu_squared_mu_2_u_is_mu_e",
                    rebuilt.values(),
                    table("mu_e", limit)?.values(),
                )])
            }),
        ),
        (
            "t_e_factorization",
            Box::new(move || {
                let v = derive_v(DEFAULT_DEGREE)?.table(limit)?;
                let t = dirichlet_convolve(&v, &table("tau12", limit)?)?;
                Ok(vec![compare(
                    "v_tau12_is_t_e",
                    t.values(),
                    table("t_e", limit)?.values(),
                )])
            }),
        ),
        (
            "abs_mu_e_factorization",
            Box::new(move || {
                let abs_mu_e = MultiplicativeFunctionSpec::exp(ExpFunctionId::AbsMuE);
                let w = derive_w(&abs_mu_e, 4, DEFAULT_DEGREE)?.table(limit)?;
                let f = dirichlet_convolve(&table("q_4", limit)?, &w)?;
                Ok(vec![compare(
                    "q4_w_is_abs_mu_e",
                    f.values(),
                    table("abs_mu_e", limit)?.values(),
                )])
            }),
        ),
        (
            "squarefull_identity",
            Box::new(move || {
                let r = verify_squarefull_identity(limit);
                Ok(vec![Check::exact(
                    "squarefull_two_omega_identity",
                    r.is_err() as u64,
                    r.err(),
                )])
            }),
        ),
        (
            "double_sum",
            Box::new(move || {
                // S(x) against prefix sums of mu^2 * mu_2, for every x
                let conv =
                    dirichlet_convolve(&table("mu_squared", limit)?, &table("mu_2", limit)?)?;
                let prefix = conv.prefix_sums();
                let counter = SquarefreeCounter::new(limit);
                let mut bad = 0u64;
                let mut first = None;
                for x in 1..=limit {
                    if counter.s(x) as i128 != prefix[x as usize] {
                        bad += 1;
                        first.get_or_insert(x);
                    }
                }
                let mut direct_bad = 0u64;
                for x in DIRECT_S_POINTS
                    .into_iter()
                    .filter(|&x| x <= limit)
                    .chain([limit])
                {
                    direct_bad += (direct_s(x)? as i128 != prefix[x as usize]) as u64;
                }
                Ok(vec![
                    Check::exact("double_sum_matches_convolution", bad, first),
                    Check::exact("direct_double_loop_matches_convolution", direct_bad, None),
                ])
            }),
        ),
    ])
}

// ---------------------------------------------------------------------------

fn constants(options: PresetOptions) -> Vec<(&'static str, CheckFn<'static>)> {
    let mut tasks: Vec<(&'static str, CheckFn<'static>)> = Vec::new();
    for id in PresetId::ALL {
        tasks.push((
            id.name(),
            Box::new(move || {
                let r = preset_constant(id, options)?;
                let allowed = options
                    .oracle_tolerance
                    .unwrap_or(r.error_estimate + r.oracle_error_estimate);
                Ok(vec![
                    Check::at_most(&format!("{id}_oracle_gap"), r.oracle_gap, allowed).with_detail(
                        format!(
                            "value {} oracle {} (P = {})",
                            crate::format::fmt_f64(r.value),
                            crate::format::fmt_f64(r.oracle_value),
                            options.oracle_cutoff
                        ),
                    ),
                    Check::at_most(
                        &format!("{id}_refinement_shift"),
                        r.refinement_shift,
                        r.error_estimate,
                    ),
                    Check::at_most(
                        &format!("{id}_error_estimate"),
                        r.error_estimate,
                        options.target,
                    ),
                    Check::exact(
                        &format!("{id}_factor_positive"),
                        (!r.factor_positive) as u64,
                        None,
                    ),
                ])
            }),
        ));
    }
    tasks.push((
        "zeta",
        Box::new(|| {
            let em = zeta_real(0.5, 1e-14)?;
            let eta = zeta_eta(0.5)?;
            let z2 = zeta_real(2.0, 1e-14)?;
            Ok(vec![
                Check::at_most("zeta_half_two_methods", (em - eta).abs(), 1e-10),
                Check::at_most(
                    "zeta_two_closed_form",
                    (z2 - std::f64::consts::PI.powi(2) / 6.0).abs(),
                    1e-12,
                ),
            ])
        }),
    ));
    tasks
}

// ---------------------------------------------------------------------------

pub const DENSITY_TOLERANCE: f64 = 1e-3;
pub const MEAN_VALUE_SLOPE: f64 = 0.60;
pub const T_E_SLOPE: f64 = 0.40;
pub const KAPPA_E_RELATIVE: f64 = 1e-3;
pub const KAPPA_E_SLOPE: f64 = 1.45;
pub const TAU12_SLOPE: f64 = 0.35;

/// Grid points `floor(10^(k/4))` covering the three decades below `limit`.
pub fn fit_window(limit: u64) -> Result<Vec<u64>> {
    let all = geometric_checkpoints_from(0, limit);
    if all.len() < 13 {
        return Err(Error::InvalidArgument(format!(
            "limit {limit} is below 1000; fits need three decades"
        )));
    }
    Ok(all[all.len() - 13..].to_vec())
}

/// Checkpoints shared by the asymptotics checks: the fit window plus `limit`.
struct Sums {
    limit: u64,
    window: Vec<u64>,
    segment_size: u64,
}

impl Sums {
    fn series(&self, f: &FnId) -> Result<CheckpointSeries> {
        let mut points = self.window.clone();
        points.push(self.limit);
        summatory_segmented(f, self.limit, &points, self.segment_size)
    }

    /// The fit window and the exact sum at `limit`.
    fn split(&self, f: &FnId) -> Result<(CheckpointSeries, i128)> {
        let s = self.series(f)?;
        let last = *s.sums.last().unwrap();
        Ok((s.window(self.window[0], *self.window.last().unwrap()), last))
    }
}

fn asymptotics(limit: u64, segment_size: u64) -> Result<Vec<(&'static str, CheckFn<'static>)>> {
    let sums = Arc::new(Sums {
        limit,
        window: fit_window(limit)?,
        segment_size,
    });
    let mut tasks: Vec<(&'static str, CheckFn<'static>)> = Vec::new();
    tasks.push(("density", {
        let sums = Arc::clone(&sums);
        Box::new(move || {
            let s = sums.series(&FnId::Exp(ExpFunctionId::AbsMuE))?;
            let density = preset_value(PresetId::DensityESquarefree, 1e-12)?.value;
            let empirical = *s.sums.last().unwrap() as f64 / limit as f64;
            Ok(vec![Check::at_most(
                "e_squarefree_density",
                (empirical - density).abs(),
                DENSITY_TOLERANCE,
            )])
        })
    }));
    for (id, name) in [
        (ExpFunctionId::MuE, "mean_value_slope_mu_e"),
        (ExpFunctionId::MuStarE, "mean_value_slope_mu_star_e"),
        (ExpFunctionId::FLambda, "mean_value_slope_F_lambda"),
    ] {
        tasks.push((name, {
            let sums = Arc::clone(&sums);
            Box::new(move || {
                let f = FnId::Exp(id);
                let (s, _) = sums.split(&f)?;
                let fit = fit_power_model(&s, main_term_for(&f, ModelId::Linear)?)?;
                Ok(vec![Check::at_most(name, fit.alpha, MEAN_VALUE_SLOPE)])
            })
        }));
    }
    tasks.push(("t_e", {
        let sums = Arc::clone(&sums);
        Box::new(move || {
            let f = FnId::Exp(ExpFunctionId::TE);
            let main = main_term_for(&f, ModelId::LinearSqrt)?;
            let (s, last) = sums.split(&f)?;
            let fit = fit_power_model(&s, main)?;
            let c2 = match main {
                crate::summatory::MainTerm::LinearSqrt { c2, .. } => c2,
                _ => unreachable!(),
            };
            let x = limit as f64;
            Ok(vec![
                Check::at_most("t_e_slope", fit.alpha, T_E_SLOPE),
                Check::below(
                    "t_e_sqrt_term_resolved",
                    crate::summatory::residual(last, main.eval(x)).abs(),
                    c2.abs() * x.sqrt(),
                ),
            ])
        })
    }));
    tasks.push(("kappa_e", {
        let sums = Arc::clone(&sums);
        Box::new(move || {
            let f = FnId::Exp(ExpFunctionId::KappaE);
            let main = main_term_for(&f, ModelId::QuadraticHalf)?;
            let (s, last) = sums.split(&f)?;
            let fit = fit_power_model(&s, main)?;
            let m = main.eval(limit as f64);
            Ok(vec![
                Check::at_most(
                    "kappa_e_relative_error",
                    (crate::summatory::residual(last, m) / m).abs(),
                    KAPPA_E_RELATIVE,
                ),
                Check::at_most("kappa_e_slope", fit.alpha, KAPPA_E_SLOPE),
            ])
        })
    }));
    tasks.push(("tau12", {
        let sums = Arc::clone(&sums);
        Box::new(move || {
            let (s, _) = sums.split(&FnId::Tau12)?;
            let fit = fit_power_model(&s, main_term_for(&FnId::Tau12, ModelId::LinearSqrt)?)?;
            Ok(vec![Check::at_most("tau12_slope", fit.alpha, TAU12_SLOPE)])
        })
    }));
    Ok(tasks)
}

// ---------------------------------------------------------------------------

pub const CHAMPION_RS: [usize; 6] = [10, 25, 100, 1_000, 10_000, 100_000];

fn limsup(limit: u64) -> Result<Vec<(&'static str, CheckFn<'static>)>> {
    need_limit(limit, 2)?;
    let half_log2 = 0.5 * std::f64::consts::LN_2;
    Ok(vec![
        (
            "sup_scan",
            Box::new(move || {
                let (m, v) = sup_scan(limit)?;
                Ok(vec![
                    Check::exact("sup_scan_maximizer_is_two", (m != 2) as u64, None),
                    Check::at_most("sup_scan_value", (v - half_log2).abs(), 1e-12),
                ])
            }),
        ),
        (
            "champions",
            Box::new(move || {
                // the 100000th prime is 1299709
                let primes = primes_up_to(1_300_000);
                let ratios: Vec<f64> = CHAMPION_RS
                    .iter()
                    .map(|&r| champion_ratio(r, &primes))
                    .collect::<Result<_>>()?;
                let not_decreasing = ratios.windows(2).filter(|w| w[1] >= w[0]).count() as u64;
                let min_gap = ratios
                    .iter()
                    .map(|r| r - half_log2)
                    .fold(f64::INFINITY, f64::min);
                Ok(vec![
                    Check::exact("champion_ratio_decreasing", not_decreasing, None),
                    Check {
                        passed: min_gap > 0.0,
                        ..Check::at_most("champion_ratio_above_half_log2", -min_gap, 0.0)
                    },
                ])
            }),
        ),
    ])
}
