//! Euler products of generic local factors `1 + sum_e c_e p^{-e}`.
//!
//! Exponents live on a half-integer grid. Internally everything is a power
//! series in `y = p^{-1/2}`, so exponent `e` is stored as `j = 2e`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::prime_zeta::{prime_tail_bound, prime_zeta_tail};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::format::neumaier_sum;

/// An exponent `e = j / 2` on the half-integer grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfExp(pub u32);

impl HalfExp {
    pub fn integer(e: u32) -> Self {
        HalfExp(2 * e)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Generic Euler factor `1 + sum_e c_e p^{-e}` truncated at `e_max`, with a
/// bound on the discarded mass at `p = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactorExpansion {
    terms: BTreeMap<HalfExp, f64>,
    e_max: HalfExp,
    tail_bound: f64,
}

impl LocalFactorExpansion {
    /// Terms must have exponent at least 2 and at most `e_max`.
    pub fn new(
        terms: impl IntoIterator<Item = (HalfExp, f64)>,
        e_max: HalfExp,
        tail_bound: f64,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if c == 0.0 {
                continue;
            }
            if e.0 < 4 {
                return Err(Error::InvalidArgument(format!("exponent {e} below 2")));
            }
            if e > e_max {
                return Err(Error::InvalidArgument(format!(
                    "exponent {e} above cutoff {e_max}"
                )));
            }
            *map.entry(e).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        if !(tail_bound >= 0.0) {
            return Err(Error::InvalidArgument(
                "tail bound must be non-negative".into(),
            ));
        }
        Ok(LocalFactorExpansion {
            terms: map,
            e_max,
            tail_bound,
        })
    }

    /// The factor 1.
    pub fn identity() -> Self {
        LocalFactorExpansion {
            terms: BTreeMap::new(),
            e_max: HalfExp(4),
            tail_bound: 0.0,
        }
    }

    pub fn terms(&self) -> &BTreeMap<HalfExp, f64> {
        &self.terms
    }

    pub fn e_max(&self) -> HalfExp {
        self.e_max
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn min_exponent(&self) -> Option<HalfExp> {
        self.terms.keys().next().copied()
    }

    /// Dense coefficients in `y`, index `j` for exponent `j / 2`.
    fn dense(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.e_max.0 as usize + 1];
        for (e, &v) in &self.terms {
            c[e.0 as usize] = v;
        }
        c
    }

    /// `sum_e c_e p^{-e}` (the factor minus 1), without the discarded tail.
    pub fn excess_at(&self, p: f64) -> f64 {
        horner(&self.dense(), p.powf(-0.5))
    }

    pub fn value_at(&self, p: f64) -> f64 {
        1.0 + self.excess_at(p)
    }

    /// Bound on the discarded mass at prime `p >= 2`.
    pub fn tail_at(&self, p: f64) -> f64 {
        self.tail_bound * (2.0 / p).powf(self.e_max.as_f64())
    }

    /// `sum_e |c_e| p^{-e}` plus the tail, for `p >= 2`.
    pub fn mass_at(&self, p: f64) -> f64 {
        let y = p.powf(-0.5);
        self.terms
            .iter()
            .map(|(e, c)| c.abs() * y.powi(e.0 as i32))
            .sum::<f64>()
            + self.tail_at(p)
    }

    /// Checks `factor(p) > 0` for primes `p <= limit` (with the tail
    /// subtracted) and that beyond `limit` the total mass stays below 1.
    pub fn is_positive_everywhere(&self, limit: u64) -> bool {
        let primes = primes_up_to(limit);
        let finite_ok = primes.iter().all(|&p| {
            let p = p as f64;
            self.value_at(p) - self.tail_at(p) > 0.0
        });
        finite_ok && self.mass_at(limit as f64 + 1.0) < 1.0
    }
}

fn horner(dense: &[f64], y: f64) -> f64 {
    dense.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}

/// `log(1 + F(y))` as a power series in `y = p^{-1/2}`, with a radius on
/// which `|F| <= 1/2` so that `|d_j| <= log(2) / radius^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogExpansion {
    pub coefficients: BTreeMap<HalfExp, f64>,
    pub cut: HalfExp,
    pub radius: f64,
    pub coefficient_scale: f64,
}

impl LogExpansion {
    /// Bound on `sum_{j > cut} |d_j| sum_{n > q} n^{-j/2}`.
    pub fn truncation_bound(&self, q: f64) -> Option<f64> {
        let ratio = 1.0 / (self.radius * q.sqrt());
        if ratio >= 1.0 {
            return None;
        }
        let j = self.cut.0 as f64 + 1.0;
        let s = j / 2.0;
        if s <= 1.0 {
            return None;
        }
        let first = self.coefficient_scale * self.radius.powf(-j) * q.powf(1.0 - s) / (s - 1.0);
        Some(first / (1.0 - ratio))
    }
}

/// Power-series coefficients of `log(1 + sum c_e x^e)` up to exponent `cut`.
pub fn log_expand_local(factor: &LocalFactorExpansion, cut: HalfExp) -> Result<LogExpansion> {
    if cut < factor.e_max {
        return Err(Error::InvalidArgument(format!(
            "series cut {cut} below factor cutoff {}",
            factor.e_max
        )));
    }
    let at_two = factor.value_at(2.0) - factor.tail_at(2.0);
    if !(at_two > 0.0) {
        return Err(Error::NonPositiveFactor(at_two));
    }
    let n = cut.0 as usize;
    let mut c = factor.dense();
    c.resize(n + 1, 0.0);
    // (1 + F) L' = F'  =>  n d_n = n c_n - sum_{k<n} k d_k c_{n-k}
    let mut d = vec![0.0f64; n + 1];
    for m in 1..=n {
        let conv = neumaier_sum((1..m).map(|k| k as f64 * d[k] * c[m - k]));
        d[m] = c[m] - conv / m as f64;
    }
    let coefficients: BTreeMap<HalfExp, f64> = d
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(j, &v)| (HalfExp(j as u32), v))
        .collect();
    let radius = mass_radius(factor);
    Ok(LogExpansion {
        coefficients,
        cut,
        radius,
        coefficient_scale: std::f64::consts::LN_2,
    })
}

/// Largest `y <= 2^{-1/2}` with `sum |c_j| y^j + tail(y) <= 1/2`.
fn mass_radius(factor: &LocalFactorExpansion) -> f64 {
    let y2 = std::f64::consts::FRAC_1_SQRT_2;
    let mass = |y: f64| {
        factor
            .terms
            .iter()
            .map(|(e, c)| c.abs() * y.powi(e.0 as i32))
            .sum::<f64>()
            + factor.tail_bound * (y / y2).powi(factor.e_max.0 as i32)
    };
    if mass(y2) <= 0.5 {
        return y2;
    }
    let (mut lo, mut hi) = (0.0, y2);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) <= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductMethod {
    LogExpansion,
    TruncatedProduct,
}

/// Parameters recorded with a product evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub explicit_prime_cutoff: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_series_cut: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zeta_target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime_cutoff: Option<u64>,
    pub exponent_cutoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerProductResult {
    pub value: f64,
    pub method: ProductMethod,
    pub params: ProductParams,
    pub error_estimate: f64,
}

/// Tuning for [`euler_product`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerParams {
    /// Primes up to this are multiplied in directly.
    pub explicit_prime_cutoff: u64,
    /// Smallest log-series cut; the cut is never below the factor's cutoff.
    pub base_cut: HalfExp,
    /// Multiplier applied to the cut.
    pub cut_multiplier: u32,
    pub zeta_target: f64,
}

impl Default for EulerParams {
    fn default() -> Self {
        EulerParams {
            explicit_prime_cutoff: 100,
            base_cut: HalfExp::integer(32),
            cut_multiplier: 1,
            zeta_target: 1e-15,
        }
    }
}

impl EulerParams {
    /// Doubled series cut and halved zeta target.
    pub fn refined(self) -> Self {
        EulerParams {
            cut_multiplier: self.cut_multiplier * 2,
            zeta_target: self.zeta_target / 2.0,
            ..self
        }
    }
}

/// `prod_p (1 + sum_e c_e p^{-e})`.
///
/// Primes up to the explicit cutoff `Q` are multiplied in directly; the
/// rest is `exp(sum_e d_e P_Q(e))` with `d_e` the log-series coefficients
/// and `P_Q(e) = sum_{p > Q} p^{-e}` from the prime zeta function.
pub fn euler_product(
    factor: &LocalFactorExpansion,
    params: EulerParams,
) -> Result<EulerProductResult> {
    let cut = HalfExp(factor.e_max.max(params.base_cut).0 * params.cut_multiplier.max(1));
    let q = params.explicit_prime_cutoff;
    let record = ProductParams {
        explicit_prime_cutoff: Some(q),
        log_series_cut: Some(cut.as_f64()),
        zeta_target: Some(params.zeta_target),
        prime_cutoff: None,
        exponent_cutoff: factor.e_max.as_f64(),
    };
    if factor.terms.is_empty() && factor.tail_bound == 0.0 {
        return Ok(EulerProductResult {
            value: 1.0,
            method: ProductMethod::LogExpansion,
            params: record,
            error_estimate: 0.0,
        });
    }
    let log = log_expand_local(factor, cut)?;

    // explicit primes
    let mut head_logs = Vec::new();
    let mut rel_err = 0.0;
    for p in primes_up_to(q) {
        let pf = p as f64;
        let excess = factor.excess_at(pf);
        let value = 1.0 + excess;
        if !(value > 0.0) {
            return Err(Error::NonPositiveFactor(value));
        }
        head_logs.push(excess.ln_1p());
        rel_err += (factor.tail_at(pf) + 4.0 * f64::EPSILON * (1.0 + factor.mass_at(pf))) / value;
    }

    // remaining primes through the log series
    let mut log_terms = Vec::with_capacity(log.coefficients.len());
    let mut log_err = 0.0;
    for (&e, &d) in &log.coefficients {
        let tail = prime_zeta_tail(e.as_f64(), q, params.zeta_target)?;
        log_terms.push(d * tail.value);
        log_err += d.abs() * tail.error + 2.0 * f64::EPSILON * (d * tail.value).abs();
    }
    let qf = q as f64;
    let trunc = log.truncation_bound(qf).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "explicit prime cutoff {q} too small for this factor"
        ))
    })?;
    let e_max = factor.e_max.as_f64();
    let inner_tail =
        2.0 * factor.tail_bound * 2f64.powf(e_max) * qf.powf(1.0 - e_max) / (e_max - 1.0);
    log_err += trunc + inner_tail;

    let total_log = neumaier_sum(head_logs.into_iter().chain(log_terms));
    let value = total_log.exp();
    let error_estimate =
        value * (rel_err + log_err) + 8.0 * f64::EPSILON * value * (1.0 + total_log.abs());
    Ok(EulerProductResult {
        value,
        method: ProductMethod::LogExpansion,
        params: record,
        error_estimate,
    })
}

/// Primes handled per parallel chunk in [`truncated_product_oracle`].
const ORACLE_CHUNK: usize = 4096;

/// Direct product over primes `p <= P` of the factor summed to `a_max`,
/// with an estimate of the omitted product over `p > P`.
pub fn truncated_product_oracle(
    factor: &LocalFactorExpansion,
    prime_cutoff: u64,
    a_max: HalfExp,
) -> Result<EulerProductResult> {
    if prime_cutoff < 2 {
        return Err(Error::InvalidArgument(
            "prime cutoff must be at least 2".into(),
        ));
    }
    let a_max = a_max.min(factor.e_max);
    let mut dense = factor.dense();
    dense.truncate(a_max.0 as usize + 1);
    let primes = primes_up_to(prime_cutoff);
    let chunk_logs: Vec<Result<f64>> = primes
        .par_chunks(ORACLE_CHUNK)
        .map(|chunk| {
            let mut logs = Vec::with_capacity(chunk.len());
            for &p in chunk {
                let excess = horner(&dense, (p as f64).powf(-0.5));
                if !(1.0 + excess > 0.0) {
                    return Err(Error::NonPositiveFactor(1.0 + excess));
                }
                logs.push(excess.ln_1p());
            }
            Ok(neumaier_sum(logs))
        })
        .collect();
    let chunk_logs = chunk_logs.into_iter().collect::<Result<Vec<_>>>()?;
    let value = neumaier_sum(chunk_logs).exp();

    let pc = prime_cutoff as f64;
    let product_tail: f64 = factor
        .terms
        .iter()
        .filter(|(e, _)| **e <= a_max)
        .map(|(e, c)| c.abs() * prime_tail_bound(e.as_f64(), pc))
        .sum();
    // discarded inner terms: everything above a_max, bounded at p = 2 and
    // decaying at least like (2/p)^a_max
    let dropped: f64 = factor
        .terms
        .iter()
        .filter(|(e, _)| **e > a_max)
        .map(|(e, c)| c.abs() * 2f64.powf(-e.as_f64()))
        .sum::<f64>()
        + factor.tail_bound;
    let inner = 2.0 * dropped * (1.0 + 2f64.powf(a_max.as_f64()) * 3f64.powf(1.0 - a_max.as_f64()));
    let rounding = 4.0 * f64::EPSILON * (primes.len() as f64).sqrt() + 8.0 * f64::EPSILON;
    let error_estimate = value * (product_tail.exp_m1() + inner + rounding);
    Ok(EulerProductResult {
        value,
        method: ProductMethod::TruncatedProduct,
        params: ProductParams {
            explicit_prime_cutoff: None,
            log_series_cut: None,
            zeta_target: None,
            prime_cutoff: Some(prime_cutoff),
            exponent_cutoff: a_max.as_f64(),
        },
        error_estimate,
    })
}
