//! Coefficient tables on `1..=N`, exact summatory functions at checkpoints,
//! the squarefree double sum `S(x)`, and the champion-sequence analysis of
//! `log t_e(n) log log n / log n`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{isqrt, primes_up_to, FactoredInteger, SpfTable};
use crate::error::{Error, Result};
use crate::expfunc::{
    classical_eval_factored, exp_eval, kernel, ClassicalFunctionId, ExpFunctionId,
};
use crate::format::fmt_f64;

/// Largest exponent a prime can have in a 64-bit integer.
const MAX_EXP: usize = 64;

/// Functions that can be tabulated.
#[derive(Debug, Clone, PartialEq)]
pub enum FnId {
    Exp(ExpFunctionId),
    Classical(ClassicalFunctionId),
    /// `tau(1,2,n)`, the number of pairs `(a, b)` with `a b^2 = n`.
    Tau12,
    /// The constant function 1.
    One,
    /// `n` itself.
    Identity,
    /// p-independent multiplicative function given by its values at
    /// `p^1, p^2, ...` (zero past the end).
    Bell {
        name: String,
        coefficients: Arc<Vec<i64>>,
    },
}

impl FnId {
    pub fn name(&self) -> String {
        match self {
            FnId::Exp(id) => id.name().to_string(),
            FnId::Classical(id) => id.name(),
            FnId::Tau12 => "tau12".into(),
            FnId::One => "one".into(),
            FnId::Identity => "id".into(),
            FnId::Bell { name, .. } => name.clone(),
        }
    }

    pub fn bell(name: impl Into<String>, coefficients: Vec<i64>) -> Self {
        FnId::Bell {
            name: name.into(),
            coefficients: Arc::new(coefficients),
        }
    }

    fn is_additive(&self) -> bool {
        matches!(self, FnId::Classical(c) if c.is_additive())
    }

    /// True for functions that are never negative.
    pub fn is_nonnegative(&self) -> bool {
        use ClassicalFunctionId::*;
        match self {
            FnId::Exp(e) => matches!(
                e,
                ExpFunctionId::AbsMuE | ExpFunctionId::TE | ExpFunctionId::KappaE
            ),
            FnId::Classical(c) => !matches!(c, Mu | Lambda | Mu2),
            FnId::Tau12 | FnId::One | FnId::Identity => true,
            FnId::Bell { coefficients, .. } => coefficients.iter().all(|&c| c >= 0),
        }
    }

    /// Value at a factored integer.
    pub fn eval(&self, n: &FactoredInteger) -> Result<i64> {
        match self {
            FnId::Exp(id) => exp_eval(*id, n),
            FnId::Classical(id) => classical_eval_factored(*id, n),
            FnId::Identity => i64::try_from(n.value()).map_err(|_| Error::Overflow("identity")),
            _ => {
                let eval = self.evaluator()?;
                n.factors().iter().try_fold(1i64, |acc, &(_, a)| {
                    let v = eval.lut.get(a as usize).copied().unwrap_or(0);
                    acc.checked_mul(v).ok_or(Error::Overflow("function value"))
                })
            }
        }
    }

    fn evaluator(&self) -> Result<PrimePowerEval> {
        let mut lut = vec![0i64; MAX_EXP + 1];
        let mut kind = PowKind::Plain;
        match self {
            FnId::Exp(ExpFunctionId::KappaE) => {
                kind = PowKind::PowerOfP;
                for (a, v) in lut.iter_mut().enumerate().skip(1) {
                    *v = kernel(a as u64) as i64;
                }
            }
            FnId::Exp(id) => {
                for (a, v) in lut.iter_mut().enumerate().skip(1) {
                    *v = id.prime_power(2, a as u32)?;
                }
            }
            FnId::Classical(ClassicalFunctionId::Kappa) => kind = PowKind::P,
            FnId::Classical(id) => {
                id.validate()?;
                for (a, v) in lut.iter_mut().enumerate().skip(1) {
                    *v = id.prime_power(2, a as u32)?;
                }
            }
            FnId::Tau12 => {
                for (a, v) in lut.iter_mut().enumerate().skip(1) {
                    *v = a as i64 / 2 + 1;
                }
            }
            FnId::One => lut.iter_mut().for_each(|v| *v = 1),
            FnId::Identity => {
                kind = PowKind::PowerOfP;
                for (a, v) in lut.iter_mut().enumerate() {
                    *v = a as i64;
                }
            }
            FnId::Bell { coefficients, .. } => {
                for (a, v) in lut.iter_mut().enumerate().skip(1) {
                    *v = coefficients.get(a - 1).copied().unwrap_or(0);
                }
            }
        }
        Ok(PrimePowerEval {
            lut,
            kind,
            additive: self.is_additive(),
        })
    }
}

impl fmt::Display for FnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for FnId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tau12" | "tau_1_2" => return Ok(FnId::Tau12),
            "one" | "1" => return Ok(FnId::One),
            "id" | "identity" => return Ok(FnId::Identity),
            _ => {}
        }
        if let Ok(e) = s.parse::<ExpFunctionId>() {
            return Ok(FnId::Exp(e));
        }
        s.parse::<ClassicalFunctionId>().map(FnId::Classical)
    }
}

#[derive(Debug, Clone, Copy)]
enum PowKind {
    /// value is `lut[a]`
    Plain,
    /// value is `p^lut[a]`
    PowerOfP,
    /// value is `p`
    P,
}

/// Fast prime-power rule for table building.
#[derive(Debug, Clone)]
struct PrimePowerEval {
    lut: Vec<i64>,
    kind: PowKind,
    additive: bool,
}

impl PrimePowerEval {
    #[inline]
    fn at(&self, p: u64, a: u32) -> i64 {
        match self.kind {
            PowKind::Plain => self.lut[a as usize],
            PowKind::PowerOfP => (p as i64).pow(self.lut[a as usize] as u32),
            PowKind::P => p as i64,
        }
    }

    #[inline]
    fn combine(&self, acc: i64, part: i64) -> i64 {
        if self.additive {
            acc + part
        } else {
            acc * part
        }
    }

    fn unit(&self) -> i64 {
        if self.additive {
            0
        } else {
            1
        }
    }
}

/// Exact values of one function on `1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    name: String,
    /// `values[0]` is unused and zero.
    values: Vec<i64>,
}

impl CoefficientTable {
    /// Wraps values for `1..=N` given in order.
    pub fn from_values(name: impl Into<String>, values_from_one: Vec<i64>) -> Self {
        let mut values = Vec::with_capacity(values_from_one.len() + 1);
        values.push(0);
        values.extend(values_from_one);
        CoefficientTable {
            name: name.into(),
            values,
        }
    }

    /// Builds a table from a closure on `1..=N`.
    pub fn from_fn(name: impl Into<String>, limit: u64, f: impl Fn(u64) -> i64) -> Self {
        let mut values = vec![0i64; limit as usize + 1];
        for (n, v) in values.iter_mut().enumerate().skip(1) {
            *v = f(n as u64);
        }
        CoefficientTable {
            name: name.into(),
            values,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// Value at `n`, `1 <= n <= limit`.
    #[inline]
    pub fn get(&self, n: u64) -> i64 {
        self.values[n as usize]
    }

    /// Values at `1..=limit`.
    pub fn values(&self) -> &[i64] {
        &self.values[1..]
    }

    pub(crate) fn raw(&self) -> &[i64] {
        &self.values
    }

    pub fn truncated(&self, limit: u64) -> CoefficientTable {
        let end = (limit as usize + 1).min(self.values.len());
        CoefficientTable {
            name: self.name.clone(),
            values: self.values[..end].to_vec(),
        }
    }

    /// Prefix sums in 128-bit arithmetic, index `x` holding the sum over `n <= x`.
    pub fn prefix_sums(&self) -> Vec<i128> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc: i128 = 0;
        for &v in &self.values {
            acc += v as i128;
            out.push(acc);
        }
        out
    }

    /// CSV with header `n,value`, LF line endings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = std::io::BufWriter::new(&mut w);
        writeln!(buf, "n,value")?;
        for (n, v) in self.values.iter().enumerate().skip(1) {
            writeln!(buf, "{n},{v}")?;
        }
        buf.flush()?;
        Ok(())
    }
}

/// Tabulates `id` on `1..=N` from factorizations read off the SPF table.
pub fn build_table(id: &FnId, limit: u64, spf: &SpfTable) -> Result<CoefficientTable> {
    if limit > spf.limit() {
        return Err(Error::Capacity {
            requested: limit,
            capacity: spf.limit(),
        });
    }
    let eval = id.evaluator()?;
    let n_max = limit as usize;
    let mut values = vec![0i64; n_max + 1];
    if n_max >= 1 {
        values[1] = eval.unit();
    }
    for n in 2..=n_max {
        let (p, a, rest) = spf.split_smallest(n as u64);
        values[n] = eval.combine(values[rest as usize], eval.at(p, a));
    }
    Ok(CoefficientTable {
        name: id.name(),
        values,
    })
}

/// Builds an SPF table of the right size and tabulates `id`.
pub fn build_table_fresh(id: &FnId, limit: u64) -> Result<CoefficientTable> {
    let spf = SpfTable::build(limit.max(2))?;
    build_table(id, limit, &spf)
}

/// Default segment length of the segmented sieve.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 18;

/// Values of `id` on `[lo, hi)` by sieving with the primes up to `sqrt(hi)`.
fn sieve_segment(eval: &PrimePowerEval, primes: &[u64], lo: u64, hi: u64) -> Vec<i64> {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut val = vec![eval.unit(); len];
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m < hi {
            let i = (m - lo) as usize;
            let mut r = rem[i] / p;
            let mut a = 1;
            while r.is_multiple_of(p) {
                r /= p;
                a += 1;
            }
            rem[i] = r;
            val[i] = eval.combine(val[i], eval.at(p, a));
            m += p;
        }
    }
    for i in 0..len {
        if rem[i] > 1 {
            // remaining cofactor is a prime to the first power
            val[i] = eval.combine(val[i], eval.at(rem[i], 1));
        }
    }
    val
}

/// Segment boundaries `[lo, hi)` covering `1..=limit`.
fn segments(limit: u64, segment_size: u64) -> Vec<(u64, u64)> {
    let size = segment_size.max(1);
    let mut out = Vec::new();
    let mut lo = 1;
    while lo <= limit {
        let hi = (lo + size).min(limit + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Segmented build: fixed-size segments sieved independently (in parallel)
/// and concatenated in order. Needs no SPF table.
pub fn build_table_segmented(id: &FnId, limit: u64, segment_size: u64) -> Result<CoefficientTable> {
    let eval = id.evaluator()?;
    let primes = primes_up_to(isqrt(limit) + 1);
    let parts: Vec<Vec<i64>> = segments(limit, segment_size)
        .into_par_iter()
        .map(|(lo, hi)| sieve_segment(&eval, &primes, lo, hi))
        .collect();
    let mut values = Vec::with_capacity(limit as usize + 1);
    values.push(0);
    for part in parts {
        values.extend(part);
    }
    Ok(CoefficientTable {
        name: id.name(),
        values,
    })
}

/// Main-term models for summatory functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum MainTerm {
    /// `m x`
    Linear { m: f64 },
    /// `c1 x + c2 sqrt(x)`
    LinearSqrt { c1: f64, c2: f64 },
    /// `(c / 2) x^2`
    QuadraticHalf { c: f64 },
}

impl MainTerm {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            MainTerm::Linear { m } => m * x,
            MainTerm::LinearSqrt { c1, c2 } => c1 * x + c2 * x.sqrt(),
            MainTerm::QuadraticHalf { c } => 0.5 * c * x * x,
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            MainTerm::Linear { .. } => "linear",
            MainTerm::LinearSqrt { .. } => "linear_sqrt",
            MainTerm::QuadraticHalf { .. } => "quadratic_half",
        }
    }
}

/// Exact partial sums at checkpoints, with residuals against an optional
/// main term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSeries {
    pub function: String,
    pub checkpoints: Vec<u64>,
    /// Exact sums; serialized as decimal strings.
    #[serde(with = "i128_strings")]
    pub sums: Vec<i128>,
    pub main_term: Option<MainTerm>,
    pub residuals: Vec<f64>,
}

mod i128_strings {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[i128], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i128>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `sum - main` for an exact integer sum and a real main term.
pub fn residual(sum: i128, main: f64) -> f64 {
    // split so that large sums lose no integer precision before subtracting
    let main_int = main.trunc();
    let int_part = (sum - main_int as i128) as f64;
    int_part - (main - main_int)
}

impl CheckpointSeries {
    pub fn new(function: impl Into<String>, checkpoints: Vec<u64>, sums: Vec<i128>) -> Self {
        let residuals = sums.iter().map(|&s| s as f64).collect();
        CheckpointSeries {
            function: function.into(),
            checkpoints,
            sums,
            main_term: None,
            residuals,
        }
    }

    /// Attaches a main term and recomputes residuals.
    pub fn with_main_term(mut self, main: MainTerm) -> Self {
        self.residuals = self
            .checkpoints
            .iter()
            .zip(&self.sums)
            .map(|(&x, &s)| residual(s, main.eval(x as f64)))
            .collect();
        self.main_term = Some(main);
        self
    }

    /// Restricts to checkpoints in `[lo, hi]`.
    pub fn window(&self, lo: u64, hi: u64) -> CheckpointSeries {
        let keep: Vec<usize> = (0..self.checkpoints.len())
            .filter(|&i| self.checkpoints[i] >= lo && self.checkpoints[i] <= hi)
            .collect();
        CheckpointSeries {
            function: self.function.clone(),
            checkpoints: keep.iter().map(|&i| self.checkpoints[i]).collect(),
            sums: keep.iter().map(|&i| self.sums[i]).collect(),
            main_term: self.main_term,
            residuals: keep.iter().map(|&i| self.residuals[i]).collect(),
        }
    }

    /// CSV `x,sum,main,residual`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,sum,main,residual")?;
        for (i, &x) in self.checkpoints.iter().enumerate() {
            let main = self.main_term.map_or(0.0, |m| m.eval(x as f64));
            writeln!(
                w,
                "{},{},{},{}",
                x,
                self.sums[i],
                fmt_f64(main),
                fmt_f64(self.residuals[i])
            )?;
        }
        Ok(())
    }
}

/// Exact partial sums of a table at the given checkpoints.
pub fn summatory(table: &CoefficientTable, checkpoints: &[u64]) -> Result<CheckpointSeries> {
    let mut sorted = checkpoints.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&x) = sorted.last() {
        if x > table.limit() {
            return Err(Error::InvalidArgument(format!(
                "checkpoint {x} exceeds table limit {}",
                table.limit()
            )));
        }
    }
    let mut sums = Vec::with_capacity(sorted.len());
    let mut acc: i128 = 0;
    let mut next = 1usize;
    for &x in &sorted {
        let x = x as usize;
        while next <= x {
            acc += table.raw()[next] as i128;
            next += 1;
        }
        sums.push(acc);
    }
    Ok(CheckpointSeries::new(table.name(), sorted, sums))
}

/// Partial sums of `id` at checkpoints up to `limit`, streaming segments so
/// memory stays bounded by the segment size times the worker count.
pub fn summatory_segmented(
    id: &FnId,
    limit: u64,
    checkpoints: &[u64],
    segment_size: u64,
) -> Result<CheckpointSeries> {
    let eval = id.evaluator()?;
    let primes = primes_up_to(isqrt(limit) + 1);
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    if cps.last().is_some_and(|&x| x > limit) {
        return Err(Error::InvalidArgument("checkpoint beyond limit".into()));
    }
    let segs = segments(limit, segment_size);
    let batch = rayon::current_num_threads().max(1) * 2;
    let mut sums = Vec::with_capacity(cps.len());
    let mut acc: i128 = 0;
    let mut ci = 0;
    for chunk in segs.chunks(batch) {
        let parts: Vec<Vec<i64>> = chunk
            .par_iter()
            .map(|&(lo, hi)| sieve_segment(&eval, &primes, lo, hi))
            .collect();
        for (&(lo, _), part) in chunk.iter().zip(parts) {
            for (i, &v) in part.iter().enumerate() {
                acc += v as i128;
                let n = lo + i as u64;
                while ci < cps.len() && cps[ci] == n {
                    sums.push(acc);
                    ci += 1;
                }
            }
        }
    }
    Ok(CheckpointSeries::new(id.name(), cps, sums))
}

/// `floor(10^(k/4))` for `k_min <= k <= 4 log10(limit)`.
pub fn geometric_checkpoints_from(k_min: u32, limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for k in k_min..=40 {
        let x = fourth_root_of_power_of_ten(k);
        if x > limit {
            break;
        }
        out.push(x);
    }
    out
}

/// The default grid `floor(10^(k/4))`, `k = 16, 17, ...`, up to `limit`.
pub fn geometric_checkpoints(limit: u64) -> Vec<u64> {
    geometric_checkpoints_from(16, limit)
}

fn fourth_root_of_power_of_ten(k: u32) -> u64 {
    let target: u128 = 10u128.pow(k.min(38));
    let mut r = 10f64.powf(k as f64 / 4.0) as u128;
    while r.pow(4) > target {
        r -= 1;
    }
    while (r + 1).pow(4) <= target {
        r += 1;
    }
    r as u64
}

// ---------------------------------------------------------------------------
// classical summatory functions

/// Möbius values on `0..=limit` by the linear sieve (`mu[0] = 0`).
pub fn mobius_sieve(limit: u64) -> Vec<i8> {
    let n = limit as usize;
    let mut mu = vec![1i8; n + 1];
    mu[0] = 0;
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// Which classical partial sum to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalSumId {
    /// `M(x)`, partial sums of `mu`.
    Mertens,
    /// `E(x)`, the number of squarefree `n <= x`.
    Squarefree,
    /// `D(x) = E(x) - x / zeta(2)`.
    SquarefreeResidual,
    /// partial sums of `tau(1,2,n)`.
    Tau12,
}

/// Value of a classical partial sum. `D(x)` is kept as the exact pair
/// `(E(x), x)` until a value of `zeta(2)` is supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalSum {
    Exact(i64),
    SquarefreeResidual { squarefree_count: i64, x: u64 },
}

impl ClassicalSum {
    pub fn exact(&self) -> Option<i64> {
        match *self {
            ClassicalSum::Exact(v) => Some(v),
            ClassicalSum::SquarefreeResidual { .. } => None,
        }
    }

    /// Real value, materializing `D(x)` with the given `zeta(2)`.
    pub fn value(&self, zeta2: f64) -> f64 {
        match *self {
            ClassicalSum::Exact(v) => v as f64,
            ClassicalSum::SquarefreeResidual {
                squarefree_count,
                x,
            } => residual(squarefree_count as i128, x as f64 / zeta2),
        }
    }
}

pub fn classical_summatory(id: ClassicalSumId, x: u64) -> Result<ClassicalSum> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be at least 1".into()));
    }
    Ok(match id {
        ClassicalSumId::Tau12 => ClassicalSum::Exact(tau12_summatory(x) as i64),
        ClassicalSumId::Mertens => {
            ClassicalSum::Exact(mobius_sieve(x).iter().map(|&m| m as i64).sum())
        }
        ClassicalSumId::Squarefree => {
            ClassicalSum::Exact(mobius_sieve(x).iter().filter(|&&m| m != 0).count() as i64)
        }
        ClassicalSumId::SquarefreeResidual => ClassicalSum::SquarefreeResidual {
            squarefree_count: mobius_sieve(x).iter().filter(|&&m| m != 0).count() as i64,
            x,
        },
    })
}

/// `sum_{n <= x} tau(1,2,n) = sum_{b <= sqrt x} floor(x / b^2)`.
pub fn tau12_summatory(x: u64) -> u128 {
    (1..=isqrt(x)).map(|b| (x / (b * b)) as u128).sum()
}

/// `mu` and the squarefree counting function on `0..=limit`, for evaluating
/// `S(x) = sum_{n d^2 <= x} mu^2(n) mu(d)` at many `x`.
#[derive(Debug, Clone)]
pub struct SquarefreeCounter {
    mu: Vec<i8>,
    count: Vec<u32>,
}

impl SquarefreeCounter {
    pub fn new(limit: u64) -> Self {
        let mu = mobius_sieve(limit);
        let mut count = Vec::with_capacity(mu.len());
        let mut acc = 0u32;
        for &m in &mu {
            acc += (m != 0) as u32;
            count.push(acc);
        }
        // mu[0] = 0 so index 0 contributes nothing
        SquarefreeCounter { mu, count }
    }

    pub fn limit(&self) -> u64 {
        self.mu.len() as u64 - 1
    }

    pub fn mu(&self, n: u64) -> i64 {
        self.mu[n as usize] as i64
    }

    /// `E(x)`.
    pub fn squarefree_count(&self, x: u64) -> i64 {
        self.count[x as usize] as i64
    }

    pub fn mertens(&self, x: u64) -> i64 {
        self.mu[..=x as usize].iter().map(|&m| m as i64).sum()
    }

    /// `S(x) = sum_{d <= sqrt x} mu(d) E(x / d^2)`.
    pub fn s(&self, x: u64) -> i64 {
        (1..=isqrt(x))
            .map(|d| self.mu(d) * self.squarefree_count(x / (d * d)))
            .sum()
    }
}

/// `S(x) = sum_{n d^2 <= x} mu^2(n) mu(d)` by the literal double loop over
/// `d <= sqrt x` and `n <= x / d^2`.
pub fn direct_s(x: u64) -> Result<i64> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be at least 1".into()));
    }
    let mu = mobius_sieve(x);
    let mut total = 0i64;
    for d in 1..=isqrt(x) {
        let md = mu[d as usize] as i64;
        if md == 0 {
            continue;
        }
        let inner: i64 = (1..=x / (d * d))
            .map(|n| (mu[n as usize] != 0) as i64)
            .sum();
        total += md * inner;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// limsup of log t_e(n) log log n / log n

/// `r log 2 log log n / log n` for `n` the square of the product of the
/// first `r` primes, with `log n = 2 sum log p_i`; `n` is never formed.
pub fn champion_ratio(r: usize, primes: &[u64]) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if primes.len() < r {
        return Err(Error::InvalidArgument(format!(
            "need {r} primes, got {}",
            primes.len()
        )));
    }
    let log_n = 2.0 * crate::format::neumaier_sum(primes[..r].iter().map(|&p| (p as f64).ln()));
    Ok(r as f64 * std::f64::consts::LN_2 * log_n.ln() / log_n)
}

/// Maximizer of `omega(m) log 2 / m` over `2 <= m <= max_m` (smallest
/// maximizer on ties) and the maximal value.
pub fn sup_scan(max_m: u64) -> Result<(u64, f64)> {
    if max_m < 2 {
        return Err(Error::InvalidArgument("sup_scan needs M >= 2".into()));
    }
    let n = max_m as usize;
    let mut omega = vec![0u8; n + 1];
    for p in 2..=n {
        if omega[p] == 0 {
            let mut m = p;
            while m <= n {
                omega[m] += 1;
                m += p;
            }
        }
    }
    let mut best = (2u64, omega[2] as u64, 2u64);
    for m in 3..=n {
        // compare omega(m)/m > best_w/best_m exactly
        if (omega[m] as u64) * best.2 > best.1 * m as u64 {
            best = (m as u64, omega[m] as u64, m as u64);
        }
    }
    Ok((
        best.0,
        best.1 as f64 * std::f64::consts::LN_2 / best.2 as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize_trial;
    use crate::expfunc::{classical_eval, exp_eval};

    fn table(id: &str, n: u64) -> CoefficientTable {
        build_table_fresh(&id.parse().unwrap(), n).unwrap()
    }

    #[test]
    fn small_tables() {
        assert_eq!(
            table("mu_e", 10).values(),
            &[1, 1, 1, -1, 1, 1, 1, -1, -1, 1]
        );
        assert_eq!(table("t_e", 10).values(), &[1, 1, 1, 2, 1, 1, 1, 2, 2, 1]);
        assert_eq!(table("tau12", 4).values(), &[1, 1, 1, 2]);
        assert_eq!(
            table("omega", 12).values(),
            &[0, 1, 1, 1, 1, 2, 1, 1, 1, 2, 1, 2]
        );
        assert_eq!(table("id", 5).values(), &[1, 2, 3, 4, 5]);
        assert_eq!(table("kappa", 12).get(12), 6);
    }

    #[test]
    fn tau12_table_counts_pairs() {
        let t = table("tau12", 2000);
        for n in 1..=2000u64 {
            let pairs = (1..=n).filter(|b| b * b <= n && n % (b * b) == 0).count() as i64;
            assert_eq!(t.get(n), pairs);
        }
    }

    #[test]
    fn tables_match_pointwise() {
        let n = 30_000;
        let spf = SpfTable::build(n).unwrap();
        for id in ExpFunctionId::ALL {
            let t = build_table(&FnId::Exp(id), n, &spf).unwrap();
            for k in 1..=n {
                assert_eq!(
                    t.get(k),
                    exp_eval(id, &spf.factorize(k).unwrap()).unwrap(),
                    "{id} {k}"
                );
            }
        }
        use ClassicalFunctionId::*;
        for id in [
            Mu,
            MuSquared,
            Lambda,
            Tau,
            Omega,
            BigOmega,
            Kappa,
            QK(3),
            Mu2,
            E2,
            EllSquarefull,
        ] {
            let t = build_table(&FnId::Classical(id), n, &spf).unwrap();
            for k in 1..=n {
                assert_eq!(t.get(k), classical_eval(id, k).unwrap(), "{id} {k}");
            }
        }
    }

    #[test]
    fn capacity_is_checked() {
        let spf = SpfTable::build(100).unwrap();
        assert!(matches!(
            build_table(&FnId::One, 101, &spf),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn segmented_matches_spf_route() {
        let n = 200_000;
        let spf = SpfTable::build(n).unwrap();
        for name in [
            "mu_e",
            "t_e",
            "kappa_e",
            "big_omega",
            "tau12",
            "F_lambda",
            "kappa",
        ] {
            let id: FnId = name.parse().unwrap();
            let a = build_table(&id, n, &spf).unwrap();
            let b = build_table_segmented(&id, n, 4096).unwrap();
            let c = build_table_segmented(&id, n, 77_777).unwrap();
            assert_eq!(a, b, "{name}");
            assert_eq!(a, c, "{name}");
        }
    }

    #[test]
    fn summatory_examples() {
        assert_eq!(summatory(&table("mu_e", 10), &[10]).unwrap().sums, vec![4]);
        assert_eq!(summatory(&table("t_e", 10), &[10]).unwrap().sums, vec![13]);
        assert_eq!(
            summatory(&table("kappa_e", 10), &[10]).unwrap().sums,
            vec![55]
        );
        assert!(summatory(&table("mu_e", 10), &[11]).is_err());
    }

    #[test]
    fn segmented_summatory_matches() {
        let n = 100_000;
        let cps = geometric_checkpoints_from(4, n);
        for name in ["mu_e", "kappa_e", "t_e"] {
            let id: FnId = name.parse().unwrap();
            let a = summatory(&build_table_fresh(&id, n).unwrap(), &cps).unwrap();
            let b = summatory_segmented(&id, n, &cps, 1000).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn kappa_e_sum_bounded_by_identity_sum() {
        let n = 100_000;
        let cps = geometric_checkpoints_from(4, n);
        let k = summatory(&table("kappa_e", n), &cps).unwrap();
        let id = summatory(&table("id", n), &cps).unwrap();
        for (a, b) in k.sums.iter().zip(&id.sums) {
            assert!(a <= b);
        }
        assert!(k.sums.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn checkpoint_grid() {
        let g = geometric_checkpoints(10_000_000);
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], 10_000);
        assert_eq!(g[1], 17_782);
        assert_eq!(g[2], 31_622);
        assert_eq!(*g.last().unwrap(), 10_000_000);
        assert!(geometric_checkpoints(9_999).is_empty());
    }

    #[test]
    fn classical_sums() {
        assert_eq!(
            classical_summatory(ClassicalSumId::Mertens, 10).unwrap(),
            ClassicalSum::Exact(-1)
        );
        assert_eq!(
            classical_summatory(ClassicalSumId::Squarefree, 10).unwrap(),
            ClassicalSum::Exact(7)
        );
        assert_eq!(
            classical_summatory(ClassicalSumId::Tau12, 10).unwrap(),
            ClassicalSum::Exact(13)
        );
        let d = classical_summatory(ClassicalSumId::SquarefreeResidual, 10).unwrap();
        assert_eq!(
            d,
            ClassicalSum::SquarefreeResidual {
                squarefree_count: 7,
                x: 10
            }
        );
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((d.value(z2) - (7.0 - 10.0 / z2)).abs() < 1e-12);
        assert!(classical_summatory(ClassicalSumId::Mertens, 0).is_err());
    }

    #[test]
    fn tau12_summatory_matches_table() {
        let t = table("tau12", 50_000);
        let pre = t.prefix_sums();
        for x in (1..=50_000u64).step_by(97) {
            assert_eq!(tau12_summatory(x) as i128, pre[x as usize]);
        }
    }

    #[test]
    fn s_examples() {
        assert_eq!(direct_s(10).unwrap(), 4);
        assert_eq!(direct_s(1).unwrap(), 1);
        let sum_mu_e: i64 = table("mu_e", 10).values().iter().sum();
        assert_eq!(direct_s(10).unwrap(), sum_mu_e);
        let c = SquarefreeCounter::new(5000);
        for x in 1..=5000 {
            assert_eq!(c.s(x), direct_s(x).unwrap());
        }
        assert_eq!(c.mertens(10), -1);
    }

    #[test]
    fn champion_examples() {
        let primes = primes_up_to(2_000_000);
        assert!((champion_ratio(1, &primes).unwrap() - 0.1633).abs() < 1e-3);
        assert!((champion_ratio(2, &primes).unwrap() - 0.4939).abs() < 1e-3);
        let half_log2 = 0.5 * std::f64::consts::LN_2;
        let rs = [10, 25, 100, 1000, 10_000, 100_000];
        let vals: Vec<f64> = rs
            .iter()
            .map(|&r| champion_ratio(r, &primes).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]), "{vals:?}");
        assert!(vals.iter().all(|&v| v > half_log2));
        assert!(champion_ratio(10, &primes[..5]).is_err());
    }

    #[test]
    fn champion_ratio_matches_direct_logs() {
        // small r: form n explicitly
        let primes = primes_up_to(100);
        for r in 1..=7 {
            let n: u64 = primes[..r].iter().product::<u64>().pow(2);
            let t_e = exp_eval(ExpFunctionId::TE, &factorize_trial(n).unwrap()).unwrap();
            assert_eq!(t_e, 1 << r);
            let ln = (n as f64).ln();
            let direct = (t_e as f64).ln() * ln.ln() / ln;
            assert!((champion_ratio(r, &primes).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn sup_scan_examples() {
        let half_log2 = 0.5 * std::f64::consts::LN_2;
        let (m, v) = sup_scan(2).unwrap();
        assert_eq!(m, 2);
        assert!((v - half_log2).abs() < 1e-15);
        let (m, v) = sup_scan(10_000).unwrap();
        assert_eq!(m, 2);
        assert!((v - half_log2).abs() < 1e-15);
        let (m, _) = sup_scan(6).unwrap();
        assert_eq!(m, 2);
        // runner-up value on 3..=6 is 2 log 2 / 6, shared by m = 3 and m = 6
        let value = |m: u64| crate::expfunc::omega(m) as f64 * std::f64::consts::LN_2 / m as f64;
        let runner = (3..=6u64).map(value).fold(0.0, f64::max);
        assert!((runner - 0.2310).abs() < 1e-4);
        assert_eq!(value(6), runner);
        assert!(sup_scan(1).is_err());
    }

    #[test]
    fn residual_keeps_integer_precision() {
        let s: i128 = 4_000_000_000_000_123;
        assert_eq!(residual(s, 4_000_000_000_000_000.5), 122.5);
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        table("mu_e", 4).write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "n,value\n1,1\n2,1\n3,1\n4,-1\n"
        );
        let s = summatory(&table("t_e", 10), &[5, 10])
            .unwrap()
            .with_main_term(MainTerm::Linear { m: 1.0 });
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text
            .starts_with("x,sum,main,residual\n5,6,5.0000000000000000e0,1.0000000000000000e0\n"));
    }
}
