//! Dirichlet convolution of coefficient tables, Bell series, and the
//! correction series that turn the exponential-divisor functions into
//! products of zeta factors.

use std::fmt;
use std::io::Write;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::expfunc::{
    exact, exact_to_f64, exact_to_i64, omega, Exact, ExpFunctionId, MultiplicativeFunctionSpec,
};
use crate::summatory::{build_table_fresh, CoefficientTable, FnId};

/// Default truncation degree for Bell-series work.
pub const DEFAULT_DEGREE: usize = 64;

// ---------------------------------------------------------------------------
// table convolution

/// `(A * B)(n) = sum_{de = n} A(d) B(e)` for `n <= N`.
pub fn dirichlet_convolve(a: &CoefficientTable, b: &CoefficientTable) -> Result<CoefficientTable> {
    if a.limit() != b.limit() {
        return Err(Error::InvalidArgument(format!(
            "tables have different limits {} and {}",
            a.limit(),
            b.limit()
        )));
    }
    let n = a.limit() as usize;
    let mut acc = vec![0i128; n + 1];
    for d in 1..=n {
        let ad = a.get(d as u64) as i128;
        if ad == 0 {
            continue;
        }
        for e in 1..=n / d {
            acc[d * e] += ad * b.get(e as u64) as i128;
        }
    }
    let values = acc[1..]
        .iter()
        .map(|&v| i64::try_from(v).map_err(|_| Error::Overflow("dirichlet_convolve")))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientTable::from_values(
        format!("({})*({})", a.name(), b.name()),
        values,
    ))
}

/// Dirichlet inverse of an integer table with `A(1) = ±1`.
pub fn dirichlet_inverse(a: &CoefficientTable) -> Result<CoefficientTable> {
    let n = a.limit() as usize;
    if n == 0 {
        return Ok(a.clone());
    }
    let a1 = a.get(1);
    if a1.abs() != 1 {
        return Err(Error::NotInvertible(format!(
            "first coefficient {a1} has no integer inverse"
        )));
    }
    // pending[m] accumulates sum_{d | m, d > 1} A(d) inv(m / d)
    let mut pending = vec![0i128; n + 1];
    let mut inv = vec![0i64; n + 1];
    for m in 1..=n {
        let value = if m == 1 {
            a1 as i128
        } else {
            -(a1 as i128) * pending[m]
        };
        let value = i64::try_from(value).map_err(|_| Error::Overflow("dirichlet_inverse"))?;
        inv[m] = value;
        if value == 0 {
            continue;
        }
        for d in 2..=n / m {
            let ad = a.get(d as u64);
            if ad != 0 {
                pending[m * d] += ad as i128 * value as i128;
            }
        }
    }
    Ok(CoefficientTable::from_values(
        format!("inv({})", a.name()),
        inv[1..].to_vec(),
    ))
}

/// The table `e(n) = [n = 1]`.
pub fn unit_table(limit: u64) -> CoefficientTable {
    CoefficientTable::from_fn("epsilon", limit, |n| (n == 1) as i64)
}

// ---------------------------------------------------------------------------
// Bell series

/// Local power series `sum_a f(p^a) X^a` truncated at degree `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellSeries {
    /// `None` when the coefficients do not depend on the prime.
    pub prime: Option<u64>,
    pub coefficients: Vec<Exact>,
}

impl BellSeries {
    pub fn new(prime: Option<u64>, coefficients: Vec<Exact>) -> Self {
        BellSeries {
            prime,
            coefficients,
        }
    }

    /// Generic series from integer coefficients `c_0, c_1, ...`, padded with
    /// zeros to degree `degree`.
    pub fn from_ints(coefficients: &[i64], degree: usize) -> Self {
        let mut c: Vec<Exact> = coefficients.iter().map(|&v| exact(v)).collect();
        c.resize(degree + 1, Exact::zero());
        c.truncate(degree + 1);
        BellSeries {
            prime: None,
            coefficients: c,
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, a: usize) -> &Exact {
        &self.coefficients[a]
    }

    fn joint_prime(&self, other: &BellSeries) -> Result<Option<u64>> {
        match (self.prime, other.prime) {
            (Some(p), Some(q)) if p != q => Err(Error::InvalidArgument(format!(
                "Bell series at different primes {p} and {q}"
            ))),
            (p, q) => Ok(p.or(q)),
        }
    }

    /// Product truncated at the smaller degree.
    pub fn mul(&self, other: &BellSeries) -> Result<BellSeries> {
        let prime = self.joint_prime(other)?;
        let d = self.degree().min(other.degree());
        let mut c = vec![Exact::zero(); d + 1];
        for (i, x) in self.coefficients.iter().enumerate().take(d + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coefficients.iter().enumerate().take(d + 1 - i) {
                c[i + j] += x * y;
            }
        }
        Ok(BellSeries {
            prime,
            coefficients: c,
        })
    }

    /// Multiplicative inverse as a power series.
    pub fn inverse(&self) -> Result<BellSeries> {
        let c0 = &self.coefficients[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible(
                "Bell series with zero constant term".into(),
            ));
        }
        let d = self.degree();
        let mut inv: Vec<Exact> = Vec::with_capacity(d + 1);
        inv.push(c0.recip());
        for n in 1..=d {
            let s: Exact = (1..=n).map(|k| &self.coefficients[k] * &inv[n - k]).sum();
            inv.push(-s / c0);
        }
        Ok(BellSeries {
            prime: self.prime,
            coefficients: inv,
        })
    }

    /// Integer coefficients, if all are integers fitting `i64`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coefficients.iter().map(exact_to_i64).collect()
    }

    /// The multiplicative function with this generic Bell series, as a
    /// tabulable id. Fails for p-dependent or non-integer series.
    pub fn to_fn_id(&self, name: &str) -> Result<FnId> {
        if self.prime.is_some() {
            return Err(Error::InvalidArgument(
                "p-dependent Bell series cannot be tabulated".into(),
            ));
        }
        let ints = self
            .to_ints()
            .ok_or_else(|| Error::InvalidArgument("non-integer Bell coefficients".into()))?;
        if ints[0] != 1 {
            return Err(Error::InvalidArgument(
                "Bell series must start with 1".into(),
            ));
        }
        Ok(FnId::bell(name, ints[1..].to_vec()))
    }

    /// CSV `a,coefficient` with exact coefficients (`p/q` for fractions).
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "a,coefficient")?;
        for (a, c) in self.coefficients.iter().enumerate() {
            writeln!(w, "{a},{c}")?;
        }
        Ok(())
    }

    pub fn to_export(&self, id: &str) -> BellExport {
        BellExport {
            id: id.to_string(),
            prime: self.prime,
            degree: self.degree(),
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl fmt::Display for BellSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// JSON form of a Bell series; coefficients are exact decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellExport {
    pub id: String,
    pub prime: Option<u64>,
    pub degree: usize,
    pub coefficients: Vec<String>,
}

/// Coefficients `f(p^a)`, `a = 0..=D`. Generic when `f` does not depend on
/// the prime.
pub fn bell_series(f: &MultiplicativeFunctionSpec, p: u64, degree: usize) -> BellSeries {
    let coefficients = (0..=degree as u32)
        .map(|a| f.at_prime_power(p, a))
        .collect();
    let prime = if f.is_p_independent() { None } else { Some(p) };
    BellSeries {
        prime,
        coefficients,
    }
}

// ---------------------------------------------------------------------------
// correction series

/// Which correction series a [`DerivedCoefficients`] holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivedId {
    /// `mu_e = mu^2 * mu_2 * u`
    U,
    /// `t_e = v * tau(1,2,.)`
    V,
    /// `f = q_k * w`
    W { function: String, k: u32 },
    /// Euler factor `1 + 2X^3 - X^4 - 2X^5`
    H,
    /// `mu_2 * mu`
    FMu2Mu,
}

impl fmt::Display for DerivedId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivedId::U => f.write_str("u"),
            DerivedId::V => f.write_str("v"),
            DerivedId::W { function, k } => write!(f, "w({function},{k})"),
            DerivedId::H => f.write_str("h"),
            DerivedId::FMu2Mu => f.write_str("f_mu2_mu"),
        }
    }
}

/// Numerical evidence for the abscissa of absolute convergence of `W(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbscissaProbe {
    /// `1 / (k + 1)`
    pub predicted: f64,
    /// max over sampled `p`, `a` of `|w(p^a)| p^(-a/(k+1))`.
    pub max_scaled_term: f64,
    /// max over sampled `p`, `a` with `w(p^a) != 0` of
    /// `(log|w(p^a)| / log p + 1) / a`, the `sigma` at which that term
    /// decays like `1/p`.
    pub local_abscissa: f64,
    pub sample_primes: Vec<u64>,
}

/// A derived correction series, one Bell series per sampled prime (a single
/// generic one when p-independent).
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedCoefficients {
    pub id: DerivedId,
    pub bells: Vec<BellSeries>,
    pub probe: Option<AbscissaProbe>,
}

impl DerivedCoefficients {
    /// The generic Bell series. Panics for p-dependent derivations.
    pub fn generic(&self) -> &BellSeries {
        assert!(self.bells.len() == 1 && self.bells[0].prime.is_none());
        &self.bells[0]
    }

    /// Coefficient table on `1..=limit` of a generic integer derivation.
    pub fn table(&self, limit: u64) -> Result<CoefficientTable> {
        let id = self.generic().to_fn_id(&self.id.to_string())?;
        build_table_fresh(&id, limit)
    }

    pub fn to_json_exports(&self) -> Vec<BellExport> {
        self.bells
            .iter()
            .map(|b| b.to_export(&self.id.to_string()))
            .collect()
    }
}

fn liouville_bell(degree: usize) -> BellSeries {
    // 1 / (1 + X)
    BellSeries::from_ints(
        &(0..=degree)
            .map(|a| if a % 2 == 0 { 1 } else { -1 })
            .collect::<Vec<_>>(),
        degree,
    )
}

fn squares_bell(degree: usize) -> BellSeries {
    // 1 / (1 - X^2)
    BellSeries::from_ints(
        &(0..=degree)
            .map(|a| (a % 2 == 0) as i64)
            .collect::<Vec<_>>(),
        degree,
    )
}

/// `u = mu_e * lambda * E_2`; checks `u(p^a) = 0` for `a <= 4` and
/// `|u(p^b)| < b^2` for `5 <= b <= D`.
pub fn derive_u(degree: usize) -> Result<DerivedCoefficients> {
    if degree < 5 {
        return Err(Error::InvalidArgument(format!(
            "derive_u needs degree >= 5, got {degree}"
        )));
    }
    let mu_e = bell_series(
        &MultiplicativeFunctionSpec::exp(ExpFunctionId::MuE),
        2,
        degree,
    );
    let u = mu_e
        .mul(&liouville_bell(degree))?
        .mul(&squares_bell(degree))?;
    if !u.coefficients[0].is_one() {
        return Err(Error::Verification("u(1) != 1".into()));
    }
    for a in 1..=4 {
        if !u.coefficients[a].is_zero() {
            return Err(Error::Verification(format!(
                "u(p^{a}) = {} != 0",
                u.coefficients[a]
            )));
        }
    }
    for b in 5..=degree {
        let bound = exact((b * b) as i64);
        if u.coefficients[b].abs() >= bound {
            return Err(Error::Verification(format!(
                "|u(p^{b})| = {} is not below {b}^2",
                u.coefficients[b]
            )));
        }
    }
    Ok(DerivedCoefficients {
        id: DerivedId::U,
        bells: vec![u],
        probe: None,
    })
}

/// `mu_2 * mu`, whose Bell series is `(1 - X^2)(1 - X)`.
pub fn derive_f_mu2_mu(degree: usize) -> Result<DerivedCoefficients> {
    let mu2 = MultiplicativeFunctionSpec::classical(crate::expfunc::ClassicalFunctionId::Mu2)?;
    let mu = MultiplicativeFunctionSpec::classical(crate::expfunc::ClassicalFunctionId::Mu)?;
    let f = bell_series(&mu2, 2, degree).mul(&bell_series(&mu, 2, degree))?;
    let expected = BellSeries::from_ints(&[1, -1, -1, 1], degree);
    if f != expected {
        return Err(Error::Verification(format!(
            "mu_2 * mu has Bell series {f}"
        )));
    }
    Ok(DerivedCoefficients {
        id: DerivedId::FMu2Mu,
        bells: vec![f],
        probe: None,
    })
}

/// Closed form `2^w(a) - 2^w(a-1) - 2^w(a-2) + 2^w(a-3)` of `v(p^a)`, `a >= 4`.
pub fn v_closed_form(a: u64) -> i64 {
    let t = |b: u64| 1i64 << omega(b);
    t(a) - t(a - 1) - t(a - 2) + t(a - 3)
}

/// `v = t_e * (mu_2 * mu)`; checks `v(p^a) = 0` for `a = 1, 2, 3` and the
/// closed form for `4 <= a <= D`.
pub fn derive_v(degree: usize) -> Result<DerivedCoefficients> {
    if degree < 4 {
        return Err(Error::InvalidArgument(format!(
            "derive_v needs degree >= 4, got {degree}"
        )));
    }
    let f = derive_f_mu2_mu(degree)?;
    let t_e = bell_series(
        &MultiplicativeFunctionSpec::exp(ExpFunctionId::TE),
        2,
        degree,
    );
    let v = t_e.mul(f.generic())?;
    for a in 1..=3 {
        if !v.coefficients[a].is_zero() {
            return Err(Error::Verification(format!(
                "v(p^{a}) = {} != 0",
                v.coefficients[a]
            )));
        }
    }
    for a in 4..=degree {
        let expected = exact(v_closed_form(a as u64));
        if v.coefficients[a] != expected {
            return Err(Error::Verification(format!(
                "v(p^{a}) = {} but closed form gives {expected}",
                v.coefficients[a]
            )));
        }
    }
    Ok(DerivedCoefficients {
        id: DerivedId::V,
        bells: vec![v],
        probe: None,
    })
}

/// Primes sampled by [`derive_w`] for p-dependent functions.
pub const W_SAMPLE_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// `w = f * q_k^{-1}`, locally `Bell(f) (1 - X) / (1 - X^k)`. Requires
/// `f(p^a) = 1` for `1 <= a < k`.
pub fn derive_w(
    f: &MultiplicativeFunctionSpec,
    k: u32,
    degree: usize,
) -> Result<DerivedCoefficients> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "k must be at least 2, got {k}"
        )));
    }
    let primes: Vec<u64> = if f.is_p_independent() {
        vec![2]
    } else {
        W_SAMPLE_PRIMES.to_vec()
    };
    let mut q_inv = vec![0i64; degree + 1];
    // (1 - X) / (1 - X^k) = (1 - X)(1 + X^k + X^2k + ...)
    for j in (0..=degree).step_by(k as usize) {
        q_inv[j] += 1;
        if j < degree {
            q_inv[j + 1] -= 1;
        }
    }
    let q_inv = BellSeries::from_ints(&q_inv, degree);
    let mut bells = Vec::with_capacity(primes.len());
    let mut max_scaled = 0.0f64;
    let mut local = f64::NEG_INFINITY;
    let sigma = 1.0 / (k as f64 + 1.0);
    for &p in &primes {
        for a in 1..k {
            let v = f.at_prime_power(p, a);
            if !v.is_one() {
                return Err(Error::Hypothesis(format!(
                    "{}(p^{a}) = {v} at p = {p}, but must be 1 for a < k = {k}",
                    f.name()
                )));
            }
        }
        let fb = bell_series(f, p, degree);
        let w = fb.mul(&BellSeries {
            prime: fb.prime,
            ..q_inv.clone()
        })?;
        let lp = (p as f64).ln();
        for (a, c) in w.coefficients.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let mag = exact_to_f64(&c.abs());
            max_scaled = max_scaled.max(mag * (-(a as f64) * sigma * lp).exp());
            local = local.max((mag.ln() / lp + 1.0) / a as f64);
        }
        bells.push(w);
    }
    let probe = AbscissaProbe {
        predicted: sigma,
        max_scaled_term: max_scaled,
        local_abscissa: local,
        sample_primes: if f.is_p_independent() {
            Vec::new()
        } else {
            primes
        },
    };
    Ok(DerivedCoefficients {
        id: DerivedId::W {
            function: f.name().to_string(),
            k,
        },
        bells,
        probe: Some(probe),
    })
}

/// `h` with Euler factor `1 + 2X^3 - X^4 - 2X^5`.
pub fn derive_h(degree: usize) -> DerivedCoefficients {
    DerivedCoefficients {
        id: DerivedId::H,
        bells: vec![BellSeries::from_ints(&[1, 0, 0, 2, -1, -2], degree)],
        probe: None,
    }
}

/// `g = f * mu`, locally `Bell(f) (1 - X)`.
pub fn derive_g(f: &MultiplicativeFunctionSpec, p: u64, degree: usize) -> Result<BellSeries> {
    let fb = bell_series(f, p, degree);
    let mu = BellSeries {
        prime: fb.prime,
        ..BellSeries::from_ints(&[1, -1], degree)
    };
    fb.mul(&mu)
}

/// Checks `l(n) 2^omega(n) = sum_{d^2 e = n} tau(d) h(e)` for all `n <= N`,
/// returning the first failing `n`.
pub fn verify_squarefull_identity(limit: u64) -> std::result::Result<(), u64> {
    if limit == 0 {
        return Ok(());
    }
    // l(n) 2^omega(n) is multiplicative with value 2 at p^a, a >= 2
    let mut lhs_bell = vec![0i64; 64];
    lhs_bell[1..].iter_mut().for_each(|v| *v = 2);
    let lhs = build_table_fresh(&FnId::bell("ell_two_omega", lhs_bell), limit).map_err(|_| 1u64)?;
    let h_id = derive_h(DEFAULT_DEGREE)
        .generic()
        .to_fn_id("h")
        .map_err(|_| 1u64)?;
    let h = build_table_fresh(&h_id, limit).map_err(|_| 1u64)?;
    let root = isqrt(limit);
    let tau = build_table_fresh(
        &FnId::Classical(crate::expfunc::ClassicalFunctionId::Tau),
        root.max(1),
    )
    .map_err(|_| 1u64)?;
    let mut rhs = vec![0i64; limit as usize + 1];
    for d in 1..=root {
        let td = tau.get(d);
        let d2 = d * d;
        for e in 1..=limit / d2 {
            rhs[(d2 * e) as usize] += td * h.get(e);
        }
    }
    match (1..=limit).find(|&n| lhs.get(n) != rhs[n as usize]) {
        Some(n) => Err(n),
        None => Ok(()),
    }
}
