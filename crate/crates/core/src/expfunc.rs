//! Pointwise evaluation of classical and exponential-divisor functions,
//! e-divisor enumeration and the exponential convolution.
//!
//! Everything here is exact. Values of integer-valued functions are `i64`;
//! the convolution algebra works over [`Exact`] rationals.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize_trial, FactoredInteger};
use crate::error::{Error, Result};

/// Exact rational value.
pub type Exact = BigRational;

pub(crate) fn exact(v: i64) -> Exact {
    BigRational::from_integer(BigInt::from(v))
}

// ---------------------------------------------------------------------------
// exponent-level helpers

/// Möbius function of a small positive integer.
pub fn mobius(n: u64) -> i64 {
    let f = factorize_trial(n.max(1)).expect("n >= 1");
    if f.exponents().any(|a| a > 1) {
        0
    } else if f.omega().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> u32 {
    factorize_trial(n.max(1)).expect("n >= 1").omega() as u32
}

/// Number of prime factors counted with multiplicity.
pub fn big_omega(n: u64) -> u32 {
    factorize_trial(n.max(1)).expect("n >= 1").exponents().sum()
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    factorize_trial(n.max(1))
        .expect("n >= 1")
        .exponents()
        .map(|a| a as u64 + 1)
        .product()
}

/// Squarefree kernel (product of the distinct primes dividing `n`).
pub fn kernel(n: u64) -> u64 {
    factorize_trial(n.max(1))
        .expect("n >= 1")
        .factors()
        .iter()
        .map(|&(p, _)| p)
        .product()
}

pub fn is_squarefree(n: u64) -> bool {
    mobius(n) != 0
}

fn divisors_of_small(a: u32) -> impl Iterator<Item = u32> {
    (1..=a).filter(move |b| a.is_multiple_of(*b))
}

fn checked_pow_i64(p: u64, e: u32) -> Result<i64> {
    let p = i64::try_from(p).map_err(|_| Error::Overflow("prime power"))?;
    p.checked_pow(e).ok_or(Error::Overflow("prime power"))
}

// ---------------------------------------------------------------------------
// classical functions

/// Classical arithmetic functions used alongside the exponential ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalFunctionId {
    Mu,
    MuSquared,
    Lambda,
    Tau,
    Omega,
    BigOmega,
    Kappa,
    /// Indicator of the k-free integers, `k >= 2`.
    QK(u32),
    /// `mu(m)` when `n = m^2`, zero otherwise.
    Mu2,
    /// Indicator of the perfect squares.
    E2,
    /// Indicator of the squarefull integers.
    EllSquarefull,
}

impl ClassicalFunctionId {
    pub fn is_additive(self) -> bool {
        matches!(
            self,
            ClassicalFunctionId::Omega | ClassicalFunctionId::BigOmega
        )
    }

    /// Value at `p^a` (`a >= 1`). For the additive `omega` and `big_omega`
    /// this is the additive contribution of the prime power.
    pub fn prime_power(self, p: u64, a: u32) -> Result<i64> {
        use ClassicalFunctionId::*;
        Ok(match self {
            Mu => match a {
                1 => -1,
                _ => 0,
            },
            MuSquared => (a == 1) as i64,
            Lambda => {
                if a.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
            Tau => a as i64 + 1,
            Omega => 1,
            BigOmega => a as i64,
            Kappa => i64::try_from(p).map_err(|_| Error::Overflow("kappa"))?,
            QK(k) => (a < k) as i64,
            Mu2 => match a {
                2 => -1,
                _ => 0,
            },
            E2 => a.is_multiple_of(2) as i64,
            EllSquarefull => (a >= 2) as i64,
        })
    }

    pub fn validate(self) -> Result<()> {
        match self {
            ClassicalFunctionId::QK(k) if k < 2 => {
                Err(Error::InvalidArgument(format!("q_k needs k >= 2, got {k}")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(self) -> String {
        use ClassicalFunctionId::*;
        match self {
            Mu => "mu".into(),
            MuSquared => "mu_squared".into(),
            Lambda => "lambda".into(),
            Tau => "tau".into(),
            Omega => "omega".into(),
            BigOmega => "big_omega".into(),
            Kappa => "kappa".into(),
            QK(k) => format!("q_{k}"),
            Mu2 => "mu_2".into(),
            E2 => "E_2".into(),
            EllSquarefull => "ell".into(),
        }
    }
}

impl FromStr for ClassicalFunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use ClassicalFunctionId::*;
        let id = match s.to_ascii_lowercase().as_str() {
            "mu" => Mu,
            "mu_squared" | "mu2sq" | "mu^2" => MuSquared,
            "lambda" | "liouville" => Lambda,
            "tau" => Tau,
            "omega" => Omega,
            "big_omega" => BigOmega,
            "kappa" => Kappa,
            "mu_2" => Mu2,
            "e_2" => E2,
            "ell" | "ell_squarefull" => EllSquarefull,
            other => {
                let k = other
                    .strip_prefix("q_k:")
                    .or_else(|| other.strip_prefix("q_"))
                    .or_else(|| other.strip_prefix('q'))
                    .and_then(|k| k.parse::<u32>().ok())
                    .ok_or_else(|| Error::UnknownFunction(s.to_string()))?;
                QK(k)
            }
        };
        id.validate()?;
        Ok(id)
    }
}

impl fmt::Display for ClassicalFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn classical_eval_factored(id: ClassicalFunctionId, n: &FactoredInteger) -> Result<i64> {
    id.validate()?;
    if id.is_additive() {
        n.factors()
            .iter()
            .try_fold(0i64, |acc, &(p, a)| Ok(acc + id.prime_power(p, a)?))
    } else {
        n.factors().iter().try_fold(1i64, |acc, &(p, a)| {
            acc.checked_mul(id.prime_power(p, a)?)
                .ok_or(Error::Overflow("classical_eval"))
        })
    }
}

/// Exact value of a classical function at `n >= 1`.
pub fn classical_eval(id: ClassicalFunctionId, n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    classical_eval_factored(id, &factorize_trial(n)?)
}

// ---------------------------------------------------------------------------
// exponential-divisor functions

/// The exponential-divisor functions, each defined by its value on prime
/// powers `p^a` through an arithmetic function of the exponent `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpFunctionId {
    /// `mu(a)`
    MuE,
    /// `mu(a)^2`
    AbsMuE,
    /// `2^omega(a)`, the number of e-squarefree e-divisors
    TE,
    /// `p^kappa(a)`, the largest e-squarefree e-divisor
    KappaE,
    /// `(-1)^omega(a)`
    MuStarE,
    /// `(-1)^Omega(a)`
    FLambda,
}

impl ExpFunctionId {
    pub const ALL: [ExpFunctionId; 6] = [
        ExpFunctionId::MuE,
        ExpFunctionId::AbsMuE,
        ExpFunctionId::TE,
        ExpFunctionId::KappaE,
        ExpFunctionId::MuStarE,
        ExpFunctionId::FLambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExpFunctionId::MuE => "mu_e",
            ExpFunctionId::AbsMuE => "abs_mu_e",
            ExpFunctionId::TE => "t_e",
            ExpFunctionId::KappaE => "kappa_e",
            ExpFunctionId::MuStarE => "mu_star_e",
            ExpFunctionId::FLambda => "F_lambda",
        }
    }

    /// Only `kappa_e` depends on the prime.
    pub fn is_p_independent(self) -> bool {
        self != ExpFunctionId::KappaE
    }

    pub fn prime_power(self, p: u64, a: u32) -> Result<i64> {
        let a64 = a as u64;
        Ok(match self {
            ExpFunctionId::MuE => mobius(a64),
            ExpFunctionId::AbsMuE => mobius(a64).abs(),
            ExpFunctionId::TE => 1i64 << omega(a64),
            ExpFunctionId::KappaE => checked_pow_i64(p, kernel(a64) as u32)?,
            ExpFunctionId::MuStarE => {
                if omega(a64).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
            ExpFunctionId::FLambda => {
                if big_omega(a64).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        })
    }
}

impl FromStr for ExpFunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "mu_e" => ExpFunctionId::MuE,
            "abs_mu_e" => ExpFunctionId::AbsMuE,
            "t_e" => ExpFunctionId::TE,
            "kappa_e" => ExpFunctionId::KappaE,
            "mu_star_e" => ExpFunctionId::MuStarE,
            "f_lambda" | "f" => ExpFunctionId::FLambda,
            _ => return Err(Error::UnknownFunction(s.to_string())),
        })
    }
}

impl fmt::Display for ExpFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Value of an exponential-divisor function: the product of its
/// prime-power rule over the factorization, 1 for `n = 1`.
pub fn exp_eval(id: ExpFunctionId, n: &FactoredInteger) -> Result<i64> {
    n.factors().iter().try_fold(1i64, |acc, &(p, a)| {
        acc.checked_mul(id.prime_power(p, a)?)
            .ok_or(Error::Overflow("exp_eval"))
    })
}

// ---------------------------------------------------------------------------
// e-divisors

fn e_divisors_with(n: &FactoredInteger, keep: impl Fn(u32) -> bool) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, a) in n.factors() {
        let choices: Vec<u64> = divisors_of_small(a)
            .filter(|&b| keep(b))
            .map(|b| p.pow(b))
            .collect();
        out = out
            .iter()
            .flat_map(|&d| choices.iter().map(move |&c| d * c))
            .collect();
    }
    out.sort_unstable();
    out
}

/// All exponential divisors of `n`, ascending. `[1]` for `n = 1`; for
/// `n > 1` every e-divisor has the same prime support as `n`.
pub fn e_divisors(n: &FactoredInteger) -> Vec<u64> {
    e_divisors_with(n, |_| true)
}

/// e-divisors whose exponents are all squarefree.
pub fn e_squarefree_e_divisors(n: &FactoredInteger) -> Vec<u64> {
    e_divisors_with(n, |b| is_squarefree(b as u64))
}

pub fn is_e_squarefree(n: &FactoredInteger) -> bool {
    n.exponents().all(|a| is_squarefree(a as u64))
}

// ---------------------------------------------------------------------------
// multiplicative function specs and the e-convolution

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codomain {
    Integer,
    Rational,
}

#[derive(Clone)]
enum Rule {
    One,
    Classical(ClassicalFunctionId),
    Exp(ExpFunctionId),
    KappaEOverN,
    /// p-independent values at `a = 1, 2, ...`; zero past the end.
    Generic(Vec<Exact>),
    Custom(Arc<dyn Fn(u64, u32) -> Exact + Send + Sync>),
}

/// A multiplicative function given by its values on prime powers.
#[derive(Clone)]
pub struct MultiplicativeFunctionSpec {
    name: String,
    rule: Rule,
    codomain: Codomain,
    p_independent: bool,
}

impl fmt::Debug for MultiplicativeFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeFunctionSpec")
            .field("name", &self.name)
            .field("codomain", &self.codomain)
            .finish()
    }
}

impl MultiplicativeFunctionSpec {
    /// The constant function 1.
    pub fn one() -> Self {
        Self {
            name: "one".into(),
            rule: Rule::One,
            codomain: Codomain::Integer,
            p_independent: true,
        }
    }

    pub fn exp(id: ExpFunctionId) -> Self {
        Self {
            name: id.name().into(),
            rule: Rule::Exp(id),
            codomain: Codomain::Integer,
            p_independent: id.is_p_independent(),
        }
    }

    pub fn classical(id: ClassicalFunctionId) -> Result<Self> {
        id.validate()?;
        if id.is_additive() {
            return Err(Error::InvalidArgument(format!(
                "{id} is additive, not multiplicative"
            )));
        }
        Ok(Self {
            name: id.name(),
            rule: Rule::Classical(id),
            codomain: Codomain::Integer,
            p_independent: id != ClassicalFunctionId::Kappa,
        })
    }

    /// `kappa_e(n) / n`, with value `p^(kappa(a) - a)` at `p^a`.
    pub fn kappa_e_over_n() -> Self {
        Self {
            name: "kappa_e_over_n".into(),
            rule: Rule::KappaEOverN,
            codomain: Codomain::Rational,
            p_independent: false,
        }
    }

    /// p-independent function with `f(p^a) = values[a - 1]`, zero beyond.
    pub fn from_values(name: impl Into<String>, values: Vec<Exact>) -> Self {
        let codomain = if values.iter().all(|v| v.is_integer()) {
            Codomain::Integer
        } else {
            Codomain::Rational
        };
        Self {
            name: name.into(),
            rule: Rule::Generic(values),
            codomain,
            p_independent: true,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        codomain: Codomain,
        rule: impl Fn(u64, u32) -> Exact + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            rule: Rule::Custom(Arc::new(rule)),
            codomain,
            p_independent: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn is_p_independent(&self) -> bool {
        self.p_independent
    }

    /// `f(p^a)`; `a = 0` gives 1.
    pub fn at_prime_power(&self, p: u64, a: u32) -> Exact {
        if a == 0 {
            return Exact::one();
        }
        match &self.rule {
            Rule::One => Exact::one(),
            Rule::Classical(id) => exact(id.prime_power(p, a).expect("validated")),
            Rule::Exp(ExpFunctionId::KappaE) => {
                Exact::from_integer(BigInt::from(p).pow(kernel(a as u64) as u32))
            }
            Rule::Exp(id) => exact(id.prime_power(p, a).expect("p-independent rule")),
            Rule::KappaEOverN => {
                let deficit = a - kernel(a as u64) as u32;
                Exact::new(BigInt::one(), BigInt::from(p).pow(deficit))
            }
            Rule::Generic(v) => v.get(a as usize - 1).cloned().unwrap_or_else(Exact::zero),
            Rule::Custom(f) => f(p, a),
        }
    }

    pub fn eval(&self, n: &FactoredInteger) -> Exact {
        n.factors()
            .iter()
            .map(|&(p, a)| self.at_prime_power(p, a))
            .product()
    }
}

/// `(f ⊙ g)(n)`: at each `p^a`, the sum of `f(p^b) g(p^c)` over `bc = a`;
/// multiplied across the factorization, with `(f ⊙ g)(1) = 1`.
pub fn e_convolve(
    f: &MultiplicativeFunctionSpec,
    g: &MultiplicativeFunctionSpec,
    n: &FactoredInteger,
) -> Exact {
    n.factors()
        .iter()
        .map(|&(p, a)| {
            divisors_of_small(a)
                .map(|b| f.at_prime_power(p, b) * g.at_prime_power(p, a / b))
                .sum::<Exact>()
        })
        .product()
}

/// Values of the ⊙-inverse of `f` at `p^1 ..= p^a_max`.
///
/// The identity of ⊙ is `mu^2`, which is 1 at `p^1` and 0 at higher powers,
/// so `g(p) = 1/f(p)` and for `a >= 2` the divisor sum over `bc = a` must
/// vanish.
pub fn e_inverse_local(f: &MultiplicativeFunctionSpec, p: u64, a_max: u32) -> Result<Vec<Exact>> {
    let fp = f.at_prime_power(p, 1);
    if fp.is_zero() {
        return Err(Error::NotInvertible(format!(
            "{}(p) = 0 at p = {p}",
            f.name()
        )));
    }
    let mut g: Vec<Exact> = Vec::with_capacity(a_max as usize);
    for a in 1..=a_max {
        let value = if a == 1 {
            fp.recip()
        } else {
            // sum over b | a, b > 1, of f(p^b) g(p^(a/b)); c = a/b < a
            let rest: Exact = divisors_of_small(a)
                .filter(|&b| b > 1)
                .map(|b| f.at_prime_power(p, b) * &g[(a / b) as usize - 1])
                .sum();
            -rest / &fp
        };
        g.push(value);
    }
    Ok(g)
}

/// Converts an exact value to `i64` when it is an integer in range.
pub fn exact_to_i64(v: &Exact) -> Option<i64> {
    if v.is_integer() {
        v.to_integer().to_i64()
    } else {
        None
    }
}

pub fn exact_to_f64(v: &Exact) -> f64 {
    let n = v.numer().to_f64().unwrap_or(f64::NAN);
    let d = v.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // very large numerator and denominator
        let shift = v.denom().bits().max(v.numer().bits()) as i64 - 1000;
        let scale = BigInt::one() << shift.max(0) as usize;
        let n = (v.numer() / &scale).to_f64().unwrap_or(0.0);
        let d = (v.denom() / &scale).to_f64().unwrap_or(1.0);
        if d == 0.0 {
            if v.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            n / d
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SpfTable;

    fn fi(n: u64) -> FactoredInteger {
        factorize_trial(n).unwrap()
    }

    #[test]
    fn classical_examples() {
        use ClassicalFunctionId::*;
        assert_eq!(classical_eval(Mu, 4).unwrap(), 0);
        assert_eq!(classical_eval(Mu, 30).unwrap(), -1);
        assert_eq!(classical_eval(Kappa, 12).unwrap(), 6);
        assert_eq!(classical_eval(Mu2, 4).unwrap(), -1);
        assert_eq!(classical_eval(Mu2, 8).unwrap(), 0);
        assert_eq!(classical_eval(Mu2, 36).unwrap(), 1);
        assert_eq!(classical_eval(QK(4), 16).unwrap(), 0);
        assert_eq!(classical_eval(QK(4), 24).unwrap(), 1);
        assert_eq!(classical_eval(Omega, 360).unwrap(), 3);
        assert_eq!(classical_eval(BigOmega, 360).unwrap(), 6);
        assert_eq!(classical_eval(Tau, 360).unwrap(), 24);
        assert_eq!(classical_eval(Lambda, 12).unwrap(), -1);
        assert_eq!(classical_eval(E2, 36).unwrap(), 1);
        assert_eq!(classical_eval(E2, 12).unwrap(), 0);
        assert_eq!(classical_eval(EllSquarefull, 72).unwrap(), 1);
        assert_eq!(classical_eval(EllSquarefull, 12).unwrap(), 0);
        assert_eq!(classical_eval(Mu, 1).unwrap(), 1);
        assert_eq!(classical_eval(Omega, 1).unwrap(), 0);
        assert!(classical_eval(QK(1), 5).is_err());
        assert!(classical_eval(Mu, 0).is_err());
    }

    #[test]
    fn mu_2_is_mu_of_root_on_squares() {
        for n in 1..3000u64 {
            let r = crate::arith::isqrt(n);
            let expected = if r * r == n { mobius(r) } else { 0 };
            assert_eq!(
                classical_eval(ClassicalFunctionId::Mu2, n).unwrap(),
                expected,
                "n = {n}"
            );
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!(
            "q_k:4".parse::<ClassicalFunctionId>().unwrap(),
            ClassicalFunctionId::QK(4)
        );
        assert_eq!(
            "q3".parse::<ClassicalFunctionId>().unwrap(),
            ClassicalFunctionId::QK(3)
        );
        assert_eq!(
            "E_2".parse::<ClassicalFunctionId>().unwrap(),
            ClassicalFunctionId::E2
        );
        assert!("nope".parse::<ClassicalFunctionId>().is_err());
        assert_eq!(
            "F_lambda".parse::<ExpFunctionId>().unwrap(),
            ExpFunctionId::FLambda
        );
        for id in ExpFunctionId::ALL {
            assert_eq!(id.name().parse::<ExpFunctionId>().unwrap(), id);
        }
    }

    #[test]
    fn exp_examples() {
        use ExpFunctionId::*;
        assert_eq!(exp_eval(MuE, &fi(16)).unwrap(), 0);
        assert_eq!(exp_eval(TE, &fi(64)).unwrap(), 4);
        assert_eq!(exp_eval(KappaE, &fi(16)).unwrap(), 4);
        assert_eq!(exp_eval(MuE, &fi(72)).unwrap(), 1);
        assert_eq!(exp_eval(TE, &fi(1)).unwrap(), 1);
        // prime-power rows
        let row = |id: ExpFunctionId| -> Vec<i64> {
            (1..=6)
                .map(|a| exp_eval(id, &fi(1 << a)).unwrap())
                .collect()
        };
        assert_eq!(row(MuE), vec![1, -1, -1, 0, -1, 1]);
        assert_eq!(row(TE), vec![1, 2, 2, 2, 2, 4]);
        assert_eq!(row(KappaE), vec![2, 4, 8, 4, 32, 64]);
        assert_eq!(row(MuStarE), vec![1, -1, -1, -1, -1, 1]);
        assert_eq!(row(FLambda), vec![1, -1, -1, 1, -1, 1]);
        assert_eq!(row(AbsMuE), vec![1, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn e_divisor_examples() {
        assert_eq!(e_divisors(&fi(12)), vec![6, 12]);
        assert_eq!(e_divisors(&fi(1)), vec![1]);
        assert_eq!(e_divisors(&fi(13)), vec![13]);
        assert_eq!(e_divisors(&fi(64)), vec![2, 4, 8, 64]);
        assert_eq!(e_squarefree_e_divisors(&fi(16)), vec![2, 4]);
        assert_eq!(e_squarefree_e_divisors(&fi(64)), vec![2, 4, 8, 64]);
        assert_eq!(e_squarefree_e_divisors(&fi(1)), vec![1]);
        assert_eq!(e_squarefree_e_divisors(&fi(256)), vec![2, 4]);
    }

    #[test]
    fn e_squarefree_examples() {
        assert!(!is_e_squarefree(&fi(16)));
        assert!(is_e_squarefree(&fi(108)));
        assert!(is_e_squarefree(&fi(1)));
    }

    #[test]
    fn abs_mu_e_indicates_e_squarefree() {
        let t = SpfTable::build(100_000).unwrap();
        for n in 1..=100_000 {
            let f = t.factorize(n).unwrap();
            let v = exp_eval(ExpFunctionId::MuE, &f).unwrap().abs();
            assert_eq!(v == 1, is_e_squarefree(&f));
            assert!(v <= 1);
        }
    }

    #[test]
    fn e_squarefree_divisors_count_and_max() {
        let t = SpfTable::build(100_000).unwrap();
        for n in 1..=100_000 {
            let f = t.factorize(n).unwrap();
            let ds = e_squarefree_e_divisors(&f);
            assert_eq!(ds.len() as i64, exp_eval(ExpFunctionId::TE, &f).unwrap());
            let k = exp_eval(ExpFunctionId::KappaE, &f).unwrap() as u64;
            assert_eq!(*ds.last().unwrap(), k);
            assert_eq!(n % k, 0);
            assert!(is_e_squarefree(&t.factorize(k).unwrap()));
        }
    }

    #[test]
    fn e_convolve_examples() {
        let one = MultiplicativeFunctionSpec::one();
        let mu_e = MultiplicativeFunctionSpec::exp(ExpFunctionId::MuE);
        let t_e = MultiplicativeFunctionSpec::exp(ExpFunctionId::TE);
        let mu_sq = MultiplicativeFunctionSpec::classical(ClassicalFunctionId::MuSquared).unwrap();
        assert_eq!(e_convolve(&one, &one, &fi(64)), exact(4));
        assert_eq!(e_convolve(&one, &mu_e, &fi(4)), exact(0));
        assert_eq!(e_convolve(&mu_sq, &t_e, &fi(72)), exact(4));
        assert_eq!(e_convolve(&one, &mu_e, &fi(1)), exact(1));
    }

    #[test]
    fn e_convolve_matches_divisor_enumeration() {
        // sum over e-divisors of mu_e equals mu^2
        let mu_e = MultiplicativeFunctionSpec::exp(ExpFunctionId::MuE);
        let one = MultiplicativeFunctionSpec::one();
        for n in 1..5000u64 {
            let f = fi(n);
            let by_enum: i64 = e_divisors(&f)
                .into_iter()
                .map(|d| exp_eval(ExpFunctionId::MuE, &fi(d)).unwrap())
                .sum();
            assert_eq!(exact(by_enum), e_convolve(&one, &mu_e, &f));
            assert_eq!(
                by_enum,
                classical_eval(ClassicalFunctionId::MuSquared, n).unwrap()
            );
        }
    }

    #[test]
    fn e_inverse_examples() {
        let one = MultiplicativeFunctionSpec::one();
        for p in [2, 3, 5] {
            let g = e_inverse_local(&one, p, 64).unwrap();
            for (i, v) in g.iter().enumerate() {
                assert_eq!(*v, exact(mobius(i as u64 + 1)), "a = {}", i + 1);
            }
        }
        let t_e = MultiplicativeFunctionSpec::exp(ExpFunctionId::TE);
        let g = e_inverse_local(&t_e, 2, 4).unwrap();
        assert_eq!(g[0], exact(1));
        assert_eq!(g[1], exact(-2));
        let mu_sq = MultiplicativeFunctionSpec::classical(ClassicalFunctionId::MuSquared).unwrap();
        let g = e_inverse_local(&mu_sq, 7, 10).unwrap();
        assert_eq!(g[0], exact(1));
        assert!(g[1..].iter().all(|v| v.is_zero()));
        let mu2 = MultiplicativeFunctionSpec::classical(ClassicalFunctionId::Mu2).unwrap();
        assert!(matches!(
            e_inverse_local(&mu2, 2, 3),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn e_inverse_is_inverse() {
        let f = MultiplicativeFunctionSpec::exp(ExpFunctionId::KappaE);
        let g = e_inverse_local(&f, 3, 24).unwrap();
        for a in 1..=24u32 {
            let s: Exact = divisors_of_small(a)
                .map(|b| f.at_prime_power(3, b) * &g[(a / b) as usize - 1])
                .sum();
            assert_eq!(s, exact((a == 1) as i64));
        }
    }

    #[test]
    fn kappa_e_over_n_values() {
        let f = MultiplicativeFunctionSpec::kappa_e_over_n();
        assert_eq!(f.at_prime_power(5, 4), Exact::new(1.into(), 25.into()));
        assert_eq!(f.at_prime_power(5, 3), exact(1));
        assert_eq!(f.codomain(), Codomain::Rational);
    }

    #[test]
    fn exact_float_conversion() {
        assert_eq!(exact_to_f64(&Exact::new(1.into(), 4.into())), 0.25);
        let huge = Exact::new(
            BigInt::from(3) * (BigInt::one() << 2000usize),
            BigInt::one() << 2000usize,
        );
        assert!((exact_to_f64(&huge) - 3.0).abs() < 1e-12);
    }
}
