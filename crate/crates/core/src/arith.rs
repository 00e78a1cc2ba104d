//! Prime generation, smallest-prime-factor tables and exact factorization.

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`SpfTable::build`] unless a different
/// budget is passed explicitly. One `u32` per entry, so this is ~1.2 GB.
pub const DEFAULT_SPF_CAPACITY: u64 = 300_000_000;

/// All primes `p <= limit`, ascending.
///
/// Plain odd-only sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // index i stands for 2i + 1
    let half = (limit - 1) / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_prime_count(limit as u64));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    primes
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize + 8
}

/// Smallest-prime-factor table for `2..=limit`, built by the linear sieve.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_capacity(limit, DEFAULT_SPF_CAPACITY)
    }

    /// Linear sieve: every composite is written exactly once, by its
    /// smallest prime factor.
    pub fn build_with_capacity(limit: u64, capacity: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "SPF table limit must be at least 2, got {limit}"
            )));
        }
        if limit > capacity || limit > u32::MAX as u64 {
            return Err(Error::Capacity {
                requested: limit,
                capacity: capacity.min(u32::MAX as u64),
            });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::with_capacity(estimate_prime_count(limit));
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(SpfTable { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf(n) == n
    }

    /// Splits `n` into its smallest prime `p`, the exponent `a` of `p` in
    /// `n`, and the cofactor `n / p^a`.
    #[inline]
    pub fn split_smallest(&self, n: u64) -> (u64, u32, u64) {
        let p = self.spf(n);
        let mut m = n / p;
        let mut a = 1;
        while m.is_multiple_of(p) {
            m /= p;
            a += 1;
        }
        (p, a, m)
    }

    pub fn factorize(&self, n: u64) -> Result<FactoredInteger> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factorize 0".into()));
        }
        if n > self.limit {
            return Err(Error::OutOfTable {
                n,
                limit: self.limit,
            });
        }
        let mut factors = Vec::new();
        let mut m = n;
        while m > 1 {
            let (p, a, rest) = self.split_smallest(m);
            factors.push((p, a));
            m = rest;
        }
        Ok(FactoredInteger { value: n, factors })
    }
}

/// A positive integer together with its canonical factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            value: 1,
            factors: Vec::new(),
        }
    }

    /// Builds from `(prime, exponent)` pairs. Primes must be strictly
    /// increasing and exponents positive; primality is not re-checked.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        let mut last = 1;
        for &(p, a) in &factors {
            if p <= last || a == 0 {
                return Err(Error::InvalidArgument(format!(
                    "factor list must have increasing primes and positive exponents: {factors:?}"
                )));
            }
            last = p;
            let pa = p.checked_pow(a).ok_or(Error::Overflow("FactoredInteger"))?;
            value = value
                .checked_mul(pa)
                .ok_or(Error::Overflow("FactoredInteger"))?;
        }
        Ok(FactoredInteger { value, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, a)| a)
    }
}

impl std::fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, a)| {
                if a == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{a}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Canonical factorization of `n`. Uses the table when one is given and
/// `n` is in range, trial division otherwise.
pub fn factorize(n: u64, table: Option<&SpfTable>) -> Result<FactoredInteger> {
    match table {
        Some(t) => t.factorize(n),
        None => factorize_trial(n),
    }
}

/// Trial division by 2 and odd candidates up to `sqrt(n)`.
pub fn factorize_trial(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factorize 0".into()));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |m: &mut u64, p: u64| {
        let mut a = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            a += 1;
        }
        if a > 0 {
            factors.push((p, a));
        }
    };
    push(&mut m, 2);
    let mut d: u64 = 3;
    while d <= m / d {
        push(&mut m, d);
        d += 2;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(FactoredInteger { value: n, factors })
}

/// Integer square root, `floor(sqrt(n))`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}
