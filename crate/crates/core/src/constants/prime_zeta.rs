//! The prime zeta function `P(s) = sum_p p^{-s}` for real `s > 1`.

use std::sync::OnceLock;

use super::zeta::{zeta_minus_one, Bounded};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::expfunc::mobius;
use crate::format::neumaier_sum;

/// `pi(x) < 1.25506 x / log x` for `x > 1`.
const PRIME_COUNT_CONSTANT: f64 = 1.25506;

/// Beyond this exponent tails are summed directly over primes.
const DIRECT_TAIL_MIN_S: f64 = 8.0;

const DIRECT_TAIL_PRIMES: u64 = 100_000;

fn cached_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(DIRECT_TAIL_PRIMES))
}

/// Upper bound for `sum_{p > x} p^{-s}`, `s > 1`, from the prime-counting
/// bound and partial summation.
pub fn prime_tail_bound(s: f64, x: f64) -> f64 {
    PRIME_COUNT_CONSTANT * s * x.powf(1.0 - s) / ((s - 1.0) * x.ln())
}

/// `P(s) = sum_{m >= 1} mu(m)/m log zeta(ms)`, truncated once the remaining
/// terms are below `target / 2`.
pub fn prime_zeta(s: f64, target: f64) -> Result<Bounded> {
    if !(s > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "prime_zeta needs s > 1, got {s}"
        )));
    }
    let target = target.max(1e-300);
    let mut terms = Vec::new();
    let mut error = 0.0;
    let mut m: u64 = 1;
    loop {
        let ms = m as f64 * s;
        // bound on sum_{m' > m} |log zeta(m' s)| / m', using log zeta(t) <= 2^{1-t}
        let rest = 2f64.powf(1.0 - (m as f64 + 1.0) * s) / (1.0 - 2f64.powf(-s));
        let mu = mobius(m);
        if mu != 0 {
            let z = zeta_minus_one(ms, (target * 1e-3).max(1e-300))?;
            let lz = z.value.ln_1p();
            terms.push(mu as f64 * lz / m as f64);
            error += z.error / (1.0 + z.value) / m as f64;
        }
        if rest < target / 2.0 || m > 10_000 {
            error += rest;
            break;
        }
        m += 1;
    }
    let value = neumaier_sum(terms.iter().copied());
    Ok(Bounded {
        value,
        error: error + 4.0 * f64::EPSILON * value.abs(),
    })
}

/// `sum_{p > q} p^{-s}`.
///
/// Small `s`: `P(s)` minus the primes up to `q`. Large `s`: direct sum over
/// primes up to a fixed bound with the prime-counting tail bound as error.
pub fn prime_zeta_tail(s: f64, q: u64, target: f64) -> Result<Bounded> {
    if q as f64 >= DIRECT_TAIL_PRIMES as f64 / 10.0 {
        return Err(Error::InvalidArgument(format!(
            "explicit prime cutoff {q} too large"
        )));
    }
    let primes = cached_primes();
    let head_end = primes.partition_point(|&p| p <= q);
    if s <= DIRECT_TAIL_MIN_S {
        let full = prime_zeta(s, target)?;
        let head = neumaier_sum(primes[..head_end].iter().map(|&p| (p as f64).powf(-s)));
        let value = full.value - head;
        let error = full.error + 4.0 * f64::EPSILON * full.value.abs();
        Ok(Bounded { value, error })
    } else {
        let value = neumaier_sum(
            primes[head_end..]
                .iter()
                .rev()
                .map(|&p| (p as f64).powf(-s)),
        );
        let error = prime_tail_bound(s, DIRECT_TAIL_PRIMES as f64) + 4.0 * f64::EPSILON * value;
        Ok(Bounded { value, error })
    }
}
