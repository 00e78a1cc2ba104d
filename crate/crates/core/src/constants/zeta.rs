//! Riemann zeta at real arguments.

use std::sync::OnceLock;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::format::neumaier_sum;

/// A value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded {
    pub value: f64,
    pub error: f64,
}

const MAX_EM_TERMS: usize = 30;

/// `B_{2k} / (2k)!` for `k = 1..=MAX_EM_TERMS + 1`, from exact Bernoulli
/// numbers (Akiyama–Tanigawa).
fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n_max = 2 * (MAX_EM_TERMS + 1);
        let mut a: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        let mut bern = Vec::with_capacity(n_max + 1);
        for m in 0..=n_max {
            a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
            }
            // a[0] is B_m with B_1 = +1/2; only even indices are used
            bern.push(a[0].clone());
        }
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(MAX_EM_TERMS + 1);
        for n in 1..=n_max {
            fact *= BigInt::from(n);
            if n % 2 == 0 {
                let q = &bern[n] / BigRational::from_integer(fact.clone());
                out.push(ratio_to_f64(&q));
            }
        }
        out
    })
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    // scale to keep both parts in f64 range
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = 60;
    let num = if nb > shift {
        q.numer() >> (nb - shift) as usize
    } else {
        q.numer().clone()
    };
    let den = if db > shift {
        q.denom() >> (db - shift) as usize
    } else {
        q.denom().clone()
    };
    let exp = (nb - shift).max(0) - (db - shift).max(0);
    let v = num.to_f64().unwrap() / den.to_f64().unwrap();
    let v = v * 2f64.powi(exp as i32);
    if q.is_negative() && v > 0.0 {
        -v
    } else {
        v
    }
}

/// Euler–Maclaurin evaluation of `sum_{n >= start} n^{-s}` (analytically
/// continued for `0 < s < 1` when `start = 1`).
fn euler_maclaurin(s: f64, start: u64, target: f64) -> Result<Bounded> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("zeta needs s > 0, got {s}")));
    }
    if (s - 1.0).abs() < 1e-12 {
        return Err(Error::Pole);
    }
    let b = bernoulli_over_factorial();
    let mut cutoff: u64 = 10;
    loop {
        let n = cutoff.max(start + 1);
        let nf = n as f64;
        // T_k = B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
        let mut rising = s;
        let mut power = nf.powf(-s - 1.0);
        let mut terms = Vec::with_capacity(MAX_EM_TERMS);
        let mut bound = f64::INFINITY;
        for k in 1..=MAX_EM_TERMS + 1 {
            let t = b[k - 1] * rising * power;
            if k > 1 && t.abs() < target / 2.0 {
                bound = t.abs();
                break;
            }
            if k == MAX_EM_TERMS + 1 {
                break;
            }
            terms.push(t);
            rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
            power /= nf * nf;
        }
        if bound.is_finite() {
            let head = neumaier_sum((start..n).rev().map(|m| (m as f64).powf(-s)));
            let mut parts = vec![head, nf.powf(1.0 - s) / (s - 1.0), 0.5 * nf.powf(-s)];
            parts.extend(terms.iter().rev());
            let value = neumaier_sum(parts);
            let rounding = 4.0 * f64::EPSILON * (value.abs() + head.abs());
            return Ok(Bounded {
                value,
                error: bound + rounding,
            });
        }
        cutoff *= 2;
        if cutoff > 1 << 20 {
            return Err(Error::InvalidArgument(format!(
                "cannot reach target {target} for s = {s}"
            )));
        }
    }
}

/// `zeta(s)` for real `s > 0`, `s != 1`, with an error bound.
pub fn zeta_bounded(s: f64, target: f64) -> Result<Bounded> {
    euler_maclaurin(s, 1, target)
}

/// `zeta(s)` for real `s > 0`, `s != 1`, by Euler–Maclaurin summation.
pub fn zeta_real(s: f64, target: f64) -> Result<f64> {
    zeta_bounded(s, target).map(|b| b.value)
}

/// `zeta(s) - 1` for `s > 1`, accurate to relative precision even when
/// `s` is large.
pub fn zeta_minus_one(s: f64, target: f64) -> Result<Bounded> {
    if !(s > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "zeta_minus_one needs s > 1, got {s}"
        )));
    }
    euler_maclaurin(s, 2, target)
}

/// `zeta(s) = eta(s) / (1 - 2^{1-s})` with the alternating series summed
/// by Borwein's acceleration. Independent of [`zeta_real`].
pub fn zeta_eta(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "zeta_eta needs s > 0, got {s}"
        )));
    }
    if (s - 1.0).abs() < 1e-12 {
        return Err(Error::Pole);
    }
    const N: usize = 40;
    let nf = N as f64;
    // d_k = n sum_{i <= k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(N + 1);
    let mut term = 1.0f64;
    let mut acc = term;
    d.push(acc);
    for i in 1..=N {
        let fi = i as f64;
        term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d.push(acc);
    }
    let dn = d[N];
    let sum = neumaier_sum((0..N).map(|k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * (d[k] - dn) / ((k + 1) as f64).powf(s)
    }));
    let eta = -sum / dn;
    Ok(eta / (1.0 - 2f64.powf(1.0 - s)))
}
