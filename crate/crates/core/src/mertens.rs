//! Partial sums Σ_{p≤n} log(p/(p−1)) and the remainder
//! R(n) = sum − log log n − γ against the envelope 0.005586/(log n)².

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{euler_gamma, IntervalReal, TriState};
use crate::primes::{prime_sum, prime_sum_checkpoints, MertensTerm, SumOptions};

/// The envelope on |R(n)| is claimed only for `n` above this.
pub const LEMMA_THRESHOLD: u64 = 7_713_133_853;

/// Default upper limit for the sums.
pub const DEFAULT_MERTENS_CAP: u64 = 10_000_000_000;

/// Sums up to this `n` use interval arithmetic for every prime.
pub const EXACT_SUM_LIMIT: u64 = 100_000;

/// 0.005586 as a fraction.
pub fn envelope_constant(prec: u32) -> IntervalReal {
    IntervalReal::from_ratio(&BigInt::from(5586), &BigInt::from(1_000_000), prec)
}

/// `0.005586 / x²`.
pub fn envelope_over_square(x: &IntervalReal) -> Result<IntervalReal> {
    envelope_constant(x.precision()).div(&x.sqr())
}

#[derive(Clone, Copy, Debug)]
pub struct MertensOptions {
    pub sums: SumOptions,
    pub cap: u64,
}

impl Default for MertensOptions {
    fn default() -> Self {
        MertensOptions { sums: SumOptions::default(), cap: DEFAULT_MERTENS_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MertensRecord {
    pub n: u64,
    pub sum: IntervalReal,
    pub loglog: IntervalReal,
    pub remainder: IntervalReal,
    pub bound: IntervalReal,
    /// Certified |R(n)| < bound.
    pub within_bound: TriState,
    /// `n ≤ LEMMA_THRESHOLD`: the envelope is not claimed here.
    pub outside_lemma_range: bool,
    /// log log n ≤ 0 (only n = 2).
    pub loglog_nonpositive: bool,
}

fn check_n(n: u64, cap: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n}: the sum needs n >= 2")));
    }
    if n > cap {
        return Err(Error::CapExceeded { what: "n", value: n, cap });
    }
    Ok(())
}

/// Enclosure of Σ_{p≤n} log(p/(p−1)).
pub fn mertens_sum(n: u64) -> Result<IntervalReal> {
    mertens_sum_with(n, &MertensOptions::default())
}

pub fn mertens_sum_with(n: u64, opts: &MertensOptions) -> Result<IntervalReal> {
    check_n(n, opts.cap)?;
    let mut sums = opts.sums;
    if n <= EXACT_SUM_LIMIT {
        sums.exact_limit = sums.exact_limit.max(n);
    }
    prime_sum(2, n, &MertensTerm, &sums)
}

/// Assembles the record for `n` from an enclosure of the sum.
pub fn record_from_sum(n: u64, sum: IntervalReal) -> Result<MertensRecord> {
    let prec = sum.precision();
    let log_n = IntervalReal::from_int(n, prec).ln()?;
    let loglog = log_n.ln()?;
    let remainder = sum.sub(&loglog).sub(&euler_gamma(prec)?);
    let bound = envelope_over_square(&log_n)?;
    let within_bound = TriState::less_than(&remainder.abs(), &bound);
    Ok(MertensRecord {
        n,
        loglog_nonpositive: !loglog.lo().is_positive(),
        sum,
        loglog,
        remainder,
        bound,
        within_bound,
        outside_lemma_range: n <= LEMMA_THRESHOLD,
    })
}

/// R(n) and the envelope check at `n ≥ 2`.
pub fn remainder(n: u64) -> Result<MertensRecord> {
    remainder_with(n, &MertensOptions::default())
}

pub fn remainder_with(n: u64, opts: &MertensOptions) -> Result<MertensRecord> {
    record_from_sum(n, mertens_sum_with(n, opts)?)
}

/// One record per checkpoint from a single pass over the primes.
pub fn scan(checkpoints: &[u64]) -> Result<Vec<MertensRecord>> {
    scan_with(checkpoints, &MertensOptions::default())
}

pub fn scan_with(checkpoints: &[u64], opts: &MertensOptions) -> Result<Vec<MertensRecord>> {
    for &c in checkpoints {
        check_n(c, opts.cap)?;
    }
    let sums = prime_sum_checkpoints(checkpoints, &MertensTerm, &opts.sums)?;
    checkpoints.iter().zip(sums).map(|(&n, s)| record_from_sum(n, s)).collect()
}

/// `0.01 · (1/2 + 4/(3 log n))`, the constant that must stay below 0.005586
/// for the envelope to follow from the underlying explicit estimate.
pub fn envelope_factor(n: u64, prec: u32) -> Result<IntervalReal> {
    let log_n = IntervalReal::from_int(n, prec).ln()?;
    let half = IntervalReal::from_ratio(&BigInt::from(1), &BigInt::from(2), prec);
    let four_thirds = IntervalReal::from_ratio(&BigInt::from(4), &BigInt::from(3), prec);
    let inner = half.add(&four_thirds.div(&log_n)?);
    Ok(inner.div_int(100))
}

/// Certified `envelope_factor(n) < 0.005586`.
pub fn envelope_factor_holds(n: u64, prec: u32) -> Result<TriState> {
    Ok(TriState::less_than(&envelope_factor(n, prec)?, &envelope_constant(prec)))
}
