//! Rigorous sums of a per-prime term over prime ranges.
//!
//! Small primes are summed with interval arithmetic. Above
//! [`SumOptions::exact_limit`] each segment is summed in double-double
//! floating point and the accumulated error bound is folded into the result,
//! which is then checked against a high-precision recomputation of the first
//! prime of the segment.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{Dyadic, IntervalReal, DEFAULT_PRECISION};

use super::sieve::{map_segments, primes_between, SieveConfig};

/// Unit roundoff of `f64`.
const U: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Precision of the audit recomputation.
pub const AUDIT_PRECISION: u32 = 256;

/// Primes up to this bound are summed with intervals by default.
pub const DEFAULT_EXACT_LIMIT: u64 = 1 << 16;

/// A function of a prime that can be evaluated both rigorously and fast.
pub trait PrimeTerm: Sync {
    /// Enclosure of the term at `prec` bits.
    fn exact(&self, p: u64, prec: u32) -> Result<IntervalReal>;
    /// Floating-point value and a bound on its absolute error. Only called
    /// for `p < 2^53`.
    fn approx(&self, p: u64) -> (f64, f64);
}

/// `log p`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LogPrime;

impl PrimeTerm for LogPrime {
    fn exact(&self, p: u64, prec: u32) -> Result<IntervalReal> {
        IntervalReal::from_int(p, prec).ln()
    }

    fn approx(&self, p: u64) -> (f64, f64) {
        let t = (p as f64).ln();
        (t, 4.0 * U * t)
    }
}

/// `log(p / (p - 1)) = -log(1 - 1/p)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MertensTerm;

impl PrimeTerm for MertensTerm {
    fn exact(&self, p: u64, prec: u32) -> Result<IntervalReal> {
        let y = IntervalReal::from_ratio(&BigInt::from(1), &BigInt::from(p), prec);
        y.neg_ln_one_minus(None)
    }

    fn approx(&self, p: u64) -> (f64, f64) {
        let t = (1.0 / (p - 1) as f64).ln_1p();
        (t, 8.0 * U * t)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SumOptions {
    /// Working precision of the interval accumulation.
    pub precision: u32,
    /// Primes `≤ exact_limit` use the interval route.
    pub exact_limit: u64,
    /// Recompute one prime per float segment at [`AUDIT_PRECISION`].
    pub audit: bool,
    pub sieve: SieveConfig,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            precision: DEFAULT_PRECISION,
            exact_limit: DEFAULT_EXACT_LIMIT,
            audit: true,
            sieve: SieveConfig::default(),
        }
    }
}

/// Double-double accumulator with a running bound on everything it has
/// dropped.
#[derive(Clone, Copy, Debug, Default)]
pub struct FloatSum {
    hi: f64,
    lo: f64,
    err: f64,
}

impl FloatSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a term carrying absolute error `term_err`.
    #[inline]
    pub fn add(&mut self, x: f64, term_err: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let e = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += e;
        // Rounding of the low word is at most U * |lo|.
        self.err += term_err + U * self.lo.abs();
    }

    /// Enclosure of the true sum.
    pub fn to_interval(&self, prec: u32) -> IntervalReal {
        let value = Dyadic::from_f64(self.hi).add_exact(&Dyadic::from_f64(self.lo));
        // The error accumulator is itself rounded; the factor covers that for
        // any feasible number of terms.
        let radius = Dyadic::from_f64(self.err * 1.01 + f64::MIN_POSITIVE);
        IntervalReal::with_radius(&value, &radius, prec)
    }
}

fn audit<T: PrimeTerm>(term: &T, p: u64, approx: f64, bound: f64) -> Result<()> {
    let exact = term.exact(p, AUDIT_PRECISION)?;
    let got = IntervalReal::with_radius(&Dyadic::from_f64(approx), &Dyadic::from_f64(bound), AUDIT_PRECISION);
    if got.contains_interval(&exact) {
        Ok(())
    } else {
        Err(Error::AuditFailed { p })
    }
}

fn exact_sum<T: PrimeTerm>(lo: u64, hi: u64, term: &T, opts: &SumOptions) -> Result<IntervalReal> {
    let primes = primes_between(lo, hi, &opts.sieve);
    let parts: Vec<Result<IntervalReal>> =
        opts.sieve.install(|| primes.par_iter().map(|&p| term.exact(p, opts.precision)).collect());
    let mut acc = IntervalReal::zero(opts.precision);
    for part in parts {
        acc = acc.add(&part?);
    }
    Ok(acc)
}

fn float_sum<T: PrimeTerm>(lo: u64, hi: u64, term: &T, opts: &SumOptions) -> Result<IntervalReal> {
    if hi >= 1 << 53 {
        return Err(Error::CapExceeded { what: "float prime sum bound", value: hi, cap: (1 << 53) - 1 });
    }
    let parts = map_segments(lo, hi, &opts.sieve, |seg| -> Result<IntervalReal> {
        let mut acc = FloatSum::new();
        let mut first = true;
        for p in seg.iter() {
            let (t, e) = term.approx(p);
            if first && opts.audit {
                audit(term, p, t, e)?;
                first = false;
            }
            acc.add(t, e);
        }
        Ok(acc.to_interval(opts.precision))
    });
    let mut acc = IntervalReal::zero(opts.precision);
    for part in parts {
        acc = acc.add(&part?);
    }
    Ok(acc)
}

/// Enclosure of `Σ term(p)` over primes `p ∈ [lo, hi]`.
pub fn prime_sum<T: PrimeTerm>(lo: u64, hi: u64, term: &T, opts: &SumOptions) -> Result<IntervalReal> {
    let lo = lo.max(2);
    if lo > hi {
        return Ok(IntervalReal::zero(opts.precision));
    }
    let split = opts.exact_limit.clamp(lo - 1, hi);
    let mut acc = IntervalReal::zero(opts.precision);
    if lo <= split {
        acc = acc.add(&exact_sum(lo, split, term, opts)?);
    }
    if split < hi {
        acc = acc.add(&float_sum(split + 1, hi, term, opts)?);
    }
    Ok(acc)
}

/// Cumulative sums `Σ_{p ≤ c}` for each checkpoint `c`, in one pass.
pub fn prime_sum_checkpoints<T: PrimeTerm>(
    checkpoints: &[u64],
    term: &T,
    opts: &SumOptions,
) -> Result<Vec<IntervalReal>> {
    if checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("checkpoints must be sorted ascending".into()));
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = IntervalReal::zero(opts.precision);
    let mut done = 1u64;
    for &c in checkpoints {
        if c > done {
            acc = acc.add(&prime_sum(done + 1, c, term, opts)?);
            done = c;
        }
        out.push(acc.clone());
    }
    Ok(out)
}

/// Enclosure of θ(n) = `Σ_{p ≤ n} log p`.
pub fn theta_sum(n: u64) -> Result<IntervalReal> {
    theta_sum_with(n, &SumOptions::default())
}

pub fn theta_sum_with(n: u64, opts: &SumOptions) -> Result<IntervalReal> {
    prime_sum(2, n, &LogPrime, opts)
}
