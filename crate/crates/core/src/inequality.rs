//! Exact σ and ρ on factorizations, certified single checks of
//! σ(n) < e^γ n log log n, and the sieve-driven range verifier.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{Factorization, DEFAULT_SIEVE_CAP};
use crate::numerics::{exp_gamma, Dyadic, IntervalReal, PrecisionPolicy};
use crate::primes::{prime_sum, sigma_single, sigma_window, LogPrime, MertensTerm, PrimeTerm, SieveConfig, SumOptions};

/// Largest total bit length of N that [`sigma_exact`] will materialise.
pub const EXACT_BITS_LIMIT: f64 = 1e7;

/// Default upper end for [`verify_range`].
pub const DEFAULT_RANGE_CAP: u64 = 10_000_000_000;

/// Relative half-width of the float screen's uncertain band.
pub const SCREEN_BAND: f64 = 1e-6;

/// Violators at or below this are tagged degenerate.
pub const DEGENERATE_LIMIT: u64 = 15;

/// e^γ rounded to the nearest double.
const EXP_GAMMA_F64: f64 = 1.781_072_417_990_198;

/// `-log(1 - p^(-k))`.
#[derive(Clone, Debug)]
pub struct NegLogOneMinusPow {
    pub k: u64,
    /// Relative series tail at which summation stops; `None` sums to the
    /// working precision.
    pub tail_tol: Option<Dyadic>,
}

impl NegLogOneMinusPow {
    pub fn new(k: u64) -> Self {
        NegLogOneMinusPow { k, tail_tol: None }
    }
}

impl PrimeTerm for NegLogOneMinusPow {
    fn exact(&self, p: u64, prec: u32) -> Result<IntervalReal> {
        if self.k == 1 && self.tail_tol.is_none() {
            return MertensTerm.exact(p, prec);
        }
        let y = IntervalReal::from_ratio(&BigInt::one(), &BigInt::from(p), prec + 8).powi(self.k);
        Ok(y.neg_ln_one_minus(self.tail_tol.as_ref())?.at_precision(prec))
    }

    fn approx(&self, p: u64) -> (f64, f64) {
        if self.k == 1 {
            return MertensTerm.approx(p);
        }
        let u = f64::EPSILON / 2.0;
        if self.k as f64 * (p as f64).log2() > 1000.0 {
            // The term is below 2^-999.
            return (0.0, 2f64.powi(-998));
        }
        let y = (p as f64).powi(-(self.k as i32));
        let t = -(-y).ln_1p();
        (t, (2.0 * self.k as f64 + 8.0) * u * t)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub sums: SumOptions,
    /// Largest prime that segment expansion may sieve to.
    pub sieve_cap: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { sums: SumOptions::default(), sieve_cap: DEFAULT_SIEVE_CAP }
    }
}

impl EvalOptions {
    pub fn with_precision(mut self, prec: u32) -> Self {
        self.sums.precision = prec;
        self
    }
}

fn check_total_size(f: &Factorization) -> Result<()> {
    let bits: f64 = f.pairs().iter().map(|&(p, a)| a as f64 * (p as f64).log2()).sum();
    if bits > EXACT_BITS_LIMIT {
        return Err(Error::Overflow(format!(
            "N has about {bits:.0} bits; exact evaluation is limited to {EXACT_BITS_LIMIT:.0}"
        )));
    }
    Ok(())
}

fn sigma_prime_power(p: u64, a: u64) -> BigInt {
    let p = BigInt::from(p);
    let top = num_traits::pow(p.clone(), a as usize + 1);
    (top - 1u32) / (p - 1u32)
}

/// σ(N) exactly. Explicit factorizations only.
pub fn sigma_exact(f: &Factorization) -> Result<BigInt> {
    if !f.is_explicit() {
        return Err(Error::SegmentsPresent);
    }
    check_total_size(f)?;
    Ok(f.pairs().iter().filter(|(_, a)| *a > 0).map(|&(p, a)| sigma_prime_power(p, a)).product())
}

/// ρ(N) = σ(N)/N in lowest terms.
pub fn rho_exact(f: &Factorization) -> Result<BigRational> {
    let sigma = sigma_exact(f)?;
    Ok(BigRational::new(sigma, f.value()?))
}

fn pair_log_rho(p: u64, a: u64, prec: u32) -> Result<IntervalReal> {
    let full = MertensTerm.exact(p, prec)?;
    let part = NegLogOneMinusPow::new(a + 1).exact(p, prec)?;
    Ok(full.sub(&part))
}

/// Enclosure of log ρ(N) = Σ [log(1 - p^(-a-1)) - log(1 - 1/p)].
pub fn log_rho(f: &Factorization, opts: &EvalOptions) -> Result<IntervalReal> {
    f.check_sieve_cap(opts.sieve_cap)?;
    let prec = opts.sums.precision;
    let mut acc = IntervalReal::zero(prec);
    for &(p, a) in f.pairs().iter().filter(|(_, a)| *a > 0) {
        acc = acc.add(&pair_log_rho(p, a, prec)?);
    }
    for s in f.segments() {
        let full = prime_sum(s.lo, s.hi, &MertensTerm, &opts.sums)?;
        let part = prime_sum(s.lo, s.hi, &NegLogOneMinusPow::new(s.exponent + 1), &opts.sums)?;
        acc = acc.add(&full.sub(&part));
    }
    Ok(acc)
}

/// Enclosure of log N = Σ a log p.
pub fn log_n(f: &Factorization, opts: &EvalOptions) -> Result<IntervalReal> {
    f.check_sieve_cap(opts.sieve_cap)?;
    let prec = opts.sums.precision;
    let mut acc = IntervalReal::zero(prec);
    for &(p, a) in f.pairs().iter().filter(|(_, a)| *a > 0) {
        acc = acc.add(&LogPrime.exact(p, prec)?.mul_int(&BigInt::from(a)));
    }
    for s in f.segments() {
        let theta = prime_sum(s.lo, s.hi, &LogPrime, &opts.sums)?;
        acc = acc.add(&theta.mul_int(&BigInt::from(s.exponent)));
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
            Verdict::Indeterminate => "Indeterminate",
        }
    }

    /// Holds iff `margin.lo > 0`, Fails iff `margin.hi < 0`.
    pub fn from_margin(margin: &IntervalReal) -> Verdict {
        if margin.lo().is_positive() {
            Verdict::Holds
        } else if margin.hi().is_negative() {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiVerdict {
    pub n: u64,
    pub sigma: u64,
    pub verdict: Verdict,
    /// Enclosure of e^γ log log n − σ(n)/n.
    pub margin: IntervalReal,
    pub precision: u32,
}

/// e^γ log log n − σ/n at `prec` bits.
pub fn ri_margin_exact(n: &BigInt, sigma: &BigInt, prec: u32) -> Result<IntervalReal> {
    let rho = IntervalReal::from_ratio(sigma, n, prec);
    let lln = IntervalReal::from_int(n.clone(), prec).ln()?.ln()?;
    Ok(exp_gamma(prec)?.mul(&lln).sub(&rho))
}

/// Certified check of σ(n) < e^γ n log log n for `n ≥ 3`.
pub fn check_ri(n: u64) -> Result<RiVerdict> {
    check_ri_with(n, None, &PrecisionPolicy::from_env()?)
}

/// As [`check_ri`], reusing a known σ(n).
pub fn check_ri_with(n: u64, sigma: Option<u64>, policy: &PrecisionPolicy) -> Result<RiVerdict> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n = {n}: log log n needs n >= 3")));
    }
    let sigma = match sigma {
        Some(s) => s,
        None => sigma_single(n)?,
    };
    let (nb, sb) = (BigInt::from(n), BigInt::from(sigma));
    let mut last = None;
    for prec in policy.steps() {
        let margin = ri_margin_exact(&nb, &sb, prec)?;
        let verdict = Verdict::from_margin(&margin);
        if verdict != Verdict::Indeterminate {
            return Ok(RiVerdict { n, sigma, verdict, margin, precision: prec });
        }
        last = Some((margin, prec));
    }
    let (margin, precision) = last.expect("at least one precision step");
    Ok(RiVerdict { n, sigma, verdict: Verdict::Indeterminate, margin, precision })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violator {
    pub n: u64,
    pub sigma: u64,
    /// `n ≤ 15`: far below any range where the inequality is of interest.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeOutcome {
    pub lo: u64,
    pub hi: u64,
    pub violators: Vec<Violator>,
    /// Integers settled by exact evaluation after the float screen.
    pub exact_checks: u64,
    /// Integers that stayed undecided at the precision cap.
    pub indeterminate: Vec<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct RangeOptions {
    pub cap: u64,
    pub window: u64,
    pub threads: Option<usize>,
    pub policy: PrecisionPolicy,
}

impl Default for RangeOptions {
    fn default() -> Self {
        RangeOptions { cap: DEFAULT_RANGE_CAP, window: 1 << 18, threads: None, policy: PrecisionPolicy::default() }
    }
}

struct WindowResult {
    violators: Vec<Violator>,
    exact_checks: u64,
    indeterminate: Vec<u64>,
}

fn screen_window(a: u64, b: u64, policy: &PrecisionPolicy) -> Result<WindowResult> {
    let w = sigma_window(a, b)?;
    let mut out = WindowResult { violators: Vec::new(), exact_checks: 0, indeterminate: Vec::new() };
    for (n, s) in w.iter() {
        let rho = s as f64 / n as f64;
        let rhs = EXP_GAMMA_F64 * (n as f64).ln().ln();
        if rho < rhs - SCREEN_BAND * rhs.abs() {
            continue;
        }
        // Near the threshold or apparently failing: decide exactly.
        out.exact_checks += 1;
        let v = check_ri_with(n, Some(s), policy)?;
        match v.verdict {
            Verdict::Holds => {}
            Verdict::Fails => out.violators.push(Violator { n, sigma: s, degenerate: n <= DEGENERATE_LIMIT }),
            Verdict::Indeterminate => out.indeterminate.push(n),
        }
    }
    Ok(out)
}

/// Every `n ∈ [lo, hi]` with σ(n) ≥ e^γ n log log n, ascending.
pub fn verify_range(lo: u64, hi: u64, opts: &RangeOptions) -> Result<RangeOutcome> {
    if lo < 3 || lo > hi {
        return Err(Error::InvalidRange(format!("[{lo}, {hi}] needs 3 <= lo <= hi")));
    }
    if hi > opts.cap {
        return Err(Error::CapExceeded { what: "range end", value: hi, cap: opts.cap });
    }
    let window = opts.window.max(1);
    let bounds = crate::primes::segment_bounds(lo, hi, window);
    let sieve = SieveConfig { threads: opts.threads, ..SieveConfig::default() };
    let parts: Vec<Result<WindowResult>> =
        sieve.install(|| bounds.par_iter().map(|&(a, b)| screen_window(a, b, &opts.policy)).collect());
    let mut outcome = RangeOutcome { lo, hi, violators: Vec::new(), exact_checks: 0, indeterminate: Vec::new() };
    for part in parts {
        let part = part?;
        outcome.violators.extend(part.violators);
        outcome.exact_checks += part.exact_checks;
        outcome.indeterminate.extend(part.indeterminate);
    }
    Ok(outcome)
}

/// `σ(n)/n` as a float, for display.
pub fn rho_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
