//! Rigorous real arithmetic.
//!
//! [`IntervalReal`] encloses every quantity that is not an exact integer or
//! rational. Strict inequalities are decided with [`certified_compare`], and
//! callers escalate precision through [`PrecisionPolicy`] when a comparison
//! or floor cannot be resolved.

mod constants;
mod dyadic;
mod elementary;
mod interval;

use num_bigint::BigInt;

pub use constants::{euler_gamma, exp_gamma, EULER_GAMMA_DIGITS};
pub use dyadic::{Dyadic, Round};
pub use elementary::{ln2, EXP_ARG_LIMIT};
pub use interval::{certified_compare, Certainty, IntervalReal, TriState};

use crate::error::{Error, Result};

pub const MIN_PRECISION: u32 = 53;
pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_MAX_PRECISION: u32 = 1024;
/// Hard ceiling imposed by the embedded γ digits.
pub const MAX_SUPPORTED_PRECISION: u32 = 1280;

/// Environment variable overriding the escalation cap.
pub const MAX_PRECISION_ENV: &str = "ROBIN_MAX_PRECISION";

/// Enclosure of the rational `num / den` at `precision` bits.
pub fn make_interval(num: &BigInt, den: &BigInt, precision: u32) -> Result<IntervalReal> {
    if !(MIN_PRECISION..=MAX_SUPPORTED_PRECISION).contains(&precision) {
        return Err(Error::PrecisionOutOfRange { requested: precision, max: MAX_SUPPORTED_PRECISION });
    }
    if num_traits::Zero::is_zero(den) {
        return Err(Error::DivisionByZero);
    }
    Ok(IntervalReal::from_ratio(num, den, precision))
}

/// Working precision and the cap for doubling on indeterminate results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub max: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start: DEFAULT_PRECISION, max: DEFAULT_MAX_PRECISION }
    }
}

impl PrecisionPolicy {
    pub fn new(start: u32, max: u32) -> Result<Self> {
        if start < MIN_PRECISION || max > MAX_SUPPORTED_PRECISION || start > max {
            return Err(Error::PrecisionOutOfRange { requested: max.max(start), max: MAX_SUPPORTED_PRECISION });
        }
        Ok(PrecisionPolicy { start, max })
    }

    /// Default policy with the cap taken from `ROBIN_MAX_PRECISION` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_PRECISION_ENV) {
            Ok(v) => {
                let max: u32 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("{MAX_PRECISION_ENV}={v} is not an integer")))?;
                PrecisionPolicy::new(DEFAULT_PRECISION.min(max), max)
            }
            Err(_) => Ok(PrecisionPolicy::default()),
        }
    }

    /// start, 2·start, … capped at `max` (the cap itself is always tried).
    pub fn steps(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut p = self.start;
        while p < self.max {
            out.push(p);
            p = p.saturating_mul(2);
        }
        out.push(self.max);
        out
    }

    /// Runs `f` at increasing precision until it stops failing with a
    /// precision-limited error. The last error is returned at the cap.
    pub fn escalate<T>(&self, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
        let mut last = None;
        for p in self.steps() {
            match f(p) {
                Err(e) if e.is_precision_limited() => last = Some(e),
                other => return other,
            }
        }
        Err(last.expect("at least one step"))
    }
}

/// Certified ⌊x⌋ with precision escalation; `eval` produces the enclosure
/// at a given precision.
pub fn floor_with_escalation(policy: &PrecisionPolicy, eval: impl Fn(u32) -> Result<IntervalReal>) -> Result<BigInt> {
    policy.escalate(|p| eval(p)?.floor_certified())
}
