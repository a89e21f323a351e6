//! Logarithm and exponential enclosures.
//!
//! Both work on exact dyadic points and rely on monotonicity for intervals.
//! Series are evaluated in interval arithmetic at a few guard bits above the
//! requested precision, and the truncation tail is folded in as an explicit
//! bound, so containment follows from the interval rules alone.

use std::sync::OnceLock;

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Round};
use super::interval::IntervalReal;
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 24;
const LN2_CACHE_BITS: u32 = 1400;

/// Largest |x| accepted by [`IntervalReal::exp`] before reporting overflow.
pub const EXP_ARG_LIMIT: i64 = 1 << 31;

static LN2_CACHE: OnceLock<IntervalReal> = OnceLock::new();

/// Enclosure of ln 2.
pub fn ln2(prec: u32) -> IntervalReal {
    if prec + GUARD_BITS > LN2_CACHE_BITS {
        return ln2_uncached(prec + GUARD_BITS).at_precision(prec);
    }
    LN2_CACHE.get_or_init(|| ln2_uncached(LN2_CACHE_BITS)).at_precision(prec)
}

fn ln2_uncached(w: u32) -> IntervalReal {
    // ln 2 = 2 atanh(1/3)
    let third = IntervalReal::from_ratio(&BigInt::from(1), &BigInt::from(3), w);
    atanh_series(&third, w).mul_pow2(1)
}

/// Returns `2^e` as a dyadic.
fn pow2(e: i64) -> Dyadic {
    Dyadic::new(BigInt::from(1), e)
}

/// atanh(t) for |t| ≤ 1/3 via Σ t^(2j+1)/(2j+1), with the tail bounded by
/// 2·|t|^(2K+1).
fn atanh_series(t: &IntervalReal, w: u32) -> IntervalReal {
    let t2 = t.sqr();
    let tmax = t.abs().hi().clone();
    if tmax.is_zero() {
        return IntervalReal::zero(w);
    }
    let eps = pow2(-(w as i64) - 4);
    let mut power = t.clone();
    let mut power_bound = tmax.clone();
    let t2max = tmax.mul_round(&tmax, 64, Round::Up);
    let mut sum = IntervalReal::zero(w);
    let mut j: i64 = 0;
    loop {
        sum = sum.add(&power.div_int(2 * j + 1));
        power = power.mul(&t2);
        power_bound = power_bound.mul_round(&t2max, 64, Round::Up);
        j += 1;
        if power_bound < eps {
            break;
        }
    }
    // Remaining terms: Σ_{i≥j} |t|^(2i+1)/(2i+1) ≤ |t|^(2j+1)/(1 - t²) ≤ 2|t|^(2j+1).
    let tail = power_bound.mul_pow2(1);
    sum.add(&IntervalReal::with_radius(&Dyadic::zero(), &tail, w))
}

/// Enclosure of ln(x) for a positive dyadic point, at `prec` bits.
fn ln_point(x: &Dyadic, prec: u32) -> IntervalReal {
    debug_assert!(x.is_positive());
    let w = prec + GUARD_BITS;
    // x = m * 2^k with m in [0.75, 1.5)
    let mut k = x.msb();
    let mut m = x.mul_pow2(-k);
    if m >= Dyadic::from_f64(1.5) {
        k += 1;
        m = m.mul_pow2(-1);
    }
    let ln_m = if m == Dyadic::one() {
        IntervalReal::zero(w)
    } else {
        let num = IntervalReal::point(m.sub_exact(&Dyadic::one()), w);
        let den = IntervalReal::point(m.add_exact(&Dyadic::one()), w);
        let t = num.div(&den).expect("m + 1 > 0");
        atanh_series(&t, w).mul_pow2(1)
    };
    let ln_k = if k == 0 { IntervalReal::zero(w) } else { ln2(w).mul_int(&BigInt::from(k)) };
    ln_m.add(&ln_k).at_precision(prec)
}

/// Enclosure of e^x for a dyadic point with |x| ≤ EXP_ARG_LIMIT.
fn exp_point(x: &Dyadic, prec: u32) -> IntervalReal {
    if x.is_zero() {
        return IntervalReal::one(prec);
    }
    // Halve until |r| < 2^-8, evaluate Taylor, then square back up. Each
    // squaring doubles the relative width, so carry `s` extra bits.
    let s = (x.msb() + 9).max(0);
    let w = prec + GUARD_BITS + s as u32;
    let r = IntervalReal::point(x.mul_pow2(-s), w);
    let rmax = r.abs().hi().clone();
    let eps = pow2(-(w as i64) - 4);
    let mut term = IntervalReal::one(w);
    let mut term_bound = Dyadic::one();
    let mut sum = IntervalReal::zero(w);
    let mut k: i64 = 0;
    loop {
        sum = sum.add(&term);
        k += 1;
        term = term.mul(&r).div_int(k);
        term_bound = term_bound.mul_round(&rmax, 64, Round::Up).div_round(&Dyadic::from_int(k), 64, Round::Up);
        if term_bound < eps {
            break;
        }
    }
    // Tail Σ_{i≥k} |r|^i/i! ≤ 2|r|^k/k! since |r| < 1/2.
    let tail = term_bound.mul_pow2(1);
    let mut acc = sum.add(&IntervalReal::with_radius(&Dyadic::zero(), &tail, w));
    for _ in 0..s {
        acc = acc.sqr();
    }
    acc.at_precision(prec)
}

impl IntervalReal {
    /// Natural logarithm; requires `lo > 0`.
    pub fn ln(&self) -> Result<IntervalReal> {
        if !self.lo().is_positive() {
            return Err(Error::Domain(format!("ln of non-positive enclosure {self:?}")));
        }
        let p = self.precision();
        if self.is_point() {
            return Ok(ln_point(self.lo(), p));
        }
        let lo = ln_point(self.lo(), p);
        let hi = ln_point(self.hi(), p);
        Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone(), p))
    }

    /// Exponential; reports overflow when `hi` exceeds the supported range.
    pub fn exp(&self) -> Result<IntervalReal> {
        let limit = Dyadic::from_int(EXP_ARG_LIMIT);
        if self.hi() > &limit {
            return Err(Error::Overflow(format!("exp argument {} too large", self.hi_decimal(12))));
        }
        let p = self.precision();
        let lo = if self.lo() < &limit.neg() {
            // e^x < 2^x for x < 0; the lower end is only known to be positive.
            IntervalReal::new(Dyadic::zero(), pow2(self.lo().floor().try_into().unwrap_or(i64::MIN / 2)), p)
        } else {
            exp_point(self.lo(), p)
        };
        if self.is_point() {
            return Ok(lo);
        }
        let hi = exp_point(self.hi(), p);
        Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone(), p))
    }

    /// −ln(1 − y) = Σ_{k≥1} y^k / k for an enclosure with 0 ≤ y < 1.
    ///
    /// For y ≤ 1/2 the series is summed directly until the remaining tail is
    /// below `tail_tol` times the partial sum (or below the working ulp), and
    /// the tail bound is added to the upper end only.
    pub fn neg_ln_one_minus(&self, tail_tol: Option<&Dyadic>) -> Result<IntervalReal> {
        let p = self.precision();
        if self.lo().is_negative() || self.hi() >= &Dyadic::one() {
            return Err(Error::Domain(format!("-ln(1-y) needs 0 <= y < 1, got {self:?}")));
        }
        if self.hi().is_zero() {
            return Ok(IntervalReal::zero(p));
        }
        if self.hi() > &Dyadic::from_f64(0.5) {
            let one_minus = IntervalReal::one(p).sub(self);
            return Ok(one_minus.ln()?.neg());
        }
        let w = p + GUARD_BITS;
        let y = self.at_precision(w);
        let ymax = y.hi().clone();
        let eps = pow2(-(w as i64) - 4);
        let mut power = y.clone();
        let mut bound = ymax.clone();
        let mut sum = IntervalReal::zero(w);
        let mut k: i64 = 1;
        loop {
            sum = sum.add(&power.div_int(k));
            power = power.mul(&y);
            bound = bound.mul_round(&ymax, 64, Round::Up);
            k += 1;
            // Tail Σ_{i≥k} y^i/i ≤ y^k / (k (1 - y)) ≤ 2 y^k / k.
            let tail = bound.div_round(&Dyadic::from_int(k), 64, Round::Up).mul_pow2(1);
            let small_abs = tail < eps;
            let small_rel = tail_tol.is_some_and(|tol| tail < sum.lo().mul_round(tol, 64, Round::Down));
            if small_abs || small_rel {
                let upper = sum.hi().add_round(&tail, w, Round::Up);
                return Ok(IntervalReal::new(sum.lo().clone(), upper, w).at_precision(p));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64, prec: u32) -> IntervalReal {
        IntervalReal::from_ratio(&BigInt::from(n), &BigInt::from(d), prec)
    }

    // 60-digit references, mpmath mp.dps = 60.
    const LN2: &str = "0.693147180559945309417232121458176568075500134360255254120680";
    const LN10_13_LN10: &str = "30.7676386541705496920371019587542737943211904805397286057981";

    fn assert_contains_decimal(iv: &IntervalReal, digits: &str) {
        let (n, d) = Dyadic::parse_decimal_ratio(digits).unwrap();
        // The reference is itself rounded to 60 significant digits.
        let slack = IntervalReal::from_decimal("1e-57", 256).unwrap();
        let wide = IntervalReal::new(iv.lo().sub_exact(slack.hi()), iv.hi().add_exact(slack.hi()), 400);
        assert!(wide.contains_ratio(&n, &d), "{iv:?} does not contain {digits}");
    }

    #[test]
    fn ln_of_one_is_zero() {
        let z = IntervalReal::one(128).ln().unwrap();
        assert!(z.is_point());
        assert!(z.lo().is_zero());
    }

    #[test]
    fn ln2_reference() {
        let v = IntervalReal::from_int(2, 192).ln().unwrap();
        assert_contains_decimal(&v, LN2);
        assert!(v.width_f64() < 1e-55);
        assert_contains_decimal(&ln2(192), LN2);
    }

    #[test]
    fn loglog_of_range_limit() {
        // ln(10^13 ln 10)
        let ln10 = IntervalReal::from_int(10, 256).ln().unwrap();
        let x = ln10.mul_int(&BigInt::from(10u64.pow(13)));
        let v = x.ln().unwrap();
        assert_contains_decimal(&v, LN10_13_LN10);
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(IntervalReal::zero(128).ln().is_err());
        assert!(ratio(-1, 2, 128).ln().is_err());
    }

    #[test]
    fn exp_of_zero_is_one() {
        let v = IntervalReal::zero(128).exp().unwrap();
        assert!(v.is_point());
        assert_eq!(v.lo(), &Dyadic::one());
    }

    #[test]
    fn exp_ln_roundtrip() {
        for (n, d) in [(1, 3), (7, 2), (1000, 1), (-25, 4), (123456789, 1000)] {
            let x = ratio(n, d, 160);
            let back = x.exp().unwrap().ln().unwrap();
            assert!(back.contains_ratio(&BigInt::from(n), &BigInt::from(d)), "{n}/{d}: {back:?}");
            assert!(back.width_f64() < 1e-30);
        }
    }

    #[test]
    fn exp_overflow_reported() {
        let big = IntervalReal::from_int(1i64 << 40, 128);
        assert!(matches!(big.exp(), Err(Error::Overflow(_))));
        let tiny = IntervalReal::from_int(-(1i64 << 40), 128).exp().unwrap();
        assert!(tiny.lo().is_zero() && tiny.hi().is_positive());
    }

    #[test]
    fn neg_ln_one_minus_matches_ln() {
        for (n, d) in [(1, 4), (1, 9), (1, 2), (3, 4), (1, 1_000_003)] {
            let y = ratio(n, d, 128);
            let series = y.neg_ln_one_minus(None).unwrap();
            let direct = ratio(d - n, d, 128).ln().unwrap().neg();
            assert!(series.intersects(&direct), "{n}/{d}: {series:?} vs {direct:?}");
            assert!(series.width_f64() < 1e-35);
        }
    }

    #[test]
    fn neg_ln_one_minus_tail_tolerance_still_encloses() {
        let y = ratio(1, 3, 128);
        let loose = y.neg_ln_one_minus(Some(&Dyadic::from_f64(1e-6))).unwrap();
        let tight = y.neg_ln_one_minus(None).unwrap();
        assert!(loose.contains_interval(&tight) || loose.intersects(&tight));
        assert!(loose.width_f64() > tight.width_f64());
    }
}
