use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` of dyadic endpoints, produced with outward
/// rounding at `precision` mantissa bits.
///
/// Every operation returns an enclosure of the exact result for every pair of
/// points drawn from the operands.
#[derive(Clone, PartialEq, Eq)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certainty {
    StrictlyLess,
    StrictlyGreater,
    Indeterminate,
}

impl Certainty {
    pub fn reverse(self) -> Certainty {
        match self {
            Certainty::StrictlyLess => Certainty::StrictlyGreater,
            Certainty::StrictlyGreater => Certainty::StrictlyLess,
            Certainty::Indeterminate => Certainty::Indeterminate,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Certainty::Indeterminate
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Certainty::StrictlyLess => "less",
            Certainty::StrictlyGreater => "greater",
            Certainty::Indeterminate => "indeterminate",
        }
    }
}

/// A yes/no answer that interval arithmetic could not always settle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    True,
    False,
    Unknown,
}

impl TriState {
    /// `True` when `a < b` is certified, `False` when `a > b` is.
    pub fn less_than(a: &IntervalReal, b: &IntervalReal) -> TriState {
        match certified_compare(a, b) {
            Certainty::StrictlyLess => TriState::True,
            Certainty::StrictlyGreater => TriState::False,
            Certainty::Indeterminate => TriState::Unknown,
        }
    }

    pub fn from_bool(b: bool) -> TriState {
        if b {
            TriState::True
        } else {
            TriState::False
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TriState::True => "true",
            TriState::False => "false",
            TriState::Unknown => "unknown",
        }
    }
}

/// `StrictlyLess` iff `a.hi < b.lo`, `StrictlyGreater` iff `a.lo > b.hi`.
pub fn certified_compare(a: &IntervalReal, b: &IntervalReal) -> Certainty {
    if a.hi < b.lo {
        Certainty::StrictlyLess
    } else if a.lo > b.hi {
        Certainty::StrictlyGreater
    } else {
        Certainty::Indeterminate
    }
}

impl IntervalReal {
    /// Builds `[lo, hi]` rounded outward to `prec` bits.
    ///
    /// Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> IntervalReal {
        assert!(lo <= hi, "inverted interval [{lo:?}, {hi:?}]");
        IntervalReal { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> IntervalReal {
        IntervalReal::new(x.clone(), x, prec)
    }

    pub fn zero(prec: u32) -> IntervalReal {
        IntervalReal::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> IntervalReal {
        IntervalReal::point(Dyadic::one(), prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> IntervalReal {
        IntervalReal::point(Dyadic::from_int(v), prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> IntervalReal {
        IntervalReal::point(Dyadic::from_f64(v), prec)
    }

    /// Enclosure of `num / den`. Panics if `den` is zero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> IntervalReal {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_one() {
            return IntervalReal::from_int(num.clone(), prec);
        }
        IntervalReal {
            lo: Dyadic::from_ratio(num, den, prec, Round::Down),
            hi: Dyadic::from_ratio(num, den, prec, Round::Up),
            prec,
        }
    }

    /// `[center - radius, center + radius]`.
    pub fn with_radius(center: &Dyadic, radius: &Dyadic, prec: u32) -> IntervalReal {
        let r = radius.abs();
        IntervalReal::new(center.sub_exact(&r), center.add_exact(&r), prec)
    }

    /// Parses a decimal literal into an enclosure.
    pub fn from_decimal(s: &str, prec: u32) -> Option<IntervalReal> {
        let (n, d) = Dyadic::parse_decimal_ratio(s)?;
        Some(IntervalReal::from_ratio(&n, &d, prec))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_round(Round::Up)
    }

    /// Midpoint as a float; for display and diagnostics only.
    pub fn mid_f64(&self) -> f64 {
        self.lo.add_exact(&self.hi).mul_pow2(-1).to_f64()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    /// Same enclosure rounded outward to a (possibly lower) precision.
    pub fn at_precision(&self, prec: u32) -> IntervalReal {
        IntervalReal::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Whether the exact rational `num / den` (den > 0) lies inside.
    pub fn contains_ratio(&self, num: &BigInt, den: &BigInt) -> bool {
        // lo <= num/den  <=>  lo * den <= num, and similarly for hi.
        let n = Dyadic::from_int(num.clone());
        let d = Dyadic::from_int(den.clone());
        self.lo.mul_exact(&d) <= n && n <= self.hi.mul_exact(&d)
    }

    pub fn contains_interval(&self, other: &IntervalReal) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &IntervalReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &IntervalReal) -> IntervalReal {
        IntervalReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, other: &IntervalReal) -> IntervalReal {
        let p = self.prec.max(other.prec);
        IntervalReal {
            lo: self.lo.add_round(&other.lo, p, Round::Down),
            hi: self.hi.add_round(&other.hi, p, Round::Up),
            prec: p,
        }
    }

    pub fn sub(&self, other: &IntervalReal) -> IntervalReal {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntervalReal {
        IntervalReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> IntervalReal {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            IntervalReal { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn mul(&self, other: &IntervalReal) -> IntervalReal {
        let p = self.prec.max(other.prec);
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return IntervalReal {
                lo: self.lo.mul_round(&other.lo, p, Round::Down),
                hi: self.hi.mul_round(&other.hi, p, Round::Up),
                prec: p,
            };
        }
        let products = [
            self.lo.mul_exact(&other.lo),
            self.lo.mul_exact(&other.hi),
            self.hi.mul_exact(&other.lo),
            self.hi.mul_exact(&other.hi),
        ];
        let lo = products.iter().min().expect("nonempty").round(p, Round::Down);
        let hi = products.iter().max().expect("nonempty").round(p, Round::Up);
        IntervalReal { lo, hi, prec: p }
    }

    pub fn sqr(&self) -> IntervalReal {
        let a = self.abs();
        IntervalReal {
            lo: a.lo.mul_round(&a.lo, self.prec, Round::Down),
            hi: a.hi.mul_round(&a.hi, self.prec, Round::Up),
            prec: self.prec,
        }
    }

    /// Division; fails if the divisor contains zero.
    pub fn div(&self, other: &IntervalReal) -> Result<IntervalReal> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec.max(other.prec);
        let cands = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let lo = cands.iter().map(|(a, b)| a.div_round(b, p, Round::Down)).min().expect("nonempty");
        let hi = cands.iter().map(|(a, b)| a.div_round(b, p, Round::Up)).max().expect("nonempty");
        Ok(IntervalReal { lo, hi, prec: p })
    }

    pub fn recip(&self) -> Result<IntervalReal> {
        IntervalReal::one(self.prec).div(self)
    }

    pub fn div_int(&self, k: i64) -> IntervalReal {
        assert!(k != 0);
        let d = Dyadic::from_int(k);
        let (a, b) = if k > 0 { (&self.lo, &self.hi) } else { (&self.hi, &self.lo) };
        IntervalReal {
            lo: a.div_round(&d, self.prec, Round::Down),
            hi: b.div_round(&d, self.prec, Round::Up),
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> IntervalReal {
        self.mul(&IntervalReal::from_int(k.clone(), self.prec))
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> IntervalReal {
        IntervalReal { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut e: u64) -> IntervalReal {
        let mut base = self.clone();
        let mut acc = IntervalReal::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// ⌊x⌋ when the enclosure does not straddle an integer.
    pub fn floor_certified(&self) -> Result<BigInt> {
        let (a, b) = (self.lo.floor(), self.hi.floor());
        if a == b {
            Ok(a)
        } else {
            Err(Error::StraddlesInteger {
                lo: self.lo.to_decimal(25, Round::Down),
                hi: self.hi.to_decimal(25, Round::Up),
            })
        }
    }

    /// Lower bound printed with `digits` significant digits, rounded down.
    pub fn lo_decimal(&self, digits: u32) -> String {
        self.lo.to_decimal(digits, Round::Down)
    }

    /// Upper bound printed with `digits` significant digits, rounded up.
    pub fn hi_decimal(&self, digits: u32) -> String {
        self.hi.to_decimal(digits, Round::Up)
    }
}

impl fmt::Debug for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]@{}", self.lo_decimal(22), self.hi_decimal(22), self.prec)
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} (down), {} (up)]", self.lo_decimal(20), self.hi_decimal(20))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&IntervalReal> for &IntervalReal {
            type Output = IntervalReal;
            fn $m(self, rhs: &IntervalReal) -> IntervalReal {
                IntervalReal::$m(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        IntervalReal::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> IntervalReal {
        IntervalReal::new(Dyadic::from_f64(lo), Dyadic::from_f64(hi), 128)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(certified_compare(&iv(0.0, 0.0), &iv(1.0, 1.0)), Certainty::StrictlyLess);
        assert_eq!(certified_compare(&iv(0.0, 2.0), &iv(1.0, 3.0)), Certainty::Indeterminate);
        assert_eq!(certified_compare(&iv(1.0, 3.0), &iv(0.0, 0.5)), Certainty::StrictlyGreater);
        // touching endpoints are not strict
        assert_eq!(certified_compare(&iv(0.0, 1.0), &iv(1.0, 2.0)), Certainty::Indeterminate);
    }

    #[test]
    fn floor_examples() {
        assert_eq!(iv(2.1, 2.2).floor_certified().unwrap(), BigInt::from(2));
        assert!(matches!(iv(2.9, 3.1).floor_certified(), Err(Error::StraddlesInteger { .. })));
        assert_eq!(iv(-0.5, -0.25).floor_certified().unwrap(), BigInt::from(-1));
        assert_eq!(iv(3.0, 3.0).floor_certified().unwrap(), BigInt::from(3));
    }

    #[test]
    fn ratio_width_contract() {
        let third = IntervalReal::from_ratio(&1.into(), &3.into(), 128);
        assert!(third.contains_ratio(&1.into(), &3.into()));
        // width <= 2^(1-128) * 1/3
        let bound = Dyadic::new(BigInt::one(), -127);
        assert!(third.width() <= bound);
        let one = IntervalReal::from_ratio(&1.into(), &1.into(), 128);
        assert!(one.is_point());
    }

    #[test]
    fn mixed_sign_products() {
        let a = iv(-2.0, 3.0);
        let b = iv(-5.0, 1.0);
        let p = a.mul(&b);
        assert_eq!(p.lo_f64(), -15.0);
        assert_eq!(p.hi_f64(), 10.0);
        assert_eq!(a.sqr().lo_f64(), 0.0);
        assert_eq!(a.sqr().hi_f64(), 9.0);
    }

    #[test]
    fn division_rejects_zero() {
        assert!(matches!(iv(1.0, 2.0).div(&iv(-1.0, 1.0)), Err(Error::DivisionByZero)));
        let q = iv(1.0, 1.0).div(&iv(3.0, 3.0)).unwrap();
        assert!(q.contains_ratio(&1.into(), &3.into()));
    }

    #[test]
    fn powi_matches_exact() {
        let half = iv(0.5, 0.5);
        let p = half.powi(17);
        assert!(p.is_point());
        assert_eq!(p.lo_f64(), 2f64.powi(-17));
    }
}
