//! Binary floating values `mant * 2^exp` with arbitrary-size mantissas.
//!
//! Every inexact operation takes an explicit [`Round`] direction. Nothing here
//! rounds to nearest.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for a single operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward −∞.
    Down,
    /// Toward +∞.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// An exact dyadic rational `mant * 2^exp`.
///
/// Zero is always stored as `mant = 0, exp = 0`, and nonzero mantissas are odd,
/// so equal values have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shr_round(m: &BigInt, shift: u64, dir: Round) -> BigInt {
    // BigInt's `>>` rounds toward −∞.
    match dir {
        Round::Down => m >> shift,
        Round::Up => -((-m) >> shift),
    }
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(1)
    }

    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Dyadic {
        Dyadic::new(v.into(), 0)
    }

    /// Exact conversion. Panics on NaN or infinity.
    pub fn from_f64(v: f64) -> Dyadic {
        assert!(v.is_finite(), "non-finite value {v}");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Bits in the mantissa magnitude.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the most significant bit: `2^msb <= |x| < 2^(msb+1)`.
    /// Undefined (returns `i64::MIN`) for zero.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64 - 1
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiply by `2^k` (exact).
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, shift, dir), self.exp + shift as i64)
    }

    pub fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, other: &Dyadic) -> Dyadic {
        self.add_exact(&other.neg())
    }

    /// `self + other` rounded to `prec` bits.
    ///
    /// When the exponents are far apart the small operand only acts as a
    /// sticky bit, so the exact sum is never materialised.
    pub fn add_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.msb() >= other.msb() { (self, other) } else { (other, self) };
        let gap = big.msb() - small.msb();
        let keep = (prec as i64).max(big.bits() as i64) + 4;
        if gap <= keep {
            return big.add_exact(small).round(prec, dir);
        }
        // |small| < 2^(msb(big) - keep), strictly below half an ulp of `big`
        // at `keep - 2` bits. Replace it by a single bit at that scale; the
        // rounded result is unchanged and keeps the correct direction.
        let sticky_exp = big.msb() - keep;
        let sticky = Dyadic::new(BigInt::from(small.signum()), sticky_exp);
        big.add_exact(&sticky).round(prec, dir)
    }

    pub fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        self.mul_exact(other).round(prec, dir)
    }

    /// `self / other` rounded to `prec` bits. Panics on division by zero.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the quotient carries at least prec + 2 bits.
        let want = prec as i64 + 2;
        let k = (want + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << k as u64;
        let q = match dir {
            Round::Down => num.div_floor(&other.mant),
            Round::Up => num.div_ceil(&other.mant),
        };
        Dyadic::new(q, self.exp - other.exp - k).round(prec, dir)
    }

    /// Exact ratio `num / den` rounded to `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_int(num.clone()).div_round(&Dyadic::from_int(den.clone()), prec, dir)
    }

    /// ⌊self⌋ as an exact integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// ⌈self⌉ as an exact integer.
    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Nearest `f64` in direction `dir`.
    pub fn to_f64_round(&self, dir: Round) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, dir);
        let m = r.mant.to_f64().expect("53-bit mantissa fits f64");
        let e = r.exp;
        let top = e + r.mant.bits() as i64;
        if top > 1000 {
            return match (dir, m > 0.0) {
                (Round::Up, true) => f64::INFINITY,
                (Round::Down, true) => f64::MAX,
                (Round::Up, false) => -f64::MAX,
                (Round::Down, false) => f64::NEG_INFINITY,
            };
        }
        if top < -1000 {
            return match (dir, m > 0.0) {
                (Round::Up, true) => f64::MIN_POSITIVE,
                (Round::Down, false) => -f64::MIN_POSITIVE,
                _ => 0.0,
            };
        }
        // Both factors and the product are normal, so this is exact.
        m * 2f64.powi((e / 2) as i32) * 2f64.powi((e - e / 2) as i32)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Down);
        r.mant.to_f64().unwrap_or(f64::NAN) * 2f64.powf(r.exp as f64)
    }

    /// Decimal string with `digits` significant digits, rounded in direction
    /// `dir` (so the printed value is itself a valid bound).
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1) as i64;
        // floor(msb * log10 2) never exceeds the true decimal exponent, so the
        // estimate only ever needs bumping up (also covers rounding carries).
        let mut dexp = ((self.msb() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let scale = digits - 1 - dexp;
            let n = self.scaled_integer(scale, dir);
            if n.abs().to_string().len() as i64 > digits {
                dexp += 1;
                continue;
            }
            return format_scaled(&n, scale);
        }
    }

    /// `round(self * 10^scale)` to an integer in direction `dir`.
    fn scaled_integer(&self, scale: i64, dir: Round) -> BigInt {
        let ten = BigInt::from(10u32);
        let mut num = self.mant.clone();
        let mut den = BigInt::one();
        if scale >= 0 {
            num *= num_traits::pow(ten, scale as usize);
        } else {
            den *= num_traits::pow(ten, (-scale) as usize);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => num.div_ceil(&den),
        }
    }

    /// Parses a plain decimal literal such as `-12.5` or `0.005586` exactly
    /// into `(numerator, denominator)`.
    pub fn parse_decimal_ratio(s: &str) -> Option<(BigInt, BigInt)> {
        parse_decimal_ratio(s)
    }
}

/// Formats `n * 10^-scale`.
fn format_scaled(n: &BigInt, scale: i64) -> String {
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let len = digits.len() as i64;
    // value = 0.digits * 10^(len - scale)
    let point = len - scale;
    let body = if (-6..=21).contains(&point) {
        if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else if point >= len {
            format!("{}{}", digits, "0".repeat((point - len) as usize))
        } else {
            format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
        }
    } else {
        let mantissa = if len > 1 { format!("{}.{}", &digits[..1], &digits[1..]) } else { digits.clone() };
        format!("{}e{}", mantissa, point - 1)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn parse_decimal_ratio(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    let (mant, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let mut num: BigInt = all.parse().ok()?;
    let shift = exp10 - frac_part.len() as i64;
    let mut den = BigInt::one();
    let ten = BigInt::from(10u32);
    if shift >= 0 {
        num *= num_traits::pow(ten, shift as usize);
    } else {
        den = num_traits::pow(ten, (-shift) as usize);
    }
    if neg {
        num = -num;
    }
    let g = num.gcd(&den);
    if !g.is_zero() && !g.is_one() {
        num /= &g;
        den /= &g;
    }
    Some((num, den))
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes via msb first.
        let (ma, mb) = (self.msb(), other.msb());
        let mag = if ma != mb {
            ma.cmp(&mb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.abs() << (self.exp - e) as u64;
            let b = other.mant.abs() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(20, Round::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> Dyadic {
        Dyadic::from_f64(v)
    }

    #[test]
    fn normalises_trailing_zeros() {
        assert_eq!(Dyadic::from_int(12), Dyadic::new(BigInt::from(3), 2));
        assert_eq!(Dyadic::new(BigInt::zero(), 17), Dyadic::zero());
    }

    #[test]
    fn shift_rounding_is_directed_for_negatives() {
        let m = BigInt::from(-5);
        assert_eq!(shr_round(&m, 1, Round::Down), BigInt::from(-3));
        assert_eq!(shr_round(&m, 1, Round::Up), BigInt::from(-2));
    }

    #[test]
    fn round_brackets_value() {
        let third_lo = Dyadic::from_ratio(&1.into(), &3.into(), 64, Round::Down);
        let third_hi = Dyadic::from_ratio(&1.into(), &3.into(), 64, Round::Up);
        assert!(third_lo < third_hi);
        assert!(third_lo.bits() <= 64 && third_hi.bits() <= 64);
        // 3 * lo < 1 < 3 * hi
        let three = Dyadic::from_int(3);
        assert!(three.mul_exact(&third_lo) < Dyadic::one());
        assert!(three.mul_exact(&third_hi) > Dyadic::one());
    }

    #[test]
    fn sticky_add_keeps_direction() {
        let one = Dyadic::one();
        let tiny = Dyadic::new(BigInt::from(1), -100_000);
        let up = one.add_round(&tiny, 64, Round::Up);
        let down = one.add_round(&tiny, 64, Round::Down);
        assert!(up > one);
        assert_eq!(down, one);
        let down_neg = one.add_round(&tiny.neg(), 64, Round::Down);
        assert!(down_neg < one);
        assert_eq!(one.add_round(&tiny.neg(), 64, Round::Up), one);
    }

    #[test]
    fn ordering_matches_f64() {
        let vals = [-3.5, -1.0, -0.25, 0.0, 1e-300, 0.5, 2.0, 1e10];
        for &a in &vals {
            for &b in &vals {
                assert_eq!(d(a).cmp(&d(b)), a.partial_cmp(&b).unwrap(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn f64_roundtrip() {
        for v in [1.0, -2.5, 0.1, 1e-300, 6.02e23] {
            assert_eq!(d(v).to_f64_round(Round::Down), v);
            assert_eq!(d(v).to_f64_round(Round::Up), v);
        }
    }

    #[test]
    fn decimal_output_is_directed() {
        let third = Dyadic::from_ratio(&1.into(), &3.into(), 128, Round::Down);
        assert_eq!(third.to_decimal(10, Round::Down), "0.3333333333");
        assert_eq!(third.to_decimal(10, Round::Up), "0.3333333334");
        assert_eq!(Dyadic::from_int(-42).to_decimal(5, Round::Down), "-42.000");
        assert_eq!(d(7.62939453125e-6).to_decimal(6, Round::Down), "0.00000762939");
        assert_eq!(Dyadic::from_int(9).to_decimal(1, Round::Up), "9");
        let big = Dyadic::from_int(BigInt::from(10u32).pow(30));
        assert_eq!(big.to_decimal(3, Round::Down), "1.00e30");
        // 9.99.. rounded up at 3 digits carries into a new decade
        let near = d(9.9999);
        assert_eq!(near.to_decimal(3, Round::Up), "10.0");
    }

    #[test]
    fn parses_decimals() {
        let (n, dn) = parse_decimal_ratio("0.005586").unwrap();
        assert_eq!((n, dn), (BigInt::from(2793), BigInt::from(500000)));
        let (n, dn) = parse_decimal_ratio("-1.5e3").unwrap();
        assert_eq!((n, dn), (BigInt::from(-1500), BigInt::from(1)));
        assert!(parse_decimal_ratio("abc").is_none());
        assert!(parse_decimal_ratio(".").is_none());
    }
}
