use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use super::interval::IntervalReal;
use super::MAX_SUPPORTED_PRECISION;
use crate::error::{Error, Result};

/// The first 400 decimals of the Euler–Mascheroni constant, truncated.
///
/// Source: mpmath 1.3.0, `+mp.euler` at `mp.dps = 430`. The test suite
/// recomputes the constant with an independent Brent–McMillan evaluation
/// and checks these digits against it.
pub const EULER_GAMMA_DIGITS: &str = concat!(
    "57721566490153286060651209008240243104215933593992359880576723488486772677766467",
    "09369470632917467495146314472498070824809605040144865428362241739976449235362535",
    "00333742937337737673942792595258247094916008735203948165670853233151776611528621",
    "19950150798479374508570574002992135478614669402960432542151905877553526733139925",
    "40129674205137541395491116851028079842348775872050384310939973613725530608893312",
);

/// Enclosure of γ with width at most `2^(8 - prec)`.
pub fn euler_gamma(prec: u32) -> Result<IntervalReal> {
    if !(2..=MAX_SUPPORTED_PRECISION).contains(&prec) {
        return Err(Error::PrecisionOutOfRange { requested: prec, max: MAX_SUPPORTED_PRECISION });
    }
    static CACHE: OnceLock<IntervalReal> = OnceLock::new();
    let full = CACHE.get_or_init(|| {
        let digits: BigInt = EULER_GAMMA_DIGITS.parse().expect("digit literal");
        let scale = num_traits::pow(BigInt::from(10u32), EULER_GAMMA_DIGITS.len());
        // γ lies in [digits, digits + 1] / 10^400.
        let lo = IntervalReal::from_ratio(&digits, &scale, MAX_SUPPORTED_PRECISION + 32);
        let hi = IntervalReal::from_ratio(&(digits + BigInt::one()), &scale, MAX_SUPPORTED_PRECISION + 32);
        lo.hull(&hi)
    });
    Ok(full.at_precision(prec))
}

/// Enclosure of e^γ.
pub fn exp_gamma(prec: u32) -> Result<IntervalReal> {
    if !(2..=MAX_SUPPORTED_PRECISION).contains(&prec) {
        return Err(Error::PrecisionOutOfRange { requested: prec, max: MAX_SUPPORTED_PRECISION });
    }
    static CACHE: OnceLock<IntervalReal> = OnceLock::new();
    let full = CACHE
        .get_or_init(|| euler_gamma(MAX_SUPPORTED_PRECISION).and_then(|g| g.exp()).expect("e^γ at full precision"));
    Ok(full.at_precision(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Dyadic;

    #[test]
    fn gamma_width_contract() {
        for prec in [64, 128, 256, 1024, MAX_SUPPORTED_PRECISION] {
            let g = euler_gamma(prec).unwrap();
            assert!(g.width() <= Dyadic::new(BigInt::one(), 8 - prec as i64), "prec {prec}");
        }
    }

    #[test]
    fn gamma_nests() {
        let coarse = euler_gamma(64).unwrap();
        let fine = euler_gamma(256).unwrap();
        assert!(coarse.contains_interval(&fine));
    }

    #[test]
    fn gamma_out_of_range() {
        assert!(matches!(euler_gamma(MAX_SUPPORTED_PRECISION + 1), Err(Error::PrecisionOutOfRange { .. })));
    }

    #[test]
    fn exp_gamma_reference() {
        // e^γ = 1.78107241799019798523650410310717954916964521430343 (mpmath)
        let v = exp_gamma(128).unwrap();
        let r = IntervalReal::from_decimal("1.78107241799019798523650410310717954916964521430343", 256).unwrap();
        let slack = Dyadic::from_f64(1e-45);
        let wide = IntervalReal::new(v.lo().sub_exact(&slack), v.hi().add_exact(&slack), 256);
        assert!(wide.contains_interval(&r));
        assert!(v.width_f64() < 1e-35);
    }
}
