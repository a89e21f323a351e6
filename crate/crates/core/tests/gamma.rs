//! Checks the stored γ digits against an independent Brent–McMillan
//! evaluation in fixed point.

use num_bigint::BigInt;
use num_traits::One;
use robin::numerics::{euler_gamma, Dyadic};

const SCALE_BITS: i64 = 1500;

/// ln 2 = Σ 1/(k 2^k), scaled by 2^SCALE_BITS.
fn ln2_fixed() -> BigInt {
    let one = BigInt::one() << SCALE_BITS;
    let mut acc = BigInt::from(0);
    for k in 1..=(SCALE_BITS as u64 + 20) {
        acc += (&one >> k) / k;
    }
    acc
}

/// γ = A/B − ln n with A = Σ (n^k/k!)² H_k, B = Σ (n^k/k!)², n = 2^8.
/// The truncation error is below π e^(−4n) ≈ 10^(−444).
fn gamma_fixed() -> BigInt {
    let m = 8u64;
    let n2 = BigInt::from(1u64 << (2 * m));
    let one = BigInt::one() << SCALE_BITS;
    let mut a_k = one.clone();
    let mut h_k = BigInt::from(0);
    let mut a = BigInt::from(0);
    let mut b = one.clone();
    for k in 1u64.. {
        a_k = a_k * &n2 / (k * k);
        if a_k.bits() == 0 {
            break;
        }
        h_k += &one / k;
        a += (&a_k * &h_k) >> SCALE_BITS;
        b += &a_k;
    }
    (a << SCALE_BITS) / b - ln2_fixed() * m
}

#[test]
fn stored_gamma_matches_brent_mcmillan() {
    let g = Dyadic::new(gamma_fixed(), -SCALE_BITS);
    for prec in [128u32, 512, 1024, 1280] {
        let e = euler_gamma(prec).unwrap();
        let tol = Dyadic::new(BigInt::one(), -(prec as i64) + 2);
        let lo = e.lo().sub_exact(&tol);
        let hi = e.hi().add_exact(&tol);
        assert!(lo <= g && g <= hi, "γ at {prec} bits");
        assert!(e.width().msb() < -(prec as i64) + 2, "γ interval too wide at {prec} bits");
    }
}
