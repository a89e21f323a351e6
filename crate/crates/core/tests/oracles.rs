//! Reference values computed independently with mpmath at 50 digits.

use num_bigint::BigInt;
use robin::criterion::{build_table, compute_t, exponent_threshold};
use robin::extremal::{ca_candidate, parse_epsilon};
use robin::inequality::check_ri;
use robin::mertens::{mertens_sum, remainder};
use robin::numerics::{IntervalReal, TriState};
use robin::primes::theta_sum;

/// Checks that `x` meets `decimal ± 1` in its last printed digit.
fn encloses(x: &IntervalReal, decimal: &str) {
    let digits = decimal.split_once('.').map_or(0, |(_, f)| f.len());
    let ulp = IntervalReal::from_ratio(&1.into(), &BigInt::from(10).pow(digits as u32), 256);
    let c = IntervalReal::from_decimal(decimal, 256).unwrap();
    let v = c.sub(&ulp).hull(&c.add(&ulp));
    assert!(x.intersects(&v), "{} .. {} does not contain {decimal}", x.lo_decimal(40), x.hi_decimal(40));
}

#[test]
fn chebyshev_theta() {
    encloses(&theta_sum(10_000).unwrap(), "9895.99137915698731266894967030687702");
    encloses(&theta_sum(1_000_000).unwrap(), "998484.175025634292133973037829695938");
}

#[test]
fn prime_sums() {
    let s = mertens_sum(10_000).unwrap();
    encloses(&s, "2.79877349126630193960809911806538430194");
    assert!(s.width_f64() < 1e-30);
    encloses(&mertens_sum(1_000_000).unwrap(), "3.20304651773370544027726241265467062386");
    let r = remainder(10_000).unwrap();
    encloses(&r.remainder, "0.00123101999692266036390973720908963924");
    let r = remainder(1_000_000).unwrap();
    encloses(&r.remainder, "0.0000389383561617790550599163340268245961");
    encloses(&r.bound, "0.0000292662483196354280172972554495786122");
    assert_eq!(r.within_bound, TriState::False);
}

#[test]
fn criterion_constants() {
    let c = compute_t(256).unwrap();
    encloses(&c.t, "0.00000590082314551189811650040536627868626942");
    encloses(&c.log_t, "-12.0404187005956213284717200460859805983289");
    let expected = [17, 10, 7, 6, 5, 4, 4, 4, 3, 3];
    for (p, e) in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29].into_iter().zip(expected) {
        assert_eq!(exponent_threshold(p).unwrap(), e, "E({p})");
    }
}

#[test]
fn size_of_l() {
    let t = build_table().unwrap();
    assert_eq!(t.rows.len(), 15449);
    assert_eq!(t.p_max, 169457);
    encloses(&t.log_l, "169252.467023432225162032169612157136432");
    encloses(&t.log10_log10_l, "4.86631931897886988203839738203630221572");
}

#[test]
fn robin_margins() {
    let v = check_ri(5040).unwrap();
    assert_eq!(v.sigma, 19344);
    encloses(&v.margin, "-0.0212179500667266133649889549444386978903");
    let v = check_ri(10080).unwrap();
    encloses(&v.margin, "0.0561030321767442311561428581523860792378");
}

#[test]
fn candidates() {
    for (eps, n) in [("0.5", 2u64), ("0.2", 12), ("0.1", 60), ("0.05", 2520), ("0.02", 367_567_200)] {
        let c = ca_candidate(&parse_epsilon(eps).unwrap()).unwrap();
        assert_eq!(c.factorization.value().unwrap(), n.into(), "ε = {eps}");
    }
}
