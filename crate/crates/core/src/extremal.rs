//! Colossally abundant style candidates: for ε > 0 the integer maximising
//! σ(n)/n^(1+ε), built prime by prime with exponents
//! a_p = ⌊log((p^(1+ε) − 1)/(p^ε − 1)) / log p⌋ − 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::inequality::{log_n, log_rho, EvalOptions};
use crate::numerics::{euler_gamma, floor_with_escalation, Dyadic, IntervalReal, PrecisionPolicy};
use crate::primes::{next_prime, LogPrime, PrimeTerm};

/// Largest prime a candidate may reach.
pub const DEFAULT_CA_PRIME_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaCandidate {
    /// ε as given, exact.
    pub epsilon: BigRational,
    pub factorization: Factorization,
    pub log_n: IntervalReal,
    /// γ + log log log N − log ρ(N); `None` when log log N ≤ 0.
    pub margin: Option<IntervalReal>,
}

/// Parses a positive decimal such as `0.05` or `1e-2` exactly.
pub fn parse_epsilon(s: &str) -> Result<BigRational> {
    let (n, d) = Dyadic::parse_decimal_ratio(s)
        .ok_or_else(|| Error::InvalidArgument(format!("'{s}' is not a decimal number")))?;
    let eps = BigRational::new(n, d);
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {s}")));
    }
    Ok(eps)
}

fn exponent_enclosure(p: u64, eps: &BigRational, prec: u32) -> Result<IntervalReal> {
    let ln_p = LogPrime.exact(p, prec)?;
    let e = IntervalReal::from_ratio(eps.numer(), eps.denom(), prec);
    let p_eps = e.mul(&ln_p).exp()?;
    let one = IntervalReal::one(prec);
    let num = p_eps.mul_int(&BigInt::from(p)).sub(&one);
    let den = p_eps.sub(&one);
    num.div(&den)?.ln()?.div(&ln_p)
}

/// a_p for one prime.
pub fn ca_exponent(p: u64, eps: &BigRational, policy: &PrecisionPolicy) -> Result<u64> {
    let f = floor_with_escalation(policy, |prec| exponent_enclosure(p, eps, prec))?;
    Ok((f - BigInt::from(1)).to_u64().unwrap_or(0))
}

/// The candidate for `eps`, without its margin.
pub fn ca_factorization(eps: &BigRational, policy: &PrecisionPolicy, prime_cap: u64) -> Result<Factorization> {
    let mut pairs = Vec::new();
    let mut p = 2u64;
    loop {
        let a = ca_exponent(p, eps, policy)?;
        if a == 0 {
            break;
        }
        pairs.push((p, a));
        p = next_prime(p).ok_or_else(|| Error::Overflow("prime sequence".into()))?;
        if p > prime_cap {
            return Err(Error::CapExceeded { what: "candidate prime", value: p, cap: prime_cap });
        }
    }
    Factorization::from_pairs(pairs)
}

pub fn ca_candidate(eps: &BigRational) -> Result<CaCandidate> {
    ca_candidate_with(eps, &PrecisionPolicy::from_env()?, &EvalOptions::default())
}

pub fn ca_candidate_with(eps: &BigRational, policy: &PrecisionPolicy, opts: &EvalOptions) -> Result<CaCandidate> {
    let factorization = ca_factorization(eps, policy, DEFAULT_CA_PRIME_CAP)?;
    let log_n = log_n(&factorization, opts)?;
    let margin = match ri_margin(&factorization, opts) {
        Ok(m) => Some(m),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CaCandidate { epsilon: eps.clone(), factorization, log_n, margin })
}

/// γ + log log log N − log ρ(N): positive iff σ(N) < e^γ N log log N.
pub fn ri_margin(f: &Factorization, opts: &EvalOptions) -> Result<IntervalReal> {
    let ln = log_n(f, opts)?;
    if ln.lo() <= &Dyadic::one() {
        return Err(Error::Domain("log log N must be positive".into()));
    }
    let lln = ln.ln()?;
    let prec = opts.sums.precision;
    Ok(euler_gamma(prec)?.add(&lln.ln()?).sub(&log_rho(f, opts)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(s: &str) -> BigRational {
        parse_epsilon(s).unwrap()
    }

    #[test]
    fn known_candidates() {
        assert_eq!(ca_candidate(&eps("1")).unwrap().factorization, Factorization::one());
        // σ(n)/n^1.5 peaks at n = 2.
        assert_eq!(ca_candidate(&eps("0.5")).unwrap().factorization.value().unwrap(), BigInt::from(2));
        // 12, 60 and 2520 violate the inequality; 367567200 does not.
        for (e, n, holds) in
            [("0.2", 12u64, false), ("0.1", 60, false), ("0.05", 2520, false), ("0.02", 367_567_200, true)]
        {
            let c = ca_candidate(&eps(e)).unwrap();
            let pairs = c.factorization.pairs();
            assert!(pairs.windows(2).all(|w| w[0].1 >= w[1].1), "{e}");
            assert_eq!(c.factorization.value().unwrap(), BigInt::from(n));
            let m = c.margin.unwrap();
            assert_eq!(m.lo().is_positive(), holds, "{e}");
            assert_eq!(m.hi().is_negative(), !holds, "{e}");
        }
    }

    #[test]
    fn margins() {
        let o = EvalOptions::default();
        let m = ri_margin(&"2 4\n3 2\n5 1\n7 1\n".parse().unwrap(), &o).unwrap();
        assert!(m.hi().is_negative());
        let m = ri_margin(&"71 2\n".parse().unwrap(), &o).unwrap();
        assert!(m.lo().is_positive());
        assert!(matches!(ri_margin(&"2 1\n".parse().unwrap(), &o), Err(Error::Domain(_))));
    }

    #[test]
    fn epsilon_parsing() {
        assert_eq!(eps("0.5"), BigRational::new(1.into(), 2.into()));
        assert_eq!(eps("1e-2"), BigRational::new(1.into(), 100.into()));
        assert!(parse_epsilon("0").is_err());
        assert!(parse_epsilon("-1").is_err());
        assert!(parse_epsilon("abc").is_err());
    }
}
