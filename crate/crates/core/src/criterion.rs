//! Exponent thresholds E(p) = ⌊−log T / log p⌋ with
//! T = 0.005586 / (log log 10^(10^13))², witness search, the modulus
//! L = Π p^E(p), and certification of σ(N) < e^γ N log log N for huge N.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::inequality::{log_n, log_rho, EvalOptions, NegLogOneMinusPow};
use crate::mertens::{envelope_over_square, LEMMA_THRESHOLD};
use crate::numerics::{
    certified_compare, euler_gamma, floor_with_escalation, Certainty, Dyadic, IntervalReal, PrecisionPolicy, TriState,
    DEFAULT_PRECISION,
};
use crate::primes::{
    prime_sum, prime_sum_checkpoints, primes_between, LogPrime, MertensTerm, PrimeTerm, SieveConfig, SumOptions,
};

/// log10 of the exponent in the size floor 10^(10^13).
pub const SIZE_FLOOR_EXPONENT: u64 = 10_000_000_000_000;

/// Default relative tail at which each prime's series in S(N) is cut.
pub fn default_tail_tol() -> Dyadic {
    Dyadic::new(BigInt::from(1), -80)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionConstants {
    /// log 10^(10^13) = 10^13 log 10.
    pub n0_log: IntervalReal,
    /// log log 10^(10^13).
    pub n0_loglog: IntervalReal,
    pub t: IntervalReal,
    pub log_t: IntervalReal,
    pub lemma_threshold: u64,
    pub precision: u32,
}

/// T and the size floor at `prec` bits.
pub fn compute_t(prec: u32) -> Result<CriterionConstants> {
    let n0_log = IntervalReal::from_int(10, prec).ln()?.mul_int(&BigInt::from(SIZE_FLOOR_EXPONENT));
    let n0_loglog = n0_log.ln()?;
    let t = envelope_over_square(&n0_loglog)?;
    let log_t = t.ln()?;
    Ok(CriterionConstants { n0_log, n0_loglog, t, log_t, lemma_threshold: LEMMA_THRESHOLD, precision: prec })
}

fn cached_constants(prec: u32) -> Result<CriterionConstants> {
    static DEFAULT: OnceLock<CriterionConstants> = OnceLock::new();
    if prec == DEFAULT_PRECISION {
        if let Some(c) = DEFAULT.get() {
            return Ok(c.clone());
        }
        let c = compute_t(prec)?;
        return Ok(DEFAULT.get_or_init(|| c).clone());
    }
    compute_t(prec)
}

fn exponent_ratio(neg_log_t: &IntervalReal, p: u64) -> Result<IntervalReal> {
    neg_log_t.div(&LogPrime.exact(p, neg_log_t.precision())?)
}

/// E(p) = ⌊−log T / log p⌋ for a prime `p`.
pub fn exponent_threshold(p: u64) -> Result<u64> {
    exponent_threshold_with(p, &PrecisionPolicy::from_env()?)
}

pub fn exponent_threshold_with(p: u64, policy: &PrecisionPolicy) -> Result<u64> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("E(p) needs a prime, got {p}")));
    }
    let e = floor_with_escalation(policy, |prec| exponent_ratio(&cached_constants(prec)?.log_t.neg(), p))?;
    Ok(e.to_u64().unwrap_or(0))
}

/// ⌊12.04 / log p⌋, the threshold obtained from the two-decimal value of
/// −log T.
pub fn exponent_threshold_rounded(p: u64) -> Result<u64> {
    let policy = PrecisionPolicy::default();
    let e = floor_with_escalation(&policy, |prec| {
        exponent_ratio(&IntervalReal::from_ratio(&BigInt::from(1204), &BigInt::from(100), prec), p)
    })?;
    Ok(e.to_u64().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionTable {
    /// `(p, E(p))` for every prime with E(p) ≥ 1, ascending.
    pub rows: Vec<(u64, u64)>,
    pub p_max: u64,
    /// log L = Σ E(p) log p.
    pub log_l: IntervalReal,
    pub log10_log10_l: IntervalReal,
    pub precision: u32,
}

impl CriterionTable {
    /// E(p) for any `p`; 0 above the table.
    pub fn exponent(&self, p: u64) -> u64 {
        match self.rows.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(i) => self.rows[i].1,
            Err(_) => 0,
        }
    }
}

/// Builds the full table at `prec` bits.
pub fn build_table_with(prec: u32, sieve: &SieveConfig) -> Result<CriterionTable> {
    let c = cached_constants(prec)?;
    let neg_log_t = c.log_t.neg();
    // Every prime with E(p) ≥ 1 satisfies p ≤ exp(−log T).
    let limit = neg_log_t.exp()?.hi().ceil().to_u64().ok_or_else(|| Error::Overflow("exp(-log T)".into()))?;
    let policy = PrecisionPolicy::new(prec, prec.max(crate::numerics::DEFAULT_MAX_PRECISION))?;
    let nlt_f = neg_log_t.mid_f64();
    let nlt_err = neg_log_t.width_f64() + 4.0 * f64::EPSILON * nlt_f;
    let primes = primes_between(2, limit, sieve);
    let exps: Vec<Result<u64>> = sieve.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                // Float screen: decided when the ratio is clear of an integer
                // by more than its error bound.
                let ln_p = (p as f64).ln();
                let r = nlt_f / ln_p;
                let err = 8.0 * f64::EPSILON * r + nlt_err / ln_p;
                if r - r.floor() > err && r.ceil() - r > err {
                    return Ok(r.floor() as u64);
                }
                let e = floor_with_escalation(&policy, |q| {
                    let nlt = if q == prec { neg_log_t.clone() } else { cached_constants(q)?.log_t.neg() };
                    exponent_ratio(&nlt, p)
                })?;
                Ok(e.to_u64().unwrap_or(0))
            })
            .collect()
    });
    let mut rows = Vec::new();
    for (p, e) in primes.iter().zip(exps) {
        let e = e?;
        if e >= 1 {
            rows.push((*p, e));
        }
    }
    let p_max = rows.last().map_or(1, |r| r.0);
    // log L = Σ_e θ(P_e) with P_e the largest prime having E(p) ≥ e.
    let max_e = rows.first().map_or(0, |r| r.1);
    let mut checkpoints: Vec<u64> =
        (1..=max_e).filter_map(|e| rows.iter().rev().find(|r| r.1 >= e).map(|r| r.0)).collect();
    checkpoints.reverse();
    let sums = SumOptions { precision: prec, exact_limit: 0, audit: true, sieve: *sieve };
    let mut log_l = IntervalReal::zero(prec);
    for theta in prime_sum_checkpoints(&checkpoints, &LogPrime, &sums)? {
        log_l = log_l.add(&theta);
    }
    let ln10 = IntervalReal::from_int(10, prec).ln()?;
    let log10_log10_l = log_l.div(&ln10)?.ln()?.div(&ln10)?;
    Ok(CriterionTable { rows, p_max, log_l, log10_log10_l, precision: prec })
}

/// The table at the default precision, built once.
pub fn build_table() -> Result<&'static CriterionTable> {
    static TABLE: OnceLock<CriterionTable> = OnceLock::new();
    if let Some(t) = TABLE.get() {
        return Ok(t);
    }
    let t = build_table_with(DEFAULT_PRECISION, &SieveConfig::default())?;
    Ok(TABLE.get_or_init(|| t))
}

/// Enclosure of p^(−a−1).
pub fn s_lower_bound(p: u64, a: u64, prec: u32) -> IntervalReal {
    IntervalReal::from_ratio(&BigInt::from(1), &BigInt::from(p), prec).powi(a + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub p: u64,
    pub a: u64,
    pub e: u64,
}

/// Smallest prime `p ≤ p_r` whose exponent in N is below E(p), counting
/// unlisted primes as exponent 0.
pub fn find_witness(f: &Factorization, opts: &EvalOptions) -> Result<Option<Witness>> {
    let table = build_table()?;
    let Some(p_r) = f.largest_prime() else { return Ok(None) };
    let bound = p_r.min(table.p_max);
    for (p, a) in f.exponents_up_to(bound, opts.sieve_cap.max(bound), &opts.sums.sieve)? {
        let e = table.exponent(p);
        if a < e {
            return Ok(Some(Witness { p, a, e }));
        }
    }
    Ok(None)
}

/// Whether N is divisible by Π_{p ≤ p_r} p^E(p).
pub fn divisible_by_l(f: &Factorization, opts: &EvalOptions) -> Result<bool> {
    Ok(find_witness(f, opts)?.is_none())
}

/// Enclosure of S(N) = −Σ_{p ≤ p_r} log(1 − p^(−a_p−1)), including primes
/// with exponent 0.
pub fn s_exact(f: &Factorization, tail_tol: &Dyadic, opts: &EvalOptions) -> Result<IntervalReal> {
    let prec = opts.sums.precision;
    let Some(p_r) = f.largest_prime() else { return Ok(IntervalReal::zero(prec)) };
    f.check_sieve_cap(opts.sieve_cap)?;
    if p_r > opts.sieve_cap {
        return Err(Error::SegmentTooLarge { len: p_r, max: opts.sieve_cap });
    }
    let term = |k: u64| NegLogOneMinusPow { k, tail_tol: Some(tail_tol.clone()) };
    // Covered stretches in ascending order; exponent-0 primes fill the gaps.
    let mut covered: Vec<(u64, u64, u64)> =
        f.pairs().iter().filter(|(p, _)| *p <= p_r).map(|&(p, a)| (p, p, a)).collect();
    covered.extend(f.segments().iter().map(|s| (s.lo, s.hi.min(p_r), s.exponent)));
    covered.sort_unstable();
    let mut acc = IntervalReal::zero(prec);
    let mut next = 2u64;
    for (lo, hi, a) in covered {
        if lo > hi {
            continue;
        }
        if lo > next {
            acc = acc.add(&prime_sum(next, lo - 1, &term(1), &opts.sums)?);
        }
        let part = if lo == hi { term(a + 1).exact(lo, prec)? } else { prime_sum(lo, hi, &term(a + 1), &opts.sums)? };
        acc = acc.add(&part);
        next = hi + 1;
    }
    if next <= p_r {
        acc = acc.add(&prime_sum(next, p_r, &MertensTerm, &opts.sums)?);
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateStatus {
    Certified,
    NoWitness,
    PreconditionUnmet,
    Indeterminate,
}

impl CertificateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateStatus::Certified => "Certified",
            CertificateStatus::NoWitness => "NoWitness",
            CertificateStatus::PreconditionUnmet => "PreconditionUnmet",
            CertificateStatus::Indeterminate => "Indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub status: CertificateStatus,
    pub witness: Option<Witness>,
    pub log_n: IntervalReal,
    /// log N > 10^13 log 10, certified.
    pub size_precondition: TriState,
    pub assumed_large: bool,
    /// 0.005586/(log log N)², or T when the size is assumed rather than shown.
    pub r_term: Option<IntervalReal>,
    /// p_s^(−a_s−1).
    pub s_lower: Option<IntervalReal>,
    /// r_term − s_lower.
    pub chain_gap: Option<IntervalReal>,
    pub s_exact: Option<IntervalReal>,
    /// log log log N + γ + r_term − S(N).
    pub rho_bound: Option<IntervalReal>,
    pub log_rho: Option<IntervalReal>,
    /// log ρ(N) < rho_bound, certified.
    pub rho_check: Option<TriState>,
    pub p_r: Option<u64>,
    pub p_r_lt_log_n: TriState,
    pub p_r_below_lemma_threshold: bool,
    pub precision: u32,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub assume_large: bool,
    pub with_s_exact: bool,
    pub tail_tol: Dyadic,
    pub eval: EvalOptions,
    pub policy: PrecisionPolicy,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            assume_large: false,
            with_s_exact: false,
            tail_tol: default_tail_tol(),
            eval: EvalOptions::default(),
            policy: PrecisionPolicy::default(),
        }
    }
}

/// Runs the certification chain, escalating precision while the outcome
/// is undecided.
pub fn certify(f: &Factorization, opts: &CertifyOptions) -> Result<CertificateReport> {
    let witness = find_witness(f, &opts.eval)?;
    let mut last = None;
    for prec in opts.policy.steps() {
        let report = certify_at(f, witness, opts, prec)?;
        if report.status != CertificateStatus::Indeterminate {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("at least one precision step"))
}

fn certify_at(
    f: &Factorization,
    witness: Option<Witness>,
    opts: &CertifyOptions,
    prec: u32,
) -> Result<CertificateReport> {
    let eval = opts.eval.with_precision(prec);
    let c = cached_constants(prec)?;
    let log_n = log_n(f, &eval)?;
    let size_precondition = TriState::less_than(&c.n0_log, &log_n);
    let p_r = f.largest_prime();
    let p_r_lt_log_n = match p_r {
        Some(p) => TriState::less_than(&IntervalReal::from_int(p, prec), &log_n),
        None => TriState::from_bool(log_n.lo().is_positive()),
    };
    // log log N, when defined.
    let loglog_n = if log_n.lo() > &Dyadic::one() { Some(log_n.ln()?) } else { None };
    let r_term = if size_precondition == TriState::True {
        loglog_n.as_ref().map(envelope_over_square).transpose()?
    } else if opts.assume_large {
        Some(c.t.clone())
    } else {
        loglog_n.as_ref().filter(|x| x.lo().is_positive()).map(envelope_over_square).transpose()?
    };
    let s_lower = witness.map(|w| s_lower_bound(w.p, w.a, prec));
    let chain_gap = match (&r_term, &s_lower) {
        (Some(r), Some(s)) => Some(r.sub(s)),
        _ => None,
    };

    let status = if size_precondition != TriState::True && !opts.assume_large {
        if size_precondition == TriState::Unknown {
            CertificateStatus::Indeterminate
        } else {
            CertificateStatus::PreconditionUnmet
        }
    } else if witness.is_none() {
        CertificateStatus::NoWitness
    } else {
        match (&r_term, &s_lower) {
            (Some(r), Some(s)) if certified_compare(r, s) == Certainty::StrictlyLess => CertificateStatus::Certified,
            _ => CertificateStatus::Indeterminate,
        }
    };

    let (mut s_ex, mut rho_bound, mut lr, mut rho_check) = (None, None, None, None);
    if opts.with_s_exact {
        let s = s_exact(f, &opts.tail_tol, &eval)?;
        if let (Some(r), Some(ll)) = (&r_term, &loglog_n) {
            if ll.lo().is_positive() {
                let bound = ll.ln()?.add(&euler_gamma(prec)?).add(r).sub(&s);
                let lrho = log_rho(f, &eval)?;
                rho_check = Some(TriState::less_than(&lrho, &bound));
                lr = Some(lrho);
                rho_bound = Some(bound);
            }
        }
        s_ex = Some(s);
    }

    Ok(CertificateReport {
        status,
        witness,
        log_n,
        size_precondition,
        assumed_large: opts.assume_large,
        r_term,
        s_lower,
        chain_gap,
        s_exact: s_ex,
        rho_bound,
        log_rho: lr,
        rho_check,
        p_r,
        p_r_lt_log_n,
        p_r_below_lemma_threshold: p_r.is_some_and(|p| p < LEMMA_THRESHOLD),
        precision: prec,
    })
}
