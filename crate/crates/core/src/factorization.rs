//! Prime-exponent representation of integers too large to write down.
//!
//! Text format, one item per line:
//!
//! ```text
//! # comment
//! 2 16            # prime 2 with exponent 16
//! seg 3 1000 1    # every prime in [3, 1000] with exponent 1
//! ```
//!
//! Primes below the largest covered prime that are not listed carry
//! exponent 0.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::primes::{factor_u64, is_prime_u64, prev_prime, primes_between, SieveConfig};

/// Default upper limit for expanding segments by sieving.
pub const DEFAULT_SIEVE_CAP: u64 = 1_000_000_000;

/// Every prime in `[lo, hi]` carries `exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub lo: u64,
    pub hi: u64,
    pub exponent: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    pairs: Vec<(u64, u64)>,
    segments: Vec<Segment>,
}

impl Factorization {
    /// Validates and canonicalises. Pairs may carry exponent 0.
    pub fn new(mut pairs: Vec<(u64, u64)>, mut segments: Vec<Segment>) -> Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidFactorization(format!("prime {} listed twice", w[0].0)));
            }
        }
        if let Some(&(p, _)) = pairs.iter().find(|(p, _)| !is_prime_u64(*p)) {
            return Err(Error::InvalidFactorization(format!("{p} is not prime")));
        }
        segments.sort_unstable();
        for s in &segments {
            if s.lo < 2 || s.lo > s.hi {
                return Err(Error::InvalidFactorization(format!("segment [{}, {}] needs 2 <= lo <= hi", s.lo, s.hi)));
            }
            if s.exponent == 0 {
                return Err(Error::InvalidFactorization(format!("segment [{}, {}] has exponent 0", s.lo, s.hi)));
            }
        }
        for w in segments.windows(2) {
            if w[1].lo <= w[0].hi {
                return Err(Error::InvalidFactorization(format!(
                    "segments [{}, {}] and [{}, {}] overlap",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        for &(p, _) in &pairs {
            if let Some(s) = segment_containing(&segments, p) {
                return Err(Error::InvalidFactorization(format!(
                    "prime {p} also lies in segment [{}, {}]",
                    s.lo, s.hi
                )));
            }
        }
        Ok(Factorization { pairs, segments })
    }

    pub fn from_pairs(pairs: Vec<(u64, u64)>) -> Result<Self> {
        Self::new(pairs, Vec::new())
    }

    /// The factorization of a machine integer `n ≥ 1`.
    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("0 has no factorization".into()));
        }
        Self::from_pairs(factor_u64(n))
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_explicit(&self) -> bool {
        self.segments.is_empty()
    }

    /// Adds a pair, failing on any conflict with existing entries.
    pub fn with_pair(&self, p: u64, a: u64) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        pairs.push((p, a));
        Self::new(pairs, self.segments.clone())
    }

    /// p_r: the largest prime with a positive exponent. `None` for N = 1.
    pub fn largest_prime(&self) -> Option<u64> {
        let from_pairs = self.pairs.iter().rev().find(|(_, a)| *a > 0).map(|&(p, _)| p);
        let from_segments = self.segments.iter().rev().find_map(|s| prev_prime(s.hi).filter(|&p| p >= s.lo));
        from_pairs.max(from_segments)
    }

    /// Exponent of `p` in N; 0 when `p` is not covered or not prime.
    pub fn exponent_of(&self, p: u64) -> u64 {
        if let Ok(i) = self.pairs.binary_search_by_key(&p, |&(q, _)| q) {
            return self.pairs[i].1;
        }
        match segment_containing(&self.segments, p) {
            Some(s) if is_prime_u64(p) => s.exponent,
            _ => 0,
        }
    }

    /// Largest segment bound, which is how far expansion must sieve.
    pub fn sieve_extent(&self) -> u64 {
        self.segments.iter().map(|s| s.hi).max().unwrap_or(0)
    }

    pub fn check_sieve_cap(&self, cap: u64) -> Result<()> {
        let extent = self.sieve_extent();
        if extent > cap {
            return Err(Error::SegmentTooLarge { len: extent, max: cap });
        }
        Ok(())
    }

    /// Every prime `≤ bound` with its exponent, zeros included, ascending.
    pub fn exponents_up_to(&self, bound: u64, cap: u64, sieve: &SieveConfig) -> Result<Vec<(u64, u64)>> {
        if bound > cap {
            return Err(Error::SegmentTooLarge { len: bound, max: cap });
        }
        let primes = primes_between(2, bound, sieve);
        let mut out = Vec::with_capacity(primes.len());
        let mut pi = self.pairs.iter().peekable();
        let mut si = self.segments.iter().peekable();
        for p in primes {
            while pi.peek().is_some_and(|&&(q, _)| q < p) {
                pi.next();
            }
            while si.peek().is_some_and(|s| s.hi < p) {
                si.next();
            }
            let a = match (pi.peek(), si.peek()) {
                (Some(&&(q, a)), _) if q == p => a,
                (_, Some(s)) if s.lo <= p => s.exponent,
                _ => 0,
            };
            out.push((p, a));
        }
        Ok(out)
    }

    /// Pairs with every segment expanded by sieving; zero exponents kept.
    pub fn expanded(&self, cap: u64, sieve: &SieveConfig) -> Result<Vec<(u64, u64)>> {
        self.check_sieve_cap(cap)?;
        let mut out = self.pairs.clone();
        for s in &self.segments {
            out.extend(primes_between(s.lo, s.hi, sieve).into_iter().map(|p| (p, s.exponent)));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// N itself. Only for explicit factorizations.
    pub fn value(&self) -> Result<BigInt> {
        if !self.is_explicit() {
            return Err(Error::SegmentsPresent);
        }
        let mut n = BigInt::one();
        for &(p, a) in &self.pairs {
            n *= num_traits::pow(BigInt::from(p), usize::try_from(a).map_err(|_| too_big(p, a))?);
        }
        Ok(n)
    }

    /// Canonical text form; parsing it gives back `self`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn too_big(p: u64, a: u64) -> Error {
    Error::Overflow(format!("{p}^{a} is too large to materialise"))
}

fn segment_containing(segments: &[Segment], p: u64) -> Option<&Segment> {
    let i = segments.partition_point(|s| s.hi < p);
    segments.get(i).filter(|s| s.lo <= p)
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pi = self.pairs.iter().peekable();
        let mut si = self.segments.iter().peekable();
        loop {
            let take_pair = match (pi.peek(), si.peek()) {
                (Some(&&(p, _)), Some(s)) => p < s.lo,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => return Ok(()),
            };
            if take_pair {
                let (p, a) = pi.next().unwrap();
                writeln!(f, "{p} {a}")?;
            } else {
                let s = si.next().unwrap();
                writeln!(f, "seg {} {} {}", s.lo, s.hi, s.exponent)?;
            }
        }
    }
}

fn parse_u64(tok: &str, line: usize, what: &str) -> Result<u64> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("{what} '{tok}' is not a non-negative integer") })
}

impl FromStr for Factorization {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut segments = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            match toks.as_slice() {
                ["seg", lo, hi, e] => segments.push(Segment {
                    lo: parse_u64(lo, line, "segment start")?,
                    hi: parse_u64(hi, line, "segment end")?,
                    exponent: parse_u64(e, line, "exponent")?,
                }),
                [p, a] => pairs.push((parse_u64(p, line, "prime")?, parse_u64(a, line, "exponent")?)),
                _ => return Err(Error::Parse { line, msg: format!("expected 'p e' or 'seg lo hi e', got '{body}'") }),
            }
        }
        Factorization::new(pairs, segments)
    }
}
