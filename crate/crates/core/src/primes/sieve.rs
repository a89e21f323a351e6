//! Segmented sieve of Eratosthenes over odd numbers.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default number of integers covered by one segment. The odd-only bitmap
/// for it is 256 KiB.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Maximum `hi - lo + 1` of a single segment.
    pub segment_size: u64,
    /// Worker threads for segment-parallel work; `None` uses rayon's default.
    pub threads: Option<usize>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { segment_size: DEFAULT_SEGMENT_SIZE, threads: None }
    }
}

impl SieveConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads.max(1));
        self
    }

    /// Runs `f` inside a pool with the configured worker count.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            None => f(),
        }
    }
}

/// Primality flags for every integer in `[lo, hi]`.
///
/// Only odd numbers are stored; 2 is handled separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSegment {
    lo: u64,
    hi: u64,
    /// First odd number ≥ lo; bit `i` stands for `first_odd + 2i`.
    first_odd: u64,
    len: usize,
    bits: Vec<u64>,
}

impl PrimeSegment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n < self.lo || n > self.hi {
            return false;
        }
        if n == 2 {
            return true;
        }
        if n % 2 == 0 {
            return false;
        }
        let i = ((n - self.first_odd) / 2) as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Primes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.lo <= 2 && 2 <= self.hi).then_some(2);
        let first_odd = self.first_odd;
        let len = self.len;
        two.into_iter().chain(self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
            .filter(move |&i| i < len)
            .map(move |i| first_odd + 2 * i as u64)
        }))
    }

    pub fn count(&self) -> u64 {
        let two = u64::from(self.lo <= 2 && 2 <= self.hi);
        two + self.bits.iter().map(|w| w.count_ones() as u64).sum::<u64>()
    }
}

/// Odd primes up to `limit` (inclusive) by a plain sieve; used to cross off
/// segments.
pub fn base_primes(limit: u64) -> Vec<u32> {
    assert!(limit < 1 << 32, "base prime limit {limit} too large");
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    // index i <-> 2i + 1
    let size = limit / 2 + 1;
    let mut composite = vec![false; size];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < size {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    (1..size).filter(|&i| !composite[i] && 2 * i < limit).map(|i| (2 * i + 1) as u32).collect()
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

fn sieve_with(lo: u64, hi: u64, base: &[u32]) -> PrimeSegment {
    debug_assert!(2 <= lo && lo <= hi);
    let first_odd = lo | 1;
    let len = if first_odd > hi { 0 } else { ((hi - first_odd) / 2 + 1) as usize };
    let mut bits = vec![!0u64; len.div_ceil(64)];
    if len % 64 != 0 {
        if let Some(last) = bits.last_mut() {
            *last = (1u64 << (len % 64)) - 1;
        }
    }
    for &p in base {
        let p = p as u64;
        let sq = p * p;
        if sq > hi {
            break;
        }
        // First odd multiple of p that is ≥ max(lo, p²).
        let mut start = if sq >= lo { sq } else { lo.div_ceil(p) * p };
        if start % 2 == 0 {
            start += p;
        }
        let mut i = ((start - first_odd) / 2) as usize;
        let step = p as usize;
        while i < len {
            bits[i / 64] &= !(1u64 << (i % 64));
            i += step;
        }
    }
    PrimeSegment { lo, hi, first_odd, len, bits }
}

/// Sieves one segment `[lo, hi]` with `hi - lo + 1 ≤ segment_size`.
pub fn sieve_segment(lo: u64, hi: u64, config: &SieveConfig) -> Result<PrimeSegment> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidRange(format!("sieve segment [{lo}, {hi}] needs 2 <= lo <= hi")));
    }
    let len = hi - lo + 1;
    if len > config.segment_size {
        return Err(Error::SegmentTooLarge { len, max: config.segment_size });
    }
    Ok(sieve_with(lo, hi, &base_primes(isqrt(hi))))
}

/// Splits `[lo, hi]` at multiples of `size` so the boundaries do not depend
/// on the worker count.
pub fn segment_bounds(lo: u64, hi: u64, size: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut a = lo;
    loop {
        let b = ((a / size) + 1).saturating_mul(size).saturating_sub(1).min(hi);
        out.push((a, b));
        if b == hi {
            break;
        }
        a = b + 1;
    }
    out
}

/// Sieves `[lo, hi]` segment by segment, applies `f` to each segment in
/// parallel and returns the results in ascending segment order.
pub fn map_segments<T, F>(lo: u64, hi: u64, config: &SieveConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&PrimeSegment) -> T + Sync + Send,
{
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }
    let base = base_primes(isqrt(hi));
    let bounds = segment_bounds(lo, hi, config.segment_size);
    config.install(|| bounds.par_iter().map(|&(a, b)| f(&sieve_with(a, b, &base))).collect())
}

/// Streaming iterator over all primes `≤ n`.
pub struct PrimesUpTo {
    n: u64,
    base: Vec<u32>,
    segment_size: u64,
    next_lo: u64,
    buffer: std::vec::IntoIter<u64>,
}

impl Iterator for PrimesUpTo {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some(p) = self.buffer.next() {
                return Some(p);
            }
            if self.next_lo > self.n {
                return None;
            }
            let lo = self.next_lo;
            let hi = lo.saturating_add(self.segment_size - 1).min(self.n);
            let seg = sieve_with(lo, hi, &self.base);
            self.buffer = seg.iter().collect::<Vec<_>>().into_iter();
            self.next_lo = hi.saturating_add(1);
            if hi == u64::MAX {
                self.n = 0;
            }
        }
    }
}

/// All primes `≤ n`, ascending. Empty for `n < 2`.
pub fn primes_up_to(n: u64) -> PrimesUpTo {
    primes_up_to_with(n, &SieveConfig::default())
}

pub fn primes_up_to_with(n: u64, config: &SieveConfig) -> PrimesUpTo {
    PrimesUpTo {
        n,
        base: base_primes(isqrt(n)),
        segment_size: config.segment_size.min(1 << 20),
        next_lo: 2,
        buffer: Vec::new().into_iter(),
    }
}

/// Primes in `[lo, hi]` collected into a vector.
pub fn primes_between(lo: u64, hi: u64, config: &SieveConfig) -> Vec<u64> {
    map_segments(lo, hi, config, |s| s.iter().collect::<Vec<_>>()).into_iter().flatten().collect()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime `≤ n`, if any.
pub fn prev_prime(n: u64) -> Option<u64> {
    (2..=n).rev().find(|&k| is_prime_u64(k))
}

/// Smallest prime `≥ n`, if it fits in u64.
/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> Option<u64> {
    (n.checked_add(1)?.max(2)..=u64::MAX).find(|&k| is_prime_u64(k))
}
