use crate::error::{Error, Result};

use super::sieve::isqrt;

/// Largest `hi` accepted by [`sigma_window`]; σ(n) stays far below 2^64 there.
pub const SIGMA_EXACT_LIMIT: u64 = (1u64 << 63) / 4;

/// Exact divisor sums σ(n) for every `n` in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaWindow {
    lo: u64,
    hi: u64,
    sigma: Vec<u64>,
}

impl SigmaWindow {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn get(&self, n: u64) -> Option<u64> {
        if n < self.lo || n > self.hi {
            return None;
        }
        Some(self.sigma[(n - self.lo) as usize])
    }

    pub fn values(&self) -> &[u64] {
        &self.sigma
    }

    /// `(n, σ(n))` pairs in ascending order of `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (self.lo..=self.hi).zip(self.sigma.iter().copied())
    }
}

/// Divisor sums over `[lo, hi]` by divisor pairs: every `d ≤ √hi` contributes
/// `d` and its cofactor `n/d` to each multiple `n` in the window.
pub fn sigma_window(lo: u64, hi: u64) -> Result<SigmaWindow> {
    if lo < 1 || lo > hi {
        return Err(Error::InvalidRange(format!("sigma window [{lo}, {hi}] needs 1 <= lo <= hi")));
    }
    if hi > SIGMA_EXACT_LIMIT {
        return Err(Error::CapExceeded { what: "sigma window end", value: hi, cap: SIGMA_EXACT_LIMIT });
    }
    let len = (hi - lo + 1) as usize;
    let mut sigma = vec![0u64; len];
    for d in 1..=isqrt(hi) {
        // Cofactors k ≥ d only, so each pair {d, k} is counted once.
        let mut k = d.max(lo.div_ceil(d));
        let mut n = k * d;
        while n <= hi {
            let add = if k == d { d } else { d + k };
            let slot = &mut sigma[(n - lo) as usize];
            *slot = slot.checked_add(add).ok_or(Error::SigmaOverflow { n })?;
            k += 1;
            n += d;
        }
    }
    Ok(SigmaWindow { lo, hi, sigma })
}

/// σ(n) by trial division; used for single values outside any window.
pub fn sigma_single(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("sigma(0) is undefined".into()));
    }
    let mut total: u64 = 1;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut term: u64 = 1;
            let mut pk: u64 = 1;
            while m % p == 0 {
                m /= p;
                pk = pk.checked_mul(p).ok_or(Error::SigmaOverflow { n })?;
                term = term.checked_add(pk).ok_or(Error::SigmaOverflow { n })?;
            }
            total = total.checked_mul(term).ok_or(Error::SigmaOverflow { n })?;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        total = total.checked_mul(m + 1).ok_or(Error::SigmaOverflow { n })?;
    }
    Ok(total)
}

/// Prime factorisation by trial division, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
