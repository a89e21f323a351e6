//! Prime generation, prime sums and divisor-sum windows.

mod sieve;
mod sigma;
mod sums;

pub use sieve::{
    base_primes, is_prime_u64, isqrt, map_segments, next_prime, prev_prime, primes_between, primes_up_to,
    primes_up_to_with, segment_bounds, sieve_segment, PrimeSegment, PrimesUpTo, SieveConfig, DEFAULT_SEGMENT_SIZE,
};
pub use sigma::{factor_u64, sigma_single, sigma_window, SigmaWindow, SIGMA_EXACT_LIMIT};
pub use sums::{
    prime_sum, prime_sum_checkpoints, theta_sum, theta_sum_with, FloatSum, LogPrime, MertensTerm, PrimeTerm,
    SumOptions, AUDIT_PRECISION, DEFAULT_EXACT_LIMIT,
};
