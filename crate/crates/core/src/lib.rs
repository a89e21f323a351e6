pub mod cli;
pub mod criterion;
pub mod error;
pub mod extremal;
pub mod factorization;
pub mod inequality;
pub mod mertens;
pub mod numerics;
pub mod primes;
pub mod report;

pub use error::{Error, Result};
