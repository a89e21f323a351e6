use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("precision {requested} outside the supported range (max {max} bits)")]
    PrecisionOutOfRange { requested: u32, max: u32 },
    #[error("enclosure [{lo}, {hi}] straddles an integer")]
    StraddlesInteger { lo: String, hi: String },
    #[error("comparison could not be decided: {0}")]
    Indeterminate(String),
    #[error("segment size or bound {len} exceeds the configured maximum {max}")]
    SegmentTooLarge { len: u64, max: u64 },
    #[error("{what} {value} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, value: u64, cap: u64 },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("divisor sum overflowed 64 bits at n = {n}")]
    SigmaOverflow { n: u64 },
    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("exact evaluation needs explicit prime/exponent pairs; the factorization has prime-range segments")]
    SegmentsPresent,
    #[error("floating-point audit failed for the term at p = {p}")]
    AuditFailed { p: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that more working precision may resolve.
    pub fn is_precision_limited(&self) -> bool {
        matches!(self, Error::StraddlesInteger { .. } | Error::Indeterminate(_))
    }
}
