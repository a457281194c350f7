//! One error type for the whole engine. Variants are grouped roughly by the
//! module that raises them; all carry enough context to be actionable from a
//! CLI message.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // series construction and access
    #[error("truncation order must be positive")]
    ZeroTruncation,
    #[error("{given} coefficients exceed the truncation order {trunc}")]
    TooManyCoefficients { given: usize, trunc: usize },
    #[error("coefficient {index} requested, but the series is only known below order {trunc}")]
    CoeffBeyondTruncation { index: usize, trunc: usize },
    #[error("a series of order {have} is too short here; order {need} is required")]
    InsufficientTruncation { need: usize, have: usize },

    // coefficient modes
    #[error("cannot combine an exact series with a modular one")]
    MixedModes,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("modulus must be at least 2 (got {0})")]
    ModulusTooSmall(u64),
    #[error("series is already reduced modulo {0}")]
    AlreadyModular(u64),
    #[error("series is exact; a modular series was expected")]
    NotModular,

    // algebra
    #[error("constant term {0} is not invertible here")]
    NonUnitConstant(String),
    #[error("substitution step must be at least 1")]
    ZeroSubstitutionStep,
    #[error("dissection stride must be at least 1")]
    ZeroDissectionStride,
    #[error("dissection residue {j} must be smaller than the stride {t}")]
    DissectionIndexTooLarge { t: usize, j: usize },
    #[error("dissecting a series of order {trunc} in class {j} mod {t} keeps no coefficients")]
    EmptyDissection { trunc: usize, t: usize, j: usize },
    #[error("needed truncation {needed} exceeds the configured ceiling {cap}; raise it with set_max_truncation or QCONG_MAX_TRUNC")]
    TruncationCapExceeded { needed: usize, cap: usize },

    // product factories
    #[error("pochhammer offsets must be positive (got a={a}, b={b})")]
    BadPochhammer { a: usize, b: usize },
    #[error("theta exponents must be positive (got a={a}, b={b})")]
    BadTheta { a: usize, b: usize },
    #[error("eta factor index {delta} does not divide the level {level}")]
    EtaDeltaNotDivisor { delta: u64, level: u64 },
    #[error("eta quotient has no factors")]
    EmptyEtaQuotient,
    #[error("eta prefactor exponent {0} is not an integer")]
    FractionalPrefactor(String),
    #[error("eta prefactor exponent {0} is negative")]
    NegativePrefactor(String),

    // number theory and verification domains
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime {p} is not usable here: {reason}")]
    UnusablePrime { p: u64, reason: String },
    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),
    #[error("duplicate registry id: {0}")]
    DuplicateId(String),
    #[error("registry entry {id} is malformed: {reason}")]
    MalformedEntry { id: String, reason: String },
    #[error("registry could not be read: {0}")]
    Registry(String),

    // parsing and argument validation
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
