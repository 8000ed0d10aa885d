use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is excluded from the torus group (p must not be 2 or 5)")]
    ExcludedPrime(u64),
    #[error("({x}, {y}) does not lie on x^2 - 5y^2 = 1 mod {p}")]
    NotOnCurve { x: u64, y: u64, p: u64 },
    #[error("points belong to different groups: mod {0} and mod {1}")]
    ModulusMismatch(u64, u64),
    #[error("{0} is not a square root of 5 mod {1}")]
    InvalidSqrt5(u64, u64),
    #[error("5 is not a quadratic residue mod {0}")]
    NoSqrt5(u64),
    #[error("factorization of {factored} does not match group order {order}")]
    FactorizationMismatch { factored: u64, order: u64 },
    #[error("cannot factor zero")]
    FactorZero,
    #[error("{what} is {value}, above the enumeration bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u128,
        bound: u128,
    },
    #[error("{0}")]
    OutOfRange(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("closed forms disagree: {0}")]
    ClosedFormInconsistent(String),
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
    #[error("at prime {p}: {message}")]
    AtPrime { p: u64, message: String },
}
