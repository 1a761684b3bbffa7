use thiserror::Error;

/// Errors raised by the spectral workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid weight exponents a={a}, b={b}: both must exceed -1")]
    InvalidExponents { a: f64, b: f64 },

    #[error("integral diverges: combined endpoint exponents a={a}, b={b}")]
    Divergent { a: f64, b: f64 },

    #[error("mode with m={m}, n={n} diverges at z=1 (n < |m|)")]
    DivergentAtNorthPoleOfMap { m: i64, n: usize },

    #[error("mode with m={m}, n={n} vanishes identically")]
    VanishingMode { m: i64, n: usize },

    #[error("(m={m}, n={n}) outside the monopole-harmonic range for q={q}")]
    OutOfRange { q: f64, m: i64, n: i64 },

    #[error("flux q={0} is not an integer")]
    NonIntegerFlux(f64),

    #[error("flux q={0} is an integer")]
    IntegerFlux(f64),

    #[error("sector mismatch: expected F={expected}, got F={got}")]
    SectorMismatch { expected: u8, got: u8 },

    #[error("angular momentum mismatch: m={0} vs m={1}")]
    AngularMismatch(i64, i64),

    #[error("relation inapplicable: factorial argument {0} is a negative integer")]
    RelationInapplicable(f64),

    #[error("overflow evaluating Jacobi polynomial (n={n}, alpha={alpha}, beta={beta})")]
    Overflow { n: usize, alpha: f64, beta: f64 },

    #[error("point z={0} outside the open interval (-1, 1)")]
    OutsideInterval(f64),

    #[error("mode is not a member of a closed-form family")]
    NotAFamilyMode,

    #[error("Gram matrix is singular or not positive definite")]
    SingularGram,

    #[error("eigensolver failed to converge (residual {0})")]
    NoConvergence(f64),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
