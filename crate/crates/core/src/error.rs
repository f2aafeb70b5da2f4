use thiserror::Error;

/// Errors raised across the library. Variant names double as the diagnostic
/// names printed by the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NotHermitian: deviation {deviation:e} exceeds tolerance {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("NotPSD: eigenvalue {min_eig:e} below tolerance")]
    NotPsd { min_eig: f64 },
    #[error("NotPD: operator is singular (smallest eigenvalue {min_eig:e})")]
    NotPd { min_eig: f64 },
    #[error("NotNormalized: trace {trace} differs from 1")]
    NotNormalized { trace: f64 },
    #[error("DimMismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("SupportMismatch: supports differ and neither operator is definite")]
    SupportMismatch,
    #[error("SupportViolation: first argument not supported in the second")]
    SupportViolation,
    #[error("DisjointSupports: the supports do not intersect")]
    DisjointSupports,
    #[error("CapExceeded: required size {required} exceeds cap {cap}")]
    CapExceeded { required: usize, cap: usize },
    #[error("ZeroOperator")]
    ZeroOperator,
    #[error("EigenNonConvergence: {0}")]
    EigenNonConvergence(String),
    #[error("OutOfRange: {what} = {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("Degenerate: psi is affine, no unique rate parameter")]
    Degenerate,
    #[error("NegativeTarget: {0}")]
    NegativeTarget(f64),
    #[error("NTooSmall: n = {n}, need n >= {needed}")]
    NTooSmall { n: usize, needed: usize },
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("KindMismatch: {0}")]
    KindMismatch(String),
    #[error("CertificateFailed: generator {generator} ({side}) has slack {slack:e}")]
    CertificateFailed {
        side: &'static str,
        generator: usize,
        slack: f64,
    },
    #[error("CommutingInput: the construction needs non-commuting operators")]
    CommutingInput,
    #[error("ScanFailed: {0}")]
    ScanFailed(String),
    #[error("DepthTooSmall: depth {m} < required {needed}")]
    DepthTooSmall { m: u64, needed: u64 },
    #[error("DegenerateFamily: vectors {0} and {1} coincide")]
    DegenerateFamily(usize, usize),
    #[error("NotSemiClassical: [rho_{0}, sigma_{1}] != 0")]
    NotSemiClassical(usize, usize),
    #[error("InfiniteValue: {0}")]
    InfiniteValue(String),
    #[error("NonConvergence: {0}")]
    NonConvergence(String),
    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
