use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// Each variant names the violated invariant together with the measured
/// defect, so callers (and the CLI) can report failures without clamping.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("NotHermitian: max |H - H*| entry = {defect:e} exceeds tolerance {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("TraceNotOne: trace = {trace} (|trace - 1| = {defect:e}, tolerance {tol:e})")]
    TraceNotOne { trace: f64, defect: f64, tol: f64 },

    #[error("NotPSD: minimum eigenvalue {min_eigenvalue:e} below {floor:e}")]
    NotPsd { min_eigenvalue: f64, floor: f64 },

    #[error("NotFullRank: minimum eigenvalue {min_eigenvalue:e} not above support threshold {threshold:e}")]
    NotFullRank { min_eigenvalue: f64, threshold: f64 },

    #[error("DomainError: {function} undefined at eigenvalue {eigenvalue:e}")]
    DomainError { function: &'static str, eigenvalue: f64 },

    #[error("DomainError: {0}")]
    OutsideDomain(String),

    #[error("ConvergenceFailure: {0}")]
    ConvergenceFailure(String),

    #[error("TargetMismatch: transported state misses target by {defect:e} (Frobenius), tolerance {tol:e}")]
    TargetMismatch { defect: f64, tol: f64 },

    #[error("QuadratureNotConverged: relative change {change:e} after {nodes} nodes (rel_tol {rel_tol:e})")]
    QuadratureNotConverged { nodes: usize, change: f64, rel_tol: f64 },

    #[error("SupportViolation: p[{index}] = {p:e} > 0 where q[{index}] = {q:e}")]
    SupportViolation { index: usize, p: f64, q: f64 },

    #[error("InvalidDistribution: {0}")]
    InvalidDistribution(String),

    #[error("NotInRange: {0}")]
    NotInRange(String),

    #[error("InvalidShape: {0}")]
    InvalidShape(String),

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    #[error("NotTracePreserving: max |sum K*K - I| entry = {defect:e} exceeds tolerance {tol:e}")]
    NotTracePreserving { defect: f64, tol: f64 },

    #[error("InvalidPovm: {0}")]
    InvalidPovm(String),

    #[error("UnknownClaim: {0}")]
    UnknownClaim(String),

    #[error("ConfigError: {0}")]
    Config(String),
}

impl Error {
    /// True for failures of the numerics themselves rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure(_)
                | Error::TargetMismatch { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::NotInRange(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
