use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("not in span: reconstruction residual {residual:.3e}")]
    NotInSpan { residual: f64 },

    #[error("not a subalgebra: bracket residual outside span {residual:.3e}")]
    NotSubalgebra { residual: f64 },

    #[error("basis is linearly dependent (Gram condition number {condition:.3e})")]
    DependentBasis { condition: f64 },

    #[error("metric is not positive definite")]
    SingularMetric,

    #[error("not a (κ,μ) candidate: {0}")]
    NotKappaMuCandidate(String),

    #[error("structure is Sasakian (κ = 1); quantity undefined")]
    Sasakian,

    #[error("Boeckx invariant |I| = 1 is a boundary case")]
    BoundaryInvariant,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
