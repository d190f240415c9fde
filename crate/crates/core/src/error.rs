use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("entry count {len} is not a perfect square")]
    NotSquare { len: usize },
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (max |m - m^dagger| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix has a negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
    #[error("invalid subsystem selection: {reason}")]
    InvalidSubsystems { reason: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("parameter {name} = {value} outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("parameter {name} is not finite")]
    NotFinite { name: &'static str },
    #[error("expected a {expected}-qubit state, got dimension {dim}")]
    WrongQubitCount { expected: usize, dim: usize },
    #[error("not a density matrix: {reason}")]
    Invalid { reason: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("formula domain violation in term `{term}`: log of {argument}")]
    DomainViolation { term: &'static str, argument: String },
    #[error("spectrum entry {index} = {re:e}{im:+e}i is not a nonnegative real")]
    ComplexSpectrum { index: usize, re: f64, im: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no sign change of the measure difference in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("numerical failure at {point}: {source}")]
    Numerical {
        point: String,
        #[source]
        source: StateError,
    },
}
