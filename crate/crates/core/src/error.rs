use thiserror::Error;

/// Errors raised by graph construction, the numerical routines and the
/// experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("self-loop at node {node}")]
    SelfLoop { node: usize },
    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("edge ({i}, {j}) has non-positive weight {weight}")]
    NonPositiveWeight { i: usize, j: usize, weight: f64 },
    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver failed: {0}")]
    EigenFailure(String),
    #[error("iterative eigensolver did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("regularization parameter must be non-negative, got {0}")]
    NegativeAlpha(f64),
    #[error("linear solve failed: relative residual {residual:e}")]
    SolveFailure { residual: f64 },
    #[error("no connected sample after {attempts} attempts")]
    GenerationFailure { attempts: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("signal has zero power outside the constant mode")]
    ZeroSignalPower,
    #[error("empty sample list")]
    EmptyList,
    #[error("invalid spectral bounds: lambda_2 = {lambda_2}, lambda_n = {lambda_n}")]
    InvalidSpectrumBounds { lambda_2: f64, lambda_n: f64 },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad input data rather than numerics.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::TooFewNodes(_)
                | Error::SelfLoop { .. }
                | Error::DuplicateEdge { .. }
                | Error::NonPositiveWeight { .. }
                | Error::IndexOutOfRange { .. }
                | Error::Disconnected { .. }
                | Error::DimensionMismatch { .. }
                | Error::Parse { .. }
                | Error::Io(_)
                | Error::Csv(_)
                | Error::EmptyList
        )
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
