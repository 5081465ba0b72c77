use grid_measure::GridError;

#[derive(Debug, thiserror::Error)]
pub enum DecompError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("frame lies in the wave cone: gap {gap:.3e} attained at xi = {xi:?}")]
    WaveCone { gap: f64, xi: Vec<f64> },
    #[error("hypothesis `{name}` failed: {lhs:.6e} > {rhs:.6e}")]
    Hypothesis { name: String, lhs: f64, rhs: f64 },
    #[error(transparent)]
    Grid(#[from] GridError),
}

pub type Result<T> = std::result::Result<T, DecompError>;
