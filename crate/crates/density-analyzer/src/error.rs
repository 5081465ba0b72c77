use alberti::AlbertiError;
use fourier_decomposition::DecompError;
use fragments::FragmentError;
use grid_measure::GridError;

/// Faults. Failed hypotheses are reported as branch values instead.
#[derive(Debug, thiserror::Error)]
pub enum AnalyzerError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("frame error: {0}")]
    Frame(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("local grid would need {cells} cells per side (limit {limit})")]
    LocalGrid { cells: usize, limit: usize },
    #[error("alberti: {0}")]
    Alberti(#[from] AlbertiError),
    #[error("fourier-decomposition: {0}")]
    Decomposition(#[from] DecompError),
    #[error("fragments: {0}")]
    Fragment(#[from] FragmentError),
    #[error("grid-measure: {0}")]
    Grid(#[from] GridError),
}

pub type Result<T> = std::result::Result<T, AnalyzerError>;
