use alberti::AlbertiError;
use density_analyzer::AnalyzerError;
use fourier_decomposition::DecompError;
use fragments::FragmentError;
use grid_measure::GridError;

/// Faults, named by the module that raised them. Failed hypotheses are not faults.
#[derive(Debug, thiserror::Error)]
pub enum GmtError {
    /// Malformed scenario or a parameter outside its documented range.
    #[error("scenario: {0}")]
    Scenario(String),
    #[error("io: {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("grid-measure: {0}")]
    Grid(#[from] GridError),
    #[error("fourier-decomposition: {0}")]
    Decomposition(#[from] DecompError),
    #[error("fragments: {0}")]
    Fragment(#[from] FragmentError),
    #[error("alberti: {0}")]
    Alberti(#[from] AlbertiError),
    #[error("density-analyzer: {0}")]
    Analyzer(#[from] AnalyzerError),
}

impl GmtError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    /// 2 for scenario errors, 1 for other faults.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Scenario(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, GmtError>;
