use fragments::FragmentError;
use grid_measure::GridError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlbertiError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition `{name}` failed: {detail}")]
    Precondition { name: String, detail: String },
    #[error("entry {index} is outside the cone: witness ({t1}, {t2})")]
    Cone { index: usize, t1: f64, t2: f64 },
    #[error("target has mass {mass} in cell {cell} at {center:?}, where the family has none")]
    AbsoluteContinuity { cell: usize, center: Vec<f64>, mass: f64 },
    #[error("cone cover misses direction {0:?}")]
    Cover(Vec<f64>),
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

pub type Result<T> = std::result::Result<T, AlbertiError>;
