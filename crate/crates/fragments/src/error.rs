#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FragmentError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("operation on the empty fragment")]
    Empty,
    #[error("t = {0} is not in the domain")]
    Domain(f64),
    #[error("not 1-Lipschitz between t = {0} and t = {1}")]
    NotLipschitz(f64, f64),
    #[error("precondition `{name}` failed: {detail}")]
    Precondition { name: String, detail: String },
    #[error("fragment outside the cone: witness ({0}, {1})")]
    Cone(f64, f64),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, FragmentError>;
