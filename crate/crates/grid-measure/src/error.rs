use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid parameter: {0}")]
    Parameter(String),
    #[error("grid input: {0}")]
    Input(String),
    #[error("{count} point(s) outside the grid box, first offenders: {first:?}")]
    OutsideBox { count: usize, first: Vec<usize> },
    #[error("grid format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, GridError>;
