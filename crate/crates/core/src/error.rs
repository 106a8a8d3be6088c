use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degenerate configuration: {0} is undefined")]
    Degenerate(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("inadmissible comparison function: {0}")]
    Inadmissible(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("estimation error: {0}")]
    Estimation(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
