use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlexError {
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("unknown boundary condition `{0}`")]
    UnknownStrategy(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FlexError>;
