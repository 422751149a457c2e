use flexbie::FlexError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("{0} check(s) failed")]
    Checks(usize),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Checks(_) => 4,
            CliError::Output(_) => 1,
        }
    }

    /// Wraps a library error with the stage it came from.
    pub fn at(stage: &str, e: FlexError) -> Self {
        match CliError::from(e) {
            CliError::Config(m) => CliError::Config(format!("{stage}: {m}")),
            CliError::Solver(m) => CliError::Solver(format!("{stage}: {m}")),
            other => other,
        }
    }
}

impl From<FlexError> for CliError {
    fn from(e: FlexError) -> Self {
        match e {
            FlexError::Solver(_) | FlexError::Quadrature(_) => CliError::Solver(e.to_string()),
            FlexError::Io(_) => CliError::Output(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
