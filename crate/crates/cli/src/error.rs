use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] hkr_core::Error),

    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    /// Process exit code: 2 for bad input, 1 for anything that went wrong at run time.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if is_input_error(e) => 2,
            _ => 1,
        }
    }
}

fn is_input_error(e: &hkr_core::Error) -> bool {
    use hkr_core::Error::*;
    matches!(
        e,
        InvalidGraph(_) | NegativeEdgeCount(_) | Parse(_) | DimensionMismatch { .. } | WrongDegree(_) | AxisOutOfRange { .. }
    )
}
