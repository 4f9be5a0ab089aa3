use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] rician_lowsnr::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use rician_lowsnr::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Core(E::Validity { .. }) => EXIT_VALIDATION,
            CliError::Core(E::Domain { .. }) => EXIT_USAGE,
            CliError::Core(_) => EXIT_NUMERIC,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_NUMERIC,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
