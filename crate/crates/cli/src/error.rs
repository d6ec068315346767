use thiserror::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_MISSING_FIXTURES: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("fixture file not found: {0}")]
    MissingFixtures(String),

    #[error(transparent)]
    Core(#[from] sitterloc::Error),

    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::MissingFixtures(_) => EXIT_MISSING_FIXTURES,
            CliError::Core(e) => match e {
                sitterloc::Error::InvalidParameter(_)
                | sitterloc::Error::ExcludedMass
                | sitterloc::Error::Schema(_)
                | sitterloc::Error::Index { .. } => EXIT_USAGE,
                _ => EXIT_FAIL,
            },
            CliError::Output(_) => EXIT_FAIL,
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
