use orbital_forge::amalgam::ValidationError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("error[{code}]: {err}", code = .0.code(), err = .0)]
    Validation(ValidationError),
    #[error("{0}")]
    Core(orbital_forge::Error),
    #[error("radius {radius} exceeds the spec file's max_radius {cap}")]
    RadiusCap { radius: usize, cap: usize },
    #[error("failed checks: {}", .0.join(", "))]
    Verify(Vec<String>),
}

impl From<orbital_forge::Error> for CliError {
    fn from(e: orbital_forge::Error) -> Self {
        match e {
            orbital_forge::Error::Validation(v) => CliError::Validation(v),
            other => CliError::Core(other),
        }
    }
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        CliError::Validation(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use orbital_forge::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::RadiusCap { .. } | CliError::Core(E::Capacity { .. }) => 3,
            CliError::Core(E::Unresolved(_)) => 4,
            CliError::Verify(_) | CliError::Core(E::Consistency(_)) => 5,
            CliError::Core(_) => 1,
        }
    }
}
