use std::path::Path;

/// Failures of a command, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("numerical: {0}")]
    Numerical(elastinv_core::Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    /// 3 config, 4 numerical, 5 io (clap uses 2 for usage errors).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<elastinv_core::Error> for CliError {
    fn from(e: elastinv_core::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numerical(e)
        }
    }
}
