use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{module}: {source}")]
    Module { module: &'static str, source: exwkb::Error },
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use exwkb::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Module { source, .. } => match source {
                E::Syntax { .. }
                | E::NegativeExponent { .. }
                | E::FractionalExponent { .. }
                | E::DivisionByNonConstant { .. }
                | E::DivisionByZero { .. }
                | E::Invalid(_) => 2,
                _ => 3,
            },
            CliError::Failed(_) => 1,
        }
    }
}

/// Tags a core error with the module that raised it.
pub fn module(name: &'static str) -> impl Fn(exwkb::Error) -> CliError {
    move |source| CliError::Module { module: name, source }
}

pub type Result<T> = std::result::Result<T, CliError>;
