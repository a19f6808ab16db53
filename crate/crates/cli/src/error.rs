use sldkit_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Numerical(_) => 2,
        }
    }

    /// One line, `error:`-prefixed.
    pub fn diagnostic(&self) -> String {
        let kind = match self {
            Self::Usage(_) => "usage",
            Self::Numerical(_) => "numerical",
        };
        let text = self.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error: {kind}: {text}")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InconsistentSystem(_)
            | Error::KernelInconsistentTangent { .. }
            | Error::NonTangentForm(_)
            | Error::Degenerate(_) => Self::Numerical(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Usage(format!("malformed JSON: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Usage(format!("i/o: {e}"))
    }
}
