use std::fmt;

/// Failure of one run, split by exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Compute(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

/// Validation error naming a flag.
pub fn invalid(flag: &str, reason: impl fmt::Display) -> CliError {
    CliError::Validation(format!("{flag}: {reason}"))
}

/// Library parameter names that differ from their flags.
fn flag_for(name: &str) -> String {
    match name {
        "count" => "--levels".into(),
        "b" => "--exponent".into(),
        "D" => "--dim".into(),
        "N" => "--n".into(),
        other => format!("--{}", other.replace('_', "-")),
    }
}

impl From<boxdos_core::Error> for CliError {
    fn from(e: boxdos_core::Error) -> Self {
        match &e {
            boxdos_core::Error::InvalidArgument { name, reason } => invalid(&flag_for(name), reason),
            boxdos_core::Error::IncompleteBase { .. } => invalid("--e-max", e),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Compute(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
