use std::fmt;
use std::process::ExitCode;

/// A failure, classified by the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable files, unsupported requests.
    Usage(String),
    /// A graph, seeding-set or config file failed to parse.
    Parse(String),
    /// An update promise failed; `(G, k)` is outside the supported regime.
    Promise(String),
    /// A statistical check rejected the sampler's output.
    Statistical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Promise(_) => 3,
            CliError::Statistical(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Promise(m) => write!(f, "unsupported instance: {m}"),
            CliError::Statistical(m) => write!(f, "statistical test failed: {m}"),
        }
    }
}

impl From<chromatic_cftp::Error> for CliError {
    fn from(e: chromatic_cftp::Error) -> Self {
        use chromatic_cftp::Error as E;
        match e {
            E::Promise(_) => CliError::Promise(e.to_string()),
            E::Parse { .. } | E::Json(_) => CliError::Parse(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
