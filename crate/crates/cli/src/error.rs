use discernlab_core::Error as CoreError;
use discernlab_core::Verdict;

/// Process exit codes.
pub mod exit {
    /// Verdict `weakly_discerning`.
    pub const CERTIFIED: i32 = 0;
    /// Verdict `violated` or `inconclusive`.
    pub const NOT_CERTIFIED: i32 = 1;
    /// Invalid flags or configuration.
    pub const USAGE: i32 = 2;
    /// Dimension or degree cap exceeded, or sampling exhausted.
    pub const RESOURCE: i32 = 3;
    /// Missing, unreadable or corrupt input file.
    pub const INPUT: i32 = 4;
    /// Output could not be written, or an internal numerical failure.
    pub const INTERNAL: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("input: {0}")]
    Input(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Resource(_) => exit::RESOURCE,
            CliError::Input(_) => exit::INPUT,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::DimensionCap { .. } | CoreError::DegreeCap { .. } | CoreError::Sampling { .. } => {
                CliError::Resource(msg)
            }
            CoreError::Arity(_)
            | CoreError::DegenerateSpin
            | CoreError::Domain(_)
            | CoreError::Parse(_)
            | CoreError::SlotOutOfRange { .. }
            | CoreError::Rank { .. }
            | CoreError::EmptySector => CliError::Usage(msg),
            _ => CliError::Internal(msg),
        }
    }
}

pub fn verdict_exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::WeaklyDiscerning => exit::CERTIFIED,
        Verdict::Violated | Verdict::Inconclusive => exit::NOT_CERTIFIED,
    }
}
