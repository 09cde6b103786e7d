use thiserror::Error;

/// Failures of the command line front end.
///
/// Input problems (usage, unreadable or unparsable files, unresolved
/// references) exit with 1; numeric invariant failures exit with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("unknown preset `{0}` (available: coin, stern-gerlach, cat-box, cat-master)")]
    UnknownPreset(String),

    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },

    #[error("parse error in {source_name} at line {line}, column {column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation in {object}: {invariant} ({detail})")]
    Schema {
        object: String,
        invariant: &'static str,
        detail: String,
    },

    #[error("validation failed for {object}: {invariant} ({detail})")]
    Invalid {
        object: String,
        invariant: &'static str,
        detail: String,
    },

    #[error("{object}: {source}")]
    Engine {
        object: String,
        #[source]
        source: eventuality::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::UnknownPreset(_)
            | CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Schema { .. } => 1,
            CliError::Invalid { .. } | CliError::Engine { .. } => 2,
        }
    }

    pub(crate) fn schema(
        object: impl Into<String>,
        invariant: &'static str,
        detail: impl Into<String>,
    ) -> Self {
        CliError::Schema {
            object: object.into(),
            invariant,
            detail: detail.into(),
        }
    }

    pub(crate) fn engine(object: impl Into<String>) -> impl FnOnce(eventuality::Error) -> Self {
        let object = object.into();
        move |source| CliError::Engine { object, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
