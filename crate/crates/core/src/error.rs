use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::Parse`] covers malformed textual input (diagram sources, nested-set
/// syntax, coefficient documents); every other variant is a validation failure
/// on well-formed input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("diagram has {0} vertices, at most 64 are supported")]
    Capacity(usize),

    #[error("subdiagram {0:#x} is not contained in the diagram")]
    NotSubset(u64),

    #[error("subdiagram {0} is not connected")]
    NotConnected(String),

    #[error("not a nested set: {0}")]
    NotNested(String),

    #[error("nested set is not maximal")]
    NotMaximal,

    #[error("pair of maximal nested sets is not elementary")]
    NotElementary,

    #[error("{what} = {value} out of range 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("weight function violates superadditivity: c({union}) = {value} <= c({left}) + c({right})")]
    Superadditivity {
        union: String,
        left: String,
        right: String,
        value: String,
    },

    #[error("invalid coefficient system: {0}")]
    Coefficients(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
