use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value that should satisfy an internal invariant does not.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Checked integer arithmetic overflowed.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A group could not be constructed from the given parameters.
    #[error("cannot construct {group}: {reason}")]
    Construction { group: String, reason: String },

    /// A textual input failed to parse.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// The requested computation exceeds the configured size cap.
    #[error("{what} has {size} elements, above the cap of {cap}")]
    TooLarge { what: String, size: u64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn construction(group: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Construction {
            group: group.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
