use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter set or geometry that violates a structural invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// Input that should be Hermitian-symmetric (or real at DC/Nyquist) is not.
    #[error("symmetry violation: {0}")]
    Symmetry(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed FBEG stream.
    #[error("format error at byte offset {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("gain stream exhausted: no gains for frame {frame}")]
    StreamExhausted { frame: usize },

    #[error("audio: {0}")]
    Audio(String),

    /// A computed quantity left its guaranteed range (non-finite values and similar).
    #[error("numeric invariant violated: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn format(offset: u64, msg: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: msg.into(),
        }
    }
}
