use thiserror::Error;

/// Errors raised by the library. Callers map these onto CLI exit codes:
/// configuration problems are `Config`, everything else is a runtime failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("pole of {op} at the requested argument")]
    Pole { op: &'static str },

    #[error("{op} did not converge (achieved estimate {estimate:e}, error estimate {error:e})")]
    NoConvergence {
        op: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("denominator of {op} vanishes: {msg}")]
    Degenerate { op: &'static str, msg: String },

    #[error("resolution error: {0}")]
    Resolution(String),
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal validity diagnostic attached to results.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
}

impl Warning {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Warning {
            code,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}
