use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("division by the zero polynomial")]
    ZeroModulus,

    #[error("order undefined for {0}: need a nonconstant polynomial with constant term 1")]
    OrderUndefined(String),

    #[error("{0} is not primitive")]
    NotPrimitive(String),

    #[error("{0} is not coprime to {1}")]
    NotCoprime(String, String),

    #[error("exponents {0} and {1} are not coprime")]
    ExponentsNotCoprime(u64, u64),

    #[error("{given} is not the order of {poly} (order is {actual})")]
    ExponentMismatch { poly: String, given: u64, actual: u64 },

    #[error("weight {0} is not supported here (expected {1})")]
    UnsupportedWeight(usize, &'static str),

    #[error("degree {0} is outside the supported range (at most {1})")]
    DegreeUnsupported(usize, usize),

    #[error("{what} = {value} exceeds the cap {cap}{hint}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
        hint: &'static str,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("no {t}-nomial multiple of degree at most {limit}")]
    NoMultiple { t: usize, limit: u64 },

    #[error("estimate undefined: there are no multiples")]
    NoMultiples,
}

/// Coarse classification used by the command line to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Hypothesis,
    Cap,
    Other,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::CapExceeded { .. } => ErrorKind::Cap,
            Error::NoMultiple { .. } => ErrorKind::Cap,
            Error::OrderUndefined(_)
            | Error::NotPrimitive(_)
            | Error::NotCoprime(..)
            | Error::ExponentsNotCoprime(..)
            | Error::ExponentMismatch { .. }
            | Error::UnsupportedWeight(..)
            | Error::DegreeUnsupported(..)
            | Error::Invalid(_) => ErrorKind::Hypothesis,
            Error::ZeroModulus | Error::NoMultiples => ErrorKind::Other,
        }
    }

    pub(crate) fn cap(what: &'static str, value: u64, cap: u64) -> Self {
        Error::CapExceeded {
            what,
            value,
            cap,
            hint: "",
        }
    }
}
