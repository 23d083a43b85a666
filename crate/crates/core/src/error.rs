use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("element budget exceeded: {what} needs {needed} elements, budget is {limit}")]
    Budget {
        what: String,
        needed: u128,
        limit: u128,
    },

    /// A truncated monad was asked for an element beyond its degree bound.
    #[error("out of range for truncation degree {degree}: {what}")]
    OutOfRange { degree: usize, what: String },

    #[error("value {value} is not an element of {carrier}")]
    NotAnElement { value: String, carrier: String },

    #[error("map is not idempotent at {0}")]
    NotIdempotent(String),

    #[error("square does not commute at {0}")]
    NonCommuting(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown name: {0}")]
    Unknown(String),
}

impl Error {
    pub fn budget(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::Budget {
            what: what.into(),
            needed,
            limit,
        }
    }

    pub fn mismatch(what: impl Into<String>) -> Self {
        Error::CarrierMismatch(what.into())
    }

    pub fn is_out_of_range(&self) -> bool {
        matches!(self, Error::OutOfRange { .. })
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Element budget guarding carrier construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: u128,
}

impl Budget {
    pub const DEFAULT_ELEMENTS: u128 = 1 << 20;

    pub fn new(max_elements: u128) -> Self {
        Budget {
            max_elements: max_elements.max(1),
        }
    }

    pub fn check(&self, what: impl FnOnce() -> String, needed: u128) -> Result<()> {
        if needed > self.max_elements {
            Err(Error::budget(what(), needed, self.max_elements))
        } else {
            Ok(())
        }
    }

    /// Total member count allowed inside family-valued carriers (filters).
    pub fn max_cells(&self) -> u128 {
        self.max_elements.saturating_mul(32)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_ELEMENTS)
    }
}
