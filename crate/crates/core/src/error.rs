use thiserror::Error;

/// Errors raised by the algebra, cipher and analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not irreducible")]
    NotIrreducible(String),
    #[error("modulus degree {found} does not match extension degree {expected}")]
    DegreeMismatch { expected: u32, found: usize },
    #[error("modulus must be monic")]
    NotMonic,
    #[error("field order {0} exceeds the supported range")]
    FieldTooLarge(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("{k} does not divide the extension degree {r}")]
    NotADivisor { k: u32, r: u32 },
    #[error("invalid element {0}")]
    InvalidElement(String),
    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {0} out of range")]
    IndexOutOfRange(String),
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    TooLarge {
        what: String,
        size: String,
        cap: u64,
    },
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("expected {expected} round keys, found {found}")]
    KeyCountMismatch { expected: usize, found: usize },
    #[error("closed-form S-box parity requires a global S-box; use the oracle")]
    PerPositionMode,
    #[error("permutation sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("map is not a bijection: states {first} and {second} both map to {image}")]
    NotBijective { first: u64, second: u64, image: u64 },
    #[error("orbit exceeded the cap {0}")]
    CapExceeded(u64),
    #[error("parity criterion not triggered: {0}")]
    InconclusiveParity(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: String, name: String },
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn too_large(what: impl Into<String>, size: impl ToString, cap: u64) -> Self {
        Error::TooLarge {
            what: what.into(),
            size: size.to_string(),
            cap,
        }
    }

    /// True for the family of errors that signal an enumeration or size cap.
    pub fn is_too_large(&self) -> bool {
        matches!(
            self,
            Error::TooLarge { .. } | Error::FieldTooLarge(_) | Error::CapExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
