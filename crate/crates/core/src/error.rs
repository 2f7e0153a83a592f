use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported variety `{0}`")]
    UnsupportedVariety(String),

    #[error("invalid Gram matrix: {0}")]
    BadGram(String),

    #[error("classes live on different varieties ({left} vs {right})")]
    ModelMismatch { left: String, right: String },

    #[error("unknown basis class `{name}` on {variety}")]
    UnknownBasisClass { variety: String, name: String },

    #[error("expected a pure codimension-1 class, got {0}")]
    NotCodimOne(String),

    #[error("non-integral value {value} in {context}")]
    NonIntegral { context: String, value: String },

    #[error("class is not in the span of the {basis} basis")]
    NotInSpan { basis: String },

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },

    #[error("Picard lattices differ")]
    LatticeMismatch,

    #[error("{0} is not a K3 model")]
    NotK3(String),

    #[error("zero vector has no lift")]
    ZeroVector,

    #[error("({0}, {1}) is not covered by any closed-form lift")]
    OutsideCoverage(i64, i64),

    #[error("class ({0}, {1}) is not in the image of the pushforward")]
    NotInImage(i64, i64),

    #[error("source class does not match the setup's source lattice: {0}")]
    WrongSource(String),

    #[error("degenerate lattice: {0}")]
    Degenerate(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("closed-form lift failed its recheck: {0}")]
    CertificateFailed(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Internal consistency failures (as opposed to bad user input).
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NonIntegral { .. }
                | Error::NotInSpan { .. }
                | Error::Overflow(_)
                | Error::CertificateFailed(_)
        )
    }
}
