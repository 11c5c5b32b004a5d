use thiserror::Error;

pub type Result<T> = std::result::Result<T, PrismError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrismError {
    #[error("points {0} and {1} have identical closures; the space is not T0")]
    NotT0(String, String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("invalid family `{family}`: {reason}")]
    InvalidFamily { family: String, reason: String },
    #[error("family `{family}` declares member height {hint} but its members sit above a point of height {computed}")]
    InconsistentHint {
        family: String,
        hint: u32,
        computed: u32,
    },
    #[error("strata check failed: {0}")]
    ChecksFailed(String),
    #[error("subgroup key `{key}` does not belong to group {group}")]
    KeyMismatch { group: String, key: String },
    #[error("action of dimension {0} is not supported (at most 3)")]
    DimTooLarge(usize),
    #[error("subspace is not invariant under generator {0}")]
    NotInvariant(usize),
    #[error("space is not finitely dispersible")]
    NotDispersible,
    #[error("invalid integer action: {0}")]
    InvalidAction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("json: {0}")]
    Json(String),
}

impl PrismError {
    /// Variant name, printed by the command line front end.
    pub fn name(&self) -> &'static str {
        match self {
            PrismError::NotT0(..) => "NotT0",
            PrismError::InvalidTopology(_) => "InvalidTopology",
            PrismError::InvalidOrder(_) => "InvalidOrder",
            PrismError::UnknownPoint(_) => "UnknownPoint",
            PrismError::Duplicate(_) => "Duplicate",
            PrismError::InvalidFamily { .. } => "InvalidFamily",
            PrismError::InconsistentHint { .. } => "InconsistentHint",
            PrismError::ChecksFailed(_) => "ChecksFailed",
            PrismError::KeyMismatch { .. } => "KeyMismatch",
            PrismError::DimTooLarge(_) => "DimTooLarge",
            PrismError::NotInvariant(_) => "NotInvariant",
            PrismError::NotDispersible => "NotDispersible",
            PrismError::InvalidAction(_) => "InvalidAction",
            PrismError::Unsupported(_) => "Unsupported",
            PrismError::InvalidArgument(_) => "InvalidArgument",
            PrismError::Json(_) => "Json",
        }
    }
}

impl From<serde_json::Error> for PrismError {
    fn from(e: serde_json::Error) -> Self {
        PrismError::Json(e.to_string())
    }
}
