use thiserror::Error;

pub type Result<T> = std::result::Result<T, PdlaError>;

#[derive(Debug, Error)]
pub enum PdlaError {
    /// A parameter lies outside the range an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("element {element} arrived but belongs to no set")]
    InfeasibleElement { element: usize },

    #[error("instance has no feasible solution: {0}")]
    Infeasible(String),

    #[error("{what} is {got}, above the supported limit of {limit}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("update of variable {id} from {old} to {new} is not an increase")]
    NonMonotone { id: usize, old: f64, new: f64 },

    #[error("ledger increment must be finite and nonnegative, got {0}")]
    NegativeIncrement(f64),

    #[error("iteration cap of {cap} reached while {context}")]
    IterationCap { cap: usize, context: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl PdlaError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        PdlaError::Domain(msg.into())
    }
}
