use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}, column {column} (byte offset {offset}): {message}")]
    Parse {
        line: usize,
        column: usize,
        offset: usize,
        message: String,
    },

    /// A single customer cannot be served by any tour on its own.
    #[error("customer {id} cannot be served by a single vehicle: {reason}")]
    InfeasibleCustomer { id: u32, reason: String },

    /// The routing time budget ran out before feasibility could be decided.
    #[error("router time budget exhausted on a cluster of {cluster_size} customers")]
    BudgetExhausted { cluster_size: usize },

    #[error("local search exceeded its iteration bound of {bound} accepted moves")]
    IterationBound { bound: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
