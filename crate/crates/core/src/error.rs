use thiserror::Error;

use crate::family::Condition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite coordinate")]
    NonFinite,

    #[error("{0} must be nonzero")]
    ZeroVector(&'static str),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("point {index} coincides with its predecessor")]
    DuplicatePoint { index: usize },

    /// Inputs outside the domain of a closed-form formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("inadmissible parameters, violated conditions: {}", fmt_conditions(.0))]
    Inadmissible(Vec<Condition>),

    /// A geometric construction's preconditions do not hold.
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("degenerate point set: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_conditions(c: &[Condition]) -> String {
    c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

impl Error {
    /// Whether the error comes from geometry or formula domains rather than from
    /// bad arguments or I/O.
    pub fn is_geometric(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Inadmissible(_)
                | Error::Construction(_)
                | Error::Degenerate(_)
                | Error::DuplicatePoint { .. }
                | Error::ZeroVector(_)
                | Error::NonFinite
                | Error::TooFewPoints { .. }
        )
    }
}
