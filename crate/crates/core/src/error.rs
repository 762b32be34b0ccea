use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field order {order}: {reason}")]
    InvalidField { order: u64, reason: &'static str },

    #[error("operands belong to different fields (GF({left}) vs GF({right}))")]
    FieldMismatch { left: u32, right: u32 },

    #[error("value {value} is not an element of GF({order})")]
    ValueOutOfRange { value: u64, order: u32 },

    #[error("{context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid noise pmf: {0}")]
    InvalidPmf(String),

    /// A caller supplied an argument outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A scenario that is well-formed but cannot be run (e.g. degenerate rates).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{context}: candidate budget exceeded ({needed} candidates, budget {budget})")]
    BudgetExceeded {
        context: String,
        needed: u128,
        budget: u64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Attaches a description of the decode that ran out of budget.
    pub fn in_context(self, context: impl Into<String>) -> Self {
        match self {
            Error::BudgetExceeded { needed, budget, .. } => Error::BudgetExceeded {
                context: context.into(),
                needed,
                budget,
            },
            other => other,
        }
    }
}
