use thiserror::Error;

/// Errors raised by model construction, oracles and searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),

    #[error("unknown item {0}")]
    UnknownItem(String),

    /// A player's own strategy is not in their feasibility family.
    #[error("set {set} is not feasible for player {player}")]
    InfeasibleStrategy { player: usize, set: String },

    #[error("profile is invalid: {0}")]
    InvalidProfile(String),

    /// A search hit its node cap before reaching a decision.
    #[error("search budget of {limit} nodes exceeded during {context}")]
    BudgetExceeded { limit: u64, context: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
