use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountertermError {
    #[error("tree {0} carries a polynomial decoration; the closed form needs n = 0")]
    Decorated(String),
    #[error("tree {0} is not neutral")]
    NotNeutral(String),
    #[error("tree {0} has a node without noise")]
    NoiseFreeNode(String),
    #[error("tree {key}: charge flip gives sign (-1)^{edges} = +1, so the pair cannot cancel")]
    EvenEdgeCount { key: String, edges: usize },
    #[error("tree {0} has no partner in the catalog")]
    Unpaired(String),
    #[error("pair {key} / {key_opp} does not cancel: sum is {sum}")]
    NonCancelling { key: String, key_opp: String, sum: String },
    #[error("symmetry factors of {0} and its charge flip differ")]
    SymmetryMismatch(String),
    #[error("decorated tree {0} is not covered by the parity rule")]
    ParityUncovered(String),
    #[error("ledger covers {covered} trees but the catalog has {expected} neutral negative trees")]
    Incomplete { covered: usize, expected: usize },
}
