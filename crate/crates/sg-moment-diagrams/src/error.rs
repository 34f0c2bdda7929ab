use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentError {
    #[error("number of copies must be positive")]
    NoCopies,
    #[error("diagram has {nodes} nodes, at most {max} are supported")]
    TooManyNodes { nodes: usize, max: usize },
    #[error("members {0} and {1} overlap without being nested")]
    NotAForest(String, String),
    #[error("subtree {0} is not neutral with negative homogeneity")]
    NotDivergent(String),
    #[error("subtree {0} is not a member of the forest")]
    NotInForest(String),
    #[error("decomposition identity failed: {0}")]
    Decomposition(String),
}
