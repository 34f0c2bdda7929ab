use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("beta_bar = {0} must lie strictly below 2 for the enumeration to terminate")]
    NonTerminating(String),
    #[error("catalog exceeded {limit} trees; raise the limit or lower beta_bar")]
    TooManyTrees { limit: usize },
    #[error("classification inconsistent for tree {key}: {msg}")]
    Inconsistent { key: String, msg: String },
}
