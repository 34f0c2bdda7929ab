use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("cannot multiply trees whose roots both carry a noise ({left} and {right})")]
    BothRootsCharged { left: char, right: char },
    #[error("malformed tree key at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed rational `{0}`")]
    Rational(String),
    #[error("beta^2 = {0}·pi is supercritical (must lie in (0, 8))")]
    Supercritical(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
