use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiscaleError {
    #[error("scale assignment has {got} entries, the diagram has {expected} generalized edges")]
    Length { got: usize, expected: usize },
    #[error("preimage of {forest} is not an interval: {witness}")]
    NotAnInterval { forest: String, witness: String },
}
