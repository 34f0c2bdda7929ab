use sg_moment_diagrams::MomentError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PowerError {
    #[error("{got} vertices exceed the enumeration cap of {max}")]
    TooManyVertices { got: usize, max: usize },
    #[error("graph is not connected at scale 0")]
    Disconnected,
    #[error("{edges} edges but {scales} scales")]
    ScaleCount { edges: usize, scales: usize },
    #[error("edge ({0}, {1}) leaves the vertex set")]
    BadEdge(usize, usize),
    #[error("cut sets overlap or contain forest edges: {0}")]
    BadCuts(String),
    #[error(transparent)]
    Moment(#[from] MomentError),
}
