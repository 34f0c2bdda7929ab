use rand::Rng;
use serde::Serialize;
use sg_moment_diagrams::{GenEdge, MomentDiagram};

use crate::MultiscaleError;

/// A scale `n_e` for every generalized edge, in the diagram's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ScaleAssignment {
    values: Vec<u32>,
}

impl ScaleAssignment {
    pub fn new(d: &MomentDiagram, values: Vec<u32>) -> Result<Self, MultiscaleError> {
        let expected = d.generalized_edges().len();
        if values.len() != expected {
            return Err(MultiscaleError::Length { got: values.len(), expected });
        }
        Ok(ScaleAssignment { values })
    }

    pub fn constant(d: &MomentDiagram, c: u32) -> Self {
        ScaleAssignment { values: vec![c; d.generalized_edges().len()] }
    }

    /// Uniform scales in `0..=n_cap`.
    pub fn random<R: Rng + ?Sized>(d: &MomentDiagram, n_cap: u32, rng: &mut R) -> Self {
        ScaleAssignment { values: (0..d.generalized_edges().len()).map(|_| rng.random_range(0..=n_cap)).collect() }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn at(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub fn get(&self, d: &MomentDiagram, e: GenEdge) -> u32 {
        self.values[d.edge_index(e).expect("edge of the diagram")]
    }

    pub fn set(&mut self, d: &MomentDiagram, e: GenEdge, v: u32) {
        let i = d.edge_index(e).expect("edge of the diagram");
        self.values[i] = v;
    }
}

/// `⌊−log₂ λ⌋`, the least scale allowed on the base-point edges at the roots.
pub fn lambda_floor(lambda: f64) -> u32 {
    (-lambda.log2()).floor().max(0.0) as u32
}
