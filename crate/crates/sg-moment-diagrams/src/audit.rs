use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{GenEdge, MomentDiagram};
use crate::terms::{FactorKind, MomentTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CoverageKind {
    Interaction,
    Kernel,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CoverageFailure {
    pub term: usize,
    pub kind: CoverageKind,
    pub edge: (usize, usize),
    /// How many times the factor was found (the requirement is exactly one).
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MultilinearityReport {
    pub terms: usize,
    pub pairs_per_term: usize,
    pub kernels_per_term: usize,
    pub failures: Vec<CoverageFailure>,
}

impl MultilinearityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check that every interaction `J_e`, `e ∈ L(D)⁽²⁾`, and every kernel edge
/// occurs exactly once across the levels of each term.
pub fn multilinearity_audit(d: &MomentDiagram, terms: &[MomentTerm]) -> MultilinearityReport {
    let pairs = d.noise_pairs();
    let kernels = d.all_kernel_edges();
    let mut failures: Vec<CoverageFailure> = terms
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, t)| {
            let mut count: BTreeMap<GenEdge, usize> = BTreeMap::new();
            for f in &t.inventory {
                if matches!(f.kind, FactorKind::Interaction { .. } | FactorKind::Ker | FactorKind::RKer) {
                    *count.entry(f.edge).or_default() += 1;
                }
            }
            let mut out = Vec::new();
            for &(a, b) in &pairs {
                let n = count.remove(&GenEdge::Pair(a, b)).unwrap_or(0);
                if n != 1 {
                    out.push(CoverageFailure { term: i, kind: CoverageKind::Interaction, edge: (a, b), count: n });
                }
            }
            for c in kernels.iter() {
                let n = count.remove(&GenEdge::Kernel(c)).unwrap_or(0);
                if n != 1 {
                    let e = d.kernel_edge(c);
                    out.push(CoverageFailure { term: i, kind: CoverageKind::Kernel, edge: (e.p, e.c), count: n });
                }
            }
            out
        })
        .collect();
    failures.sort();
    MultilinearityReport { terms: terms.len(), pairs_per_term: pairs.len(), kernels_per_term: kernels.len(), failures }
}
