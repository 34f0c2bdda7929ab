//! Moment diagrams of the neutral BPHZ model: copies of a tree glued at a
//! base point, their divergent subtrees and forests, cut sets, the derived
//! node and edge sets, and the symbolic inventory of every moment term.

mod audit;
mod cut;
mod diagram;
mod edge_sets;
mod error;
mod forest;
mod nodeset;
mod terms;

pub use audit::{multilinearity_audit, CoverageFailure, CoverageKind, MultilinearityReport};
pub use cut::{cut_candidates, cut_sets, gamma, subsets};
pub use diagram::{DiagramNode, GenEdge, KernelEdge, MomentDiagram, TreeCopy, BASE};
pub use edge_sets::{derived_edge_sets, external_edges, internal_edges, EdgeSetBundle, Scope};
pub use error::MomentError;
pub use forest::{connected_subtrees, divergent_subtrees, enumerate_forests, Forest, Subtree};
pub use nodeset::{NodeId, NodeSet, MAX_NODES};
pub use terms::{
    build_term, moment_terms, needs_first_order, terms_to_jsonl, Factor, FactorKind, LevelIntegral, MomentTerm,
    Slot, YSite,
};
