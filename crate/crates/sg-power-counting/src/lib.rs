//! Coalescence trees, total homogeneities built from `δ↑`/`δ⇑` markers, the
//! sine-Gordon total homogeneities of the moment diagrams, and exhaustive
//! power-counting audits on small vertex sets.

mod audit;
mod coalescence;
mod error;
mod sigma_tilde;
mod sine_gordon;
mod summability;
mod total;

pub use audit::{
    large_scale_audit, sg_subdivergence_audit, sigma_tilde_audit, subdivergence_audit, summed_identity, AuditReport,
    LargeScaleReport, Location, Margins, SigmaTildeReport, Violation,
};
pub use coalescence::{all_trees, coalesce, members, vset, CoalescenceTree, LabeledTree, VSet, MAX_ENUM_VERTICES};
pub use error::PowerError;
pub use sigma_tilde::{big_sigma_tilde, inner_sigma_tilde, kernel_components, large_scale_sigma_tilde, noise_decay_sides};
pub use sine_gordon::{big_graph_homogeneity, inner_homogeneity, Context, Group, Quotient, SgHomogeneity};
pub use summability::{summability_probe, triangle_bound, triangle_count, SummabilityReport, DEFAULT_ANNULUS_C};
pub use total::{subtree_sums, Marker, MarkerKind, TotalHomogeneity};
