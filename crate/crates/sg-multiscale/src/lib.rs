//! Scale assignments on the edges of a moment diagram, safe-forest
//! projections, cut harvesting, and the combinatorial checks behind the
//! grouping of renormalized terms.

mod error;
mod harvest;
mod organize;
mod projection;
mod scales;

pub use error::MultiscaleError;
pub use harvest::{bottleneck_scale, bottlenecks_from, harvest_cuts, UNBOUNDED};
pub use organize::{
    multiscale_audit, organize_and_check, Cell, IntervalOfCuts, MultiscaleAudit, PartitionReport, Witness,
};
pub use projection::{
    int_ext_scales, is_safe, preimage_in, preimage_interval, safe_projection, ForestUniverse, IntervalOfForests,
};
pub use scales::{lambda_floor, ScaleAssignment};
