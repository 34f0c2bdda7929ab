//! Decorated rooted trees for the sine-Gordon regularity structure.
//!
//! Trees are immutable values whose children are kept sorted by their
//! canonical serialization, so structural equality is isomorphism.
//! Homogeneities are affine expressions `a + b·β̄` with exact rational
//! coefficients and are only ever compared exactly.

mod error;
mod flat;
mod homogeneity;
mod params;
mod tree;

pub use error::TreeError;
pub use flat::{FlatNode, FlatTree};
pub use homogeneity::Homogeneity;
pub use params::{parse_rational, ModelParams, SCALING, SCALING_DIM};
pub use tree::{Deco, DecoratedTree, Label};

/// Exact rational scalar used throughout the workspace.
pub type Rational = num_rational::Rational64;

/// Total charge of a collection of labels.
pub fn charge_of<'a>(labels: impl IntoIterator<Item = &'a Label>) -> i64 {
    labels.into_iter().map(|l| l.charge()).sum()
}
