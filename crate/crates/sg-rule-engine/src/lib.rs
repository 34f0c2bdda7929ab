//! Enumeration of the trees generated by the sine-Gordon rule below the
//! truncation cutoff, their classification by sign and charge, and the
//! structural checks that negative trees are expected to satisfy.

mod audit;
mod catalog;
mod error;
mod rule;

pub use audit::{structural_audit, StructuralReport, StructuralViolation, ViolationKind};
pub use catalog::{
    classify_trees, enumerate_below, enumerate_negative, enumerate_trees, enumerate_trees_with_limit, CatalogEntry, Classification,
    TreeCatalog, DEFAULT_TREE_LIMIT,
};
pub use error::RuleError;
pub use rule::RuleSg;
