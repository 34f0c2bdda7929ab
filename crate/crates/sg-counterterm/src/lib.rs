//! Tree-level bookkeeping of the neutral counterterms: the constants `Υ[τ]`,
//! their cancellation between `τ` and its charge flip, and the parity rule
//! that removes decorated trees.

mod error;
mod ledger;
mod upsilon;

pub use error::CountertermError;
pub use ledger::{
    cancellation_report, cancellation_report_with, parity_vanishes, CancellationLedger, PairEntry,
    ParityEntry, VERDICT_ZERO,
};
pub use upsilon::{upsilon, UpsilonValue};
