use std::collections::BTreeMap;

use serde::Serialize;
use sg_rule_engine::TreeCatalog;
use sg_tree_core::DecoratedTree;

use crate::{upsilon, CountertermError, UpsilonValue};

pub const VERDICT_ZERO: &str = "G_eps = 0";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    pub key: String,
    pub key_opp: String,
    pub upsilon: UpsilonValue,
    pub upsilon_opp: UpsilonValue,
    pub sym_factor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityEntry {
    pub key: String,
    /// `1` or `2`: the spatial direction of the single decoration.
    pub direction: usize,
}

/// Term-by-term account of the neutral counterterm sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CancellationLedger {
    pub pairs: Vec<PairEntry>,
    pub parity_killed: Vec<ParityEntry>,
    pub verdict: String,
}

impl CancellationLedger {
    pub fn covered(&self) -> usize {
        2 * self.pairs.len() + self.parity_killed.len()
    }
}

/// Whether the expectation of a decorated neutral divergent tree vanishes by
/// reflection symmetry: exactly one decoration, of degree one in space.
pub fn parity_vanishes(tree: &DecoratedTree) -> Option<usize> {
    let decos: Vec<[u32; 3]> =
        tree.preorder().iter().map(|u| u.deco().0).filter(|d| *d != [0, 0, 0]).collect();
    match decos.as_slice() {
        [[0, 1, 0]] => Some(1),
        [[0, 0, 1]] => Some(2),
        _ => None,
    }
}

pub fn cancellation_report(cat: &TreeCatalog) -> Result<CancellationLedger, CountertermError> {
    let trees: Vec<&DecoratedTree> = cat.negative_neutral_trees().collect();
    cancellation_report_with(&trees, upsilon)
}

/// Ledger for an explicit list of neutral negative trees with a pluggable
/// `Υ`, so that broken inputs can be exercised.
pub fn cancellation_report_with<F>(
    trees: &[&DecoratedTree],
    upsilon_of: F,
) -> Result<CancellationLedger, CountertermError>
where
    F: Fn(&DecoratedTree) -> Result<UpsilonValue, CountertermError>,
{
    let by_key: BTreeMap<&str, &DecoratedTree> = trees.iter().map(|t| (t.key(), *t)).collect();
    let mut pairs = Vec::new();
    let mut parity_killed = Vec::new();
    for (&key, &t) in &by_key {
        if t.deco_degree() != 0 {
            let direction = parity_vanishes(t).ok_or_else(|| CountertermError::ParityUncovered(key.into()))?;
            parity_killed.push(ParityEntry { key: key.into(), direction });
            continue;
        }
        let opp = t.opp();
        let Some(&partner) = by_key.get(opp.key()) else {
            return Err(CountertermError::Unpaired(key.into()));
        };
        if opp.key() == key {
            return Err(CountertermError::Unpaired(key.into()));
        }
        if key > opp.key() {
            continue;
        }
        let edges = t.edge_count();
        if edges % 2 == 0 {
            return Err(CountertermError::EvenEdgeCount { key: key.into(), edges });
        }
        let u = upsilon_of(t)?;
        let u_opp = upsilon_of(partner)?;
        let sum = u.checked_add(u_opp);
        if !sum.is_some_and(|s| s.is_zero()) {
            return Err(CountertermError::NonCancelling {
                key: key.into(),
                key_opp: partner.key().into(),
                sum: sum.map_or_else(|| format!("{u} + {u_opp}"), |s| s.to_string()),
            });
        }
        if t.symmetry_factor() != partner.symmetry_factor() {
            return Err(CountertermError::SymmetryMismatch(key.into()));
        }
        pairs.push(PairEntry {
            key: key.into(),
            key_opp: partner.key().into(),
            upsilon: u,
            upsilon_opp: u_opp,
            sym_factor: t.symmetry_factor(),
        });
    }
    let ledger = CancellationLedger { pairs, parity_killed, verdict: VERDICT_ZERO.into() };
    if ledger.covered() != by_key.len() {
        return Err(CountertermError::Incomplete { covered: ledger.covered(), expected: by_key.len() });
    }
    Ok(ledger)
}
