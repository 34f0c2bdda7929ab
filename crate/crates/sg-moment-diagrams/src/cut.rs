use sg_tree_core::Rational;

use crate::diagram::MomentDiagram;
use crate::forest::Forest;
use crate::nodeset::{NodeId, NodeSet};

/// Taylor order plus one for the kernel edge ending at `child`:
/// `⌈2|{e′ ≥ e}| + Σ_{u ≥ e_c} (|n(u)|_s − β̄)⌉`, the `−β̄` counted at noise
/// nodes.
pub fn gamma(d: &MomentDiagram, child: NodeId) -> i64 {
    let above = d.above(child);
    let mut total = Rational::from_integer(2 * above.len() as i64);
    for u in above.iter() {
        let n = d.node(u);
        total += Rational::from_integer(i64::from(n.deco.degree()));
        if n.label.is_noise() {
            total -= d.beta_bar();
        }
    }
    total.ceil().to_integer()
}

/// `𝔠 = {e ∈ K(D) : γ(e) > 0}` as child ids.
pub fn cut_candidates(d: &MomentDiagram) -> NodeSet {
    d.all_kernel_edges().iter().filter(|&c| gamma(d, c) > 0).collect()
}

/// Every subset of `𝔠 \ K(F)`.
pub fn cut_sets(d: &MomentDiagram, forest: &Forest) -> Vec<NodeSet> {
    subsets(cut_candidates(d).difference(forest.kernel_edges()))
}

pub fn subsets(set: NodeSet) -> Vec<NodeSet> {
    let elems = set.to_vec();
    (0u64..1 << elems.len())
        .map(|mask| elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &u)| u).collect())
        .collect()
}
