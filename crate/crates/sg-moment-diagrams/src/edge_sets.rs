use serde::Serialize;

use crate::diagram::{pairs_of, GenEdge, MomentDiagram};
use crate::forest::{Forest, Subtree};
use crate::nodeset::{NodeId, NodeSet};
use crate::MomentError;

/// What the edge sets are computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scope {
    Subtree(Subtree),
    Diagram,
}

/// The node and edge sets attached to a forest and a subtree (or the whole
/// diagram). Kernel edge sets hold child ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSetBundle {
    pub scope: Scope,
    /// `C_F(S)`, or `Max(F)` for the diagram.
    pub children: Vec<Subtree>,
    /// `Ñ_F(S)`; for the diagram `N_F(D)`.
    pub inner_nodes: NodeSet,
    /// `N_F(S) = Ñ_F(S) ∪ {ρ_S}`; for the diagram `N_F(D)`.
    pub nodes: NodeSet,
    /// `L_F(S)`.
    pub leaves: NodeSet,
    /// `K_F(S) = K(S) \ K(C_F(S))`; for the diagram `K(D) \ K̄↓(F)`.
    pub k_forest: NodeSet,
    /// `K̊_F(S) = K(S) \ K̄↓(C_F(S))`.
    pub k_ring: NodeSet,
    /// `K^∂_F(S) = K(S) ∩ K↓(C_F(S))`; for the diagram `K↓(Max F)`.
    pub k_boundary: NodeSet,
    /// `K↓(S)`; empty for the diagram.
    pub k_down: NodeSet,
    /// `K̄↓(S)`; all of `K(D)` for the diagram.
    pub k_bar_down: NodeSet,
    /// `L_F(S)⁽²⁾`.
    pub inner_pairs: Vec<(NodeId, NodeId)>,
    /// `P^∂_F(S)`: pairs with exactly one end in `L_F(S)` or with ends in two
    /// distinct children.
    pub p_boundary: Vec<(NodeId, NodeId)>,
    /// `ℰ^int_F(S) = K_F(S) ⊔ L_F(S)⁽²⁾`; all of `ℰ` for the diagram.
    pub int_edges: Vec<GenEdge>,
    /// `ℰ^ext_F(S) = ℰ^int(A_F(S)) ∩ ℰ^ext(S)`; empty for the diagram.
    pub ext_edges: Vec<GenEdge>,
}

/// `ℰ^int(S) = K(S) ⊔ L(S)⁽²⁾`.
pub fn internal_edges(d: &MomentDiagram, s: &Subtree) -> Vec<GenEdge> {
    let mut out: Vec<GenEdge> = s.kernel_edges().iter().map(GenEdge::Kernel).collect();
    out.extend(pairs_of(s.leaves(d)).into_iter().map(|(a, b)| GenEdge::Pair(a, b)));
    out
}

/// `ℰ^ext(S) = ℰ₀(N(S)) ⊔ K↓(S) ⊔ {e ∈ L(D)⁽²⁾ : |e ∩ L(S)| = 1}`.
pub fn external_edges(d: &MomentDiagram, s: &Subtree) -> Vec<GenEdge> {
    let mut out: Vec<GenEdge> = s.nodes.iter().map(GenEdge::Base).collect();
    out.extend(s.k_down(d).iter().map(GenEdge::Kernel));
    let ls = s.leaves(d);
    out.extend(
        d.noise_pairs()
            .into_iter()
            .filter(|&(a, b)| ls.contains(a) != ls.contains(b))
            .map(|(a, b)| GenEdge::Pair(a, b)),
    );
    out
}

/// Pairs of `universe⁽²⁾` split into those inside `L_F`, those on the
/// boundary, and those inside a single child.
fn split_pairs(
    d: &MomentDiagram,
    universe: NodeSet,
    children: &[Subtree],
) -> (NodeSet, Vec<(NodeId, NodeId)>, Vec<(NodeId, NodeId)>) {
    let child_of = |u: NodeId| children.iter().position(|t| t.nodes.contains(u));
    let covered = children.iter().fold(NodeSet::EMPTY, |a, t| a.union(t.leaves(d)));
    let leaves = universe.difference(covered);
    let mut inner = Vec::new();
    let mut boundary = Vec::new();
    for (a, b) in pairs_of(universe) {
        match (leaves.contains(a), leaves.contains(b)) {
            (true, true) => inner.push((a, b)),
            (true, false) | (false, true) => boundary.push((a, b)),
            (false, false) if child_of(a) != child_of(b) => boundary.push((a, b)),
            _ => {}
        }
    }
    (leaves, inner, boundary)
}

/// Compute every derived set for `scope` relative to `forest` and check the
/// disjoint decompositions they are meant to satisfy.
pub fn derived_edge_sets(d: &MomentDiagram, forest: &Forest, scope: Scope) -> Result<EdgeSetBundle, MomentError> {
    let bundle = match scope {
        Scope::Subtree(s) => subtree_sets(d, forest, s),
        Scope::Diagram => diagram_sets(d, forest),
    };
    bundle.check(d)?;
    Ok(bundle)
}

fn subtree_sets(d: &MomentDiagram, forest: &Forest, s: Subtree) -> EdgeSetBundle {
    let children = forest.children_of(&s);
    let union = |f: &dyn Fn(&Subtree) -> NodeSet| children.iter().fold(NodeSet::EMPTY, |a, t| a.union(f(t)));
    let inner_nodes = s.inner().difference(union(&|t| t.inner()));
    let mut nodes = inner_nodes;
    nodes.insert(s.root);
    let k = s.kernel_edges();
    let k_forest = k.difference(union(&|t| t.kernel_edges()));
    let k_ring = k.difference(union(&|t| t.k_bar_down(d)));
    let k_boundary = k.intersection(union(&|t| t.k_down(d)));
    let (leaves, inner_pairs, p_boundary) = split_pairs(d, s.leaves(d), &children);
    let mut int_edges: Vec<GenEdge> = k_forest.iter().map(GenEdge::Kernel).collect();
    int_edges.extend(inner_pairs.iter().map(|&(a, b)| GenEdge::Pair(a, b)));
    let ancestor_int: Vec<GenEdge> = match forest.ancestor_of(&s) {
        Some(a) => internal_edges(d, &a),
        None => d.generalized_edges().to_vec(),
    };
    let ext_edges = external_edges(d, &s).into_iter().filter(|e| ancestor_int.contains(e)).collect();
    EdgeSetBundle {
        scope: Scope::Subtree(s),
        children,
        inner_nodes,
        nodes,
        leaves,
        k_forest,
        k_ring,
        k_boundary,
        k_down: s.k_down(d),
        k_bar_down: s.k_bar_down(d),
        inner_pairs,
        p_boundary,
        int_edges,
        ext_edges,
    }
}

fn diagram_sets(d: &MomentDiagram, forest: &Forest) -> EdgeSetBundle {
    let children = forest.maximal();
    let nodes = d.all_nodes().difference(forest.inner_nodes());
    let k_forest = d.all_kernel_edges().difference(forest.k_bar_down(d));
    let k_boundary = children.iter().fold(NodeSet::EMPTY, |a, t| a.union(t.k_down(d)));
    let (leaves, inner_pairs, p_boundary) = split_pairs(d, d.noise_nodes(), &children);
    EdgeSetBundle {
        scope: Scope::Diagram,
        children,
        inner_nodes: nodes,
        nodes,
        leaves,
        k_forest,
        k_ring: k_forest,
        k_boundary,
        k_down: NodeSet::EMPTY,
        k_bar_down: d.all_kernel_edges(),
        inner_pairs,
        p_boundary,
        int_edges: d.generalized_edges().to_vec(),
        ext_edges: Vec::new(),
    }
}

impl EdgeSetBundle {
    fn check(&self, d: &MomentDiagram) -> Result<(), MomentError> {
        let fail = |m: &str| Err(MomentError::Decomposition(format!("{m} for {:?}", self.scope)));
        let (all_nodes, all_kernel, all_leaves) = match self.scope {
            Scope::Subtree(s) => (s.inner(), s.kernel_edges(), s.leaves(d)),
            Scope::Diagram => (d.all_nodes(), d.all_kernel_edges(), d.noise_nodes()),
        };
        let c_inner = self.children.iter().fold(NodeSet::EMPTY, |a, t| a.union(t.inner()));
        if !disjoint_union(&[self.inner_nodes, c_inner], all_nodes) {
            return fail("node decomposition");
        }
        let c_kernel = self.children.iter().fold(NodeSet::EMPTY, |a, t| a.union(t.kernel_edges()));
        if !disjoint_union(&[self.k_ring, self.k_boundary, c_kernel], all_kernel) {
            return fail("kernel decomposition");
        }
        let c_leaves = self.children.iter().fold(NodeSet::EMPTY, |a, t| a.union(t.leaves(d)));
        if !disjoint_union(&[self.leaves, c_leaves], all_leaves) {
            return fail("leaf decomposition");
        }
        let mut pairs: Vec<(NodeId, NodeId)> = self.inner_pairs.clone();
        pairs.extend(&self.p_boundary);
        for t in &self.children {
            pairs.extend(pairs_of(t.leaves(d)));
        }
        pairs.sort();
        let n = pairs.len();
        pairs.dedup();
        if n != pairs.len() || pairs != pairs_of(all_leaves) {
            return fail("pair partition");
        }
        Ok(())
    }
}

fn disjoint_union(parts: &[NodeSet], whole: NodeSet) -> bool {
    let total: usize = parts.iter().map(NodeSet::len).sum();
    let union = parts.iter().fold(NodeSet::EMPTY, |a, p| a.union(*p));
    total == union.len() && union == whole
}
