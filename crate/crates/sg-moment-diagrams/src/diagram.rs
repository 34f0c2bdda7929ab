use std::collections::BTreeMap;

use serde::Serialize;
use sg_tree_core::{Deco, DecoratedTree, Homogeneity, Label, Rational};

use crate::nodeset::{NodeId, NodeSet, MAX_NODES};
use crate::MomentError;

/// Base point id.
pub const BASE: NodeId = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramNode {
    pub label: Label,
    pub deco: Deco,
    pub parent: Option<NodeId>,
    pub copy: usize,
}

#[derive(Debug, Clone)]
pub struct TreeCopy {
    pub tree: DecoratedTree,
    /// Whether this copy carries the opposite charges.
    pub flipped: bool,
    pub root: NodeId,
    pub nodes: NodeSet,
}

/// A kernel edge, oriented from the parent `p` to the child `c`.
///
/// Every non-root node has exactly one incoming edge, so sets of kernel edges
/// are stored as [`NodeSet`]s of child ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct KernelEdge {
    pub p: NodeId,
    pub c: NodeId,
}

/// Members of `ℰ = ℰ₀(N) ⊔ K ⊔ L⁽²⁾`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GenEdge {
    /// `{0, u}`.
    Base(NodeId),
    /// A kernel edge, named by its child.
    Kernel(NodeId),
    /// An unordered pair of noise nodes `(a, b)` with `a < b`.
    Pair(NodeId, NodeId),
}

impl GenEdge {
    pub fn pair(a: NodeId, b: NodeId) -> Self {
        GenEdge::Pair(a.min(b), a.max(b))
    }
}

/// `p` copies of a tree and `p` copies of its opposite, sharing a base point.
#[derive(Debug, Clone)]
pub struct MomentDiagram {
    beta_bar: Rational,
    p: usize,
    copies: Vec<TreeCopy>,
    /// Indexed by id; slot 0 is the base point and carries no data.
    nodes: Vec<Option<DiagramNode>>,
    edge_index: BTreeMap<GenEdge, usize>,
    edges: Vec<GenEdge>,
}

impl MomentDiagram {
    /// The diagram `D_2p` for `2p` copies.
    pub fn build(tree: &DecoratedTree, p: usize, beta_bar: Rational) -> Result<Self, MomentError> {
        if p == 0 {
            return Err(MomentError::NoCopies);
        }
        let opp = tree.opp();
        let trees: Vec<(DecoratedTree, bool)> =
            (0..2 * p).map(|j| if j < p { (tree.clone(), false) } else { (opp.clone(), true) }).collect();
        Self::from_copies(trees, p, beta_bar)
    }

    /// A lone copy of `tree`, for the single-copy expansion.
    pub fn single_copy(tree: &DecoratedTree, beta_bar: Rational) -> Result<Self, MomentError> {
        Self::from_copies(vec![(tree.clone(), false)], 0, beta_bar)
    }

    fn from_copies(trees: Vec<(DecoratedTree, bool)>, p: usize, beta_bar: Rational) -> Result<Self, MomentError> {
        let total: usize = trees.iter().map(|(t, _)| t.node_count()).sum();
        if total > MAX_NODES {
            return Err(MomentError::TooManyNodes { nodes: total, max: MAX_NODES });
        }
        let mut nodes = vec![None];
        let mut copies = Vec::with_capacity(trees.len());
        for (j, (tree, flipped)) in trees.into_iter().enumerate() {
            let offset = nodes.len();
            let flat = tree.flatten();
            let mut set = NodeSet::EMPTY;
            for (i, n) in flat.nodes.iter().enumerate() {
                nodes.push(Some(DiagramNode {
                    label: n.label,
                    deco: n.deco(),
                    parent: n.parent.map(|q| q + offset),
                    copy: j,
                }));
                set.insert(offset + i);
            }
            copies.push(TreeCopy { tree, flipped, root: offset, nodes: set });
        }
        let mut d = MomentDiagram { beta_bar, p, copies, nodes, edge_index: BTreeMap::new(), edges: Vec::new() };
        let mut edges: Vec<GenEdge> = d.all_nodes().iter().map(GenEdge::Base).collect();
        edges.extend(d.all_kernel_edges().iter().map(GenEdge::Kernel));
        edges.extend(d.noise_pairs().into_iter().map(|(a, b)| GenEdge::Pair(a, b)));
        d.edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        d.edges = edges;
        Ok(d)
    }

    pub fn beta_bar(&self) -> Rational {
        self.beta_bar
    }

    /// Number of copies of each sign; `0` for a single-copy diagram.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn copies(&self) -> &[TreeCopy] {
        &self.copies
    }

    pub fn node(&self, u: NodeId) -> &DiagramNode {
        self.nodes[u].as_ref().expect("the base point has no node data")
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.node(u).parent
    }

    pub fn charge(&self, u: NodeId) -> i64 {
        self.node(u).label.charge()
    }

    /// `N(D)`.
    pub fn all_nodes(&self) -> NodeSet {
        (1..self.nodes.len()).collect()
    }

    /// `N* = N(D) ∪ {0}`.
    pub fn all_nodes_with_base(&self) -> NodeSet {
        let mut s = self.all_nodes();
        s.insert(BASE);
        s
    }

    /// `L(D)`.
    pub fn noise_nodes(&self) -> NodeSet {
        (1..self.nodes.len()).filter(|&u| self.node(u).label.is_noise()).collect()
    }

    /// `K(D)` as child ids.
    pub fn all_kernel_edges(&self) -> NodeSet {
        (1..self.nodes.len()).filter(|&u| self.node(u).parent.is_some()).collect()
    }

    pub fn kernel_edge(&self, child: NodeId) -> KernelEdge {
        KernelEdge { p: self.parent(child).expect("not a kernel edge"), c: child }
    }

    pub fn roots(&self) -> Vec<NodeId> {
        self.copies.iter().map(|c| c.root).collect()
    }

    /// `L(D)⁽²⁾` ordered by node id.
    pub fn noise_pairs(&self) -> Vec<(NodeId, NodeId)> {
        pairs_of(self.noise_nodes())
    }

    /// `sign({a, b}) = q(a)·q(b)`.
    pub fn sign(&self, a: NodeId, b: NodeId) -> i64 {
        self.charge(a) * self.charge(b)
    }

    /// Total charge of a set of nodes.
    pub fn charge_of(&self, set: NodeSet) -> i64 {
        set.iter().map(|u| self.charge(u)).sum()
    }

    /// `|A|_SG = 2β̄ Σ_{e ∈ A⁽²⁾} sign(e)`.
    pub fn sg_of(&self, set: NodeSet) -> Homogeneity {
        let s: i64 = pairs_of(set).into_iter().map(|(a, b)| self.sign(a, b)).sum();
        Homogeneity::int(0, 2 * s)
    }

    /// All generalized edges, in the fixed index order.
    pub fn generalized_edges(&self) -> &[GenEdge] {
        &self.edges
    }

    pub fn edge_index(&self, e: GenEdge) -> Option<usize> {
        self.edge_index.get(&e).copied()
    }

    /// Endpoints of a generalized edge.
    pub fn endpoints(&self, e: GenEdge) -> (NodeId, NodeId) {
        match e {
            GenEdge::Base(u) => (BASE, u),
            GenEdge::Kernel(c) => (self.parent(c).expect("not a kernel edge"), c),
            GenEdge::Pair(a, b) => (a, b),
        }
    }

    /// Whether `a` lies on the path from `b` to its copy's root.
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }

    /// Nodes at or above `u` in its copy.
    pub fn above(&self, u: NodeId) -> NodeSet {
        let copy = &self.copies[self.node(u).copy];
        copy.nodes.iter().filter(|&v| self.is_ancestor(u, v)).collect()
    }
}

pub(crate) fn pairs_of(set: NodeSet) -> Vec<(NodeId, NodeId)> {
    let v = set.to_vec();
    let mut out = Vec::with_capacity(v.len() * v.len().saturating_sub(1) / 2);
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            out.push((a, b));
        }
    }
    out
}
