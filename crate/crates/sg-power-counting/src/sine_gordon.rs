use serde::Serialize;
use sg_moment_diagrams::{
    cut_candidates, derived_edge_sets, divergent_subtrees, gamma, Forest, GenEdge, MomentDiagram, NodeId, NodeSet,
    Scope, Subtree, BASE,
};
use sg_tree_core::{Rational, SCALING_DIM};

use crate::coalescence::{members, vset, CoalescenceTree, VSet};
use crate::total::{MarkerKind, TotalHomogeneity};
use crate::PowerError;

/// The vertex set obtained by contracting subtrees to their roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quotient {
    /// Diagram node standing for each vertex.
    pub vertices: Vec<NodeId>,
    /// Diagram nodes merged into each vertex.
    pub expansions: Vec<NodeSet>,
    pub pinned: usize,
}

impl Quotient {
    fn new(pinned_node: NodeId, nodes: NodeSet, contracted: &[Subtree]) -> Self {
        let mut vertices = vec![pinned_node];
        vertices.extend(nodes.iter().filter(|&u| u != pinned_node));
        let expansions = vertices
            .iter()
            .map(|&v| contracted.iter().find(|t| t.root == v).map_or(NodeSet::single(v), |t| t.nodes))
            .collect();
        Quotient { vertices, expansions, pinned: 0 }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `q̂(u)`.
    pub fn of(&self, u: NodeId) -> usize {
        self.expansions.iter().position(|e| e.contains(u)).expect("node inside the quotient")
    }

    pub fn set_of(&self, nodes: impl IntoIterator<Item = NodeId>) -> VSet {
        vset(nodes.into_iter().map(|u| self.of(u)))
    }

    /// The re-expanded node set `𝔑` of a set of vertices.
    pub fn expand(&self, vs: VSet) -> NodeSet {
        members(vs).fold(NodeSet::EMPTY, |a, v| a.union(self.expansions[v]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Group {
    /// `−ω̄ δ↑[𝒱]`.
    Overall,
    /// `−|n(u)|_s δ↑[{q̂u, 0}]`.
    Decorations,
    /// `−|T⁰|_s δ↑[ρ_T]` for the contracted subtrees.
    Contracted,
    /// `+2 δ↑[e]` over kernel edges.
    Kernels,
    /// `−2β̄ sign(e) δ↑[e]` over noise pairs.
    NoisePairs,
    /// Harvested cuts.
    Harvested,
    /// Cuts applied in every term.
    Always,
}

/// What a total homogeneity is attached to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Context {
    /// The integral over `Ñ_ℬ(S)`.
    Inner { subtree: Subtree },
    /// The whole diagram with base point, forest `ℬ` and a cut split.
    BigGraph { always: NodeSet, harvested: NodeSet },
}

/// A total homogeneity split by group, with the data needed to audit it.
#[derive(Debug, Clone, Serialize)]
pub struct SgHomogeneity {
    pub context: Context,
    pub quotient: Quotient,
    /// The quotient multigraph, one entry per generalized edge kept.
    pub edges: Vec<(usize, usize)>,
    pub groups: Vec<(Group, TotalHomogeneity)>,
    #[serde(serialize_with = "ser_rational")]
    pub expected_order: Rational,
    #[serde(skip)]
    divergent: Vec<NodeSet>,
    /// Cut candidates outside the forest that are not harvested; their child
    /// is never farther from the parent than the base point is.
    #[serde(skip)]
    near: NodeSet,
}

impl SgHomogeneity {
    pub fn total(&self) -> TotalHomogeneity {
        self.groups.iter().fold(TotalHomogeneity::zero(), |a, (_, g)| a + g.clone())
    }

    pub fn group(&self, g: Group) -> TotalHomogeneity {
        self.groups.iter().filter(|(k, _)| *k == g).fold(TotalHomogeneity::zero(), |a, (_, t)| a + t.clone())
    }

    /// The total with one group's sign reversed.
    pub fn with_flipped(&self, g: Group) -> TotalHomogeneity {
        self.groups
            .iter()
            .fold(TotalHomogeneity::zero(), |a, (k, t)| a + if *k == g { -t.clone() } else { t.clone() })
    }

    pub fn vertex_count(&self) -> usize {
        self.quotient.len()
    }

    /// `𝔑(a)` for an internal node.
    pub fn expanded(&self, tree: &CoalescenceTree, a: usize) -> NodeSet {
        self.quotient.expand(tree.leaves(a))
    }

    /// Whether a coalescence tree can arise from the scales of the
    /// expansion: no non-root cluster re-expands to a divergent subtree
    /// left out of the forest, a cluster holding the base point and the
    /// parent of a non-harvested cut candidate holds its child, and a cluster
    /// holding both ends of a harvested edge holds the base point.
    pub fn is_admissible(&self, d: &MomentDiagram, tree: &CoalescenceTree) -> bool {
        (1..tree.len()).all(|a| {
            let m = self.expanded(tree, a);
            if self.divergent.contains(&m) {
                return false;
            }
            match &self.context {
                Context::Inner { .. } => true,
                Context::BigGraph { harvested, .. } => {
                    let base = m.contains(BASE);
                    let near_ok = self.near.iter().all(|c| {
                        let p = d.parent(c).expect("kernel edge");
                        !(base && m.contains(p)) || m.contains(c)
                    });
                    let harvested_ok = harvested.iter().all(|c| {
                        let p = d.parent(c).expect("kernel edge");
                        !(m.contains(p) && m.contains(c)) || base
                    });
                    near_ok && harvested_ok
                }
            }
        })
    }
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn marker(groups: &mut Vec<(Group, TotalHomogeneity)>, g: Group, set: VSet, c: Rational) {
    if c == Rational::from_integer(0) {
        return;
    }
    match groups.iter_mut().find(|(k, _)| *k == g) {
        Some((_, t)) => t.add_term(MarkerKind::Up, set, c),
        None => groups.push((g, TotalHomogeneity::up(set, c))),
    }
}

fn pair_coefficient(d: &MomentDiagram, a: NodeId, b: NodeId) -> Rational {
    Rational::from_integer(-2 * d.sign(a, b)) * d.beta_bar()
}

/// The total homogeneity of the whole diagram for forest `ℬ` with the cut
/// edges split into those always applied (`always`) and those harvested.
///
/// Subtrees of `Max ℬ` are contracted to their roots; the base point is the
/// pinned vertex 0.
pub fn big_graph_homogeneity(
    d: &MomentDiagram,
    forest: &Forest,
    always: NodeSet,
    harvested: NodeSet,
) -> Result<SgHomogeneity, PowerError> {
    let allowed = cut_candidates(d).difference(forest.kernel_edges());
    if !always.is_disjoint(&harvested) || !always.union(harvested).is_subset(&allowed) {
        return Err(PowerError::BadCuts(format!("always {always:?}, harvested {harvested:?}, allowed {allowed:?}")));
    }
    let bb = d.beta_bar();
    let r = Rational::from_integer;
    let bundle = derived_edge_sets(d, forest, Scope::Diagram)?;
    let top = bundle.children.clone();
    let mut nodes = bundle.nodes;
    nodes.insert(BASE);
    let q = Quotient::new(BASE, nodes, &top);
    let qb = |u: NodeId| q.of(u);
    let pair = |a: NodeId, b: NodeId| vset([qb(a), qb(b)]);

    let mut groups = Vec::new();
    for u in d.all_nodes().iter() {
        let deg = d.node(u).deco.degree();
        marker(&mut groups, Group::Decorations, vset([qb(u), 0]), -r(i64::from(deg)));
    }
    for t in &top {
        marker(&mut groups, Group::Contracted, vset([qb(t.root)]), -t.zero_homogeneity(d).eval(bb));
    }
    for c in bundle.k_forest.union(bundle.k_boundary).iter().filter(|&c| !always.contains(c)) {
        marker(&mut groups, Group::Kernels, pair(d.parent(c).expect("kernel edge"), c), r(2));
    }
    for &(a, b) in bundle.inner_pairs.iter().chain(&bundle.p_boundary) {
        marker(&mut groups, Group::NoisePairs, pair(a, b), pair_coefficient(d, a, b));
    }
    for c in harvested.iter() {
        let p = d.parent(c).expect("kernel edge");
        let g = r(gamma(d, c));
        marker(&mut groups, Group::Harvested, pair(p, c), g);
        marker(&mut groups, Group::Harvested, vset([0, qb(p)]), -g);
    }
    for c in always.iter() {
        let p = d.parent(c).expect("kernel edge");
        let g = r(gamma(d, c));
        marker(&mut groups, Group::Always, vset([qb(c), 0]), g - r(1) + r(2));
        marker(&mut groups, Group::Always, vset([0, qb(p)]), -(g - r(1)));
    }

    let mut edges = Vec::new();
    let inside = forest.maximal().iter().fold(NodeSet::EMPTY, |a, t| a.union(t.kernel_edges()));
    for &e in d.generalized_edges() {
        let (a, b) = d.endpoints(e);
        let contracted = match e {
            GenEdge::Kernel(c) => inside.contains(c),
            GenEdge::Pair(..) => top.iter().any(|t| t.nodes.contains(a) && t.nodes.contains(b)),
            GenEdge::Base(_) => false,
        };
        if !contracted {
            edges.push((qb(a), qb(b)));
        }
    }
    let copies: Rational = d.copies().iter().map(|c| c.tree.s_homogeneity().eval(bb) + r(SCALING_DIM)).sum();
    let divergent = divergent_subtrees(d).into_iter().map(|s| s.nodes).collect();
    Ok(SgHomogeneity {
        context: Context::BigGraph { always, harvested },
        quotient: q,
        edges,
        groups,
        expected_order: -copies,
        divergent,
        near: allowed.difference(harvested),
    })
}

/// The total homogeneity of the integral over `Ñ_ℬ(S)`, with children of `S`
/// in `ℬ` contracted to their roots and `ρ_S` pinned. `extra_order` adds one
/// to `ω̄` for subtrees taken with one more Taylor order.
pub fn inner_homogeneity(
    d: &MomentDiagram,
    forest: &Forest,
    s: &Subtree,
    extra_order: bool,
) -> Result<SgHomogeneity, PowerError> {
    let bb = d.beta_bar();
    let r = Rational::from_integer;
    let bundle = derived_edge_sets(d, forest, Scope::Subtree(*s))?;
    let q = Quotient::new(s.root, bundle.nodes, &bundle.children);
    let qb = |u: NodeId| q.of(u);
    let pair = |a: NodeId, b: NodeId| vset([qb(a), qb(b)]);
    let hom = s.zero_homogeneity(d).eval(bb);
    let omega = (-hom).floor() + if extra_order { r(1) } else { r(0) };
    let all: VSet = (1 << q.len()) - 1;

    let mut groups = Vec::new();
    marker(&mut groups, Group::Overall, all, -omega);
    for t in &bundle.children {
        marker(&mut groups, Group::Contracted, vset([qb(t.root)]), -t.zero_homogeneity(d).eval(bb));
    }
    for c in bundle.k_forest.iter() {
        marker(&mut groups, Group::Kernels, pair(d.parent(c).expect("kernel edge"), c), r(2));
    }
    for &(a, b) in bundle.inner_pairs.iter().chain(&bundle.p_boundary) {
        marker(&mut groups, Group::NoisePairs, pair(a, b), pair_coefficient(d, a, b));
    }
    let mut edges: Vec<(usize, usize)> =
        bundle.k_forest.iter().map(|c| pair(d.parent(c).expect("kernel edge"), c)).map(split).collect();
    edges.extend(bundle.inner_pairs.iter().chain(&bundle.p_boundary).map(|&(a, b)| (qb(a), qb(b))));
    let divergent = divergent_subtrees(d).into_iter().filter(|t| t.nodes.is_subset(&s.nodes)).map(|t| t.nodes).collect();
    Ok(SgHomogeneity {
        context: Context::Inner { subtree: *s },
        quotient: q,
        edges,
        groups,
        expected_order: -omega - hom,
        divergent,
        near: NodeSet::EMPTY,
    })
}

fn split(m: VSet) -> (usize, usize) {
    let v: Vec<usize> = members(m).collect();
    (v[0], v[1])
}
