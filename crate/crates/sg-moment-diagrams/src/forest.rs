use std::fmt;

use serde::Serialize;
use sg_tree_core::Homogeneity;

use crate::diagram::MomentDiagram;
use crate::nodeset::{NodeId, NodeSet};
use crate::MomentError;

/// A concrete connected subtree of one copy, identified by its node set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subtree {
    pub nodes: NodeSet,
    pub root: NodeId,
    pub copy: usize,
}

impl fmt::Debug for Subtree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{:?}", self.nodes)
    }
}

impl fmt::Display for Subtree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.nodes)
    }
}

impl Subtree {
    /// The subtree spanned by a connected node set; `None` if not connected.
    pub fn from_nodes(d: &MomentDiagram, nodes: NodeSet) -> Option<Self> {
        let first = nodes.iter().next()?;
        let copy = d.node(first).copy;
        let roots: Vec<NodeId> =
            nodes.iter().filter(|&u| d.parent(u).map_or(true, |q| !nodes.contains(q))).collect();
        match roots.as_slice() {
            [r] if nodes.iter().all(|u| d.node(u).copy == copy) => Some(Subtree { nodes, root: *r, copy }),
            _ => None,
        }
    }

    /// The full copy `j`.
    pub fn whole(d: &MomentDiagram, j: usize) -> Self {
        let c = &d.copies()[j];
        Subtree { nodes: c.nodes, root: c.root, copy: j }
    }

    /// `Ñ(S)`, all nodes but the root.
    pub fn inner(&self) -> NodeSet {
        let mut s = self.nodes;
        s.remove(self.root);
        s
    }

    /// `K(S)` as child ids; coincides with `Ñ(S)`.
    pub fn kernel_edges(&self) -> NodeSet {
        self.inner()
    }

    /// `L(S)`.
    pub fn leaves(&self, d: &MomentDiagram) -> NodeSet {
        self.nodes.intersection(d.noise_nodes())
    }

    /// `K↓(S)`: edges leaving `S` upwards.
    pub fn k_down(&self, d: &MomentDiagram) -> NodeSet {
        d.copies()[self.copy]
            .nodes
            .difference(self.nodes)
            .iter()
            .filter(|&c| d.parent(c).is_some_and(|q| self.nodes.contains(q)))
            .collect()
    }

    /// `K̄↓(S) = K(S) ⊔ K↓(S)`.
    pub fn k_bar_down(&self, d: &MomentDiagram) -> NodeSet {
        self.kernel_edges().union(self.k_down(d))
    }

    /// `|S⁰|_s`, the homogeneity with decorations dropped.
    pub fn zero_homogeneity(&self, d: &MomentDiagram) -> Homogeneity {
        Homogeneity::int(2 * self.kernel_edges().len() as i64, -(self.leaves(d).len() as i64))
    }

    pub fn charge(&self, d: &MomentDiagram) -> i64 {
        d.charge_of(self.nodes)
    }

    pub fn is_divergent(&self, d: &MomentDiagram) -> bool {
        self.charge(d) == 0 && self.zero_homogeneity(d).is_negative(d.beta_bar())
    }

    /// Strict containment of node sets.
    pub fn is_below(&self, o: &Self) -> bool {
        self.nodes != o.nodes && self.nodes.is_subset(&o.nodes)
    }

    pub fn nested_or_disjoint(&self, o: &Self) -> bool {
        self.nodes.is_subset(&o.nodes) || o.nodes.is_subset(&self.nodes) || self.nodes.is_disjoint(&o.nodes)
    }
}

/// Connected subtrees of copy `j` with at least one node.
pub fn connected_subtrees(d: &MomentDiagram, j: usize) -> Vec<Subtree> {
    fn rooted(d: &MomentDiagram, r: NodeId, copy: &NodeSet) -> Vec<NodeSet> {
        let mut acc = vec![NodeSet::single(r)];
        for c in copy.iter().filter(|&c| d.parent(c) == Some(r)) {
            let sub = rooted(d, c, copy);
            let mut next = Vec::with_capacity(acc.len() * (sub.len() + 1));
            for a in &acc {
                next.push(*a);
                next.extend(sub.iter().map(|s| a.union(*s)));
            }
            acc = next;
        }
        acc
    }
    let copy = d.copies()[j].nodes;
    let mut out = Vec::new();
    for r in copy.iter() {
        out.extend(rooted(d, r, &copy).into_iter().map(|nodes| Subtree { nodes, root: r, copy: j }));
    }
    out.sort();
    out
}

/// `Div_j` for every copy, in copy order.
pub fn divergent_subtrees(d: &MomentDiagram) -> Vec<Subtree> {
    (0..d.copies().len())
        .flat_map(|j| connected_subtrees(d, j))
        .filter(|s| s.is_divergent(d))
        .collect()
}

/// A set of divergent subtrees, pairwise nested or disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Forest {
    members: Vec<Subtree>,
}

impl Forest {
    pub fn empty() -> Self {
        Forest::default()
    }

    pub fn new(d: &MomentDiagram, mut members: Vec<Subtree>) -> Result<Self, MomentError> {
        members.sort();
        members.dedup();
        for s in &members {
            if !s.is_divergent(d) {
                return Err(MomentError::NotDivergent(s.to_string()));
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if !a.nested_or_disjoint(b) {
                    return Err(MomentError::NotAForest(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(Forest { members })
    }

    pub fn members(&self) -> &[Subtree] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subtree) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn index_of(&self, s: &Subtree) -> Option<usize> {
        self.members.binary_search(s).ok()
    }

    pub fn is_subforest_of(&self, o: &Forest) -> bool {
        self.members.iter().all(|s| o.contains(s))
    }

    /// `Max(F)`.
    pub fn maximal(&self) -> Vec<Subtree> {
        self.members.iter().filter(|s| !self.members.iter().any(|t| s.is_below(t))).copied().collect()
    }

    /// `Min(F)`.
    pub fn minimal(&self) -> Vec<Subtree> {
        self.members.iter().filter(|s| !self.members.iter().any(|t| t.is_below(s))).copied().collect()
    }

    /// `C_F(S)`: the maximal members strictly inside `S`.
    pub fn children_of(&self, s: &Subtree) -> Vec<Subtree> {
        let inside: Vec<Subtree> = self.members.iter().filter(|t| t.is_below(s)).copied().collect();
        inside.iter().filter(|t| !inside.iter().any(|u| t.is_below(u))).copied().collect()
    }

    /// `A_F(S)`: the smallest member strictly containing `S`, or `None` for the whole diagram.
    pub fn ancestor_of(&self, s: &Subtree) -> Option<Subtree> {
        self.members.iter().filter(|t| s.is_below(t)).min_by_key(|t| t.nodes.len()).copied()
    }

    /// Number of members strictly containing `S`.
    pub fn depth_of(&self, s: &Subtree) -> usize {
        self.members.iter().filter(|t| s.is_below(t)).count()
    }

    /// `Ñ(F)`.
    pub fn inner_nodes(&self) -> NodeSet {
        self.members.iter().fold(NodeSet::EMPTY, |a, s| a.union(s.inner()))
    }

    /// `N(F)`.
    pub fn nodes(&self) -> NodeSet {
        self.members.iter().fold(NodeSet::EMPTY, |a, s| a.union(s.nodes))
    }

    /// `K(F)` as child ids.
    pub fn kernel_edges(&self) -> NodeSet {
        self.inner_nodes()
    }

    /// `L(F)`.
    pub fn leaves(&self, d: &MomentDiagram) -> NodeSet {
        self.nodes().intersection(d.noise_nodes())
    }

    /// `K̄↓(F)`.
    pub fn k_bar_down(&self, d: &MomentDiagram) -> NodeSet {
        self.members.iter().fold(NodeSet::EMPTY, |a, s| a.union(s.k_bar_down(d)))
    }

    pub fn with(&self, s: Subtree) -> Forest {
        let mut members = self.members.clone();
        members.push(s);
        members.sort();
        members.dedup();
        Forest { members }
    }

    pub fn without(&self, s: &Subtree) -> Forest {
        Forest { members: self.members.iter().filter(|t| *t != s).copied().collect() }
    }
}

/// All forests `F ⊂ Div`, in a deterministic order.
pub fn enumerate_forests(div: &[Subtree]) -> Vec<Forest> {
    fn go(div: &[Subtree], i: usize, chosen: &mut Vec<Subtree>, out: &mut Vec<Forest>) {
        if i == div.len() {
            let mut members = chosen.clone();
            members.sort();
            out.push(Forest { members });
            return;
        }
        go(div, i + 1, chosen, out);
        if chosen.iter().all(|t| t.nested_or_disjoint(&div[i])) {
            chosen.push(div[i]);
            go(div, i + 1, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    go(div, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sg_tree_core::{DecoratedTree, Rational};

    fn dipole(p: usize) -> MomentDiagram {
        MomentDiagram::build(&DecoratedTree::dipole(), p, Rational::new(6, 5)).unwrap()
    }

    #[test]
    fn dipole_div_is_the_copies() {
        let d = dipole(1);
        let div = divergent_subtrees(&d);
        assert_eq!(div, vec![Subtree::whole(&d, 0), Subtree::whole(&d, 1)]);
        assert_eq!(enumerate_forests(&div).len(), 4);
    }

    #[test]
    fn k_down_of_root_singleton() {
        let d = dipole(1);
        let s = Subtree::from_nodes(&d, NodeSet::single(1)).unwrap();
        assert_eq!(s.k_down(&d).to_vec(), vec![2]);
        assert!(s.inner().is_empty());
        assert!(Subtree::from_nodes(&d, [1, 3].into_iter().collect()).is_none());
    }

    #[test]
    fn overlapping_members_rejected() {
        let t = DecoratedTree::parse("(-;0,0,0;(+;0,0,0;(-;0,0,0;(+;0,0,0;))))").unwrap();
        let d = MomentDiagram::build(&t, 1, Rational::new(19, 10)).unwrap();
        let a = Subtree::from_nodes(&d, [1, 2].into_iter().collect()).unwrap();
        let b = Subtree::from_nodes(&d, [2, 3].into_iter().collect()).unwrap();
        assert!(a.is_divergent(&d) && b.is_divergent(&d));
        assert!(matches!(Forest::new(&d, vec![a, b]), Err(MomentError::NotAForest(..))));
        let forests = enumerate_forests(&divergent_subtrees(&d));
        assert!(forests.iter().all(|f| !(f.contains(&a) && f.contains(&b))));
    }

    #[test]
    fn children_and_ancestors() {
        let t = DecoratedTree::parse("(-;0,0,0;(+;0,0,0;(-;0,0,0;(+;0,0,0;))))").unwrap();
        let d = MomentDiagram::build(&t, 1, Rational::new(19, 10)).unwrap();
        let whole = Subtree::whole(&d, 0);
        let inner = Subtree::from_nodes(&d, [2, 3].into_iter().collect()).unwrap();
        let top = Subtree::from_nodes(&d, [3, 4].into_iter().collect()).unwrap();
        let f = Forest::new(&d, vec![whole, inner]).unwrap();
        assert_eq!(f.children_of(&whole), vec![inner]);
        assert_eq!(f.ancestor_of(&inner), Some(whole));
        assert_eq!(f.ancestor_of(&whole), None);
        assert_eq!(f.maximal(), vec![whole]);
        assert_eq!(f.depth_of(&inner), 1);
        assert!(top.nested_or_disjoint(&whole));
        assert!(!top.nested_or_disjoint(&inner));
    }
}
