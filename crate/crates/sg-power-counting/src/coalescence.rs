use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::PowerError;

/// A set of vertices, bit `v` for vertex `v`.
pub type VSet = u32;

/// Largest vertex count for exhaustive enumeration.
pub const MAX_ENUM_VERTICES: usize = 8;

pub fn vset(vs: impl IntoIterator<Item = usize>) -> VSet {
    vs.into_iter().fold(0, |m, v| m | (1 << v))
}

pub fn members(m: VSet) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&v| m & (1 << v) != 0)
}

fn size(m: VSet) -> usize {
    m.count_ones() as usize
}

/// A coalescence tree over vertices `0..n`, stored by the leaf sets of its
/// internal nodes. Index 0 is the root; parents precede children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoalescenceTree {
    n: usize,
    internal: Vec<VSet>,
    #[serde(skip)]
    parent: Vec<Option<usize>>,
}

impl CoalescenceTree {
    /// Build from internal leaf sets; they must form a laminar family with
    /// the full set at the top and every node splitting nontrivially.
    pub fn from_internal(n: usize, mut internal: Vec<VSet>) -> Option<Self> {
        let full: VSet = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        internal.sort_by(|a, b| size(*b).cmp(&size(*a)).then(a.cmp(b)));
        internal.dedup();
        if n < 2 || internal.first() != Some(&full) || internal.iter().any(|&m| size(m) < 2 || m & !full != 0) {
            return None;
        }
        let mut parent = vec![None; internal.len()];
        for i in 1..internal.len() {
            let p = (0..i).rev().find(|&j| internal[i] & !internal[j] == 0)?;
            if (0..i).any(|j| internal[i] & internal[j] != 0 && internal[i] & !internal[j] != 0 && internal[j] & !internal[i] != 0) {
                return None;
            }
            parent[i] = Some(p);
        }
        let t = CoalescenceTree { n, internal, parent };
        (0..t.internal.len()).all(|a| t.child_count(a) >= 2).then_some(t)
    }

    /// The tree with the root as its only internal node.
    pub fn star(n: usize) -> Self {
        Self::from_internal(n, vec![(1 << n) - 1]).expect("n ≥ 2")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.internal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.internal.is_empty()
    }

    /// `𝔏_a`.
    pub fn leaves(&self, a: usize) -> VSet {
        self.internal[a]
    }

    pub fn internal_sets(&self) -> &[VSet] {
        &self.internal
    }

    pub fn parent(&self, a: usize) -> Option<usize> {
        self.parent[a]
    }

    pub fn internal_children(&self, a: usize) -> Vec<usize> {
        (a + 1..self.len()).filter(|&b| self.parent[b] == Some(a)).collect()
    }

    /// Internal children plus leaves attached directly to `a`.
    pub fn child_count(&self, a: usize) -> usize {
        let kids = self.internal_children(a);
        let covered = kids.iter().fold(0, |m, &b| m | self.internal[b]);
        kids.len() + size(self.internal[a] & !covered)
    }

    /// Whether `b ≥ a`, i.e. `b` lies in the subtree of `a`.
    pub fn is_below(&self, b: usize, a: usize) -> bool {
        self.internal[b] & !self.internal[a] == 0
    }

    /// `f↑`: the deepest internal node that is a proper ancestor of every
    /// vertex of `f`.
    pub fn up(&self, f: VSet) -> usize {
        (0..self.len()).rev().find(|&a| f & !self.internal[a] == 0).expect("root contains everything")
    }

    /// `f⇑`: the parent of `f↑`, or the root.
    pub fn up_up(&self, f: VSet) -> usize {
        let a = self.up(f);
        self.parent[a].unwrap_or(a)
    }
}

/// A coalescence tree with labels increasing away from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LabeledTree {
    pub tree: CoalescenceTree,
    pub labels: Vec<u32>,
}

impl LabeledTree {
    pub fn is_monotone(&self) -> bool {
        (1..self.tree.len()).all(|a| self.labels[self.tree.parent(a).expect("non-root")] < self.labels[a])
    }
}

fn set_partitions(m: VSet, out: &mut Vec<Vec<VSet>>, cur: &mut Vec<VSet>) {
    if m == 0 {
        out.push(cur.clone());
        return;
    }
    let low = m & m.wrapping_neg();
    let rest = m & !low;
    let mut sub = rest;
    loop {
        cur.push(low | sub);
        set_partitions(rest & !sub, out, cur);
        cur.pop();
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
}

fn shapes(m: VSet, memo: &mut HashMap<VSet, Vec<Vec<VSet>>>) -> Vec<Vec<VSet>> {
    if size(m) == 1 {
        return vec![Vec::new()];
    }
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let mut parts = Vec::new();
    set_partitions(m, &mut parts, &mut Vec::new());
    let mut out = Vec::new();
    for blocks in parts.into_iter().filter(|b| b.len() >= 2) {
        let mut acc: Vec<Vec<VSet>> = vec![vec![m]];
        for &b in &blocks {
            let sub = shapes(b, memo);
            acc = acc.iter().flat_map(|a| sub.iter().map(move |s| [a.as_slice(), s].concat())).collect();
        }
        out.extend(acc);
    }
    memo.insert(m, out.clone());
    out
}

/// `Û_𝒱` for `|𝒱| = n`: every coalescence tree, enumerated by recursive
/// leaf partitioning.
pub fn all_trees(n: usize) -> Result<Vec<CoalescenceTree>, PowerError> {
    if n > MAX_ENUM_VERTICES {
        return Err(PowerError::TooManyVertices { got: n, max: MAX_ENUM_VERTICES });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<CoalescenceTree>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache").get(&n) {
        return Ok(v.clone());
    }
    let trees: Vec<CoalescenceTree> = if n < 2 {
        Vec::new()
    } else {
        let mut memo = HashMap::new();
        let mut v: Vec<CoalescenceTree> = shapes((1 << n) - 1, &mut memo)
            .into_iter()
            .map(|s| CoalescenceTree::from_internal(n, s).expect("valid shape"))
            .collect();
        v.sort();
        v
    };
    cache.lock().expect("cache").insert(n, trees.clone());
    Ok(trees)
}

/// The labeled coalescence tree of a scale assignment on a multigraph: its
/// internal nodes are the non-singleton components of `{e : n_e ≥ r}` over all
/// `r`, labeled by the largest such `r`.
pub fn coalesce(n: usize, edges: &[(usize, usize)], scales: &[u32]) -> Result<LabeledTree, PowerError> {
    if edges.len() != scales.len() {
        return Err(PowerError::ScaleCount { edges: edges.len(), scales: scales.len() });
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(PowerError::BadEdge(a, b));
    }
    let top = scales.iter().copied().max().unwrap_or(0);
    let mut label: HashMap<VSet, u32> = HashMap::new();
    for r in 0..=top + 1 {
        let comps = components(n, edges.iter().zip(scales).filter(|(_, &s)| s >= r).map(|(e, _)| *e));
        if r == 0 && comps.len() != 1 {
            return Err(PowerError::Disconnected);
        }
        for c in comps.into_iter().filter(|&c| size(c) >= 2) {
            label.insert(c, r);
        }
    }
    let tree = CoalescenceTree::from_internal(n, label.keys().copied().collect()).expect("components are laminar");
    let labels = tree.internal.iter().map(|m| label[m]).collect();
    Ok(LabeledTree { tree, labels })
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<VSet> {
    let mut root: Vec<usize> = (0..n).collect();
    fn find(r: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while r[x] != x {
            r[x] = r[r[x]];
            x = r[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        root[ra] = rb;
    }
    let mut by_root: HashMap<usize, VSet> = HashMap::new();
    for v in 0..n {
        let r = find(&mut root, v);
        *by_root.entry(r).or_default() |= 1 << v;
    }
    let mut out: Vec<VSet> = by_root.into_values().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        // total partitions ("Schröder's fourth problem")
        let counts: Vec<usize> = (2..=6).map(|n| all_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 4, 26, 236, 2752]);
        assert!(matches!(all_trees(9), Err(PowerError::TooManyVertices { .. })));
    }

    #[test]
    fn path_example() {
        let t = coalesce(3, &[(0, 1), (1, 2)], &[3, 7]).unwrap();
        assert_eq!(t.tree.internal_sets(), &[0b111, 0b110]);
        assert_eq!(t.labels, vec![3, 7]);
        assert!(t.is_monotone());
        assert_eq!(t.tree.child_count(0), 2);
    }

    #[test]
    fn constant_scales_give_the_star() {
        let t = coalesce(4, &[(0, 1), (1, 2), (2, 3)], &[0, 0, 0]).unwrap();
        assert_eq!(t.tree, CoalescenceTree::star(4));
        assert_eq!(t.labels, vec![0]);
    }

    #[test]
    fn triangle_example() {
        let t = coalesce(3, &[(0, 1), (1, 2), (0, 2)], &[5, 9, 5]).unwrap();
        assert_eq!(t.tree.internal_sets(), &[0b111, 0b110]);
        assert_eq!(t.labels, vec![5, 9]);
    }

    #[test]
    fn disconnected_rejected() {
        assert!(matches!(coalesce(3, &[(0, 1)], &[1]), Err(PowerError::Disconnected)));
    }

    #[test]
    fn up_and_up_up() {
        let t = CoalescenceTree::from_internal(4, vec![0b1111, 0b0111, 0b0011]).unwrap();
        assert_eq!(t.up(vset([0])), 2);
        assert_eq!(t.up(vset([0, 2])), 1);
        assert_eq!(t.up(vset([3])), 0);
        assert_eq!(t.up_up(vset([0])), 1);
        assert_eq!(t.up_up(vset([3])), 0);
        assert!(CoalescenceTree::from_internal(3, vec![0b111, 0b011, 0b110]).is_none());
    }
}
