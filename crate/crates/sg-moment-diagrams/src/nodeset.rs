use std::fmt;

use serde::{Serialize, Serializer};

/// Node id; `0` is the base point.
pub type NodeId = usize;

pub const MAX_NODES: usize = 127;

/// A set of node ids backed by a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(u128);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn single(u: NodeId) -> Self {
        NodeSet(1u128 << u)
    }

    pub fn insert(&mut self, u: NodeId) {
        self.0 |= 1u128 << u;
    }

    pub fn remove(&mut self, u: NodeId) {
        self.0 &= !(1u128 << u);
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.0 >> u & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        NodeSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        NodeSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        NodeSet(self.0 & !o.0)
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(&self, o: &Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        let bits = self.0;
        (0..128).filter(move |&i| bits >> i & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(it: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for u in it {
            s.insert(u);
        }
        s
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}
