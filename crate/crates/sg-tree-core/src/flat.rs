use serde::Serialize;

use crate::{Deco, DecoratedTree, Homogeneity, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlatNode {
    #[serde(serialize_with = "ser_label")]
    pub label: Label,
    pub deco: [u32; 3],
    pub parent: Option<usize>,
}

fn ser_label<S: serde::Serializer>(l: &Label, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_char(l.symbol())
}

impl FlatNode {
    pub fn deco(&self) -> Deco {
        Deco(self.deco)
    }
}

/// Array form of a tree: nodes in preorder, root at index 0.
///
/// Every non-root node's parent has a smaller index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatTree {
    pub nodes: Vec<FlatNode>,
}

impl FlatTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn label(&self, i: usize) -> Label {
        self.nodes[i].label
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.nodes[i].parent
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (i + 1..self.len()).filter(|&j| self.nodes[j].parent == Some(i)).collect()
    }

    /// Edges as `(parent, child)` pairs, ordered by child index.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(c, n)| n.parent.map(|p| (p, c)))
            .collect()
    }

    pub fn noise_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].label.is_noise()).collect()
    }

    pub fn depth(&self, i: usize) -> usize {
        let mut d = 0;
        let mut cur = i;
        while let Some(p) = self.nodes[cur].parent {
            d += 1;
            cur = p;
        }
        d
    }

    /// Whether `a` lies on the path from `b` to the root (inclusive).
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.nodes[c].parent;
        }
        false
    }

    pub fn s_homogeneity(&self) -> Homogeneity {
        let deg: u32 = self.nodes.iter().map(|n| n.deco().degree()).sum();
        Homogeneity::int(
            2 * (self.len() as i64 - 1) + i64::from(deg),
            -(self.noise_nodes().len() as i64),
        )
    }

    pub fn charge(&self) -> i64 {
        self.nodes.iter().map(|n| n.label.charge()).sum()
    }

    pub fn to_tree(&self) -> DecoratedTree {
        fn build(f: &FlatTree, i: usize) -> DecoratedTree {
            let n = f.nodes[i];
            DecoratedTree::new(n.label, n.deco(), f.children(i).into_iter().map(|c| build(f, c)).collect())
        }
        build(self, 0)
    }
}

impl DecoratedTree {
    /// Preorder array form following the canonical child order.
    pub fn flatten(&self) -> FlatTree {
        fn walk(t: &DecoratedTree, parent: Option<usize>, out: &mut Vec<FlatNode>) {
            let me = out.len();
            out.push(FlatNode { label: t.label(), deco: t.deco().0, parent });
            for c in t.children() {
                walk(c, Some(me), out);
            }
        }
        let mut nodes = Vec::with_capacity(self.node_count());
        walk(self, None, &mut nodes);
        FlatTree { nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dipole_flat() {
        let f = DecoratedTree::dipole().flatten();
        assert_eq!(f.len(), 2);
        assert_eq!(f.label(0), Label::Minus);
        assert_eq!(f.label(1), Label::Plus);
        assert_eq!(f.edges(), vec![(0, 1)]);
        assert_eq!(f.to_tree(), DecoratedTree::dipole());
    }

    #[test]
    fn preorder_parents_precede() {
        let t = DecoratedTree::parse("(0;0,1,0;(+;0,0,0;(-;0,0,0;))(-;0,0,0;))").unwrap();
        let f = t.flatten();
        for (i, n) in f.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                assert!(p < i);
            }
        }
        assert_eq!(f.s_homogeneity(), t.s_homogeneity());
        assert_eq!(f.charge(), t.charge());
        assert!(f.is_ancestor(0, 3));
        assert_eq!(f.depth(2), 2);
        assert_eq!(f.depth(3), 1);
        assert_eq!(f.children(0), vec![1, 3]);
    }
}
