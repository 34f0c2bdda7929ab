use std::collections::HashMap;

use serde::Serialize;
use sg_moment_diagrams::{
    derived_edge_sets, divergent_subtrees, enumerate_forests, Forest, MomentDiagram, Scope, Subtree,
};

use crate::{MultiscaleError, ScaleAssignment};

/// `(int, ext)` for `S ∈ F`: the least scale over `ℰ^int_F(S)` and the largest
/// over `ℰ^ext_F(S)`; `None` when the set is empty.
pub fn int_ext_scales(
    d: &MomentDiagram,
    forest: &Forest,
    s: &Subtree,
    n: &ScaleAssignment,
) -> (Option<u32>, Option<u32>) {
    let b = derived_edge_sets(d, forest, Scope::Subtree(*s)).expect("subtree decomposition");
    let int = b.int_edges.iter().map(|&e| n.get(d, e)).min();
    let ext = b.ext_edges.iter().map(|&e| n.get(d, e)).max();
    (int, ext)
}

/// Whether `S` is safe in `F`: `int ≤ ext`.
pub fn is_safe(d: &MomentDiagram, forest: &Forest, s: &Subtree, n: &ScaleAssignment) -> bool {
    match int_ext_scales(d, forest, s, n) {
        (Some(i), Some(e)) => i <= e,
        (None, _) => true,
        (Some(_), None) => false,
    }
}

/// `P^n(F) = {S ∈ F : int ≤ ext}`.
pub fn safe_projection(d: &MomentDiagram, forest: &Forest, n: &ScaleAssignment) -> Forest {
    let kept: Vec<Subtree> = forest.members().iter().filter(|s| is_safe(d, forest, s, n)).copied().collect();
    Forest::new(d, kept).expect("a subset of a forest is a forest")
}

/// All forests of a diagram with an index.
#[derive(Debug, Clone)]
pub struct ForestUniverse {
    pub forests: Vec<Forest>,
    index: HashMap<Forest, usize>,
}

impl ForestUniverse {
    pub fn new(d: &MomentDiagram) -> Self {
        let forests = enumerate_forests(&divergent_subtrees(d));
        let index = forests.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        ForestUniverse { forests, index }
    }

    pub fn len(&self) -> usize {
        self.forests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forests.is_empty()
    }

    pub fn index_of(&self, f: &Forest) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// `P^n` of every forest, as indices.
    pub fn projections(&self, d: &MomentDiagram, n: &ScaleAssignment) -> Vec<usize> {
        self.forests
            .iter()
            .map(|f| self.index_of(&safe_projection(d, f, n)).expect("projection is a forest"))
            .collect()
    }

    /// The union of a family of forests if it is itself a forest.
    pub fn union_of(&self, members: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut all: Vec<Subtree> = members.into_iter().flat_map(|i| self.forests[i].members().to_vec()).collect();
        all.sort();
        all.dedup();
        let ok = all.iter().enumerate().all(|(i, a)| all[i + 1..].iter().all(|b| a.nested_or_disjoint(b)));
        if !ok {
            return None;
        }
        self.forests.iter().position(|f| f.members() == all.as_slice())
    }
}

/// `[s, b]` in inclusion order, or empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntervalOfForests {
    pub bounds: Option<(Forest, Forest)>,
}

impl IntervalOfForests {
    pub fn contains(&self, f: &Forest) -> bool {
        self.bounds.as_ref().is_some_and(|(s, b)| s.is_subforest_of(f) && f.is_subforest_of(b))
    }

    pub fn smallest(&self) -> Option<&Forest> {
        self.bounds.as_ref().map(|(s, _)| s)
    }

    pub fn biggest(&self) -> Option<&Forest> {
        self.bounds.as_ref().map(|(_, b)| b)
    }

    /// `δ = b \ s`.
    pub fn delta(&self) -> Vec<Subtree> {
        match &self.bounds {
            Some((s, b)) => b.members().iter().filter(|t| !s.contains(t)).copied().collect(),
            None => Vec::new(),
        }
    }
}

/// Certify that `{G ∈ allowed : P(G) = target}` is an interval.
///
/// `images[i]` is the projection of forest `i`; `allowed` restricts the scan
/// (all forests, or those avoiding a cut set).
pub fn preimage_in(
    universe: &ForestUniverse,
    images: &[usize],
    allowed: &[bool],
    target: usize,
) -> Result<IntervalOfForests, MultiscaleError> {
    let pre: Vec<usize> = (0..universe.len()).filter(|&i| allowed[i] && images[i] == target).collect();
    let name = |i: usize| format!("{:?}", universe.forests[i].members());
    if pre.is_empty() {
        return Ok(IntervalOfForests { bounds: None });
    }
    if !pre.contains(&target) {
        return Err(MultiscaleError::NotAnInterval {
            forest: name(target),
            witness: format!("target not fixed; preimage {:?}", pre.iter().map(|&i| name(i)).collect::<Vec<_>>()),
        });
    }
    let Some(big) = universe.union_of(pre.iter().copied()) else {
        return Err(MultiscaleError::NotAnInterval { forest: name(target), witness: "union is not a forest".into() });
    };
    if !pre.contains(&big) {
        return Err(MultiscaleError::NotAnInterval {
            forest: name(target),
            witness: format!("union {} lies outside", name(big)),
        });
    }
    let interval =
        IntervalOfForests { bounds: Some((universe.forests[target].clone(), universe.forests[big].clone())) };
    for (i, f) in universe.forests.iter().enumerate() {
        if allowed[i] && interval.contains(f) && images[i] != target {
            return Err(MultiscaleError::NotAnInterval {
                forest: name(target),
                witness: format!("{} lies between the bounds but projects elsewhere", name(i)),
            });
        }
    }
    Ok(interval)
}

/// `(P^n)⁻¹(F)` over all forests, certified to be an interval.
pub fn preimage_interval(
    d: &MomentDiagram,
    forest: &Forest,
    n: &ScaleAssignment,
) -> Result<IntervalOfForests, MultiscaleError> {
    let u = ForestUniverse::new(d);
    let images = u.projections(d, n);
    let target = u.index_of(forest).expect("forest of the diagram");
    preimage_in(&u, &images, &vec![true; u.len()], target)
}
