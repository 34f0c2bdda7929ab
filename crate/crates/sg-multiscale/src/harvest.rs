use std::collections::{BTreeSet, BinaryHeap};

use sg_moment_diagrams::{cut_candidates, internal_edges, Forest, MomentDiagram, NodeId, NodeSet, BASE};

use crate::ScaleAssignment;

/// Scale given to edges inside the forest: they never limit a path.
pub const UNBOUNDED: u32 = u32::MAX;

/// `n_F(u, v)`: the best bottleneck over paths from `u` to `v`, with the edges
/// of `ℰ^int(F)` contracted.
pub fn bottleneck_scale(d: &MomentDiagram, forest: &Forest, n: &ScaleAssignment, u: NodeId, v: NodeId) -> u32 {
    bottlenecks_from(d, forest, n, u)[v]
}

/// Widest-path values from `src` to every node of `N*`.
pub fn bottlenecks_from(d: &MomentDiagram, forest: &Forest, n: &ScaleAssignment, src: NodeId) -> Vec<u32> {
    let inside: BTreeSet<usize> = forest
        .members()
        .iter()
        .flat_map(|s| internal_edges(d, s))
        .map(|e| d.edge_index(e).expect("edge of the diagram"))
        .collect();
    let size = d.node_count() + 1;
    let mut adj: Vec<Vec<(NodeId, u32)>> = vec![Vec::new(); size];
    for (i, &e) in d.generalized_edges().iter().enumerate() {
        let (a, b) = d.endpoints(e);
        let w = if inside.contains(&i) { UNBOUNDED } else { n.at(i) };
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut best = vec![0u32; size];
    let mut done = vec![false; size];
    best[src] = UNBOUNDED;
    let mut heap = BinaryHeap::from([(UNBOUNDED, src)]);
    while let Some((w, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, ew) in &adj[u] {
            let cand = w.min(ew);
            if !done[v] && cand > best[v] {
                best[v] = cand;
                heap.push((cand, v));
            }
        }
    }
    best
}

/// `𝒢^n(F) = {e ∈ 𝔠 : n_F(0, e_p) > n_F(e_p, e_c)}` as child ids.
pub fn harvest_cuts(d: &MomentDiagram, forest: &Forest, n: &ScaleAssignment) -> NodeSet {
    let from_base = bottlenecks_from(d, forest, n, BASE);
    cut_candidates(d)
        .iter()
        .filter(|&c| {
            let p = d.parent(c).expect("kernel edge");
            from_base[p] > bottlenecks_from(d, forest, n, p)[c]
        })
        .collect()
}
