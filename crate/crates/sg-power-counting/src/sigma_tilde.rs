use sg_moment_diagrams::{gamma, MomentDiagram, NodeSet, Subtree, BASE};
use sg_tree_core::{Rational, SCALING_DIM};

fn r(x: i64) -> Rational {
    Rational::from_integer(x)
}

fn dim() -> Rational {
    r(SCALING_DIM)
}

/// `|M|_SG` of the noises in `m`.
fn sg(d: &MomentDiagram, m: NodeSet) -> Rational {
    d.sg_of(m.intersection(d.noise_nodes())).eval(d.beta_bar())
}

/// `|M|_s = −β̄ · #noises`.
fn s_hom(d: &MomentDiagram, m: NodeSet) -> Rational {
    -d.beta_bar() * r(m.intersection(d.noise_nodes()).len() as i64)
}

/// `|n(M)|_s`.
fn deco(d: &MomentDiagram, m: NodeSet) -> Rational {
    r(m.iter().filter(|&u| u != BASE).map(|u| i64::from(d.node(u).deco.degree())).sum())
}

fn kernels_inside(d: &MomentDiagram, edges: NodeSet, m: NodeSet) -> usize {
    edges.iter().filter(|&c| m.contains(c) && m.contains(d.parent(c).expect("kernel edge"))).count()
}

/// `2|{e ∈ K(S) : e ⊂ M}| − |M|_SG − (|M| − 1)|s|`.
pub fn inner_sigma_tilde(d: &MomentDiagram, s: &Subtree, m: NodeSet) -> Rational {
    r(2 * kernels_inside(d, s.kernel_edges(), m) as i64) - sg(d, m) - r(m.len() as i64 - 1) * dim()
}

/// The bound for clusters of the whole diagram, with base point `0 ∈ M`
/// allowed.
pub fn big_sigma_tilde(d: &MomentDiagram, always: NodeSet, harvested: NodeSet, m: NodeSet) -> Rational {
    let free = d.all_kernel_edges().difference(always);
    let mut out = -r(m.len() as i64 - 1) * dim() + r(2 * kernels_inside(d, free, m) as i64) - sg(d, m);
    if m.contains(BASE) {
        let mut rest = m;
        rest.remove(BASE);
        out -= deco(d, rest);
        for c in harvested.iter() {
            let p = d.parent(c).expect("kernel edge");
            if !m.contains(c) && m.contains(p) {
                out -= r(gamma(d, c));
            }
        }
        for c in always.iter().filter(|&c| m.contains(c)) {
            let p = d.parent(c).expect("kernel edge");
            out += r(2) + if m.contains(p) { r(0) } else { r(gamma(d, c) - 1) };
        }
    }
    out
}

/// The large-scale bound for a node set away from the base point and roots.
pub fn large_scale_sigma_tilde(d: &MomentDiagram, always: NodeSet, harvested: NodeSet, m: NodeSet) -> Rational {
    let touching = d
        .all_kernel_edges()
        .difference(always)
        .iter()
        .filter(|&c| m.contains(c) || m.contains(d.parent(c).expect("kernel edge")))
        .count();
    let mut out = r(2 * touching as i64) - s_hom(d, m);
    for c in harvested.iter() {
        let p = d.parent(c).expect("kernel edge");
        if m.contains(c) && !m.contains(p) {
            out += r(gamma(d, c));
        }
    }
    for c in always.iter() {
        let p = d.parent(c).expect("kernel edge");
        if m.contains(c) {
            out += r(2);
        } else if m.contains(p) {
            out -= r(gamma(d, c) - 1);
        }
    }
    out - deco(d, m) - r(m.len() as i64) * dim()
}

/// Both sides of `−2β̄ Σ_{e ∩ M ≠ ∅} sign(e) ≥ −|M|_s` over noise pairs.
pub fn noise_decay_sides(d: &MomentDiagram, m: NodeSet) -> (Rational, Rational) {
    let s: i64 = d.noise_pairs().into_iter().filter(|&(a, b)| m.contains(a) || m.contains(b)).map(|(a, b)| d.sign(a, b)).sum();
    (r(-2 * s) * d.beta_bar(), -s_hom(d, m))
}

/// `K(D)`-connected components of `m`.
pub fn kernel_components(d: &MomentDiagram, m: NodeSet) -> Vec<NodeSet> {
    let mut left = m;
    let mut out = Vec::new();
    loop {
        let first = left.iter().next();
        let Some(start) = first else { break };
        let mut comp = NodeSet::single(start);
        let mut grew = true;
        while grew {
            grew = false;
            let todo: Vec<usize> = left.iter().filter(|&u| !comp.contains(u)).collect();
            for u in todo {
                let linked = d.parent(u).is_some_and(|p| comp.contains(p))
                    || comp.iter().any(|v| d.parent(v) == Some(u));
                if linked {
                    comp.insert(u);
                    grew = true;
                }
            }
        }
        left = left.difference(comp);
        out.push(comp);
    }
    out
}
