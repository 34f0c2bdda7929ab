use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sg_tree_core::Rational;

use crate::cut::cut_sets;
use crate::diagram::{GenEdge, MomentDiagram};
use crate::edge_sets::{derived_edge_sets, EdgeSetBundle, Scope};
use crate::forest::{divergent_subtrees, enumerate_forests, Forest, Subtree};
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FactorKind {
    /// Heat kernel `K(x_p − x_c)`.
    Ker,
    /// Kernel minus its Taylor jet at the base point.
    RKer,
    /// Pair interaction `J_e(x_> − x_<)`; `sign = −1` pairs carry the inverse.
    Interaction { sign: i64 },
    /// Monomial `(x_u − x_0)^n`.
    Pow { deco: [u32; 3] },
    /// The test function at a copy root.
    TestFunction,
}

/// Whether a factor sits in the integrand at its level or in the argument
/// handed down to the operators of the next level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    Integrand,
    Argument,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Factor {
    pub edge: GenEdge,
    pub kind: FactorKind,
    /// Index into the forest members, `None` for the outermost level.
    pub owner: Option<usize>,
    pub level: usize,
    pub slot: Slot,
}

/// A Taylor projection `Y^(order)` attached to a forest member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct YSite {
    pub subtree: usize,
    pub order: u8,
}

/// Nodes integrated out at one level of the recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelIntegral {
    pub owner: Option<usize>,
    pub level: usize,
    pub nodes: NodeSet,
}

/// One `(forest, cut)` summand with its factor inventory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentTerm {
    pub forest: Forest,
    /// Kernel edges (child ids) replaced by their Taylor remainders.
    pub cut: NodeSet,
    pub inventory: Vec<Factor>,
    pub y_sites: Vec<YSite>,
    pub integrals: Vec<LevelIntegral>,
}

/// One term per forest `G` and cut `C ⊂ 𝔠 \ K(G)`.
pub fn moment_terms(d: &MomentDiagram) -> Vec<MomentTerm> {
    let forests = enumerate_forests(&divergent_subtrees(d));
    forests
        .par_iter()
        .flat_map_iter(|f| cut_sets(d, f).into_iter().map(move |c| build_term(d, f, c)))
        .collect()
}

/// Whether `S` needs the first-order Taylor projection: `|S⁰|_s ∈ (−2, −1)`.
pub fn needs_first_order(d: &MomentDiagram, s: &Subtree) -> bool {
    let h = s.zero_homogeneity(d).eval(d.beta_bar());
    h > Rational::from_integer(-2) && h < Rational::from_integer(-1)
}

pub fn build_term(d: &MomentDiagram, forest: &Forest, cut: NodeSet) -> MomentTerm {
    let mut term =
        MomentTerm { forest: forest.clone(), cut, inventory: Vec::new(), y_sites: Vec::new(), integrals: Vec::new() };
    let top = derived_edge_sets(d, forest, Scope::Diagram).expect("diagram decomposition");
    let kernel = |c| if cut.contains(c) { FactorKind::RKer } else { FactorKind::Ker };
    let push = |inv: &mut Vec<Factor>, edge, kind, slot| {
        inv.push(Factor { edge, kind, owner: None, level: 0, slot });
    };
    term.integrals.push(LevelIntegral { owner: None, level: 0, nodes: top.nodes });
    for &(a, b) in &top.inner_pairs {
        push(&mut term.inventory, GenEdge::Pair(a, b), FactorKind::Interaction { sign: d.sign(a, b) }, Slot::Integrand);
    }
    for c in top.k_forest.iter() {
        push(&mut term.inventory, GenEdge::Kernel(c), kernel(c), Slot::Integrand);
    }
    for r in d.roots() {
        push(&mut term.inventory, GenEdge::Base(r), FactorKind::TestFunction, Slot::Integrand);
    }
    for u in top.nodes.iter() {
        let deco = d.node(u).deco;
        if !deco.is_zero() {
            push(&mut term.inventory, GenEdge::Base(u), FactorKind::Pow { deco: deco.0 }, Slot::Integrand);
        }
    }
    for &(a, b) in &top.p_boundary {
        push(&mut term.inventory, GenEdge::Pair(a, b), FactorKind::Interaction { sign: d.sign(a, b) }, Slot::Argument);
    }
    for c in top.k_boundary.iter() {
        push(&mut term.inventory, GenEdge::Kernel(c), kernel(c), Slot::Argument);
    }
    for u in forest.inner_nodes().iter() {
        let deco = d.node(u).deco;
        if !deco.is_zero() {
            push(&mut term.inventory, GenEdge::Base(u), FactorKind::Pow { deco: deco.0 }, Slot::Argument);
        }
    }
    for s in &top.children {
        nested(d, forest, s, 1, &mut term);
    }
    term.inventory.sort();
    term.y_sites.sort();
    term
}

fn nested(d: &MomentDiagram, forest: &Forest, s: &Subtree, level: usize, term: &mut MomentTerm) {
    let owner = forest.index_of(s).expect("member of the forest");
    let b: EdgeSetBundle = derived_edge_sets(d, forest, Scope::Subtree(*s)).expect("subtree decomposition");
    term.y_sites.push(YSite { subtree: owner, order: 0 });
    if needs_first_order(d, s) {
        term.y_sites.push(YSite { subtree: owner, order: 1 });
    }
    term.integrals.push(LevelIntegral { owner: Some(owner), level, nodes: b.inner_nodes });
    let mut push = |edge, kind, slot| {
        term.inventory.push(Factor { edge, kind, owner: Some(owner), level, slot });
    };
    for &(a, b) in &b.inner_pairs {
        push(GenEdge::Pair(a, b), FactorKind::Interaction { sign: d.sign(a, b) }, Slot::Integrand);
    }
    for c in b.k_ring.iter() {
        push(GenEdge::Kernel(c), FactorKind::Ker, Slot::Integrand);
    }
    for &(a, b) in &b.p_boundary {
        push(GenEdge::Pair(a, b), FactorKind::Interaction { sign: d.sign(a, b) }, Slot::Argument);
    }
    for c in b.k_boundary.iter() {
        push(GenEdge::Kernel(c), FactorKind::Ker, Slot::Argument);
    }
    for t in &b.children {
        nested(d, forest, t, level + 1, term);
    }
}

impl MomentTerm {
    /// Factors owned by a given level.
    pub fn factors_of(&self, owner: Option<usize>) -> impl Iterator<Item = &Factor> {
        self.inventory.iter().filter(move |f| f.owner == owner)
    }

    /// One JSON object in the export schema.
    pub fn to_json(&self, d: &MomentDiagram) -> Value {
        let idx = |e: GenEdge| d.edge_index(e).expect("edge of the diagram");
        let inventory: Vec<Value> = self
            .inventory
            .iter()
            .map(|f| {
                let (a, b) = d.endpoints(f.edge);
                let mut v = json!({
                    "edge": idx(f.edge),
                    "nodes": [a, b],
                    "kind": kind_name(f.kind),
                    "level": f.level,
                    "owner": f.owner,
                    "slot": f.slot,
                });
                match f.kind {
                    FactorKind::Interaction { sign } => v["sign"] = json!(sign),
                    FactorKind::Pow { deco } => v["deco"] = json!(deco),
                    _ => {}
                }
                v
            })
            .collect();
        json!({
            "forest": self.forest.members().iter().map(|s| s.nodes.to_vec()).collect::<Vec<_>>(),
            "cut": self.cut.iter().map(|c| idx(GenEdge::Kernel(c))).collect::<Vec<_>>(),
            "inventory": inventory,
            "y_sites": self.y_sites,
        })
    }
}

fn kind_name(k: FactorKind) -> &'static str {
    match k {
        FactorKind::Ker => "Ker",
        FactorKind::RKer => "RKer",
        FactorKind::Interaction { .. } => "Interaction",
        FactorKind::Pow { .. } => "Pow",
        FactorKind::TestFunction => "TestFunction",
    }
}

/// JSON lines, one term per line.
pub fn terms_to_jsonl(d: &MomentDiagram, terms: &[MomentTerm]) -> String {
    let mut out = String::new();
    for t in terms {
        out.push_str(&t.to_json(d).to_string());
        out.push('\n');
    }
    out
}
