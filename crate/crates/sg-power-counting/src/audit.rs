use rayon::prelude::*;
use serde::Serialize;
use sg_moment_diagrams::{MomentDiagram, NodeSet, BASE};
use sg_tree_core::{Rational, SCALING_DIM};

use crate::coalescence::{all_trees, members, CoalescenceTree, VSet};
use crate::sigma_tilde::{big_sigma_tilde, inner_sigma_tilde, kernel_components, large_scale_sigma_tilde};
use crate::sine_gordon::{Context, SgHomogeneity};
use crate::total::{subtree_sums, TotalHomogeneity};
use crate::PowerError;

/// A tree and one of its internal nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Location {
    pub tree: Vec<Vec<usize>>,
    pub node: Vec<usize>,
}

impl Location {
    fn new(tree: &CoalescenceTree, a: usize) -> Self {
        Location {
            tree: tree.internal_sets().iter().map(|&m| members(m).collect()).collect(),
            node: members(tree.leaves(a)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub at: Location,
    /// Diagram nodes involved, when the check is about a node set.
    pub nodes: Vec<usize>,
    pub value: String,
    pub bound: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Margins {
    pub min: Option<String>,
    pub min_f64: Option<f64>,
    pub argmin: Option<Location>,
}

impl Margins {
    fn offer(&mut self, m: Rational, at: impl FnOnce() -> Location, cur: &mut Option<Rational>) {
        if cur.map_or(true, |c| m < c) {
            *cur = Some(m);
            self.min = Some(m.to_string());
            self.min_f64 = Some(*m.numer() as f64 / *m.denom() as f64);
            self.argmin = Some(at());
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub context: String,
    pub trees: usize,
    pub admissible_trees: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub margins: Margins,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn rat(x: i64) -> Rational {
    Rational::from_integer(x)
}

struct Partial {
    checked: usize,
    admissible: bool,
    violations: Vec<Violation>,
    margin: Option<(Rational, Location)>,
}

fn merge(context: &str, trees: usize, parts: Vec<Partial>) -> AuditReport {
    let mut out = AuditReport { context: context.into(), trees, ..Default::default() };
    let mut cur = None;
    for p in parts {
        out.admissible_trees += usize::from(p.admissible);
        out.checked += p.checked;
        out.violations.extend(p.violations);
        if let Some((m, at)) = p.margin {
            out.margins.offer(m, || at, &mut cur);
        }
    }
    out
}

fn keep_min(slot: &mut Option<(Rational, Location)>, m: Rational, at: impl FnOnce() -> Location) {
    if slot.as_ref().map_or(true, |(c, _)| m < *c) {
        *slot = Some((m, at()));
    }
}

/// Check `Σ_{b ≥ a} ς_𝔗(b) < (|𝔏_a| − 1)|s|` for every admissible tree and
/// every non-root `a` with `𝔏_a ⊂ region`. Margins are the slack of that
/// inequality.
pub fn subdivergence_audit(
    sigma: &TotalHomogeneity,
    n: usize,
    region: VSet,
    admissible: &(dyn Fn(&CoalescenceTree) -> bool + Sync),
    context: &str,
) -> Result<AuditReport, PowerError> {
    let trees = all_trees(n)?;
    let parts = trees
        .par_iter()
        .map(|t| {
            let mut p = Partial { checked: 0, admissible: admissible(t), violations: Vec::new(), margin: None };
            if !p.admissible {
                return p;
            }
            let sums = subtree_sums(t, &sigma.eval(t));
            for a in 1..t.len() {
                if t.leaves(a) & !region != 0 {
                    continue;
                }
                p.checked += 1;
                let bound = rat(SCALING_DIM * (t.leaves(a).count_ones() as i64 - 1));
                let margin = bound - sums[a];
                if margin <= rat(0) {
                    p.violations.push(Violation {
                        at: Location::new(t, a),
                        nodes: Vec::new(),
                        value: sums[a].to_string(),
                        bound: bound.to_string(),
                    });
                }
                keep_min(&mut p.margin, margin, || Location::new(t, a));
            }
            p
        })
        .collect();
    Ok(merge(context, trees.len(), parts))
}

/// [`subdivergence_audit`] over the whole vertex set with the admissibility
/// filter of `sg`.
pub fn sg_subdivergence_audit(d: &MomentDiagram, sg: &SgHomogeneity, sigma: &TotalHomogeneity) -> Result<AuditReport, PowerError> {
    let n = sg.vertex_count();
    subdivergence_audit(sigma, n, (1 << n) - 1, &|t| sg.is_admissible(d, t), context_name(sg))
}

fn context_name(sg: &SgHomogeneity) -> &'static str {
    match sg.context {
        Context::Inner { .. } => "inner",
        Context::BigGraph { .. } => "big-graph",
    }
}

/// Outcome of the `ς̃` checks on the re-expanded clusters `𝒬`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SigmaTildeReport {
    /// `inner` or `big-graph`.
    pub context: String,
    pub clusters: usize,
    /// Clusters where the summed homogeneity fails to equal (inner) or be
    /// bounded by (big graph) `ς̃(𝔑(a))`.
    pub relation_failures: Vec<Violation>,
    /// Clusters with `ς̃(𝔑(a)) ≥ 0`.
    pub sign_violations: Vec<Violation>,
    /// Clusters where the relation holds with equality.
    pub equalities: usize,
    pub margins: Margins,
}

impl SigmaTildeReport {
    pub fn passed(&self) -> bool {
        self.relation_failures.is_empty() && self.sign_violations.is_empty()
    }
}

/// Evaluate `ς̃` on every `𝔑(a)`, `a` a non-root node of an admissible tree,
/// and check both the relation to the summed homogeneity and `ς̃ < 0`.
pub fn sigma_tilde_audit(d: &MomentDiagram, sg: &SgHomogeneity) -> Result<SigmaTildeReport, PowerError> {
    let n = sg.vertex_count();
    let trees = all_trees(n)?;
    let sigma = sg.total();
    let rows: Vec<(usize, usize, Vec<Violation>, Vec<Violation>, Option<(Rational, Location)>)> = trees
        .par_iter()
        .filter(|t| sg.is_admissible(d, t))
        .map(|t| {
            let sums = subtree_sums(t, &sigma.eval(t));
            let (mut count, mut eq, mut rel, mut sign, mut margin) = (0, 0, Vec::new(), Vec::new(), None);
            for a in 1..t.len() {
                count += 1;
                let m = sg.expanded(t, a);
                let lhs = sums[a] - rat(SCALING_DIM * (t.leaves(a).count_ones() as i64 - 1));
                let st = match &sg.context {
                    Context::Inner { subtree } => inner_sigma_tilde(d, subtree, m),
                    Context::BigGraph { always, harvested } => big_sigma_tilde(d, *always, *harvested, m),
                };
                let ok = match sg.context {
                    Context::Inner { .. } => lhs == st,
                    Context::BigGraph { .. } => lhs <= st,
                };
                let v = || Violation { at: Location::new(t, a), nodes: m.to_vec(), value: st.to_string(), bound: lhs.to_string() };
                eq += usize::from(lhs == st);
                if !ok {
                    rel.push(v());
                }
                if st >= rat(0) {
                    sign.push(v());
                }
                keep_min(&mut margin, -st, || Location::new(t, a));
            }
            (count, eq, rel, sign, margin)
        })
        .collect();
    let mut out = SigmaTildeReport { context: context_name(sg).into(), ..Default::default() };
    let mut cur = None;
    for (c, e, rel, sign, m) in rows {
        out.clusters += c;
        out.equalities += e;
        out.relation_failures.extend(rel);
        out.sign_violations.extend(sign);
        if let Some((m, at)) = m {
            out.margins.offer(m, || at, &mut cur);
        }
    }
    Ok(out)
}

/// Outcome of the large-scale integrability checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LargeScaleReport {
    pub checked: usize,
    /// `Σ_{w ≱ a} ς(w) > |s| |𝒱 \ 𝔏_a|` failures.
    pub direct_violations: Vec<Violation>,
    /// Failures of `Σ_{w ≱ a} ς(w) − |s||𝒱 \ 𝔏_a| ≥ ς̃(N* \ 𝔑(a))`.
    pub relation_failures: Vec<Violation>,
    /// Components `M ∈ 𝒵` with `ς̃(M) ≤ 0`.
    pub sign_violations: Vec<Violation>,
    pub components: usize,
    pub direct_margins: Margins,
}

/// Large-scale checks for a big-graph homogeneity: every admissible tree and
/// non-root `a` above the common ancestor of the base point and the roots.
pub fn large_scale_audit(d: &MomentDiagram, sg: &SgHomogeneity) -> Result<LargeScaleReport, PowerError> {
    let Context::BigGraph { always, harvested } = sg.context.clone() else {
        return Ok(LargeScaleReport::default());
    };
    let n = sg.vertex_count();
    let trees = all_trees(n)?;
    let sigma = sg.total();
    let star: VSet = d.roots().into_iter().fold(1 << sg.quotient.pinned, |m, u| m | (1 << sg.quotient.of(u)));
    let everything = d.all_nodes_with_base();
    let mut out = LargeScaleReport::default();
    let mut cur = None;
    for t in trees.iter().filter(|t| sg.is_admissible(d, t)) {
        let vals = sigma.eval(t);
        let total: Rational = vals.iter().sum();
        let sums = subtree_sums(t, &vals);
        for a in (1..t.len()).filter(|&a| star & !t.leaves(a) == 0) {
            out.checked += 1;
            let outside = total - sums[a];
            let rest = rat(SCALING_DIM * (n as i64 - t.leaves(a).count_ones() as i64));
            let m = everything.difference(sg.expanded(t, a));
            let st = large_scale_sigma_tilde(d, always, harvested, m);
            let v = |value: Rational, bound: Rational, nodes: NodeSet| Violation {
                at: Location::new(t, a),
                nodes: nodes.to_vec(),
                value: value.to_string(),
                bound: bound.to_string(),
            };
            if outside <= rest {
                out.direct_violations.push(v(outside, rest, m));
            }
            if outside - rest < st {
                out.relation_failures.push(v(outside - rest, st, m));
            }
            out.direct_margins.offer(outside - rest, || Location::new(t, a), &mut cur);
            debug_assert!(!m.contains(BASE));
            for c in kernel_components(d, m) {
                out.components += 1;
                let sc = large_scale_sigma_tilde(d, always, harvested, c);
                if sc <= rat(0) {
                    out.sign_violations.push(v(sc, rat(0), c));
                }
            }
        }
    }
    Ok(out)
}

/// Check `Σ_{b ≥ a} ς(b) − (|𝔏_a| − 1)|s| = ς̃(𝔑(a))` on every coalescence
/// tree, admissible or not. Returns the number of clusters checked and the
/// failures.
pub fn summed_identity(d: &MomentDiagram, sg: &SgHomogeneity) -> Result<(usize, Vec<Violation>), PowerError> {
    let Context::Inner { subtree } = sg.context else {
        return Ok((0, Vec::new()));
    };
    let trees = all_trees(sg.vertex_count())?;
    let sigma = sg.total();
    let mut checked = 0;
    let mut bad = Vec::new();
    for t in &trees {
        let sums = subtree_sums(t, &sigma.eval(t));
        for a in 1..t.len() {
            checked += 1;
            let m = sg.expanded(t, a);
            let lhs = sums[a] - rat(SCALING_DIM * (t.leaves(a).count_ones() as i64 - 1));
            let st = inner_sigma_tilde(d, &subtree, m);
            if lhs != st {
                bad.push(Violation { at: Location::new(t, a), nodes: m.to_vec(), value: lhs.to_string(), bound: st.to_string() });
            }
        }
    }
    Ok((checked, bad))
}
