use serde::Serialize;
use sg_tree_core::{Deco, DecoratedTree, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ViolationKind {
    /// A negative tree has a node without noise.
    ZeroLabeledNode,
    /// A negative tree carries a decoration other than one `(0,1,0)` or `(0,0,1)`.
    Decoration,
    /// A tree other than `Ξ±` has homogeneity `≤ −β̄`.
    BelowNoiseFloor,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StructuralViolation {
    pub key: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub checked: usize,
    pub negative_checked: usize,
    pub violations: Vec<StructuralViolation>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the shape constraints on negative trees and the lower bound
/// `|τ|_s > −β̄` on everything except the bare noises.
pub fn structural_audit<'a>(
    trees: impl IntoIterator<Item = &'a DecoratedTree>,
    beta_bar: Rational,
) -> StructuralReport {
    let mut report = StructuralReport::default();
    for t in trees {
        report.checked += 1;
        let hom = t.s_homogeneity().eval(beta_bar);
        let bare_noise = t.node_count() == 1 && t.label().is_noise() && t.deco().is_zero();
        if !bare_noise && hom <= -beta_bar {
            report.violations.push(StructuralViolation { key: t.key().into(), kind: ViolationKind::BelowNoiseFloor });
        }
        if hom >= Rational::from_integer(0) {
            continue;
        }
        report.negative_checked += 1;
        if t.has_zero_labeled_node() {
            report.violations.push(StructuralViolation { key: t.key().into(), kind: ViolationKind::ZeroLabeledNode });
        }
        if !decoration_ok(t) {
            report.violations.push(StructuralViolation { key: t.key().into(), kind: ViolationKind::Decoration });
        }
    }
    report.violations.sort();
    report
}

fn decoration_ok(t: &DecoratedTree) -> bool {
    let decos: Vec<Deco> = t.preorder().iter().map(|u| u.deco()).filter(|d| !d.is_zero()).collect();
    match decos.as_slice() {
        [] => true,
        [d] => d.0 == [0, 1, 0] || d.0 == [0, 0, 1],
        _ => false,
    }
}
