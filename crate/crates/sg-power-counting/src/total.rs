use std::collections::BTreeMap;
use std::ops::{Add, Neg};

use serde::Serialize;
use sg_tree_core::{Rational, SCALING_DIM};

use crate::coalescence::{members, CoalescenceTree, VSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MarkerKind {
    /// `δ↑[V′]`, sitting at `V′↑`.
    Up,
    /// `δ⇑[V′]`, sitting at `V′⇑`.
    UpUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Marker {
    pub kind: MarkerKind,
    pub set: VSet,
}

/// A formal combination of markers with exact coefficients, evaluated per
/// coalescence tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TotalHomogeneity {
    #[serde(serialize_with = "ser_terms")]
    terms: BTreeMap<Marker, Rational>,
}

fn ser_terms<S: serde::Serializer>(t: &BTreeMap<Marker, Rational>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for (m, c) in t {
        seq.serialize_element(&(m.kind, members(m.set).collect::<Vec<_>>(), c.to_string()))?;
    }
    seq.end()
}

impl TotalHomogeneity {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn up(set: VSet, c: Rational) -> Self {
        let mut t = Self::zero();
        t.add_term(MarkerKind::Up, set, c);
        t
    }

    pub fn add_term(&mut self, kind: MarkerKind, set: VSet, c: Rational) {
        let e = self.terms.entry(Marker { kind, set }).or_insert_with(|| Rational::from_integer(0));
        *e += c;
        if *e == Rational::from_integer(0) {
            self.terms.remove(&Marker { kind, set });
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Marker, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.kind, m.set, *c * k);
        }
        out
    }

    /// Vertices mentioned by any marker.
    pub fn support(&self) -> VSet {
        self.terms.keys().fold(0, |a, m| a | m.set)
    }

    /// `ς_𝔗` on the internal nodes of `tree`.
    pub fn eval(&self, tree: &CoalescenceTree) -> Vec<Rational> {
        let mut out = vec![Rational::from_integer(0); tree.len()];
        for (m, c) in &self.terms {
            let a = match m.kind {
                MarkerKind::Up => tree.up(m.set),
                MarkerKind::UpUp => tree.up_up(m.set),
            };
            out[a] += *c;
        }
        out
    }

    /// `Σ_a ς_𝔗(a) − (|𝒱| − 1)|s|`.
    pub fn order_on(&self, tree: &CoalescenceTree) -> Rational {
        let s: Rational = self.eval(tree).into_iter().sum();
        s - Rational::from_integer(SCALING_DIM * (tree.vertex_count() as i64 - 1))
    }

    /// The common order over `trees`, if it is the same for all of them.
    pub fn order_over<'a>(&self, trees: impl IntoIterator<Item = &'a CoalescenceTree>) -> Option<Rational> {
        let mut it = trees.into_iter().map(|t| self.order_on(t));
        let first = it.next()?;
        it.all(|o| o == first).then_some(first)
    }
}

impl Add for TotalHomogeneity {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.add_term(m.kind, m.set, c);
        }
        self
    }
}

impl Neg for TotalHomogeneity {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Rational::from_integer(-1))
    }
}

/// `Σ_{b ≥ a} ς_𝔗(b)` for every internal node `a`.
pub fn subtree_sums(tree: &CoalescenceTree, values: &[Rational]) -> Vec<Rational> {
    let mut out = values.to_vec();
    for b in (1..tree.len()).rev() {
        let p = tree.parent(b).expect("non-root");
        let v = out[b];
        out[p] += v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalescence::{all_trees, vset};

    #[test]
    fn markers_land_where_expected() {
        let t = CoalescenceTree::from_internal(3, vec![0b111, 0b011]).unwrap();
        let r = Rational::from_integer;
        let s = TotalHomogeneity::up(vset([0, 1]), r(5)) + TotalHomogeneity::up(vset([2]), r(1));
        assert_eq!(s.eval(&t), vec![r(1), r(5)]);
        let mut u = TotalHomogeneity::zero();
        u.add_term(MarkerKind::UpUp, vset([0]), r(2));
        assert_eq!(u.eval(&t), vec![r(2), r(0)]);
        assert!((s.clone() + -s).is_zero());
    }

    #[test]
    fn linear_and_summed() {
        let r = Rational::from_integer;
        let s = TotalHomogeneity::up(vset([0, 1]), r(3)) + TotalHomogeneity::up(vset([1, 2, 3]), r(-1));
        for t in all_trees(4).unwrap() {
            let v = s.eval(&t);
            let doubled = s.scale(r(2)).eval(&t);
            assert!(v.iter().zip(&doubled).all(|(a, b)| *a * r(2) == *b));
            assert_eq!(subtree_sums(&t, &v)[0], r(2));
            assert_eq!(s.order_on(&t), r(2 - 12));
        }
    }
}
