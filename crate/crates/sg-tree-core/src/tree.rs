use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::{Homogeneity, Rational, TreeError, SCALING};

/// Noise type of a node: `+`, `-` or none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Plus,
    Minus,
    Zero,
}

impl Label {
    pub fn charge(self) -> i64 {
        match self {
            Label::Plus => 1,
            Label::Minus => -1,
            Label::Zero => 0,
        }
    }

    pub fn is_noise(self) -> bool {
        self != Label::Zero
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
            Label::Zero => Label::Zero,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Label::Plus => '+',
            Label::Minus => '-',
            Label::Zero => '0',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '+' => Some(Label::Plus),
            '-' => Some(Label::Minus),
            '0' => Some(Label::Zero),
            _ => None,
        }
    }
}

/// Polynomial decoration `n ∈ ℕ³` (time first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Deco(pub [u32; 3]);

impl Deco {
    pub const ZERO: Deco = Deco([0, 0, 0]);

    /// `|n|_s = 2 n0 + n1 + n2`.
    pub fn degree(&self) -> u32 {
        self.0.iter().zip(SCALING).map(|(n, s)| n * s).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// All decorations with `|n|_s ≤ max_degree`.
    pub fn up_to_degree(max_degree: u32) -> Vec<Deco> {
        let mut out = Vec::new();
        for n0 in 0..=max_degree / 2 {
            for n1 in 0..=max_degree {
                for n2 in 0..=max_degree {
                    let d = Deco([n0, n1, n2]);
                    if d.degree() <= max_degree {
                        out.push(d);
                    }
                }
            }
        }
        out.sort_by_key(|d| (d.degree(), d.0));
        out
    }
}

impl std::ops::Add for Deco {
    type Output = Deco;
    fn add(self, o: Deco) -> Deco {
        Deco([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

/// A decorated rooted tree in canonical form.
///
/// Children are sorted ascending by their serialized key, so two trees are
/// equal exactly when they are isomorphic as decorated rooted trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecoratedTree {
    label: Label,
    deco: Deco,
    children: Vec<DecoratedTree>,
    key: String,
}

impl DecoratedTree {
    pub fn new(label: Label, deco: Deco, mut children: Vec<DecoratedTree>) -> Self {
        children.sort_by(|a, b| a.key.cmp(&b.key));
        let mut key = format!("({};{},{},{};", label.symbol(), deco.0[0], deco.0[1], deco.0[2]);
        for c in &children {
            key.push_str(&c.key);
        }
        key.push(')');
        Self { label, deco, children, key }
    }

    pub fn leaf(label: Label) -> Self {
        Self::new(label, Deco::ZERO, Vec::new())
    }

    /// `Ξ₊` or `Ξ₋`.
    pub fn noise(label: Label) -> Self {
        Self::leaf(label)
    }

    /// The monomial `X^n`.
    pub fn monomial(deco: Deco) -> Self {
        Self::new(Label::Zero, deco, Vec::new())
    }

    /// `Ξ₋·I(Ξ₊)`.
    pub fn dipole() -> Self {
        Self::new(Label::Minus, Deco::ZERO, vec![Self::leaf(Label::Plus)])
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn deco(&self) -> Deco {
        self.deco
    }

    pub fn children(&self) -> &[DecoratedTree] {
        &self.children
    }

    /// Canonical serialization; equal keys iff isomorphic trees.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// `I(τ)`: a fresh undecorated, unlabeled root with one edge to the old root.
    pub fn integrate(&self) -> Self {
        Self::new(Label::Zero, Deco::ZERO, vec![self.clone()])
    }

    /// Tree product: roots identified, decorations added.
    pub fn product(&self, other: &Self) -> Result<Self, TreeError> {
        let label = match (self.label, other.label) {
            (Label::Zero, l) | (l, Label::Zero) => l,
            (a, b) => {
                return Err(TreeError::BothRootsCharged { left: a.symbol(), right: b.symbol() })
            }
        };
        let children = self.children.iter().chain(&other.children).cloned().collect();
        Ok(Self::new(label, self.deco + other.deco, children))
    }

    /// Swap `+` and `-` everywhere.
    pub fn opp(&self) -> Self {
        Self::new(self.label.flip(), self.deco, self.children.iter().map(Self::opp).collect())
    }

    /// Copy with every decoration set to zero.
    pub fn undecorated(&self) -> Self {
        Self::new(self.label, Deco::ZERO, self.children.iter().map(Self::undecorated).collect())
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Self::node_count).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.node_count() - 1
    }

    pub fn noise_count(&self) -> usize {
        usize::from(self.label.is_noise())
            + self.children.iter().map(Self::noise_count).sum::<usize>()
    }

    /// Total charge `q(L(T))`.
    pub fn charge(&self) -> i64 {
        self.label.charge() + self.children.iter().map(Self::charge).sum::<i64>()
    }

    pub fn is_neutral(&self) -> bool {
        self.charge() == 0
    }

    /// `Σ_u |n(u)|_s`.
    pub fn deco_degree(&self) -> u32 {
        self.deco.degree() + self.children.iter().map(Self::deco_degree).sum::<u32>()
    }

    /// Nodes carrying a nonzero decoration.
    pub fn decorated_nodes(&self) -> usize {
        usize::from(!self.deco.is_zero())
            + self.children.iter().map(Self::decorated_nodes).sum::<usize>()
    }

    pub fn has_zero_labeled_node(&self) -> bool {
        self.label == Label::Zero || self.children.iter().any(Self::has_zero_labeled_node)
    }

    /// `|T|_s = 2|K| − β̄|L| + Σ|n(u)|_s`.
    pub fn s_homogeneity(&self) -> Homogeneity {
        let constant = 2 * self.edge_count() as i64 + i64::from(self.deco_degree());
        Homogeneity::int(constant, -(self.noise_count() as i64))
    }

    /// `|T|_SG = |T|_s + β̄·q(L)²`.
    pub fn sg_homogeneity(&self) -> Homogeneity {
        let q = self.charge();
        self.s_homogeneity() + Homogeneity::int(0, q * q)
    }

    /// Number of automorphisms of the decorated rooted tree.
    pub fn symmetry_factor(&self) -> u64 {
        let mut total: u64 = 1;
        let mut i = 0;
        while i < self.children.len() {
            let mut j = i;
            while j < self.children.len() && self.children[j] == self.children[i] {
                j += 1;
            }
            let m = (j - i) as u64;
            let s = self.children[i].symmetry_factor();
            total *= (1..=m).product::<u64>() * s.pow(m as u32);
            i = j;
        }
        total
    }

    /// Depth-first preorder traversal of the subtree roots.
    pub fn preorder(&self) -> Vec<&DecoratedTree> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.children.iter().rev());
        }
        out
    }

    /// Parse a canonical key (children may appear in any order).
    pub fn parse(s: &str) -> Result<Self, TreeError> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let t = parse_node(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(TreeError::Parse { pos, msg: "trailing input".into() });
        }
        Ok(t)
    }

    pub fn is_negative(&self, beta_bar: Rational) -> bool {
        self.s_homogeneity().eval(beta_bar) < Rational::zero()
    }
}

fn parse_node(b: &[u8], pos: &mut usize) -> Result<DecoratedTree, TreeError> {
    let err = |pos: usize, msg: &str| TreeError::Parse { pos, msg: msg.to_string() };
    expect(b, pos, b'(')?;
    let label = b
        .get(*pos)
        .and_then(|&c| Label::from_symbol(c as char))
        .ok_or_else(|| err(*pos, "expected label"))?;
    *pos += 1;
    expect(b, pos, b';')?;
    let mut deco = [0u32; 3];
    for (i, slot) in deco.iter_mut().enumerate() {
        let start = *pos;
        while *pos < b.len() && b[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(err(start, "expected digit"));
        }
        let txt = std::str::from_utf8(&b[start..*pos]).map_err(|_| err(start, "bad utf-8"))?;
        *slot = txt.parse().map_err(|_| err(start, "decoration overflow"))?;
        expect(b, pos, if i < 2 { b',' } else { b';' })?;
    }
    let mut children = Vec::new();
    while b.get(*pos) == Some(&b'(') {
        children.push(parse_node(b, pos)?);
    }
    expect(b, pos, b')')?;
    Ok(DecoratedTree::new(label, Deco(deco), children))
}

fn expect(b: &[u8], pos: &mut usize, c: u8) -> Result<(), TreeError> {
    if b.get(*pos) == Some(&c) {
        *pos += 1;
        Ok(())
    } else {
        Err(TreeError::Parse { pos: *pos, msg: format!("expected `{}`", c as char) })
    }
}

impl PartialOrd for DecoratedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DecoratedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

impl Serialize for DecoratedTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus() -> DecoratedTree {
        DecoratedTree::noise(Label::Plus)
    }

    fn minus() -> DecoratedTree {
        DecoratedTree::noise(Label::Minus)
    }

    /// Six-noise example: root `-` with children `+` and `+(+,-,+)`.
    fn example_tree() -> DecoratedTree {
        let inner = DecoratedTree::new(Label::Plus, Deco::ZERO, vec![plus(), minus(), plus()]);
        DecoratedTree::new(Label::Minus, Deco::ZERO, vec![plus(), inner])
    }

    #[test]
    fn dipole_key() {
        assert_eq!(DecoratedTree::dipole().key(), "(-;0,0,0;(+;0,0,0;))");
        let built = minus().product(&plus().integrate()).unwrap();
        assert_eq!(built, DecoratedTree::dipole());
    }

    #[test]
    fn integrate_noise() {
        let t = plus().integrate();
        assert_eq!(t.node_count(), 2);
        assert_eq!(t.edge_count(), 1);
        assert_eq!(t.s_homogeneity(), Homogeneity::int(2, -1));
        assert_eq!(DecoratedTree::monomial(Deco::ZERO).integrate().s_homogeneity(), Homogeneity::int(2, 0));
    }

    #[test]
    fn product_rules() {
        assert_eq!(DecoratedTree::dipole().s_homogeneity(), Homogeneity::int(2, -2));
        let one = DecoratedTree::monomial(Deco::ZERO);
        assert_eq!(DecoratedTree::dipole().product(&one).unwrap(), DecoratedTree::dipole());
        assert!(matches!(plus().product(&minus()), Err(TreeError::BothRootsCharged { .. })));
    }

    #[test]
    fn example_tree_values() {
        let t = example_tree();
        assert_eq!(t.node_count(), 6);
        assert_eq!(t.s_homogeneity(), Homogeneity::int(10, -6));
        assert_eq!(t.sg_homogeneity(), Homogeneity::int(10, -2));
        assert_eq!(t.charge(), 2);
    }

    #[test]
    fn simple_homogeneities() {
        assert_eq!(plus().s_homogeneity(), Homogeneity::int(0, -1));
        assert_eq!(plus().sg_homogeneity(), Homogeneity::int(0, 0));
        assert_eq!(DecoratedTree::monomial(Deco([0, 1, 0])).s_homogeneity(), Homogeneity::int(1, 0));
        assert_eq!(DecoratedTree::dipole().sg_homogeneity(), Homogeneity::int(2, -2));
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(DecoratedTree::dipole().symmetry_factor(), 1);
        let t = plus()
            .product(&minus().integrate())
            .unwrap()
            .product(&minus().integrate())
            .unwrap();
        assert_eq!(t.symmetry_factor(), 2);
        // root with two identical branches each having two identical leaves
        let branch = DecoratedTree::new(Label::Plus, Deco::ZERO, vec![minus(), minus()]);
        let t = DecoratedTree::new(Label::Zero, Deco::ZERO, vec![branch.clone(), branch]);
        assert_eq!(t.symmetry_factor(), 2 * 2 * 2);
    }

    #[test]
    fn opp_chain() {
        // root -, child -, then +, then +
        let chain = DecoratedTree::new(
            Label::Minus,
            Deco::ZERO,
            vec![DecoratedTree::new(
                Label::Minus,
                Deco::ZERO,
                vec![DecoratedTree::new(Label::Plus, Deco::ZERO, vec![plus()])],
            )],
        );
        let flipped = chain.opp();
        let labels: Vec<char> = flipped.preorder().iter().map(|t| t.label().symbol()).collect();
        assert_eq!(labels, vec!['+', '+', '-', '-']);
        assert_eq!(flipped.opp(), chain);
        assert_ne!(DecoratedTree::dipole().key(), DecoratedTree::dipole().opp().key());
    }

    #[test]
    fn parse_round_trip_and_reorder() {
        let t = example_tree();
        assert_eq!(DecoratedTree::parse(t.key()).unwrap(), t);
        let unsorted = "(-;0,0,0;(+;0,0,0;(+;0,0,0;)(-;0,0,0;)(+;0,0,0;))(+;0,0,0;))";
        assert_eq!(DecoratedTree::parse(unsorted).unwrap(), t);
        assert!(DecoratedTree::parse("(x;0,0,0;)").is_err());
        assert!(DecoratedTree::parse("(+;0,0;)").is_err());
        assert!(DecoratedTree::parse("(+;0,0,0;))").is_err());
    }

    #[test]
    fn decorations_up_to_two() {
        let d = Deco::up_to_degree(2);
        assert_eq!(d.len(), 7);
        assert!(d.iter().all(|x| x.degree() <= 2));
    }
}
