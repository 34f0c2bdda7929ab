use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use sg_tree_core::{Deco, DecoratedTree, Homogeneity, Label, ModelParams, Rational};

use crate::{RuleError, RuleSg};

pub const DEFAULT_TREE_LIMIT: usize = 200_000;

/// All trees conforming to the rule with `|τ|_s < μ`, keyed canonically.
#[derive(Debug, Clone)]
pub struct TreeCatalog {
    pub params: ModelParams,
    pub all: BTreeMap<String, DecoratedTree>,
    pub negative: BTreeSet<String>,
    pub negative_neutral: BTreeSet<String>,
    /// Homogeneity cutoff the catalog was generated with (`μ` unless reduced).
    pub cutoff: Rational,
    /// Largest per-node decoration degree allowed during generation.
    pub deco_cap: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub key: String,
    pub s_hom: Homogeneity,
    pub sg_hom: Homogeneity,
    pub charge: i64,
    pub n_noises: usize,
    pub n_edges: usize,
    pub negative: bool,
    pub neutral: bool,
}

/// Negative trees split by whether they can be renormalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub negative: Vec<DecoratedTree>,
    pub negative_neutral: Vec<DecoratedTree>,
    /// Negative but charged.
    pub non_renormalizable: Vec<DecoratedTree>,
}

impl TreeCatalog {
    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&DecoratedTree> {
        self.all.get(key)
    }

    pub fn contains(&self, tree: &DecoratedTree) -> bool {
        self.all.contains_key(tree.key())
    }

    pub fn negative_trees(&self) -> impl Iterator<Item = &DecoratedTree> {
        self.negative.iter().map(|k| &self.all[k])
    }

    pub fn negative_neutral_trees(&self) -> impl Iterator<Item = &DecoratedTree> {
        self.negative_neutral.iter().map(|k| &self.all[k])
    }

    pub fn entries(&self) -> Vec<CatalogEntry> {
        self.all
            .iter()
            .map(|(k, t)| CatalogEntry {
                key: k.clone(),
                s_hom: t.s_homogeneity(),
                sg_hom: t.sg_homogeneity(),
                charge: t.charge(),
                n_noises: t.noise_count(),
                n_edges: t.edge_count(),
                negative: self.negative.contains(k),
                neutral: t.is_neutral(),
            })
            .collect()
    }
}

pub fn enumerate_trees(params: &ModelParams) -> Result<TreeCatalog, RuleError> {
    enumerate_trees_with_limit(params, DEFAULT_TREE_LIMIT)
}

pub fn enumerate_trees_with_limit(params: &ModelParams, limit: usize) -> Result<TreeCatalog, RuleError> {
    enumerate_below(params, params.mu, limit)
}

/// Only the trees with `|τ|_s < 0`; far cheaper than the full catalog near
/// `β̄ = 2` and exact for the negative sets.
pub fn enumerate_negative(params: &ModelParams) -> Result<TreeCatalog, RuleError> {
    enumerate_below(params, Rational::from_integer(0), DEFAULT_TREE_LIMIT)
}

/// Fixpoint generation of `{τ : |τ|_s < cutoff}`.
///
/// Each round forms every `X^k Ξ^l Π I(τᵢ)` from the current catalog; it
/// stops once a round adds nothing. Any branch of a tree below the cutoff is
/// itself below `cutoff + β̄ − 2`, so the fixpoint is complete for every
/// cutoff.
pub fn enumerate_below(params: &ModelParams, cutoff: Rational, limit: usize) -> Result<TreeCatalog, RuleError> {
    let bb = params.beta_bar;
    let two = Rational::from_integer(2);
    if bb >= two {
        return Err(RuleError::NonTerminating(bb.to_string()));
    }
    let mu = cutoff;
    let rule = RuleSg::new(bb);
    let deco_cap = deco_cap(bb, mu);
    let decos = Deco::up_to_degree(deco_cap);

    let mut all: BTreeMap<String, DecoratedTree> = BTreeMap::new();
    loop {
        let mut planted: Vec<(Rational, DecoratedTree)> = all
            .values()
            .filter(|t| !(t.label() == Label::Zero && t.children().is_empty()))
            .map(|t| (t.s_homogeneity().eval(bb) + two, t.clone()))
            .collect();
        planted.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

        let mut fresh = Vec::new();
        for label in [Label::Plus, Label::Minus, Label::Zero] {
            for &deco in &decos {
                let base = DecoratedTree::new(label, deco, Vec::new()).s_homogeneity().eval(bb);
                if base >= mu {
                    continue;
                }
                let mut chosen = Vec::new();
                extend_children(&planted, 0, base, mu, &mut chosen, &mut |children| {
                    let t = DecoratedTree::new(label, deco, children.to_vec());
                    if !all.contains_key(t.key()) {
                        fresh.push(t);
                    }
                });
            }
        }
        fresh.sort();
        fresh.dedup();
        if fresh.is_empty() {
            break;
        }
        for t in fresh {
            debug_assert!(rule.conforms(&t));
            all.insert(t.key().to_string(), t);
        }
        if all.len() > limit {
            return Err(RuleError::TooManyTrees { limit });
        }
    }

    let negative: BTreeSet<String> =
        all.iter().filter(|(_, t)| t.is_negative(bb)).map(|(k, _)| k.clone()).collect();
    let negative_neutral = negative.iter().filter(|k| all[*k].is_neutral()).cloned().collect();
    Ok(TreeCatalog { params: *params, all, negative, negative_neutral, cutoff, deco_cap })
}

/// Largest integer strictly below `μ + β̄`.
///
/// Removing a decoration leaves a tree of homogeneity at least `−β̄`, so no
/// tree below `μ` can carry more than this at a single node.
fn deco_cap(beta_bar: Rational, mu: Rational) -> u32 {
    let bound = mu + beta_bar;
    let c = bound.ceil().to_integer() - 1;
    c.max(0) as u32
}

fn extend_children(
    planted: &[(Rational, DecoratedTree)],
    start: usize,
    hom: Rational,
    mu: Rational,
    chosen: &mut Vec<DecoratedTree>,
    emit: &mut dyn FnMut(&[DecoratedTree]),
) {
    emit(chosen);
    for i in start..planted.len() {
        let (h, t) = &planted[i];
        let next = hom + *h;
        if next >= mu {
            break;
        }
        chosen.push(t.clone());
        extend_children(planted, i, next, mu, chosen, emit);
        chosen.pop();
    }
}

/// Split the negative trees of a catalog and cross-check the two
/// characterizations of the renormalizable ones.
pub fn classify_trees(cat: &TreeCatalog) -> Result<Classification, RuleError> {
    let bb = cat.params.beta_bar;
    let mut out = Classification { negative: Vec::new(), negative_neutral: Vec::new(), non_renormalizable: Vec::new() };
    for (key, t) in &cat.all {
        let neg = t.s_homogeneity().is_negative(bb);
        let sg_neg = t.sg_homogeneity().is_negative(bb);
        if sg_neg != (neg && t.is_neutral()) {
            return Err(RuleError::Inconsistent {
                key: key.clone(),
                msg: "negative SG homogeneity does not coincide with negative and neutral".into(),
            });
        }
        if neg {
            out.negative.push(t.clone());
            if sg_neg {
                out.negative_neutral.push(t.clone());
            } else {
                out.non_renormalizable.push(t.clone());
            }
        }
    }
    Ok(out)
}
