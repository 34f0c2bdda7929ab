use std::collections::BTreeSet;

use proptest::prelude::*;
use sg_rule_engine::{classify_trees, enumerate_negative, enumerate_trees, structural_audit, TreeCatalog};
use sg_tree_core::{DecoratedTree, ModelParams, Rational};

fn catalog(bb: Rational) -> TreeCatalog {
    enumerate_trees(&ModelParams::for_beta_bar(bb).unwrap()).unwrap()
}

fn negatives(bb: Rational) -> TreeCatalog {
    enumerate_negative(&ModelParams::for_beta_bar(bb).unwrap()).unwrap()
}

/// Independent power count over raw parent arrays.
///
/// A tree with `k` nodes, `z` of them noise-free, and total decoration `D`
/// has `|τ|_s = 2(k − 1) − β̄(k − z) + D`. Negativity means
/// `(k − z)(2 − β̄) + 2z + D < 2`, which forces `z = 0`, `k(2 − β̄) < 2` and
/// `D < 2`, so only noise labels and degree-one decorations can occur.
fn brute_force_negative(bb: Rational) -> BTreeSet<String> {
    let two = Rational::from_integer(2);
    let mut kmax = 1;
    while Rational::from_integer(kmax + 1) * (two - bb) < two {
        kmax += 1;
    }
    let mut out = BTreeSet::new();
    for k in 1..=kmax as usize {
        for parents in parent_arrays(k) {
            for labels in 0..1usize << k {
                let lab: Vec<char> = (0..k).map(|i| ['+', '-'][(labels >> i) & 1]).collect();
                // decoration: none, or one node with a unit spatial degree
                let mut decos = vec![None];
                for u in 0..k {
                    decos.push(Some((u, 1)));
                    decos.push(Some((u, 2)));
                }
                for deco in decos {
                    let noises = k as i64;
                    let d = i64::from(deco.is_some());
                    let hom = Rational::from_integer(2 * (k as i64 - 1) + d) - bb * Rational::from_integer(noises);
                    if hom < Rational::from_integer(0) {
                        out.insert(encode(0, &parents, &lab, deco));
                    }
                }
            }
        }
    }
    out
}

fn parent_arrays(k: usize) -> Vec<Vec<Option<usize>>> {
    let mut acc = vec![vec![None]];
    for i in 1..k {
        acc = acc
            .into_iter()
            .flat_map(|p| (0..i).map(move |j| {
                let mut q = p.clone();
                q.push(Some(j));
                q
            }))
            .collect();
    }
    acc
}

fn encode(u: usize, parents: &[Option<usize>], lab: &[char], deco: Option<(usize, usize)>) -> String {
    let mut n = [0u32; 3];
    if let Some((v, axis)) = deco {
        if v == u {
            n[axis] = 1;
        }
    }
    let mut kids: Vec<String> = (0..parents.len())
        .filter(|&c| parents[c] == Some(u))
        .map(|c| encode(c, parents, lab, deco))
        .collect();
    kids.sort();
    format!("({};{},{},{};{})", lab[u], n[0], n[1], n[2], kids.concat())
}

#[test]
fn negative_sets_match_brute_force() {
    for (n, d) in [(1, 2), (9, 10), (6, 5), (5, 4), (7, 5), (3, 2)] {
        let bb = Rational::new(n, d);
        let got: BTreeSet<String> = catalog(bb).negative.iter().cloned().collect();
        assert_eq!(got, brute_force_negative(bb), "beta_bar = {bb}");
        assert_eq!(negatives(bb).negative, catalog(bb).negative);
    }
    for (n, d) in [(13, 8), (7, 4)] {
        let bb = Rational::new(n, d);
        let got: BTreeSet<String> = negatives(bb).negative.iter().cloned().collect();
        assert_eq!(got, brute_force_negative(bb), "beta_bar = {bb}");
    }
}

#[test]
fn six_fifths_neutral_negatives_are_the_dipoles() {
    let cat = catalog(Rational::new(6, 5));
    let dip = DecoratedTree::dipole();
    let expected: BTreeSet<String> = [dip.key().to_string(), dip.opp().key().to_string()].into();
    assert_eq!(cat.negative_neutral.iter().cloned().collect::<BTreeSet<_>>(), expected);
}

#[test]
fn thirteen_eighths_gains_four_noise_and_decorated_dipoles() {
    let cat = negatives(Rational::new(13, 8));
    let neutral: Vec<&DecoratedTree> = cat.negative_neutral_trees().collect();
    assert!(neutral.iter().any(|t| t.noise_count() == 4 && t.deco_degree() == 0));
    assert!(neutral.iter().any(|t| t.noise_count() == 2 && t.deco_degree() == 1));
    assert!(neutral.iter().all(|t| t.noise_count() % 2 == 0));
}

#[test]
fn structural_audit_passes_everywhere() {
    for (n, d) in [(1, 2), (6, 5), (5, 4), (7, 5), (3, 2), (13, 8), (7, 4)] {
        let bb = Rational::new(n, d);
        let cat = if bb <= Rational::new(3, 2) { catalog(bb) } else { negatives(bb) };
        let report = structural_audit(cat.all.values(), bb);
        assert!(report.passed(), "{bb}: {:?}", report.violations);
        let mut reversed: Vec<&DecoratedTree> = cat.all.values().collect();
        reversed.reverse();
        assert_eq!(structural_audit(reversed, bb), report);
        classify_trees(&cat).unwrap();
    }
}

#[test]
fn catalog_is_opp_closed_and_integrates_by_two() {
    let cat = catalog(Rational::new(5, 4));
    for t in cat.all.values() {
        assert!(cat.contains(&t.opp()), "{t}");
        assert_eq!(t.integrate().s_homogeneity().constant - t.s_homogeneity().constant, Rational::from_integer(2));
        assert_eq!(t.symmetry_factor(), t.opp().symmetry_factor());
    }
}

#[test]
fn export_schema() {
    let cat = catalog(Rational::new(6, 5));
    let v = serde_json::to_value(cat.entries()).unwrap();
    let dip = v
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["key"] == "(-;0,0,0;(+;0,0,0;))")
        .unwrap();
    assert_eq!(dip["s_hom"]["a"], "2");
    assert_eq!(dip["s_hom"]["b"], "-2");
    assert_eq!(dip["negative"], true);
    assert_eq!(dip["neutral"], true);
    assert_eq!(dip["n_edges"], 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn negativity_is_monotone(a in 1i64..36, b in 1i64..36) {
        let (lo, hi) = (a.min(b), a.max(b));
        let cat_lo = negatives(Rational::new(lo, 20));
        let cat_hi = negatives(Rational::new(hi, 20));
        prop_assert!(cat_lo.negative.is_subset(&cat_hi.negative));
    }

    #[test]
    fn below_one_only_single_noise_negatives(a in 1i64..20) {
        let cat = catalog(Rational::new(a, 20));
        prop_assert!(cat.negative_trees().all(|t| t.noise_count() == 1));
    }
}
