use proptest::prelude::*;
use sg_moment_diagrams::*;
use sg_rule_engine::enumerate_negative;
use sg_tree_core::{Deco, DecoratedTree, Label, ModelParams, Rational};

fn dipole(p: usize, bb: Rational) -> MomentDiagram {
    MomentDiagram::build(&DecoratedTree::dipole(), p, bb).unwrap()
}

/// Independent scan: every node subset of a copy, connectivity by parent
/// links, neutrality and `2(|S| − 1) − β̄|L(S)| < 0`.
fn brute_div(d: &MomentDiagram) -> Vec<NodeSet> {
    let mut out = Vec::new();
    for c in d.copies() {
        let nodes = c.nodes.to_vec();
        for mask in 1u32..1 << nodes.len() {
            let set: NodeSet = nodes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &u)| u).collect();
            let tops = set.iter().filter(|&u| d.parent(u).map_or(true, |q| !set.contains(q))).count();
            if tops != 1 {
                continue;
            }
            let charge: i64 = set.iter().map(|u| d.charge(u)).sum();
            let noises = set.iter().filter(|&u| d.node(u).label != Label::Zero).count() as i64;
            let hom = Rational::from_integer(2 * (set.len() as i64 - 1)) - d.beta_bar() * Rational::from_integer(noises);
            if charge == 0 && hom < Rational::from_integer(0) {
                out.push(set);
            }
        }
    }
    out.sort();
    out
}

fn brute_forest_count(div: &[NodeSet]) -> usize {
    (0u64..1 << div.len())
        .filter(|mask| {
            let chosen: Vec<&NodeSet> = div.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
            chosen.iter().enumerate().all(|(i, a)| {
                chosen[i + 1..].iter().all(|b| a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b))
            })
        })
        .count()
}

#[test]
fn dipole_single_pair() {
    let d = dipole(1, Rational::new(6, 5));
    assert_eq!(d.generalized_edges().len(), 4 + 2 + 6);
    assert_eq!(d.charge_of(d.noise_nodes()), 0);
    let div = divergent_subtrees(&d);
    assert_eq!(div.len(), 2);
    assert_eq!(enumerate_forests(&div).len(), 4);
    let terms = moment_terms(&d);
    assert_eq!(terms.len(), 9);
    let by_size: Vec<usize> = [0, 1, 2].iter().map(|&k| terms.iter().filter(|t| t.forest.len() == k).count()).collect();
    assert_eq!(by_size, vec![4, 4, 1]);
    let r = multilinearity_audit(&d, &terms);
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!((r.terms, r.pairs_per_term), (9, 6));
}

#[test]
fn dipole_two_pairs() {
    let d = dipole(2, Rational::new(6, 5));
    assert_eq!(d.node_count(), 8);
    let forests = enumerate_forests(&divergent_subtrees(&d));
    assert_eq!(forests.len(), 16);
    let terms = moment_terms(&d);
    // Σ_k C(4,k) 2^{4−k}
    assert_eq!(terms.len(), 81);
    let r = multilinearity_audit(&d, &terms);
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.pairs_per_term, 28);
}

#[test]
fn no_divergences_below_one() {
    let d = dipole(1, Rational::new(1, 2));
    assert!(divergent_subtrees(&d).is_empty());
    assert_eq!(moment_terms(&d).len(), 4);
}

#[test]
fn div_is_opp_symmetric() {
    let t = DecoratedTree::parse("(-;0,0,0;(+;0,0,0;)(+;0,0,0;(-;0,0,0;)))").unwrap();
    let d = MomentDiagram::build(&t, 1, Rational::new(19, 10)).unwrap();
    let div = divergent_subtrees(&d);
    let shift = d.copies()[0].nodes.len();
    let first: Vec<Vec<usize>> = div.iter().filter(|s| s.copy == 0).map(|s| s.nodes.to_vec()).collect();
    let second: Vec<Vec<usize>> =
        div.iter().filter(|s| s.copy == 1).map(|s| s.nodes.iter().map(|u| u - shift).collect()).collect();
    assert_eq!(first, second);
}

#[test]
fn renormalized_dipole_level_has_the_coulomb_factor() {
    let d = dipole(1, Rational::new(6, 5));
    let t = Subtree::whole(&d, 0);
    let f = Forest::new(&d, vec![t]).unwrap();
    let term = build_term(&d, &f, NodeSet::EMPTY);
    let inner: Vec<Factor> = term.factors_of(Some(0)).copied().collect();
    assert_eq!(
        inner,
        vec![
            Factor { edge: GenEdge::Kernel(2), kind: FactorKind::Ker, owner: Some(0), level: 1, slot: Slot::Integrand },
            Factor {
                edge: GenEdge::Pair(1, 2),
                kind: FactorKind::Interaction { sign: -1 },
                owner: Some(0),
                level: 1,
                slot: Slot::Integrand
            },
        ]
    );
    assert_eq!(term.y_sites, vec![YSite { subtree: 0, order: 0 }]);
    // the four cross pairs are inserted into the argument of the inner operator
    let inserted = term.factors_of(None).filter(|f| f.slot == Slot::Argument).count();
    assert_eq!(inserted, 4);
}

#[test]
fn gamma_of_the_example_edge() {
    let p = DecoratedTree::noise(Label::Plus);
    let m = DecoratedTree::noise(Label::Minus);
    let big = DecoratedTree::new(Label::Plus, Deco::ZERO, vec![p.clone(), m.clone(), p.clone()]);
    let t = DecoratedTree::new(Label::Minus, Deco::ZERO, vec![p, big]);
    let bb = Rational::new(503, 300);
    assert!(t.is_negative(bb));
    let d = MomentDiagram::build(&t, 1, bb).unwrap();
    let e = d.copies()[0].nodes.iter().find(|&u| d.parent(u).is_some() && d.above(u).len() == 4).unwrap();
    assert_eq!(gamma(&d, e), 2);
    assert_eq!(cut_candidates(&d), d.all_kernel_edges());
}

#[test]
fn gamma_range_over_negative_trees() {
    let samples = [(1, 2), (3, 4), (9, 10), (1, 1), (6, 5), (5, 4), (7, 5), (3, 2), (8, 5), (503, 300)];
    let mut checked = 0;
    for (a, b) in samples {
        let bb = Rational::new(a, b);
        let cat = enumerate_negative(&ModelParams::for_beta_bar(bb).unwrap()).unwrap();
        for t in cat.negative_trees() {
            let d = MomentDiagram::build(t, 1, bb).unwrap();
            for c in d.all_kernel_edges().iter() {
                let g = gamma(&d, c);
                assert!((1..=2).contains(&g), "{} edge {c}: {g}", t.key());
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

/// The shaded example: a subtree `S` with forest `{T₁, T₂, T′}`, `T′ ⊂ T₂`.
/// Node `k` is tagged with time decoration `k` so it can be located after
/// canonical reordering; decorations do not enter `|S⁰|_s`.
#[test]
fn shaded_figure_sets() {
    let node = |tag: u32, l: Label, ch: Vec<DecoratedTree>| DecoratedTree::new(l, Deco([tag, 0, 0]), ch);
    use Label::{Minus as M, Plus as P};
    // a1=1 b1=2 c1=3 d1=4 e=5 d2=6 b2=7 c2=8 c3=9 d3=10 d4=11
    let e = node(5, M, vec![]);
    let d1 = node(4, P, vec![e]);
    let d2 = node(6, P, vec![]);
    let c1 = node(3, M, vec![d2]);
    let b1 = node(2, P, vec![d1, c1]);
    let d3 = node(10, P, vec![]);
    let c2 = node(8, M, vec![d3]);
    let d4 = node(11, M, vec![]);
    let c3 = node(9, M, vec![d4]);
    let b2 = node(7, P, vec![c2, c3]);
    let a1 = node(1, M, vec![b1, b2]);
    let bb = Rational::new(19, 10);
    let d = MomentDiagram::build(&a1, 1, bb).unwrap();
    let id = |tag: u32| d.copies()[0].nodes.iter().find(|&u| d.node(u).deco.0[0] == tag).unwrap();
    let set = |tags: &[u32]| tags.iter().map(|&t| id(t)).collect::<NodeSet>();
    let sub = |tags: &[u32]| Subtree::from_nodes(&d, set(tags)).unwrap();
    let s = Subtree::whole(&d, 0);
    let t1 = sub(&[2, 3]);
    let t2 = sub(&[7, 8, 9, 10]);
    let tp = sub(&[7, 8]);
    let f = Forest::new(&d, vec![t1, t2, tp]).unwrap();
    let b = derived_edge_sets(&d, &f, Scope::Subtree(s)).unwrap();
    let mut children = b.children.clone();
    children.sort();
    let mut expect = vec![t1, t2];
    expect.sort();
    assert_eq!(children, expect);
    assert_eq!(b.inner_nodes, set(&[4, 6, 11, 2, 7, 5]));
    // kernel edges named by their upper end: a1b1, a1b2, d1e
    assert_eq!(b.k_ring, set(&[2, 7, 5]));
    // b1d1, c1d2, c3d4
    assert_eq!(b.k_boundary, set(&[4, 6, 11]));

    let b2s = derived_edge_sets(&d, &f, Scope::Subtree(t2)).unwrap();
    assert_eq!(b2s.children, vec![tp]);
    assert_eq!(b2s.inner_nodes, set(&[9, 10]));
    // both edges leaving T′ upwards stay inside T₂
    assert!(b2s.k_ring.is_empty());
    assert_eq!(b2s.k_boundary, set(&[9, 10]));
    assert_eq!(b2s.inner_pairs.len(), 1);
    assert_eq!(b2s.p_boundary.len(), 4);
}

#[test]
fn deleting_an_inserted_interaction_fails_the_audit() {
    let d = dipole(2, Rational::new(6, 5));
    let mut terms = moment_terms(&d);
    let (i, t) = terms.iter_mut().enumerate().find(|(_, t)| t.forest.len() == 1 && t.cut.is_empty()).unwrap();
    let pos = t
        .inventory
        .iter()
        .position(|f| f.slot == Slot::Argument && matches!(f.kind, FactorKind::Interaction { .. }))
        .unwrap();
    let removed = t.inventory.remove(pos);
    let r = multilinearity_audit(&d, &terms);
    assert!(!r.passed());
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].term, i);
    assert_eq!(r.failures[0].count, 0);
    assert_eq!(GenEdge::Pair(r.failures[0].edge.0, r.failures[0].edge.1), removed.edge);
}

#[test]
fn term_count_matches_cut_subsets() {
    let t = DecoratedTree::parse("(-;0,0,0;(+;0,0,0;)(+;0,0,0;(-;0,0,0;)))").unwrap();
    let d = MomentDiagram::build(&t, 1, Rational::new(19, 10)).unwrap();
    let forests = enumerate_forests(&divergent_subtrees(&d));
    let c = cut_candidates(&d);
    let expected: usize = forests.iter().map(|f| 1usize << c.difference(f.kernel_edges()).len()).sum();
    assert_eq!(moment_terms(&d).len(), expected);
    let flipped = MomentDiagram::build(&t.opp(), 1, Rational::new(19, 10)).unwrap();
    assert_eq!(moment_terms(&flipped).len(), expected);
}

fn arb_tree(max: usize) -> impl Strategy<Value = DecoratedTree> {
    (1..=max)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                (0..n).map(|i| if i == 0 { Just(0usize).boxed() } else { (0..i).boxed() }).collect::<Vec<_>>(),
            )
        })
        .prop_map(|(labels, parents)| {
            let n = labels.len();
            fn build(i: usize, labels: &[bool], parents: &[usize]) -> DecoratedTree {
                let ch = (1..labels.len()).filter(|&j| parents[j] == i).map(|j| build(j, labels, parents)).collect();
                DecoratedTree::new(if labels[i] { Label::Plus } else { Label::Minus }, Deco::ZERO, ch)
            }
            let _ = n;
            build(0, &labels, &parents)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn div_and_forests_match_brute_force(t in arb_tree(5), a in 1i64..40) {
        let bb = Rational::new(a, 20);
        let d = MomentDiagram::build(&t, 1, bb).unwrap();
        let div = divergent_subtrees(&d);
        let mut got: Vec<NodeSet> = div.iter().map(|s| s.nodes).collect();
        got.sort();
        let oracle = brute_div(&d);
        prop_assert_eq!(&got, &oracle);
        prop_assert_eq!(enumerate_forests(&div).len(), brute_forest_count(&oracle));
    }

    #[test]
    fn every_term_is_multilinear(t in arb_tree(4), a in 20i64..40, p in 1usize..3) {
        let d = MomentDiagram::build(&t, p, Rational::new(a, 20)).unwrap();
        let terms = moment_terms(&d);
        let r = multilinearity_audit(&d, &terms);
        prop_assert!(r.passed(), "{:?}", r.failures);
        for f in enumerate_forests(&divergent_subtrees(&d)) {
            for s in f.members() {
                let b = derived_edge_sets(&d, &f, Scope::Subtree(*s)).unwrap();
                let mut covered = b.k_ring;
                for tc in &b.children {
                    covered = covered.union(tc.k_bar_down(&d).intersection(s.kernel_edges()));
                }
                prop_assert_eq!(covered, s.kernel_edges());
            }
        }
    }

    #[test]
    fn sg_of_subsets(t in arb_tree(5), mask in any::<u16>(), a in 1i64..40) {
        let bb = Rational::new(a, 20);
        let d = MomentDiagram::build(&t, 1, bb).unwrap();
        let set: NodeSet = d.noise_nodes().iter().filter(|&u| mask >> (u - 1) & 1 == 1).collect();
        let q = d.charge_of(set);
        let lhs = d.sg_of(set).eval(bb);
        let rhs = -bb * Rational::from_integer(set.len() as i64) + bb * Rational::from_integer(q * q);
        prop_assert_eq!(lhs, rhs);
        for (x, y) in d.noise_pairs() {
            prop_assert_eq!(d.sign(x, y), d.charge(x) * d.charge(y));
        }
    }
}
