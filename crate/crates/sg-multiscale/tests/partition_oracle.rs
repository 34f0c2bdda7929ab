use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sg_moment_diagrams::{GenEdge, MomentDiagram, Subtree};
use sg_multiscale::*;
use sg_tree_core::{DecoratedTree, Rational};

fn dipole(p: usize) -> MomentDiagram {
    MomentDiagram::build(&DecoratedTree::dipole(), p, Rational::new(6, 5)).unwrap()
}

#[test]
fn dipole_intervals_over_random_scales() {
    let d = dipole(1);
    let a = multiscale_audit(&d, 4, 2000, 7);
    assert!(a.passed(), "{:?}", a.failures.first());
    assert!(a.interval_checks >= 2000);
}

#[test]
fn dipole_partition_is_exact() {
    let d = dipole(1);
    let a = multiscale_audit(&d, 4, 500, 11);
    assert!(a.passed(), "{:?}", a.failures.first());
    assert_eq!(a.partition_checks, 500 * 9);
}

#[test]
fn two_dipoles_partition() {
    let d = dipole(2);
    let a = multiscale_audit(&d, 3, 100, 3);
    assert!(a.passed(), "{:?}", a.failures.first());
    assert_eq!(a.partition_checks, 100 * 81);
}

#[test]
fn audit_is_reproducible() {
    let d = dipole(1);
    assert_eq!(multiscale_audit(&d, 4, 50, 5), multiscale_audit(&d, 4, 50, 5));
}

#[test]
fn constant_scales_keep_everything_and_harvest_nothing() {
    let d = dipole(2);
    let u = ForestUniverse::new(&d);
    let n = ScaleAssignment::constant(&d, 3);
    for f in &u.forests {
        for s in f.members() {
            assert_eq!(int_ext_scales(&d, f, s, &n), (Some(3), Some(3)));
        }
        assert_eq!(&safe_projection(&d, f, &n), f);
        assert!(harvest_cuts(&d, f, &n).is_empty());
    }
    let r = organize_and_check(&d, &u, &n);
    assert!(r.passed());
    assert_eq!(r.groups, u.len());
    assert_eq!(r.not_idempotent, 0);
}

fn figure_setup() -> (MomentDiagram, Subtree, ScaleAssignment) {
    let d = dipole(1);
    let s = Subtree::whole(&d, 0);
    let mut n = ScaleAssignment::constant(&d, 0);
    n.set(&d, GenEdge::Kernel(2), 2);
    n.set(&d, GenEdge::pair(1, 2), 2);
    n.set(&d, GenEdge::pair(1, 3), 5);
    (d, s, n)
}

#[test]
fn figure_configuration_is_safe() {
    let (d, s, n) = figure_setup();
    let f = sg_moment_diagrams::Forest::new(&d, vec![s]).unwrap();
    assert_eq!(int_ext_scales(&d, &f, &s, &n), (Some(2), Some(5)));
    assert!(is_safe(&d, &f, &s, &n));
    assert_eq!(safe_projection(&d, &f, &n), f);
}

#[test]
fn deep_internal_scales_drop_the_subtree() {
    let (d, s, mut n) = figure_setup();
    n.set(&d, GenEdge::Kernel(2), 9);
    n.set(&d, GenEdge::pair(1, 2), 8);
    let f = sg_moment_diagrams::Forest::new(&d, vec![s]).unwrap();
    assert_eq!(int_ext_scales(&d, &f, &s, &n), (Some(8), Some(5)));
    assert!(safe_projection(&d, &f, &n).is_empty());
    let pre = preimage_interval(&d, &sg_moment_diagrams::Forest::empty(), &n).unwrap();
    assert!(pre.contains(&f));
    assert_eq!(pre.delta(), vec![s]);
}

#[test]
fn harvested_edge_of_the_dipole() {
    // Far from the base point, the kernel edge is the weakest link to its child.
    let d = dipole(1);
    let mut n = ScaleAssignment::constant(&d, 6);
    n.set(&d, GenEdge::Kernel(2), 1);
    n.set(&d, GenEdge::pair(1, 2), 1);
    for e in [GenEdge::pair(2, 3), GenEdge::pair(2, 4), GenEdge::Base(2)] {
        n.set(&d, e, 0);
    }
    let empty = sg_moment_diagrams::Forest::empty();
    assert_eq!(bottleneck_scale(&d, &empty, &n, BASE_NODE, 1), 6);
    assert_eq!(bottleneck_scale(&d, &empty, &n, 1, 2), 1);
    assert!(harvest_cuts(&d, &empty, &n).contains(2));
    let u = ForestUniverse::new(&d);
    assert!(organize_and_check(&d, &u, &n).passed());
}

const BASE_NODE: usize = 0;

#[test]
fn lambda_floor_values() {
    assert_eq!(lambda_floor(1.0), 0);
    assert_eq!(lambda_floor(0.25), 2);
    assert_eq!(lambda_floor(0.3), 1);
    assert_eq!(lambda_floor(4.0), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contraction_only_widens_paths(seed in any::<u64>(), cap in 1u32..6) {
        let d = dipole(2);
        let u = ForestUniverse::new(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = ScaleAssignment::random(&d, cap, &mut rng);
        for g in &u.forests {
            for f in u.forests.iter().filter(|f| f.is_subforest_of(g)) {
                for src in 0..=d.node_count() {
                    let a = bottlenecks_from(&d, f, &n, src);
                    let b = bottlenecks_from(&d, g, &n, src);
                    prop_assert!(a.iter().zip(&b).all(|(x, y)| x <= y));
                }
            }
        }
    }

    #[test]
    fn projection_keeps_a_subforest(seed in any::<u64>()) {
        let d = dipole(2);
        let u = ForestUniverse::new(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = ScaleAssignment::random(&d, 4, &mut rng);
        for f in &u.forests {
            prop_assert!(safe_projection(&d, f, &n).is_subforest_of(f));
        }
    }
}
