use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sg_moment_diagrams::{cut_candidates, subsets, MomentDiagram, NodeSet};

use crate::harvest::harvest_cuts;
use crate::projection::{preimage_in, ForestUniverse};
use crate::ScaleAssignment;

/// `[s, b]` among cut sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IntervalOfCuts {
    pub s: NodeSet,
    pub b: NodeSet,
}

impl IntervalOfCuts {
    pub fn contains(&self, c: NodeSet) -> bool {
        self.s.is_subset(&c) && c.is_subset(&self.b)
    }

    pub fn delta(&self) -> NodeSet {
        self.b.difference(self.s)
    }
}

/// A forest interval `𝕄` (by indices of its bounds) and one of its cut cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    pub smallest: usize,
    pub biggest: usize,
    pub cuts: IntervalOfCuts,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    /// `Σ_F 2^{|𝔠 \ K(F)|}`.
    pub pairs: usize,
    /// `|𝔐^n|`.
    pub groups: usize,
    pub cells: Vec<Cell>,
    pub interval_checks: usize,
    pub compatibility_checks: usize,
    /// Forests with `P^n(P^n(F)) ≠ P^n(F)`.
    pub not_idempotent: usize,
    pub failures: Vec<String>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Build `𝔐^n`, `𝔠^n(𝕄)` and `𝔊^n(𝕄)` for one scale assignment and check
/// that the cells partition `{(F, 𝒞) : 𝒞 ⊂ 𝔠 \ K(F)}` and that harvested
/// edges can be toggled freely.
pub fn organize_and_check(d: &MomentDiagram, u: &ForestUniverse, n: &ScaleAssignment) -> PartitionReport {
    let mut rep = PartitionReport::default();
    let images = u.projections(d, n);
    rep.not_idempotent = (0..u.len()).filter(|&i| images[images[i]] != images[i]).count();
    let cand = cut_candidates(d);
    let cuts = subsets(cand);
    let forest_name = |i: usize| format!("{:?}", u.forests[i].members());

    // 𝕄 bounds → cut sets 𝒞 for which 𝕄 = (P^n_𝒞)⁻¹(s(𝕄))
    let mut groups: BTreeMap<(usize, usize), BTreeSet<NodeSet>> = BTreeMap::new();
    for &c in &cuts {
        let allowed: Vec<bool> = u.forests.iter().map(|f| f.kernel_edges().is_disjoint(&c)).collect();
        rep.pairs += allowed.iter().filter(|&&a| a).count();
        let targets: BTreeSet<usize> = (0..u.len()).filter(|&i| allowed[i]).map(|i| images[i]).collect();
        for t in targets {
            rep.interval_checks += 1;
            match preimage_in(u, &images, &allowed, t) {
                Ok(iv) => {
                    let (s, b) = iv.bounds.expect("target has a preimage");
                    let key = (u.index_of(&s).expect("forest"), u.index_of(&b).expect("forest"));
                    groups.entry(key).or_default().insert(c);
                }
                Err(e) => rep.failures.push(format!("cut {c:?}: {e}")),
            }
        }
    }
    rep.groups = groups.len();

    let mut cover: BTreeMap<(usize, NodeSet), usize> = BTreeMap::new();
    for (&(s, b), admissible) in &groups {
        let big = &u.forests[b];
        let harvested = harvest_cuts(d, big, n);
        if !harvested.is_disjoint(&big.kernel_edges()) {
            rep.failures.push(format!("harvest of {} meets its own kernel edges", forest_name(b)));
        }
        let free = cand.difference(big.kernel_edges());
        for e in harvested.intersection(free).iter() {
            for &c in &cuts {
                rep.compatibility_checks += 1;
                let mut lo = c;
                lo.remove(e);
                let mut hi = c;
                hi.insert(e);
                if admissible.contains(&lo) != admissible.contains(&hi) {
                    rep.failures.push(format!(
                        "compatibility fails for [{}, {}] at edge {e} with cut {c:?}",
                        forest_name(s),
                        forest_name(b)
                    ));
                }
            }
        }
        for base in subsets(free.difference(harvested)) {
            if !admissible.contains(&base) {
                continue;
            }
            let cell = IntervalOfCuts { s: base, b: base.union(harvested) };
            for c in subsets(harvested) {
                let c = base.union(c);
                if !admissible.contains(&c) {
                    rep.failures.push(format!("cell {cell:?} of [{}, {}] leaves its group", forest_name(s), forest_name(b)));
                }
                for (i, f) in u.forests.iter().enumerate() {
                    if u.forests[s].is_subforest_of(f) && f.is_subforest_of(big) {
                        *cover.entry((i, c)).or_default() += 1;
                    }
                }
            }
            rep.cells.push(Cell { smallest: s, biggest: b, cuts: cell });
        }
    }

    for (i, f) in u.forests.iter().enumerate() {
        for &c in &cuts {
            let valid = f.kernel_edges().is_disjoint(&c);
            let got = cover.get(&(i, c)).copied().unwrap_or(0);
            if got != usize::from(valid) {
                rep.failures.push(format!("pair ({}, {c:?}) covered {got} times", forest_name(i)));
            }
        }
    }
    rep
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub scales: Vec<u32>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MultiscaleAudit {
    pub trials: usize,
    pub n_cap: u32,
    pub seed: u64,
    pub interval_checks: usize,
    pub partition_checks: usize,
    pub compatibility_checks: usize,
    pub not_idempotent: usize,
    pub failures: Vec<Witness>,
}

impl MultiscaleAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run [`organize_and_check`] on `trials` uniform scale assignments; trial `t`
/// draws from stream `t` of the seeded generator.
pub fn multiscale_audit(d: &MomentDiagram, n_cap: u32, trials: usize, seed: u64) -> MultiscaleAudit {
    let u = ForestUniverse::new(d);
    let reports: Vec<(usize, ScaleAssignment, PartitionReport)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let n = ScaleAssignment::random(d, n_cap, &mut rng);
            let r = organize_and_check(d, &u, &n);
            (t, n, r)
        })
        .collect();
    let mut out = MultiscaleAudit { trials, n_cap, seed, ..Default::default() };
    for (t, n, r) in reports {
        out.interval_checks += r.interval_checks;
        out.partition_checks += r.pairs;
        out.compatibility_checks += r.compatibility_checks;
        out.not_idempotent += r.not_idempotent;
        out.failures.extend(
            r.failures.into_iter().map(|m| Witness { trial: t, scales: n.values().to_vec(), message: m }),
        );
    }
    out
}
