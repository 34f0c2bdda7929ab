use rayon::prelude::*;
use serde::Serialize;
use sg_tree_core::{Rational, SCALING_DIM};

use crate::coalescence::{coalesce, CoalescenceTree, LabeledTree};
use crate::total::TotalHomogeneity;
use crate::PowerError;

fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Sum over labels of `Π_a 2^{s(a) w(a)}` with `w(a) = ς(a) − |s|(c_a − 1)`,
/// labels strictly increasing away from the root, all `≤ cap`, and the root
/// label in `root_range`.
fn labeled_sum(tree: &CoalescenceTree, weights: &[f64], root_lo: u32, root_hi: u32, cap: u32) -> f64 {
    // f[a][t] for t in 0..=cap, filled bottom-up
    let len = cap as usize + 1;
    let mut f = vec![vec![0.0; len]; tree.len()];
    for a in (0..tree.len()).rev() {
        let kids = tree.internal_children(a);
        for t in 0..len {
            let mut v = (t as f64 * weights[a]).exp2();
            for &c in &kids {
                v *= f[c][t + 1..].iter().sum::<f64>();
            }
            f[a][t] = v;
        }
    }
    let hi = root_hi.min(cap) as usize;
    if (root_lo as usize) > hi {
        return 0.0;
    }
    f[0][root_lo as usize..=hi].iter().sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummabilityReport {
    pub alpha: String,
    pub r: u32,
    pub caps: Vec<u32>,
    pub sums: Vec<f64>,
    /// `S(cap) · 2^{−αr}`.
    pub normalized: Vec<f64>,
    /// Largest `|x_cap / x_last − 1|` over the caps.
    pub max_relative_spread: f64,
    pub tolerance: f64,
    pub bounded: bool,
}

/// Capped multiscale sums for a total homogeneity of order `alpha` over the
/// given trees. For `α < 0` the root scale runs over `(r, cap]`, for `α > 0`
/// over `[0, r]`.
pub fn summability_probe(
    sigma: &TotalHomogeneity,
    trees: &[CoalescenceTree],
    alpha: Rational,
    r: u32,
    caps: &[u32],
    tolerance: f64,
) -> SummabilityReport {
    let weighted: Vec<(CoalescenceTree, Vec<f64>)> = trees
        .iter()
        .map(|t| {
            let w = sigma
                .eval(t)
                .into_iter()
                .enumerate()
                .map(|(a, v)| to_f64(v) - (SCALING_DIM * (t.child_count(a) as i64 - 1)) as f64)
                .collect();
            (t.clone(), w)
        })
        .collect();
    let (lo, hi) = if alpha < Rational::from_integer(0) { (r + 1, u32::MAX) } else { (0, r) };
    let sums: Vec<f64> = caps
        .iter()
        // collected before summing so the result does not depend on the thread count
        .map(|&cap| weighted.par_iter().map(|(t, w)| labeled_sum(t, w, lo, hi, cap)).collect::<Vec<f64>>().iter().sum())
        .collect();
    let norm = (-to_f64(alpha) * f64::from(r)).exp2();
    let normalized: Vec<f64> = sums.iter().map(|s| s * norm).collect();
    let last = *normalized.last().unwrap_or(&0.0);
    let spread = normalized.iter().map(|x| (x / last - 1.0).abs()).fold(0.0, f64::max);
    SummabilityReport {
        alpha: alpha.to_string(),
        r,
        caps: caps.to_vec(),
        sums,
        normalized,
        max_relative_spread: spread,
        tolerance,
        bounded: last.is_finite() && last > 0.0 && spread <= tolerance,
    }
}

/// `|𝒩_tri(𝔗, 𝔰)|`: scale assignments producing `labeled` with every
/// `|n_e − 𝔰(e↑)| < 2C|𝒱|`, counted by direct enumeration.
pub fn triangle_count(
    n: usize,
    edges: &[(usize, usize)],
    labeled: &LabeledTree,
    c: u32,
) -> Result<usize, PowerError> {
    let width = 2 * c * n as u32;
    let ranges: Vec<(u32, u32)> = edges
        .iter()
        .map(|&(a, b)| {
            let s = labeled.labels[labeled.tree.up(1 << a | 1 << b)];
            (s.saturating_sub(width - 1), s + width - 1)
        })
        .collect();
    let mut cur: Vec<u32> = ranges.iter().map(|r| r.0).collect();
    let mut count = 0;
    loop {
        if coalesce(n, edges, &cur)? == *labeled {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return Ok(count);
            }
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// Default annulus constant `C`.
pub const DEFAULT_ANNULUS_C: u32 = 2;

/// Uniform bound `(4C|𝒱| − 1)^{|G|}` on [`triangle_count`].
pub fn triangle_bound(n: usize, edges: usize, c: u32) -> u64 {
    u64::from(4 * c * n as u32 - 1).pow(edges as u32)
}
