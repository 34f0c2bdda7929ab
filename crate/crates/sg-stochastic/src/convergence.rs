use rayon::prelude::*;
use serde::Serialize;

use crate::field::Mollifier;
use crate::lattice::TorusLattice;
use crate::pde::{smooth_initial, PdeSolver};
use crate::stats::mean_se;
use crate::StochError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceConfig {
    pub n: usize,
    pub beta2_over_pi: f64,
    /// Dyadic widths `ε₀ > ε₀/2 > …`; each is compared with its half.
    pub eps: Vec<f64>,
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub seeds: Vec<u64>,
    /// Also solve the finest level with the rational mollifier.
    pub swap: bool,
}

impl ConvergenceConfig {
    pub fn standard(seeds: usize) -> Self {
        let finest: f64 = 1.0 / 64.0;
        ConvergenceConfig {
            n: 128,
            beta2_over_pi: 2.0,
            eps: vec![0.125, 0.0625, 0.03125],
            t0: 0.0,
            t_end: 0.1,
            dt: finest * finest / 2.0,
            seeds: (0..seeds as u64).collect(),
            swap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedResult {
    pub seed: u64,
    /// `d(ε) = sup |v_ε − v_{ε/2}|` over the grid and `[t₀, T]`.
    pub d: Vec<f64>,
    /// Sup gap between the two mollifiers at the finest width.
    pub swap_gap: Option<f64>,
    pub max_imag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub config: ConvergenceConfig,
    pub seeds: Vec<SeedResult>,
    pub d_mean: Vec<f64>,
    pub d_se: Vec<f64>,
    /// Per-seed `d(ε_{i+1})/d(ε_i)` averaged over seeds.
    pub ratios: Vec<f64>,
    pub monotone: bool,
    pub swap_gap: Option<f64>,
    /// `swap_gap / d(ε_last)`.
    pub swap_ratio: Option<f64>,
    pub max_imag: f64,
}

/// Empirical Cauchy test in `ε` on a common noise realization.
pub fn convergence_study(cfg: &ConvergenceConfig) -> Result<ConvergenceReport, StochError> {
    if cfg.eps.len() < 2 {
        return Err(StochError::Config("need at least two widths".into()));
    }
    if cfg.eps.windows(2).any(|w| (w[1] - w[0] / 2.0).abs() > 1e-12 * w[0]) {
        return Err(StochError::Config("widths must be dyadic".into()));
    }
    if cfg.seeds.is_empty() {
        return Err(StochError::Config("need at least one seed".into()));
    }
    let lat = TorusLattice::new(cfg.n, cfg.dt)?;
    let mut levels = cfg.eps.clone();
    levels.push(cfg.eps[cfg.eps.len() - 1] / 2.0);
    lat.check_eps(levels[levels.len() - 1])?;
    let v0 = smooth_initial(cfg.n, 0.5, 0.5);

    let seeds: Vec<SeedResult> =
        cfg.seeds.par_iter().map(|&seed| run_seed(cfg, &lat, &levels, &v0, seed)).collect::<Result<_, _>>()?;

    let k = cfg.eps.len();
    let (mut d_mean, mut d_se) = (Vec::new(), Vec::new());
    for i in 0..k {
        let (m, se) = mean_se(&seeds.iter().map(|s| s.d[i]).collect::<Vec<_>>());
        d_mean.push(m);
        d_se.push(se);
    }
    let ratios: Vec<f64> = (0..k - 1)
        .map(|i| seeds.iter().map(|s| s.d[i + 1] / s.d[i]).sum::<f64>() / seeds.len() as f64)
        .collect();
    let monotone = d_mean.windows(2).all(|w| w[1] < w[0]);
    let swap_gap = cfg.swap.then(|| seeds.iter().filter_map(|s| s.swap_gap).sum::<f64>() / seeds.len() as f64);
    let swap_ratio = swap_gap.map(|g| g / d_mean[k - 1]);
    let max_imag = seeds.iter().map(|s| s.max_imag).fold(0.0, f64::max);
    Ok(ConvergenceReport { config: cfg.clone(), seeds, d_mean, d_se, ratios, monotone, swap_gap, swap_ratio, max_imag })
}

fn run_seed(
    cfg: &ConvergenceConfig,
    lat: &TorusLattice,
    levels: &[f64],
    v0: &[f64],
    seed: u64,
) -> Result<SeedResult, StochError> {
    // Same seed at every level: identical unit noise, different mollifiers.
    let mut solvers = levels
        .iter()
        .map(|&e| PdeSolver::new(lat, e, Mollifier::Gaussian, cfg.beta2_over_pi, seed, v0))
        .collect::<Result<Vec<_>, _>>()?;
    let finest = levels[levels.len() - 1];
    let mut swap =
        if cfg.swap { Some(PdeSolver::new(lat, finest, Mollifier::Rational, cfg.beta2_over_pi, seed, v0)?) } else { None };
    let k = levels.len() - 1;
    let mut d = vec![0.0f64; k];
    let mut gap = 0.0f64;
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    for _ in 0..steps {
        for s in solvers.iter_mut() {
            s.step()?;
        }
        if let Some(s) = swap.as_mut() {
            s.step()?;
        }
        if solvers[0].time() < cfg.t0 - 1e-12 {
            continue;
        }
        for i in 0..k {
            d[i] = d[i].max(sup_diff(solvers[i].values(), solvers[i + 1].values()));
        }
        if let Some(s) = &swap {
            gap = gap.max(sup_diff(s.values(), solvers[k].values()));
        }
    }
    let mut max_imag = solvers.iter().map(|s| s.max_imag).fold(0.0, f64::max);
    if let Some(s) = &swap {
        max_imag = max_imag.max(s.max_imag);
    }
    Ok(SeedResult { seed, d, swap_gap: swap.map(|_| gap), max_imag })
}

fn sup_diff(a: &[rustfft::num_complex::Complex64], b: &[rustfft::num_complex::Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.re - y.re).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coupling_has_no_gap() {
        let mut cfg = ConvergenceConfig::standard(1);
        cfg.n = 32;
        cfg.eps = vec![0.25, 0.125];
        cfg.beta2_over_pi = 0.0;
        cfg.dt = 1e-3;
        cfg.t_end = 0.02;
        let r = convergence_study(&cfg).unwrap();
        assert!(r.d_mean.iter().all(|&d| d == 0.0));
        assert_eq!(r.swap_gap, Some(0.0));
    }

    #[test]
    fn rejects_non_dyadic() {
        let mut cfg = ConvergenceConfig::standard(1);
        cfg.eps = vec![0.25, 0.1];
        assert!(matches!(convergence_study(&cfg), Err(StochError::Config(_))));
    }
}
