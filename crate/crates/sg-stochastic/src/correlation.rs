use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::chaos::fill_wick;
use crate::field::{beta, constant_from, GaussianField, Mollifier, VarianceTable};
use crate::lattice::{Fft2, TorusLattice};
use crate::stats::{fit_power_law, mean_se, LineFit};
use crate::StochError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationConfig {
    pub n: usize,
    pub eps: f64,
    pub beta2_over_pi: f64,
    /// Number of independent stationary fields.
    pub fields: usize,
    /// Probed displacements in lattice steps, along both axes.
    pub separations: Vec<usize>,
    pub seed: u64,
}

impl CorrelationConfig {
    /// One decade of `|z|` from `4ε` on a `512²` grid.
    pub fn standard(beta2_over_pi: f64, seed: u64) -> Self {
        CorrelationConfig {
            n: 512,
            eps: 1.0 / 256.0,
            beta2_over_pi,
            fields: 64,
            separations: vec![8, 11, 16, 23, 32, 45, 64, 80],
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub distance: f64,
    /// Direct estimates of `E ξ₊(0)ξ₊(z)` and `E ξ₊(0)ξ₋(z)` (real parts).
    pub same_direct: f64,
    pub same_direct_se: f64,
    pub opposite_direct: f64,
    pub opposite_direct_se: f64,
    /// Gaussian estimates `C² exp(−β² V̂/2)` with `V̂` the empirical
    /// variance of `Φ(0) ± Φ(z)`.
    pub same_gaussian: f64,
    pub same_gaussian_se: f64,
    pub opposite_gaussian: f64,
    pub opposite_gaussian_se: f64,
    pub product: f64,
    pub covariance: f64,
    pub covariance_se: f64,
    pub covariance_exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub config: CorrelationConfig,
    pub constant: f64,
    pub rows: Vec<CorrelationRow>,
    pub same_charge: LineFit,
    pub opposite_charge: LineFit,
    /// Fit of the product of the two Gaussian estimates.
    pub product: LineFit,
    /// Fit of `E Φ(0)Φ(z)` against `log|z|`; the slope is a coefficient,
    /// not an exponent.
    pub covariance: LineFit,
    pub mean_xi: (f64, f64),
    pub mean_xi_se: (f64, f64),
    pub variance: f64,
    pub variance_se: f64,
    pub variance_exact: f64,
}

struct FieldStats {
    mean_xi: Complex64,
    variance: f64,
    same: Vec<f64>,
    opposite: Vec<f64>,
    plus_sq: Vec<f64>,
    minus_sq: Vec<f64>,
    cov: Vec<f64>,
}

/// Log-log fits of same- and opposite-charge correlations of `ξ`.
pub fn correlation_slopes(cfg: &CorrelationConfig) -> Result<CorrelationReport, StochError> {
    let lat = TorusLattice::new(cfg.n, 1.0)?;
    let table = VarianceTable::new(&lat, cfg.eps, Mollifier::Gaussian)?;
    if cfg.fields < 2 || cfg.separations.is_empty() {
        return Err(StochError::Config("need at least two fields and one separation".into()));
    }
    let min = *cfg.separations.iter().min().expect("nonempty") as f64 / cfg.n as f64;
    let max = *cfg.separations.iter().max().expect("nonempty") as f64 / cfg.n as f64;
    if min < 4.0 * cfg.eps || max > 0.25 {
        return Err(StochError::Separation(format!(
            "need 4ε = {} ≤ |z| ≤ 1/4, got [{min}, {max}]",
            4.0 * cfg.eps
        )));
    }
    let b = beta(cfg.beta2_over_pi);
    let c = constant_from(&table, cfg.beta2_over_pi);
    let stats: Vec<FieldStats> = (0..cfg.fields as u64)
        .into_par_iter()
        .map_init(
            || (Fft2::new(cfg.n), Vec::new(), Vec::new(), Vec::new()),
            |(fft, buf, phi, xi), f| {
                let field = GaussianField::snapshot(&lat, &table, cfg.seed, f);
                field.values(fft, buf, phi);
                fill_wick(phi, b, c, xi);
                field_stats(&lat, &cfg.separations, phi, xi)
            },
        )
        .collect();

    let col = |g: &dyn Fn(&FieldStats) -> f64| -> (f64, f64) { mean_se(&stats.iter().map(g).collect::<Vec<_>>()) };
    let (mre, mre_se) = col(&|s| s.mean_xi.re);
    let (mim, mim_se) = col(&|s| s.mean_xi.im);
    let (variance, variance_se) = col(&|s| s.variance);
    let b2 = b * b;
    let rows: Vec<CorrelationRow> = cfg
        .separations
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let (same, same_se) = col(&|s| s.same[j]);
            let (opp, opp_se) = col(&|s| s.opposite[j]);
            let (vp, vp_se) = col(&|s| s.plus_sq[j]);
            let (vm, vm_se) = col(&|s| s.minus_sq[j]);
            let (cov, cov_se) = col(&|s| s.cov[j]);
            let same_g = c * c * (-0.5 * b2 * vp).exp();
            let opp_g = c * c * (-0.5 * b2 * vm).exp();
            CorrelationRow {
                distance: d as f64 / cfg.n as f64,
                same_direct: same,
                same_direct_se: same_se,
                opposite_direct: opp,
                opposite_direct_se: opp_se,
                same_gaussian: same_g,
                same_gaussian_se: same_g * 0.5 * b2 * vp_se,
                opposite_gaussian: opp_g,
                opposite_gaussian_se: opp_g * 0.5 * b2 * vm_se,
                product: same_g * opp_g,
                covariance: cov,
                covariance_se: cov_se,
                covariance_exact: table.covariance(&lat, 0, d),
            }
        })
        .collect();
    let x: Vec<f64> = rows.iter().map(|r| r.distance).collect();
    let pick = |f: fn(&CorrelationRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let same_charge = fit_power_law(&x, &pick(|r| r.same_gaussian), Some(&pick(|r| r.same_gaussian_se)));
    let opposite_charge = fit_power_law(&x, &pick(|r| r.opposite_gaussian), Some(&pick(|r| r.opposite_gaussian_se)));
    let product_se: Vec<f64> = rows
        .iter()
        .map(|r| r.product * ((r.same_gaussian_se / r.same_gaussian).powi(2) + (r.opposite_gaussian_se / r.opposite_gaussian).powi(2)).sqrt())
        .collect();
    let product = fit_power_law(&x, &pick(|r| r.product), Some(&product_se));
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let covariance = crate::stats::fit_line(&lx, &pick(|r| r.covariance), Some(&pick(|r| r.covariance_se)));
    Ok(CorrelationReport {
        config: cfg.clone(),
        constant: c,
        rows,
        same_charge,
        opposite_charge,
        product,
        covariance,
        mean_xi: (mre, mim),
        mean_xi_se: (mre_se, mim_se),
        variance,
        variance_se,
        variance_exact: table.total,
    })
}

fn field_stats(lat: &TorusLattice, seps: &[usize], phi: &[f64], xi: &[Complex64]) -> FieldStats {
    let len = phi.len() as f64;
    let mean_xi = xi.iter().sum::<Complex64>() / len;
    let variance = phi.iter().map(|p| p * p).sum::<f64>() / len;
    let mut out = FieldStats {
        mean_xi,
        variance,
        same: Vec::new(),
        opposite: Vec::new(),
        plus_sq: Vec::new(),
        minus_sq: Vec::new(),
        cov: Vec::new(),
    };
    for &d in seps {
        let (mut same, mut opp, mut vp, mut vm, mut cov) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..phi.len() {
            for j in [lat.shift(i, d, 0), lat.shift(i, 0, d)] {
                same += (xi[i] * xi[j]).re;
                opp += (xi[i] * xi[j].conj()).re;
                vp += (phi[i] + phi[j]).powi(2);
                vm += (phi[i] - phi[j]).powi(2);
                cov += phi[i] * phi[j];
            }
        }
        let m = 2.0 * len;
        out.same.push(same / m);
        out.opposite.push(opp / m);
        out.plus_sq.push(vp / m);
        out.minus_sq.push(vm / m);
        out.cov.push(cov / m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_poor_separation() {
        let mut cfg = CorrelationConfig::standard(5.0, 1);
        cfg.separations = vec![2, 16];
        assert!(matches!(correlation_slopes(&cfg), Err(StochError::Separation(_))));
        cfg.separations = vec![8, 200];
        assert!(matches!(correlation_slopes(&cfg), Err(StochError::Separation(_))));
    }
}
