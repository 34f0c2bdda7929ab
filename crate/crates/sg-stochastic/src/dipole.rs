use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::chaos::fill_wick;
use crate::field::{beta, constant_from, GaussianField, Mollifier, VarianceTable};
use crate::lattice::{Fft2, TorusLattice};
use crate::stats::{fit_power_law, mean_se, LineFit};
use crate::StochError;

/// Second counterterm batch seeds are offset by this constant.
const COUNTERTERM_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DipoleConfig {
    pub n: usize,
    pub eps: f64,
    pub beta2_over_pi: f64,
    pub lambdas: Vec<f64>,
    /// Blocks per batch; each block yields one time slice of estimates at
    /// every lattice site.
    pub blocks: usize,
    pub burn_in: f64,
    /// Half-width of the time window of `ψ^λ` in units of `λ²`.
    pub window: f64,
    pub dt: f64,
    pub seed: u64,
    /// Run with `Φ ↦ −Φ`, i.e. `ξ₊ ↔ ξ₋`.
    pub flip: bool,
}

impl DipoleConfig {
    pub fn standard(seed: u64) -> Self {
        let eps = 1.0 / 64.0;
        DipoleConfig {
            n: 128,
            eps,
            beta2_over_pi: 5.0,
            lambdas: vec![0.25, 0.125, 0.0625, 0.03125],
            blocks: 40,
            burn_in: 0.2,
            window: 0.25,
            dt: eps * eps / 2.0,
            seed,
            flip: false,
        }
    }

    /// `2(2 − 2β′)` with `β′ = β²/4π`.
    pub fn target_slope(&self) -> f64 {
        2.0 * (2.0 - 0.5 * self.beta2_over_pi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DipoleRow {
    pub lambda: f64,
    /// `E|Π̂(ψ^λ)|²` with the independent-batch counterterm.
    pub second_moment: f64,
    pub second_moment_se: f64,
    /// Same without the counterterm.
    pub raw_second_moment: f64,
    pub raw_second_moment_se: f64,
    /// `E Π̂(ψ^λ)`.
    pub mean: (f64, f64),
    pub mean_se: (f64, f64),
    pub counterterm: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DipoleReport {
    pub config: DipoleConfig,
    pub constant: f64,
    pub rows: Vec<DipoleRow>,
    pub slope: LineFit,
    pub raw_slope: LineFit,
    pub target_slope: f64,
    /// Per-block `|Π̂|²` averages, kept for paired comparisons.
    #[serde(skip)]
    pub block_moments: Vec<Vec<f64>>,
}

/// Per-block spatial averages of `X` and `|X|²` for each `λ`.
#[derive(Debug, Clone, Default)]
struct BlockSums {
    mean: Vec<Complex64>,
    square: Vec<f64>,
}

/// Renormalized dipole `Π̂_z(ψ^λ) = ∫ψ^λ_z(y)[ξ₋(y)(u(y) − u(z)) − c] dy`
/// with `∂u = ½Δu + ξ₊`, and the scaling of its second moment in `λ`.
pub fn dipole_moment(cfg: &DipoleConfig) -> Result<DipoleReport, StochError> {
    if !(cfg.beta2_over_pi > 4.0 && cfg.beta2_over_pi < 16.0 / 3.0) {
        return Err(StochError::Coupling { value: cfg.beta2_over_pi, range: "(4, 16/3)" });
    }
    let lat = TorusLattice::new(cfg.n, cfg.dt)?;
    let table = VarianceTable::new(&lat, cfg.eps, Mollifier::Gaussian)?;
    let min = 4.0 * lat.spacing();
    if let Some(&l) = cfg.lambdas.iter().find(|&&l| l < min - 1e-15) {
        return Err(StochError::ScaleTooSmall { lambda: l, min });
    }
    if cfg.lambdas.len() < 2 || cfg.blocks < 2 {
        return Err(StochError::Config("need at least two scales and two blocks".into()));
    }
    let c = constant_from(&table, cfg.beta2_over_pi);
    let seeds = [cfg.seed, cfg.seed.wrapping_add(COUNTERTERM_SEED_OFFSET)];
    let batches: Vec<Vec<BlockSums>> = seeds.par_iter().map(|&s| run_batch(cfg, &lat, &table, c, s)).collect();
    let (main, other) = (&batches[0], &batches[1]);

    let mut rows = Vec::new();
    let mut block_moments = Vec::new();
    for (l, &lambda) in cfg.lambdas.iter().enumerate() {
        let ct = other.iter().map(|b| b.mean[l]).sum::<Complex64>() / other.len() as f64;
        let ren: Vec<f64> =
            main.iter().map(|b| b.square[l] - 2.0 * (ct.conj() * b.mean[l]).re + ct.norm_sqr()).collect();
        let raw: Vec<f64> = main.iter().map(|b| b.square[l]).collect();
        let (m2, m2_se) = mean_se(&ren);
        let (r2, r2_se) = mean_se(&raw);
        let (mre, mre_se) = mean_se(&main.iter().map(|b| b.mean[l].re - ct.re).collect::<Vec<_>>());
        let (mim, mim_se) = mean_se(&main.iter().map(|b| b.mean[l].im - ct.im).collect::<Vec<_>>());
        rows.push(DipoleRow {
            lambda,
            second_moment: m2,
            second_moment_se: m2_se,
            raw_second_moment: r2,
            raw_second_moment_se: r2_se,
            mean: (mre, mim),
            mean_se: (mre_se, mim_se),
            counterterm: (ct.re, ct.im),
        });
        block_moments.push(ren);
    }
    let x: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let slope = fit_power_law(
        &x,
        &rows.iter().map(|r| r.second_moment).collect::<Vec<_>>(),
        Some(&rows.iter().map(|r| r.second_moment_se).collect::<Vec<_>>()),
    );
    let raw_slope = fit_power_law(
        &x,
        &rows.iter().map(|r| r.raw_second_moment).collect::<Vec<_>>(),
        Some(&rows.iter().map(|r| r.raw_second_moment_se).collect::<Vec<_>>()),
    );
    Ok(DipoleReport { config: cfg.clone(), constant: c, rows, slope, raw_slope, target_slope: cfg.target_slope(), block_moments })
}

fn run_batch(cfg: &DipoleConfig, lat: &TorusLattice, table: &VarianceTable, c: f64, seed: u64) -> Vec<BlockSums> {
    let len = lat.len();
    let dt = lat.dt();
    let b = beta(cfg.beta2_over_pi);
    let mut field = GaussianField::stationary(lat, table, seed);
    if cfg.flip {
        field.negate();
    }
    let decay: Vec<f64> = (0..len).map(|i| (-lat.heat_symbol(i) * dt).exp()).collect();
    let gain: Vec<f64> = (0..len)
        .map(|i| {
            let m = lat.heat_symbol(i);
            if m == 0.0 {
                dt
            } else {
                (1.0 - (-m * dt).exp()) / m
            }
        })
        .collect();
    // Spatial part of ψ^λ: periodic Gaussian of width λ/2 with unit mass.
    let kernels: Vec<Vec<f64>> = cfg
        .lambdas
        .iter()
        .map(|&l| (0..len).map(|i| (-0.125 * l * l * lat.k2(i)).exp()).collect())
        .collect();
    let half: Vec<usize> = cfg.lambdas.iter().map(|&l| ((cfg.window * l * l / dt).round() as usize).max(1)).collect();
    let w_max = *half.iter().max().expect("nonempty");
    let weights: Vec<Vec<f64>> = half
        .iter()
        .map(|&w| {
            let raw: Vec<f64> = (0..=2 * w).map(|s| 1.0 - ((s as f64 - w as f64) / (w as f64 + 1.0)).powi(2)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / total).collect()
        })
        .collect();

    let zero = Complex64::default();
    let mut st = Stepper {
        lat,
        beta: b,
        constant: c,
        decay,
        gain,
        fft: Fft2::new(cfg.n),
        field,
        buf: Vec::new(),
        phi: Vec::new(),
        xi: Vec::new(),
        noise: vec![zero; len],
        u_hat: vec![zero; len],
        u: vec![zero; len],
        xi_hat: vec![zero; len],
        prod: vec![zero; len],
    };
    for _ in 0..(cfg.burn_in / dt).round() as usize {
        st.step();
    }
    let mut out = Vec::with_capacity(cfg.blocks);
    let nl = cfg.lambdas.len();
    for _ in 0..cfg.blocks {
        let mut acc_prod = vec![vec![zero; len]; nl];
        let mut acc_minus = vec![vec![zero; len]; nl];
        let mut u_center = Vec::new();
        for s in 0..=2 * w_max {
            st.step();
            if s == w_max {
                u_center = st.u.clone();
            }
            for l in 0..nl {
                let off = s as isize - w_max as isize + half[l] as isize;
                if off < 0 || off > 2 * half[l] as isize {
                    continue;
                }
                let w = weights[l][off as usize];
                for i in 0..len {
                    acc_prod[l][i] += st.prod[i] * w;
                    // coefficients of ξ₋ from those of ξ₊
                    acc_minus[l][i] += st.xi_hat[lat.negate(i)].conj() * w;
                }
            }
        }
        let mut sums = BlockSums::default();
        for l in 0..nl {
            let (mut a, mut m) = (std::mem::take(&mut acc_prod[l]), std::mem::take(&mut acc_minus[l]));
            for i in 0..len {
                a[i] *= kernels[l][i];
                m[i] *= kernels[l][i];
            }
            st.fft.inverse(&mut a);
            st.fft.inverse(&mut m);
            let mut mean = zero;
            let mut square = 0.0;
            for i in 0..len {
                let x = a[i] - u_center[i] * m[i];
                mean += x;
                square += x.norm_sqr();
            }
            sums.mean.push(mean / len as f64);
            sums.square.push(square / len as f64);
        }
        out.push(sums);
    }
    out
}

/// One exponential-Euler step of `u` alongside the field.
struct Stepper<'a> {
    lat: &'a TorusLattice,
    beta: f64,
    constant: f64,
    decay: Vec<f64>,
    gain: Vec<f64>,
    fft: Fft2,
    field: GaussianField,
    buf: Vec<Complex64>,
    phi: Vec<f64>,
    xi: Vec<Complex64>,
    noise: Vec<Complex64>,
    u_hat: Vec<Complex64>,
    /// `u` at the current time, in lattice values.
    u: Vec<Complex64>,
    /// Coefficients of `ξ₊` at the current time.
    xi_hat: Vec<Complex64>,
    /// Coefficients of `ξ₋ u` at the current time.
    prod: Vec<Complex64>,
}

impl Stepper<'_> {
    fn step(&mut self) {
        self.field.values(&mut self.fft, &mut self.buf, &mut self.phi);
        fill_wick(&self.phi, self.beta, self.constant, &mut self.xi);
        self.xi_hat.copy_from_slice(&self.xi);
        self.fft.forward(&mut self.xi_hat);
        self.u.copy_from_slice(&self.u_hat);
        self.fft.inverse(&mut self.u);
        for ((p, x), u) in self.prod.iter_mut().zip(&self.xi).zip(&self.u) {
            *p = x.conj() * u;
        }
        self.fft.forward(&mut self.prod);
        for i in 0..self.u_hat.len() {
            self.u_hat[i] = self.u_hat[i] * self.decay[i] + self.xi_hat[i] * self.gain[i];
        }
        self.field.advance(self.lat, &mut self.noise);
    }
}
