use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::chaos::fill_wick;
use crate::field::{beta, constant_from, GaussianField, Mollifier, VarianceTable};
use crate::lattice::{Fft2, TorusLattice};
use crate::StochError;

/// Largest `dt · β · C_ε` accepted for the explicit nonlinear term.
pub const STABILITY_BOUND: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdeConfig {
    pub n: usize,
    pub eps: f64,
    pub beta2_over_pi: f64,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub mollifier: Mollifier,
    /// Keep every `record_every`-th state.
    pub record_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub constant: f64,
    pub times: Vec<f64>,
    /// Real parts of the recorded states.
    pub states: Vec<Vec<f64>>,
    /// Largest `|Im v|` seen at any step.
    pub max_imag: f64,
    /// Largest modulus of the nonlinear forcing seen at any step.
    pub max_forcing: f64,
}

/// Exponential-Euler pseudo-spectral integrator for
/// `∂v = ½Δv − (i/2)(e^{iβv}ξ₊ − e^{−iβv}ξ₋)`.
///
/// `v` is kept complex so that its reality is an observation rather than an
/// assumption.
pub struct PdeSolver {
    lat: TorusLattice,
    beta: f64,
    constant: f64,
    field: GaussianField,
    fft: Fft2,
    decay: Vec<f64>,
    gain: Vec<f64>,
    v_hat: Vec<Complex64>,
    v: Vec<Complex64>,
    buf: Vec<Complex64>,
    phi: Vec<f64>,
    xi: Vec<Complex64>,
    forcing: Vec<Complex64>,
    noise: Vec<Complex64>,
    steps: usize,
    pub max_imag: f64,
    pub max_forcing: f64,
}

impl PdeSolver {
    pub fn new(
        lat: &TorusLattice,
        eps: f64,
        mollifier: Mollifier,
        beta2_over_pi: f64,
        seed: u64,
        v0: &[f64],
    ) -> Result<Self, StochError> {
        if !(0.0..4.0).contains(&beta2_over_pi) {
            return Err(StochError::Coupling { value: beta2_over_pi, range: "[0, 4)" });
        }
        if v0.len() != lat.len() {
            return Err(StochError::Config(format!("initial data has {} values, lattice {}", v0.len(), lat.len())));
        }
        let table = VarianceTable::new(lat, eps, mollifier)?;
        let constant = constant_from(&table, beta2_over_pi);
        let b = beta(beta2_over_pi);
        let dt = lat.dt();
        if dt * b * constant > STABILITY_BOUND {
            return Err(StochError::Unstable { dt, bound: STABILITY_BOUND / (b * constant) });
        }
        let len = lat.len();
        let decay = (0..len).map(|i| (-lat.heat_symbol(i) * dt).exp()).collect();
        let gain = (0..len)
            .map(|i| {
                let m = lat.heat_symbol(i);
                if m == 0.0 {
                    dt
                } else {
                    (1.0 - (-m * dt).exp()) / m
                }
            })
            .collect();
        let mut fft = Fft2::new(lat.n());
        let v: Vec<Complex64> = v0.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut v_hat = v.clone();
        fft.forward(&mut v_hat);
        let zero = Complex64::default();
        Ok(PdeSolver {
            lat: lat.clone(),
            beta: b,
            constant,
            field: GaussianField::stationary(lat, &table, seed),
            fft,
            decay,
            gain,
            v_hat,
            v,
            buf: Vec::new(),
            phi: Vec::new(),
            xi: Vec::new(),
            forcing: vec![zero; len],
            noise: vec![zero; len],
            steps: 0,
            max_imag: 0.0,
            max_forcing: 0.0,
        })
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.lat.dt()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.v
    }

    pub fn step(&mut self) -> Result<(), StochError> {
        self.field.values(&mut self.fft, &mut self.buf, &mut self.phi);
        fill_wick(&self.phi, self.beta, self.constant, &mut self.xi);
        let half_i = Complex64::new(0.0, 0.5);
        for ((f, v), xi) in self.forcing.iter_mut().zip(&self.v).zip(&self.xi) {
            let e = (Complex64::new(0.0, self.beta) * v).exp();
            let e_minus = (Complex64::new(0.0, -self.beta) * v).exp();
            *f = -half_i * (e * xi - e_minus * xi.conj());
            self.max_forcing = self.max_forcing.max(f.norm());
        }
        self.fft.forward(&mut self.forcing);
        for i in 0..self.v_hat.len() {
            self.v_hat[i] = self.v_hat[i] * self.decay[i] + self.forcing[i] * self.gain[i];
        }
        self.v.copy_from_slice(&self.v_hat);
        self.fft.inverse(&mut self.v);
        self.steps += 1;
        let mut max_abs: f64 = 0.0;
        for z in &self.v {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(StochError::Diverged { step: self.steps, time: self.time(), max_abs: f64::INFINITY });
            }
            max_abs = max_abs.max(z.norm());
            self.max_imag = self.max_imag.max(z.im.abs());
        }
        if max_abs > 1e12 {
            return Err(StochError::Diverged { step: self.steps, time: self.time(), max_abs });
        }
        self.field.advance(&self.lat, &mut self.noise);
        Ok(())
    }
}

pub fn solve_pde(cfg: &PdeConfig, v0: &[f64]) -> Result<Trajectory, StochError> {
    let lat = TorusLattice::new(cfg.n, cfg.dt)?;
    let mut solver = PdeSolver::new(&lat, cfg.eps, cfg.mollifier, cfg.beta2_over_pi, cfg.seed, v0)?;
    let every = cfg.record_every.max(1);
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let mut times = vec![0.0];
    let mut states = vec![v0.to_vec()];
    for s in 1..=steps {
        solver.step()?;
        if s % every == 0 || s == steps {
            times.push(solver.time());
            states.push(solver.values().iter().map(|z| z.re).collect());
        }
    }
    Ok(Trajectory { constant: solver.constant, times, states, max_imag: solver.max_imag, max_forcing: solver.max_forcing })
}

/// `a·sin(2πx₁) + b·cos(2πx₂)` on the lattice.
pub fn smooth_initial(n: usize, a: f64, b: f64) -> Vec<f64> {
    let tau = 2.0 * std::f64::consts::PI;
    (0..n * n)
        .map(|i| {
            let (x, y) = ((i / n) as f64 / n as f64, (i % n) as f64 / n as f64);
            a * (tau * x).sin() + b * (tau * y).cos()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(b2: f64) -> PdeConfig {
        PdeConfig {
            n: 32,
            eps: 1.0 / 16.0,
            beta2_over_pi: b2,
            dt: 1e-3,
            t_end: 0.05,
            seed: 4,
            mollifier: Mollifier::Gaussian,
            record_every: 10,
        }
    }

    #[test]
    fn zero_coupling_is_heat_flow() {
        let v0 = smooth_initial(32, 0.5, 0.25);
        let tr = solve_pde(&cfg(0.0), &v0).unwrap();
        assert_eq!(tr.max_forcing, 0.0);
        let t = *tr.times.last().unwrap();
        // both modes have |2πk|² = 4π², decaying at rate 2π²
        let exact = smooth_initial(32, 0.5 * (-2.0 * std::f64::consts::PI.powi(2) * t).exp(), 0.25 * (-2.0 * std::f64::consts::PI.powi(2) * t).exp());
        let err = tr.states.last().unwrap().iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn rejects_out_of_range() {
        let v0 = smooth_initial(32, 0.5, 0.25);
        assert!(matches!(solve_pde(&cfg(4.0), &v0), Err(StochError::Coupling { .. })));
        let mut c = cfg(2.0);
        c.dt = 0.5;
        assert!(matches!(solve_pde(&c, &v0), Err(StochError::Unstable { .. })));
        assert!(matches!(solve_pde(&cfg(2.0), &v0[1..]), Err(StochError::Config(_))));
    }

    #[test]
    fn real_and_reproducible() {
        let v0 = smooth_initial(32, 0.5, 0.25);
        let a = solve_pde(&cfg(2.0), &v0).unwrap();
        let b = solve_pde(&cfg(2.0), &v0).unwrap();
        assert_eq!(a, b);
        assert!(a.max_imag < 1e-12, "{}", a.max_imag);
        assert!(a.max_forcing <= a.constant * (1.0 + 1e-9));
    }
}
