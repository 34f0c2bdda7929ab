use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::lattice::{Fft2, TorusLattice};
use crate::stats::compensated_sum;
use crate::StochError;

/// Stream offset for independent stationary snapshots.
const SNAPSHOT_STREAM: u64 = 1 << 62;

/// Spectral multiplier applied to the noise covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Mollifier {
    /// `e^{−(ε|2πk|)²}`.
    #[default]
    Gaussian,
    /// `(1 + (ε|2πk|)²/2)^{−2}`, same second-order behaviour at `k = 0`.
    Rational,
}

impl Mollifier {
    pub fn multiplier(self, eps: f64, k2: f64) -> f64 {
        let x = eps * eps * k2;
        match self {
            Mollifier::Gaussian => (-x).exp(),
            Mollifier::Rational => (1.0 + 0.5 * x).powi(-2),
        }
    }
}

/// Stationary per-mode variances `σ²_k = m_ε(k)/|2πk|²` and their sum.
#[derive(Debug, Clone, Serialize)]
pub struct VarianceTable {
    pub eps: f64,
    pub mollifier: Mollifier,
    #[serde(skip)]
    pub sigma2: Vec<f64>,
    /// `E Φ_ε(0)²`.
    pub total: f64,
}

impl VarianceTable {
    pub fn new(lat: &TorusLattice, eps: f64, mollifier: Mollifier) -> Result<Self, StochError> {
        lat.check_eps(eps)?;
        let sigma2: Vec<f64> = (0..lat.len())
            .map(|i| if i == 0 { 0.0 } else { mollifier.multiplier(eps, lat.k2(i)) / lat.k2(i) })
            .collect();
        let total = compensated_sum(sigma2.iter().copied());
        Ok(VarianceTable { eps, mollifier, sigma2, total })
    }

    /// `E Φ_ε(0)Φ_ε(x)` at a lattice displacement.
    pub fn covariance(&self, lat: &TorusLattice, da: usize, db: usize) -> f64 {
        let n = lat.n() as f64;
        compensated_sum((1..lat.len()).map(|i| {
            let (a, b) = lat.wavevector(i);
            self.sigma2[i] * (2.0 * PI * (a as f64 * da as f64 + b as f64 * db as f64) / n).cos()
        }))
    }
}

/// `β = √(π · β²/π)`.
pub fn beta(beta2_over_pi: f64) -> f64 {
    (PI * beta2_over_pi).sqrt()
}

/// `C_ε = exp(β² E Φ_ε(0)² / 2)` from the lattice mode sum.
pub fn renorm_constant(lat: &TorusLattice, eps: f64, beta2_over_pi: f64) -> Result<f64, StochError> {
    let table = VarianceTable::new(lat, eps, Mollifier::Gaussian)?;
    Ok(constant_from(&table, beta2_over_pi))
}

pub fn constant_from(table: &VarianceTable, beta2_over_pi: f64) -> f64 {
    (0.5 * PI * beta2_over_pi * table.total).exp()
}

/// Hermitian unit-variance complex normals (`E|z_k|² = 1`, `z_0 = 0`) for
/// one `(seed, stream)` pair. Modes are drawn in index order, so the result
/// depends only on the key.
pub fn unit_modes(lat: &TorusLattice, seed: u64, stream: u64, out: &mut [Complex64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    out[0] = Complex64::default();
    for i in 1..lat.len() {
        let j = lat.negate(i);
        if j == i {
            out[i] = Complex64::new(rng.sample(StandardNormal), 0.0);
        } else if i < j {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            out[i] = Complex64::new(re * h, im * h);
            out[j] = out[i].conj();
        }
    }
}

/// Space-time stationary Gaussian field: every mode an independent exact
/// Ornstein–Uhlenbeck process with damping `μ_k` and variance `σ²_k`.
///
/// The noise of step `s` comes from stream `s + 1` of `seed`; stream 0
/// draws the initial state.
#[derive(Debug, Clone)]
pub struct GaussianField {
    seed: u64,
    step: u64,
    decay: Vec<f64>,
    kick: Vec<f64>,
    modes: Vec<Complex64>,
}

impl GaussianField {
    pub fn stationary(lat: &TorusLattice, table: &VarianceTable, seed: u64) -> Self {
        Self::from_stream(lat, table, seed, 0)
    }

    /// An independent stationary field indexed by `index`.
    pub fn snapshot(lat: &TorusLattice, table: &VarianceTable, seed: u64, index: u64) -> Self {
        Self::from_stream(lat, table, seed, SNAPSHOT_STREAM + index)
    }

    fn from_stream(lat: &TorusLattice, table: &VarianceTable, seed: u64, stream: u64) -> Self {
        let mut modes = vec![Complex64::default(); lat.len()];
        unit_modes(lat, seed, stream, &mut modes);
        for (z, s) in modes.iter_mut().zip(&table.sigma2) {
            *z *= s.sqrt();
        }
        let decay: Vec<f64> = (0..lat.len()).map(|i| (-lat.heat_symbol(i) * lat.dt()).exp()).collect();
        let kick = decay.iter().zip(&table.sigma2).map(|(a, s)| (s * (1.0 - a * a)).sqrt()).collect();
        GaussianField { seed, step: 0, decay, kick, modes }
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    /// Exact OU transition over one time step with this field's own noise.
    pub fn advance(&mut self, lat: &TorusLattice, noise: &mut [Complex64]) {
        unit_modes(lat, self.seed, self.step + 1, noise);
        self.advance_with(noise);
    }

    /// Transition driven by externally drawn unit modes, so that fields with
    /// different mollifiers can share one noise realization.
    pub fn advance_with(&mut self, noise: &[Complex64]) {
        for ((m, z), (a, k)) in self.modes.iter_mut().zip(noise).zip(self.decay.iter().zip(&self.kick)) {
            *m = *m * *a + *z * *k;
        }
        self.step += 1;
    }

    /// Real lattice values `Φ(x)`.
    pub fn values(&self, fft: &mut Fft2, buf: &mut Vec<Complex64>, out: &mut Vec<f64>) {
        buf.clear();
        buf.extend_from_slice(&self.modes);
        fft.inverse(buf);
        out.clear();
        out.extend(buf.iter().map(|z| z.re));
    }

    /// Negate the field in law-preserving fashion.
    pub fn negate(&mut self) {
        self.modes.iter_mut().for_each(|z| *z = -*z);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_are_hermitian() {
        let lat = TorusLattice::new(8, 0.01).unwrap();
        let mut z = vec![Complex64::default(); lat.len()];
        unit_modes(&lat, 3, 7, &mut z);
        for i in 0..lat.len() {
            assert_eq!(z[lat.negate(i)], z[i].conj());
        }
        assert_eq!(z[0], Complex64::default());
    }

    #[test]
    fn values_are_real() {
        let lat = TorusLattice::new(16, 0.01).unwrap();
        let t = VarianceTable::new(&lat, 0.125, Mollifier::Gaussian).unwrap();
        let f = GaussianField::stationary(&lat, &t, 1);
        let mut fft = Fft2::new(16);
        let mut buf = f.modes().to_vec();
        fft.inverse(&mut buf);
        assert!(buf.iter().all(|z| z.im.abs() < 1e-12));
    }

    #[test]
    fn eps_below_grid_rejected() {
        let lat = TorusLattice::new(64, 0.01).unwrap();
        assert!(matches!(VarianceTable::new(&lat, 0.01, Mollifier::Gaussian), Err(StochError::EpsTooSmall { .. })));
        assert!(VarianceTable::new(&lat, 1.0 / 32.0, Mollifier::Gaussian).is_ok());
    }

    #[test]
    fn constant_limits() {
        let lat = TorusLattice::new(64, 0.01).unwrap();
        assert_eq!(renorm_constant(&lat, 0.05, 0.0).unwrap(), 1.0);
        assert!((renorm_constant(&lat, 0.05, 1e-9).unwrap() - 1.0).abs() < 1e-8);
        let c: Vec<f64> = [0.25, 0.125, 0.0625].iter().map(|&e| renorm_constant(&lat, e, 5.0).unwrap()).collect();
        assert!(c[0] < c[1] && c[1] < c[2]);
    }

    #[test]
    fn covariance_at_origin_is_total() {
        let lat = TorusLattice::new(16, 0.01).unwrap();
        let t = VarianceTable::new(&lat, 0.125, Mollifier::Rational).unwrap();
        assert!((t.covariance(&lat, 0, 0) - t.total).abs() < 1e-12);
    }
}
