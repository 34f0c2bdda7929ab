use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::StochError;

/// Periodic `N × N` grid on the unit torus with a time step.
///
/// Modes are stored row-major with wavenumbers in FFT order.
#[derive(Debug, Clone, Serialize)]
pub struct TorusLattice {
    n: usize,
    dt: f64,
    #[serde(skip)]
    k2: Vec<f64>,
    #[serde(skip)]
    neg: Vec<usize>,
}

impl TorusLattice {
    pub fn new(n: usize, dt: f64) -> Result<Self, StochError> {
        if n < 4 || !n.is_power_of_two() {
            return Err(StochError::NotPowerOfTwo(n));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(StochError::Config(format!("time step {dt} must be positive")));
        }
        let mut k2 = Vec::with_capacity(n * n);
        let mut neg = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (ka, kb) = (wavenumber(a, n) as f64, wavenumber(b, n) as f64);
                k2.push(4.0 * PI * PI * (ka * ka + kb * kb));
                neg.push(((n - a) % n) * n + (n - b) % n);
            }
        }
        Ok(TorusLattice { n, dt, k2, neg })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// `|2πk|²` of mode `i`.
    pub fn k2(&self, i: usize) -> f64 {
        self.k2[i]
    }

    /// Symbol `μ_k = ½|2πk|²` of `−½Δ`.
    pub fn heat_symbol(&self, i: usize) -> f64 {
        0.5 * self.k2[i]
    }

    /// Index of the mode `−k`.
    pub fn negate(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn wavevector(&self, i: usize) -> (i64, i64) {
        (wavenumber(i / self.n, self.n), wavenumber(i % self.n, self.n))
    }

    /// Smallest resolvable mollification width `2/N`.
    pub fn min_eps(&self) -> f64 {
        2.0 / self.n as f64
    }

    pub fn check_eps(&self, eps: f64) -> Result<(), StochError> {
        if eps < self.min_eps() - 1e-15 {
            return Err(StochError::EpsTooSmall { eps, min: self.min_eps() });
        }
        Ok(())
    }

    /// Cyclic shift of site `i` by `(da, db)` lattice steps.
    pub fn shift(&self, i: usize, da: usize, db: usize) -> usize {
        let n = self.n;
        ((i / n + da) % n) * n + (i % n + db) % n
    }
}

fn wavenumber(a: usize, n: usize) -> i64 {
    if a <= n / 2 {
        a as i64
    } else {
        a as i64 - n as i64
    }
}

/// In-place 2D transforms between lattice values and Fourier coefficients
/// `f(x) = Σ_k f̂_k e^{2πik·x}`.
pub struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Fft2 { n, fwd, inv, scratch: vec![Complex64::default(); len] }
    }

    /// Values to coefficients.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        let f = Arc::clone(&self.fwd);
        self.apply(&*f, data);
        let s = 1.0 / (self.n * self.n) as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    /// Coefficients to values.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        let f = Arc::clone(&self.inv);
        self.apply(&*f, data);
    }

    fn apply(&mut self, f: &dyn Fft<f64>, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.n * self.n);
        f.process_with_scratch(data, &mut self.scratch);
        transpose(data, self.n);
        f.process_with_scratch(data, &mut self.scratch);
        transpose(data, self.n);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for a in 0..n {
        for b in a + 1..n {
            data.swap(a * n + b, b * n + a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(TorusLattice::new(12, 0.1).unwrap_err(), StochError::NotPowerOfTwo(12));
        assert!(TorusLattice::new(16, 0.0).is_err());
    }

    #[test]
    fn negation_is_an_involution() {
        let lat = TorusLattice::new(8, 0.1).unwrap();
        for i in 0..lat.len() {
            assert_eq!(lat.negate(lat.negate(i)), i);
            let (a, b) = lat.wavevector(i);
            let (c, d) = lat.wavevector(lat.negate(i));
            assert!((a + c) % 8 == 0 && (b + d) % 8 == 0);
            assert_eq!(lat.k2(i), lat.k2(lat.negate(i)));
        }
    }

    #[test]
    fn single_mode_round_trip() {
        let n = 8;
        let lat = TorusLattice::new(n, 0.1).unwrap();
        let mut fft = Fft2::new(n);
        let mut data: Vec<Complex64> = (0..n * n)
            .map(|i| {
                let (a, b) = ((i / n) as f64, (i % n) as f64);
                Complex64::from_polar(1.0, 2.0 * PI * (a + 3.0 * b) / n as f64)
            })
            .collect();
        let orig = data.clone();
        fft.forward(&mut data);
        let peak = (0..lat.len()).find(|&i| lat.wavevector(i) == (1, 3)).unwrap();
        for (i, z) in data.iter().enumerate() {
            let want = if i == peak { 1.0 } else { 0.0 };
            assert!((z - want).norm() < 1e-12);
        }
        fft.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
