use rustfft::num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Charge {
    Plus,
    Minus,
}

impl Charge {
    pub fn sign(self) -> f64 {
        match self {
            Charge::Plus => 1.0,
            Charge::Minus => -1.0,
        }
    }
}

/// Lattice samples of `ξ₊ = C e^{iβΦ}`; `ξ₋` is its conjugate.
#[derive(Debug, Clone)]
pub struct ChaosField {
    pub constant: f64,
    pub plus: Vec<Complex64>,
}

impl ChaosField {
    pub fn new(phi: &[f64], beta: f64, constant: f64) -> Self {
        ChaosField { constant, plus: wick_exponential(phi, beta, constant, Charge::Plus) }
    }

    pub fn minus(&self) -> Vec<Complex64> {
        self.plus.iter().map(|z| z.conj()).collect()
    }

    pub fn get(&self, charge: Charge, i: usize) -> Complex64 {
        match charge {
            Charge::Plus => self.plus[i],
            Charge::Minus => self.plus[i].conj(),
        }
    }
}

/// `C e^{±iβΦ}` pointwise.
pub fn wick_exponential(phi: &[f64], beta: f64, constant: f64, charge: Charge) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(phi.len());
    fill_wick(phi, beta, constant, &mut out);
    if charge == Charge::Minus {
        out.iter_mut().for_each(|z| *z = z.conj());
    }
    out
}

pub(crate) fn fill_wick(phi: &[f64], beta: f64, constant: f64, out: &mut Vec<Complex64>) {
    out.clear();
    out.extend(phi.iter().map(|p| {
        let (s, c) = (beta * p).sin_cos();
        Complex64::new(constant * c, constant * s)
    }));
}
