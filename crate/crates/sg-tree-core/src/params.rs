use num_traits::Zero;
use serde::Serialize;

use crate::homogeneity::to_f64;
use crate::{Rational, TreeError};

/// Parabolic scaling `(2, 1, 1)` of space-time.
pub const SCALING: [u32; 3] = [2, 1, 1];
/// Scaling dimension `|s|`.
pub const SCALING_DIM: i64 = 4;

/// Parse `"a"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, TreeError> {
    let bad = || TreeError::Rational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

/// Coupling and truncation parameters.
///
/// `beta_sq` is `β²` in units of `π`, so `β² = 5π` is stored as `5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelParams {
    #[serde(serialize_with = "ser_rational")]
    pub beta_sq: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta_prime: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta_bar: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub mu: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl ModelParams {
    pub fn new(beta_sq: Rational, beta_bar: Rational, mu: Rational) -> Result<Self, TreeError> {
        check_subcritical(beta_sq)?;
        let beta_prime = beta_sq / Rational::from_integer(4);
        let two = Rational::from_integer(2);
        if !(beta_prime < beta_bar && beta_bar < two) {
            return Err(TreeError::InvalidParams(format!(
                "need beta' = {beta_prime} < beta_bar = {beta_bar} < 2"
            )));
        }
        if !(beta_bar < mu && mu < two) {
            return Err(TreeError::InvalidParams(format!(
                "need beta_bar = {beta_bar} < mu = {mu} < 2"
            )));
        }
        Ok(Self { beta_sq, beta_prime, beta_bar, mu })
    }

    /// Parameters with `β̄` halfway between `β'` and the next power-counting
    /// threshold, and `μ` halfway between `β̄` and 2.
    pub fn with_defaults(beta_sq: Rational) -> Result<Self, TreeError> {
        check_subcritical(beta_sq)?;
        let beta_prime = beta_sq / Rational::from_integer(4);
        let next = next_threshold(beta_prime);
        let beta_bar = (beta_prime + next) / Rational::from_integer(2);
        Self::new(beta_sq, beta_bar, default_mu(beta_bar))
    }

    /// Parameters for combinatorial work where only `β̄` matters.
    ///
    /// `β'` is placed just below `β̄` and `μ` halfway to 2.
    pub fn for_beta_bar(beta_bar: Rational) -> Result<Self, TreeError> {
        if !(Rational::zero() < beta_bar && beta_bar < Rational::from_integer(2)) {
            return Err(TreeError::InvalidParams(format!("beta_bar = {beta_bar} outside (0, 2)")));
        }
        let beta_prime = beta_bar * Rational::new(19, 20);
        Self::new(beta_prime * Rational::from_integer(4), beta_bar, default_mu(beta_bar))
    }

    pub fn with_mu(self, mu: Rational) -> Result<Self, TreeError> {
        Self::new(self.beta_sq, self.beta_bar, mu)
    }

    pub fn beta_bar_f64(&self) -> f64 {
        to_f64(self.beta_bar)
    }

    /// `β` as a float (the stored `β²` is in units of `π`).
    pub fn beta_f64(&self) -> f64 {
        (to_f64(self.beta_sq) * std::f64::consts::PI).sqrt()
    }
}

fn default_mu(beta_bar: Rational) -> Rational {
    (beta_bar + Rational::from_integer(2)) / Rational::from_integer(2)
}

fn check_subcritical(beta_sq: Rational) -> Result<(), TreeError> {
    if beta_sq <= Rational::zero() || beta_sq >= Rational::from_integer(8) {
        return Err(TreeError::Supercritical(beta_sq.to_string()));
    }
    Ok(())
}

/// Smallest value of `(2n + d)/(n + 1)` (n ≥ 1, d ∈ {0, 1}) above `x`, or 2.
///
/// These are the values of `β̄` at which a noise-only tree with `n` edges and
/// a decoration of degree `d` changes sign.
fn next_threshold(x: Rational) -> Rational {
    let mut best = Rational::from_integer(2);
    for n in 1..=4096i64 {
        for d in 0..=1i64 {
            let t = Rational::new(2 * n + d, n + 1);
            if t > x && t < best {
                best = t;
            }
        }
        if Rational::new(2 * n, n + 1) > best {
            break;
        }
    }
    if best <= x {
        best = Rational::from_integer(2);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("5").unwrap(), Rational::from_integer(5));
        assert_eq!(parse_rational("16/3").unwrap(), Rational::new(16, 3));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn supercritical_rejected() {
        assert!(matches!(
            ModelParams::with_defaults(Rational::from_integer(9)),
            Err(TreeError::Supercritical(_))
        ));
        assert!(ModelParams::with_defaults(Rational::from_integer(8)).is_err());
    }

    #[test]
    fn defaults_at_five_pi() {
        let p = ModelParams::with_defaults(Rational::from_integer(5)).unwrap();
        assert_eq!(p.beta_prime, Rational::new(5, 4));
        // next threshold above 5/4 is 4/3
        assert_eq!(p.beta_bar, Rational::new(31, 24));
        assert!(p.beta_bar < p.mu && p.mu < Rational::from_integer(2));
    }

    #[test]
    fn defaults_at_two_pi() {
        let p = ModelParams::with_defaults(Rational::from_integer(2)).unwrap();
        assert_eq!(p.beta_prime, Rational::new(1, 2));
        assert_eq!(p.beta_bar, Rational::new(3, 4));
    }

    #[test]
    fn ordering_enforced() {
        let r = |n, d| Rational::new(n, d);
        assert!(ModelParams::new(r(5, 1), r(6, 5), r(8, 5)).is_err());
        assert!(ModelParams::new(r(4, 1), r(6, 5), r(6, 5)).is_err());
        assert!(ModelParams::new(r(4, 1), r(6, 5), r(8, 5)).is_ok());
    }

    #[test]
    fn for_beta_bar_is_valid() {
        for (n, d) in [(1, 2), (6, 5), (5, 4), (13, 8), (503, 300)] {
            let p = ModelParams::for_beta_bar(Rational::new(n, d)).unwrap();
            assert_eq!(p.beta_bar, Rational::new(n, d));
        }
    }
}
