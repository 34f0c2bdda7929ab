use serde::Serialize;
use sg_tree_core::{parse_rational, DecoratedTree, ModelParams, Rational};

use crate::args::ModelArgs;
use crate::CliError;

pub fn rational(flag: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| CliError::Usage(format!("--{flag}: `{s}` is not a rational \"a\" or \"a/b\"")))
}

/// A lattice or tolerance parameter: a rational string or a decimal.
pub fn real(flag: &str, s: &str) -> Result<f64, CliError> {
    if let Ok(q) = parse_rational(s) {
        return Ok(*q.numer() as f64 / *q.denom() as f64);
    }
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("--{flag}: `{s}` is not a number")))
}

pub fn real_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|x| real(flag, x)).collect()
}

/// Resolve the model from whichever couplings were given.
pub fn model(m: &ModelArgs) -> Result<ModelParams, CliError> {
    let p = match (&m.beta2_over_pi, &m.beta_bar) {
        (Some(b2), Some(bb)) => {
            let bb = rational("beta-bar", bb)?;
            let mu = (bb + Rational::from_integer(2)) / Rational::from_integer(2);
            ModelParams::new(rational("beta2-over-pi", b2)?, bb, mu)?
        }
        (Some(b2), None) => ModelParams::with_defaults(rational("beta2-over-pi", b2)?)?,
        (None, Some(bb)) => ModelParams::for_beta_bar(rational("beta-bar", bb)?)?,
        (None, None) => return Err(CliError::Usage("one of --beta2-over-pi or --beta-bar is required".into())),
    };
    match &m.mu {
        Some(mu) => Ok(p.with_mu(rational("mu", mu)?)?),
        None => Ok(p),
    }
}

/// `β̄` for diagram work, falling back to `default` when no coupling is given.
pub fn beta_bar(m: &ModelArgs, default: Option<Rational>) -> Result<Rational, CliError> {
    if m.beta2_over_pi.is_none() && m.beta_bar.is_none() {
        return default.ok_or_else(|| CliError::Usage("--beta-bar is required".into()));
    }
    Ok(model(m)?.beta_bar)
}

pub fn tree(key: &str) -> Result<DecoratedTree, CliError> {
    match key {
        "dipole" => Ok(DecoratedTree::dipole()),
        _ => Ok(DecoratedTree::parse(key)?),
    }
}

/// `β²/π` for simulations: exact parse, subcritical check, then a float.
pub fn coupling(s: Option<&str>, default: &str) -> Result<(String, f64), CliError> {
    let s = s.unwrap_or(default);
    let q = rational("beta2-over-pi", s)?;
    if q >= Rational::from_integer(8) {
        return Err(CliError::Supercritical(format!("beta^2 = {q}·pi is at or above 8·pi")));
    }
    if q < Rational::from_integer(0) {
        return Err(CliError::Usage(format!("--beta2-over-pi: {q} is negative")));
    }
    Ok((q.to_string(), *q.numer() as f64 / *q.denom() as f64))
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelConfig {
    pub beta2_over_pi: String,
    pub beta_prime: String,
    pub beta_bar: String,
    pub mu: String,
}

impl From<&ModelParams> for ModelConfig {
    fn from(p: &ModelParams) -> Self {
        ModelConfig {
            beta2_over_pi: p.beta_sq.to_string(),
            beta_prime: p.beta_prime.to_string(),
            beta_bar: p.beta_bar.to_string(),
            mu: p.mu.to_string(),
        }
    }
}
