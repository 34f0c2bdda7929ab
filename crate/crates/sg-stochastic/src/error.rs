use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochError {
    #[error("lattice size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("mollification width {eps} is below the grid resolution {min}")]
    EpsTooSmall { eps: f64, min: f64 },
    #[error("probe scale {lambda} is below four grid cells ({min})")]
    ScaleTooSmall { lambda: f64, min: f64 },
    #[error("beta^2/pi = {value} is outside {range}")]
    Coupling { value: f64, range: &'static str },
    #[error("insufficient scale separation: {0}")]
    Separation(String),
    #[error("time step {dt} exceeds the stability bound {bound}")]
    Unstable { dt: f64, bound: f64 },
    #[error("solution diverged at step {step} (t = {time}, max |v| = {max_abs})")]
    Diverged { step: usize, time: f64, max_abs: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}
