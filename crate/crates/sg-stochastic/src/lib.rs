//! Lattice Monte Carlo for the mollified log-correlated field, its Wick
//! exponentials, the renormalized dipole and the remainder equation.

pub mod chaos;
pub mod convergence;
pub mod correlation;
pub mod dipole;
mod error;
pub mod field;
pub mod lattice;
pub mod pde;
pub mod stats;

pub use chaos::{wick_exponential, Charge, ChaosField};
pub use convergence::{convergence_study, ConvergenceConfig, ConvergenceReport, SeedResult};
pub use correlation::{correlation_slopes, CorrelationConfig, CorrelationReport, CorrelationRow};
pub use dipole::{dipole_moment, DipoleConfig, DipoleReport, DipoleRow};
pub use error::StochError;
pub use field::{beta, renorm_constant, GaussianField, Mollifier, VarianceTable};
pub use lattice::{Fft2, TorusLattice};
pub use pde::{smooth_initial, solve_pde, PdeConfig, PdeSolver, Trajectory};
pub use stats::{fit_line, fit_power_law, mean_se, LineFit};
