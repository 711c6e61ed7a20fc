//! Desk-scale simulation of pressure-driven channel flow.
//!
//! Fourier in the wall-parallel directions, Chebyshev collocation across the
//! channel, wall-normal velocity and vorticity as unknowns, implicit
//! viscosity and explicit advection. Runs produce time series, finite-time
//! averages, residuals of the averaged balances and a matrix of checks
//! against the rigorous bounds.

pub mod config;
mod error;
pub mod operators;
pub mod residual;
pub mod run;
pub mod solver;
pub mod stats;
pub mod verdict;

pub use config::{Init, Integrator, SimulationConfig};
pub use error::{DnsError, Result};
pub use operators::stokes_inverse;
pub use residual::{reynolds_residual, ReynoldsResidual, TimeAverage};
pub use run::{run, run_with, RunOptions, RunOutput};
pub use solver::Solver;
pub use stats::{AveragesRecord, TimeSeriesRow};
pub use verdict::{verdict_matrix, Verdict, VerdictMatrix};
