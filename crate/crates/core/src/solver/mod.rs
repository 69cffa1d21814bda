//! Eigenvalues and time evolution.

mod dense;
mod krylov;
mod lanczos;

pub use dense::{dense_eigen, dense_spectrum, MAX_DENSE_SPECTRUM_DIM};
pub use krylov::{
    correlation, krylov_evolve, krylov_evolve_with, observable_series, real_series, KrylovOptions,
};
pub use lanczos::{lanczos_extremal, lanczos_with, LanczosOptions, LanczosOutcome};

use crate::state::StateVector;

/// Residual bound `|H v - lambda v|_2` enforced on every reported pair.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<StateVector>>,
    pub sector: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub krylov_dim: usize,
    /// Accepted propagation steps.
    pub steps: usize,
    /// Steps rejected and retried with half the step size.
    pub rejected: usize,
    pub smallest_step: f64,
    /// Largest accepted local error estimate.
    pub max_error_estimate: f64,
}
