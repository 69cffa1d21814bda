mod circuit;
mod model;
mod verify;

pub use circuit::{circuit, ut_curve};
pub use model::{disorder, evolve, map_params, spectrum};
pub use verify::verify;

use qladder_core::solver::{dense_spectrum, lanczos_with, LanczosOptions};
use qladder_core::SparseOperator;

use crate::config::{Tolerances, Unit};
use crate::error::{at, CliError, CliResult};
use crate::output::Table;

/// Largest block diagonalized densely.
pub const DENSE_LIMIT: usize = 4096;

/// Run-wide settings shared by every mode.
#[derive(Debug, Clone)]
pub struct Context {
    pub seed: u64,
    pub unit: Unit,
    pub tolerances: Tolerances,
}

/// Result of a mode: the artifact table, a human-readable summary for
/// stdout, and notes for stderr.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub table: Table,
    pub summary: Option<String>,
    pub notes: Vec<String>,
    /// Set when a check failed; the run then exits with the numerical code.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn table(table: Table) -> Self {
        Outcome {
            table,
            ..Default::default()
        }
    }
}

/// Lowest `levels` eigenvalues (all of them by default for dense blocks).
fn eigenvalues(h: &SparseOperator, levels: Option<usize>, seed: u64, stage: &str) -> CliResult<Vec<f64>> {
    if h.dim() <= DENSE_LIMIT {
        let mut ev = dense_spectrum(h).map_err(at(stage))?.eigenvalues;
        if let Some(k) = levels {
            ev.truncate(k);
        }
        return Ok(ev);
    }
    let k = levels.ok_or_else(|| {
        CliError::validation(format!(
            "{stage}: block of {} states needs `levels` for the Lanczos solver",
            h.dim()
        ))
    })?;
    let opts = LanczosOptions {
        seed,
        with_vectors: false,
        ..LanczosOptions::default()
    };
    Ok(lanczos_with(h, k, &opts).map_err(at(stage))?.spectrum.eigenvalues)
}

fn linspace(t_max: f64, steps: usize, key: &str) -> CliResult<Vec<f64>> {
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(CliError::validation(format!("{key}.t_max must be finite and non-negative, got {t_max}")));
    }
    if steps == 0 {
        return Err(CliError::validation(format!("{key}.steps must be at least 1")));
    }
    Ok((0..=steps).map(|i| t_max * i as f64 / steps as f64).collect())
}

fn require<T: Copy>(v: Option<T>, section: &str, key: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::validation(format!("[{section}] missing key `{key}`")))
}
