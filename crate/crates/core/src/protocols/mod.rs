//! Initialization, symmetry checks and quality-control experiments on the
//! ladder emulator.
//!
//! Time evolution runs inside the conserved sector of the initial state
//! whenever that state carries a sector tag.

mod disorder;
mod partition;
mod prepare;
mod symmetry;
mod tight_binding;

pub use disorder::{
    disorder_sweep, draw_realization, Distribution, DisorderObservable, DisorderReport,
    DisorderSpec, SampleResult,
};
pub use partition::{partition_experiment, PartitionReport, Side};
pub use prepare::{
    adiabatic_prepare, prepare_product_state, AdiabaticReport, ExcitationPattern, Ramp, Schedule,
};
pub use symmetry::{
    check_symmetries, conservation_drift, number_commutators, DriftReport, SymmetryReport,
    TranslationReport,
};
pub use tight_binding::{tight_binding_experiment, TightBindingOptions, TightBindingReport};

use num_complex::Complex64;

use crate::error::Result;
use crate::sector::BasisSet;
use crate::solver::{dense_eigen, lanczos_with, LanczosOptions, SpectrumResult, MAX_DENSE_SPECTRUM_DIM};
use crate::sparse::SparseOperator;

/// `<n_q>` for every linear qubit `q = 1..=2n`, as a vector indexed by `q - 1`.
pub(crate) fn occupations<B: BasisSet + ?Sized>(basis: &B, amps: &[Complex64]) -> Vec<f64> {
    let qubits = 2 * basis.chain_length();
    let mut occ = vec![0.0; qubits];
    for (i, a) in amps.iter().enumerate() {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let s = basis.state(i);
        for (q, o) in occ.iter_mut().enumerate() {
            if s >> q & 1 == 1 {
                *o += w;
            }
        }
    }
    occ
}

/// `(<N_up>, <N_down>)`
pub(crate) fn chain_numbers<B: BasisSet + ?Sized>(basis: &B, amps: &[Complex64]) -> (f64, f64) {
    let n = basis.chain_length();
    let occ = occupations(basis, amps);
    (occ[n..].iter().sum(), occ[..n].iter().sum())
}

/// Lowest `k` eigenpairs, dense when the block is small enough.
pub(crate) fn lowest(h: &SparseOperator, k: usize, tag: Option<(usize, usize)>) -> Result<SpectrumResult> {
    if h.dim() <= MAX_DENSE_SPECTRUM_DIM {
        let mut r = dense_eigen(h, tag)?;
        r.eigenvalues.truncate(k);
        if let Some(v) = r.eigenvectors.as_mut() {
            v.truncate(k);
        }
        Ok(r)
    } else {
        let mut r = lanczos_with(h, k, &LanczosOptions::default())?.spectrum;
        r.sector = tag;
        Ok(r)
    }
}
