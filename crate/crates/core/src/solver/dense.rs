use nalgebra::SymmetricEigen;

use super::{SpectrumResult, RESIDUAL_TOLERANCE};
use crate::error::{Error, Result};
use crate::sparse::SparseOperator;
use crate::state::{norm, StateVector};

pub const MAX_DENSE_SPECTRUM_DIM: usize = 4096;

fn decompose(h: &SparseOperator) -> Result<SymmetricEigen<num_complex::Complex64, nalgebra::Dyn>> {
    if h.dim() > MAX_DENSE_SPECTRUM_DIM {
        return Err(Error::Capacity {
            what: "dense diagonalization (dimension)",
            size: h.dim(),
            limit: MAX_DENSE_SPECTRUM_DIM,
        });
    }
    if !h.is_hermitian() {
        return Err(Error::domain("dense_spectrum needs a Hermitian operator"));
    }
    Ok(h.to_dense().symmetric_eigen())
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// Full spectrum by dense Hermitian diagonalization, ascending.
pub fn dense_spectrum(h: &SparseOperator) -> Result<SpectrumResult> {
    let eig = decompose(h)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(SpectrumResult {
        eigenvalues: values,
        eigenvectors: None,
        sector: None,
    })
}

/// Full spectrum with eigenvectors; every pair is checked against the
/// residual bound.
pub fn dense_eigen(h: &SparseOperator, sector: Option<(usize, usize)>) -> Result<SpectrumResult> {
    let eig = decompose(h)?;
    let raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut values = Vec::with_capacity(raw.len());
    let mut vectors = Vec::with_capacity(raw.len());
    for i in sorted_order(&raw) {
        let v: Vec<_> = eig.eigenvectors.column(i).iter().copied().collect();
        let hv = h.matvec(&v)?;
        let r: Vec<_> = hv.iter().zip(&v).map(|(a, b)| a - b * raw[i]).collect();
        let res = norm(&r);
        if res > RESIDUAL_TOLERANCE {
            return Err(Error::Convergence {
                iterations: 0,
                detail: format!("dense eigenpair {i} has residual {res:e}"),
            });
        }
        values.push(raw[i]);
        vectors.push(StateVector::normalized(v, sector)?);
    }
    Ok(SpectrumResult {
        eigenvalues: values,
        eigenvectors: Some(vectors),
        sector,
    })
}
