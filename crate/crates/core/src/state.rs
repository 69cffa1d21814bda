use num_complex::Complex64;

use crate::error::{Error, Result};

pub const NORM_TOLERANCE: f64 = 1e-10;

/// Complex amplitude vector, either on the full register or on a sector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    sector: Option<(usize, usize)>,
}

impl StateVector {
    /// Wraps amplitudes without normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, sector: Option<(usize, usize)>) -> Self {
        StateVector { amplitudes, sector }
    }

    /// Normalizes `amplitudes`; a zero vector is a domain error.
    pub fn normalized(amplitudes: Vec<Complex64>, sector: Option<(usize, usize)>) -> Result<Self> {
        let mut s = StateVector::from_amplitudes(amplitudes, sector);
        let n = s.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        s.amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(s)
    }

    pub fn basis(dim: usize, index: usize, sector: Option<(usize, usize)>) -> Result<Self> {
        if index >= dim {
            return Err(Error::domain(format!("basis index {index} outside dimension {dim}")));
        }
        let mut a = vec![Complex64::new(0.0, 0.0); dim];
        a[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector::from_amplitudes(a, sector))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `(n_up, n_down)` when the state lives in a particle-number sector.
    pub fn sector(&self) -> Option<(usize, usize)> {
        self.sector
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::domain(format!(
                "state dimensions differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

/// `<a|b>`
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let s = StateVector::normalized(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)], None)
            .unwrap();
        assert!(s.is_normalized());
        assert!(StateVector::normalized(vec![Complex64::new(0.0, 0.0)], None).is_err());
    }

    #[test]
    fn basis_state() {
        let s = StateVector::basis(4, 2, Some((1, 0))).unwrap();
        assert_eq!(s.norm(), 1.0);
        assert_eq!(s.sector(), Some((1, 0)));
        assert!(StateVector::basis(4, 4, None).is_err());
    }
}
