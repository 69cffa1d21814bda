//! Particle-number sectors of the ladder register.
//!
//! The ladder Hamiltonian conserves the excitation count of each chain
//! separately, so the register splits into blocks labelled `(n_up, n_down)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ladder::{chain_counts, check_chain_length, MAX_FULL_QUBITS, MAX_SECTOR_QUBITS};
use crate::sparse::{SparseOperator, TripletBuilder};
use crate::state::StateVector;

/// An ordered set of computational basis states spanning a subspace.
pub trait BasisSet: Sync {
    fn chain_length(&self) -> usize;
    fn dim(&self) -> usize;
    fn state(&self, i: usize) -> u64;
    fn index_of(&self, state: u64) -> Option<usize>;
    /// `(n_up, n_down)` if the span is a single sector.
    fn sector(&self) -> Option<(usize, usize)> {
        None
    }
}

/// Every basis state of `2n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullBasis {
    n: usize,
}

impl FullBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_chain_length(n)?;
        if 2 * n > MAX_FULL_QUBITS {
            return Err(Error::Capacity {
                what: "full register (qubits)",
                size: 2 * n,
                limit: MAX_FULL_QUBITS,
            });
        }
        Ok(FullBasis { n })
    }
}

impl BasisSet for FullBasis {
    fn chain_length(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        1usize << (2 * self.n)
    }

    fn state(&self, i: usize) -> u64 {
        i as u64
    }

    fn index_of(&self, state: u64) -> Option<usize> {
        ((state as usize) < self.dim()).then_some(state as usize)
    }
}

/// Basis states with exactly `n_up` excitations in the up chain and `n_down`
/// in the down chain, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    pub n: usize,
    pub n_up: usize,
    pub n_down: usize,
    states: Vec<u64>,
}

/// All `k`-bit subsets of the low `n` bits, ascending.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(v);
        // Gosper's hack: next integer with the same popcount
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl SectorBasis {
    pub fn new(n: usize, n_up: usize, n_down: usize) -> Result<Self> {
        check_chain_length(n)?;
        if 2 * n > MAX_SECTOR_QUBITS {
            return Err(Error::Capacity {
                what: "sector register (qubits)",
                size: 2 * n,
                limit: MAX_SECTOR_QUBITS,
            });
        }
        if n_up > n || n_down > n {
            return Err(Error::domain(format!(
                "sector ({n_up}, {n_down}) impossible on chains of length {n}"
            )));
        }
        let downs = combinations(n, n_down);
        let ups = combinations(n, n_up);
        let mut states = Vec::with_capacity(ups.len() * downs.len());
        for &u in &ups {
            for &d in &downs {
                states.push((u << n) | d);
            }
        }
        Ok(SectorBasis {
            n,
            n_up,
            n_down,
            states,
        })
    }

    /// Every sector of a chain of length `n`, ordered by `(n_up, n_down)`.
    pub fn all(n: usize) -> Result<Vec<SectorBasis>> {
        let mut v = Vec::new();
        for up in 0..=n {
            for down in 0..=n {
                v.push(SectorBasis::new(n, up, down)?);
            }
        }
        Ok(v)
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    /// Restricts a full-space operator to this sector.
    pub fn project_operator(&self, op: &SparseOperator) -> Result<SparseOperator> {
        if op.dim() != 1usize << (2 * self.n) {
            return Err(Error::domain(format!(
                "operator dimension {} is not the full register 2^{}",
                op.dim(),
                2 * self.n
            )));
        }
        let keep: Vec<usize> = self.states.iter().map(|&s| s as usize).collect();
        op.restrict(&keep)
    }

    /// Components of a full-space state inside the sector (not renormalized).
    pub fn project_state(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != 1usize << (2 * self.n) {
            return Err(Error::domain("state is not on the full register"));
        }
        let a = psi.amplitudes();
        let amps = self.states.iter().map(|&s| a[s as usize]).collect();
        Ok(StateVector::from_amplitudes(amps, Some((self.n_up, self.n_down))))
    }

    /// Embeds a sector state into the full register.
    pub fn embed_state(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::domain(format!(
                "state has dimension {}, sector has {}",
                psi.dim(),
                self.dim()
            )));
        }
        FullBasis::new(self.n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << (2 * self.n)];
        for (&s, &a) in self.states.iter().zip(psi.amplitudes()) {
            amps[s as usize] = a;
        }
        Ok(StateVector::from_amplitudes(amps, None))
    }

    /// Orthogonal projector onto the sector as a full-space operator.
    pub fn projector(&self) -> Result<SparseOperator> {
        let full = FullBasis::new(self.n)?;
        let mut b = TripletBuilder::new(full.dim());
        for &s in &self.states {
            b.push(s as usize, s as usize, Complex64::new(1.0, 0.0));
        }
        Ok(b.build())
    }
}

impl BasisSet for SectorBasis {
    fn chain_length(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.states.len()
    }

    fn state(&self, i: usize) -> u64 {
        self.states[i]
    }

    fn index_of(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    fn sector(&self) -> Option<(usize, usize)> {
        Some((self.n_up, self.n_down))
    }
}

/// Sector label of a basis state.
pub fn sector_of(state: u64, n: usize) -> (usize, usize) {
    chain_counts(state, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = SectorBasis::new(2, 0, 0).unwrap();
        assert_eq!(s.states(), &[0]);
        assert_eq!(SectorBasis::new(2, 1, 1).unwrap().dim(), 4);
        assert_eq!(SectorBasis::new(3, 2, 1).unwrap().dim(), 9);
        assert!(SectorBasis::new(2, 3, 0).is_err());
        assert!(SectorBasis::new(15, 1, 0).is_err());
    }

    #[test]
    fn states_sorted_with_right_counts() {
        let s = SectorBasis::new(4, 2, 3).unwrap();
        assert_eq!(s.dim(), binomial(4, 2) * binomial(4, 3));
        assert!(s.states().windows(2).all(|w| w[0] < w[1]));
        for &b in s.states() {
            assert_eq!(chain_counts(b, 4), (2, 3));
        }
    }

    #[test]
    fn dimensions_sum_to_full() {
        for n in 1..=5 {
            let total: usize = SectorBasis::all(n).unwrap().iter().map(|s| s.dim()).sum();
            assert_eq!(total, 1 << (2 * n));
        }
    }

    #[test]
    fn projector_idempotent_and_hermitian() {
        let p = SectorBasis::new(3, 1, 2).unwrap().projector().unwrap();
        let p2 = p.matmul(&p).unwrap();
        assert!(p2.max_abs_diff(&p).unwrap() <= 1e-12);
        assert!(p.adjoint().max_abs_diff(&p).unwrap() <= 1e-12);
    }

    #[test]
    fn embed_then_project() {
        let s = SectorBasis::new(2, 1, 0).unwrap();
        let psi = StateVector::normalized(
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
            Some((1, 0)),
        )
        .unwrap();
        let full = s.embed_state(&psi).unwrap();
        assert_eq!(s.project_state(&full).unwrap(), psi);
    }
}
