use num_complex::Complex64;

use super::{chain_numbers, occupations};
use crate::error::{Error, Result};
use crate::hamiltonians::{build_hqs_on, LadderParams};
use crate::ladder::Chain;
use crate::sector::{BasisSet, FullBasis, SectorBasis};
use crate::solver::{krylov_evolve_with, KrylovOptions};
use crate::state::StateVector;

/// Half of the ladder holding the initial excitations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Sites `1..=cut_bond`.
    Left,
    /// Sites `cut_bond+1..=n`.
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub cut_bond: usize,
    pub side: Side,
    pub times: Vec<f64>,
    /// Excitation weight on the far side of the cut at each time.
    pub leakage: Vec<f64>,
    pub max_leakage: f64,
    /// Largest difference of `<n_js>` on the occupied side between the full
    /// ladder and a standalone ladder of that side only.
    pub block_deviation: f64,
    pub number_drift: f64,
}

/// Mask of both chains' qubits for sites `first..=last`.
fn site_mask(n: usize, first: usize, last: usize) -> u64 {
    let m = last - first + 1;
    let run = ((1u64 << m) - 1) << (first - 1);
    run | run << n
}

/// Register index of `state` on the standalone ladder of sites `first..=last`.
fn compress(state: u64, n: usize, first: usize, last: usize) -> u64 {
    let m = last - first + 1;
    let low = (1u64 << m) - 1;
    (state >> (first - 1) & low) | ((state >> (n + first - 1) & low) << m)
}

/// Switches off the exchange on `cut_bond` in both chains and evolves a
/// state that lives on one side of the cut.
///
/// `psi0` is given on the full register; a sector tag restricts the
/// evolution to that sector.
pub fn partition_experiment(
    p: &LadderParams,
    cut_bond: usize,
    psi0: &StateVector,
    times: &[f64],
    opts: &KrylovOptions,
) -> Result<PartitionReport> {
    let n = p.n();
    if cut_bond == 0 || cut_bond >= n {
        return Err(Error::domain(format!("cut bond {cut_bond} outside 1..{n}")));
    }
    let full = FullBasis::new(n)?;
    if psi0.dim() != full.dim() {
        return Err(Error::domain("initial state is not on the full register"));
    }
    let left = site_mask(n, 1, cut_bond);
    let right = site_mask(n, cut_bond + 1, n);
    let support = psi0
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .fold(0u64, |acc, (b, _)| acc | b as u64);
    let side = if support & right == 0 {
        Side::Left
    } else if support & left == 0 {
        Side::Right
    } else {
        return Err(Error::domain("initial state has excitations on both sides of the cut"));
    };
    let (far, first, last) = match side {
        Side::Left => (right, 1, cut_bond),
        Side::Right => (left, cut_bond + 1, n),
    };

    let mut cut = p.clone();
    for chain in Chain::BOTH {
        cut.set_gx(chain, cut_bond, 0.0)?;
    }

    // full ladder, inside the sector when tagged
    let sector = psi0.sector().map(|(u, d)| SectorBasis::new(n, u, d)).transpose()?;
    let (basis, start): (Box<dyn BasisSet>, StateVector) = match sector {
        Some(s) => {
            let v = s.project_state(psi0)?;
            if (v.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::domain("initial state does not lie in its tagged sector"));
            }
            (Box::new(s), v)
        }
        None => (Box::new(full), psi0.clone()),
    };
    let h = build_hqs_on(&cut, basis.as_ref())?;
    let out = krylov_evolve_with(&h, &start, times, opts)?;

    let (u0, d0) = chain_numbers(basis.as_ref(), start.amplitudes());
    let mut leakage = Vec::with_capacity(times.len());
    let mut number_drift: f64 = 0.0;
    for s in &out.states {
        let w: f64 = s
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * (basis.state(i) & far).count_ones() as f64)
            .sum();
        leakage.push(w);
        let (u, d) = chain_numbers(basis.as_ref(), s.amplitudes());
        number_drift = number_drift.max((u - u0).abs()).max((d - d0).abs());
    }

    // standalone ladder of the occupied side
    let small_p = cut.segment(first, last)?;
    let m = last - first + 1;
    let small = FullBasis::new(m)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); small.dim()];
    for (b, a) in psi0.amplitudes().iter().enumerate() {
        if a.norm_sqr() > 0.0 {
            amps[compress(b as u64, n, first, last) as usize] = *a;
        }
    }
    let small_psi = StateVector::from_amplitudes(amps, psi0.sector());
    let small_h = build_hqs_on(&small_p, &small)?;
    let small_out = krylov_evolve_with(&small_h, &small_psi, times, opts)?;
    let mut block_deviation: f64 = 0.0;
    for (big, little) in out.states.iter().zip(&small_out.states) {
        let ob = occupations(basis.as_ref(), big.amplitudes());
        let os = occupations(&small, little.amplitudes());
        for k in 0..m {
            let j = first + k;
            block_deviation = block_deviation
                .max((ob[j - 1] - os[k]).abs())
                .max((ob[n + j - 1] - os[m + k]).abs());
        }
    }

    let max_leakage = leakage.iter().copied().fold(0.0, f64::max);
    Ok(PartitionReport {
        cut_bond,
        side,
        times: times.to_vec(),
        leakage,
        max_leakage,
        block_deviation,
        number_drift,
    })
}
