use std::collections::BTreeSet;

use num_complex::Complex64;

use super::{chain_numbers, lowest};
use crate::error::{Error, Result};
use crate::hamiltonians::{build_hqs_on, LadderParams};
use crate::ladder::{linearize, Chain, LadderIndex};
use crate::sector::{BasisSet, FullBasis, SectorBasis};
use crate::solver::{krylov_evolve_with, KrylovOptions};
use crate::sparse::SparseOperator;
use crate::state::StateVector;

/// Qubits to excite from the all-ground state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExcitationPattern {
    excited: BTreeSet<LadderIndex>,
}

impl ExcitationPattern {
    pub fn new(excited: impl IntoIterator<Item = LadderIndex>) -> Self {
        ExcitationPattern {
            excited: excited.into_iter().collect(),
        }
    }

    pub fn excited(&self) -> impl Iterator<Item = &LadderIndex> {
        self.excited.iter()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.excited.iter().try_for_each(|i| i.validate(n))
    }

    /// Basis index of the product state.
    pub fn bits(&self, n: usize) -> Result<u64> {
        self.excited
            .iter()
            .try_fold(0u64, |acc, &i| Ok(acc | 1u64 << (linearize(i, n)? - 1)))
    }

    /// `(N_up, N_down)`
    pub fn counts(&self) -> (usize, usize) {
        let up = self.excited.iter().filter(|i| i.chain == Chain::Up).count();
        (up, self.excited.len() - up)
    }
}

/// Product state on the full register, tagged with its sector.
pub fn prepare_product_state(pattern: &ExcitationPattern, n: usize) -> Result<StateVector> {
    pattern.validate(n)?;
    let full = FullBasis::new(n)?;
    StateVector::basis(full.dim(), pattern.bits(n)? as usize, Some(pattern.counts()))
}

/// Product state as a vector over `basis`.
pub(crate) fn product_in(pattern: &ExcitationPattern, basis: &SectorBasis) -> Result<StateVector> {
    pattern.validate(basis.n)?;
    let i = basis
        .index_of(pattern.bits(basis.n)?)
        .ok_or_else(|| Error::domain("pattern lies outside the sector"))?;
    StateVector::basis(basis.dim(), i, basis.sector())
}

/// Detuning envelope `f(s)` on `s in [0, 1]` with `f(0) = 0`, `f(1) = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub enum Schedule {
    #[default]
    Linear,
    /// `sin^2(pi s / 2)`
    Sine,
    Custom(fn(f64) -> f64),
}

impl Schedule {
    pub fn at(&self, s: f64) -> f64 {
        match self {
            Schedule::Linear => s,
            Schedule::Sine => (0.5 * std::f64::consts::PI * s).sin().powi(2),
            Schedule::Custom(f) => f(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Ramp {
    pub duration: f64,
    /// Initial detuning per linear qubit (length `2n`), added to its
    /// splitting and removed along the schedule.
    pub detuning: Vec<f64>,
    pub schedule: Schedule,
    /// Piecewise-constant slices of the ramp; see [`Ramp::default_slices`].
    pub slices: usize,
    /// Overlap below which a warning is attached.
    pub warn_below: f64,
}

impl Ramp {
    /// At least 200 slices, and enough that each slice moves the detuning
    /// phase by at most one radian.
    pub fn default_slices(duration: f64, detuning: f64) -> usize {
        let needed = (duration.abs() * detuning.abs()).ceil();
        if needed.is_finite() {
            (needed as usize).max(200)
        } else {
            200
        }
    }

    /// The same detuning on every qubit of `pattern`, linear schedule.
    pub fn on_pattern(pattern: &ExcitationPattern, n: usize, detuning: f64, duration: f64) -> Result<Self> {
        let mut d = vec![0.0; 2 * n];
        for &i in pattern.excited() {
            d[linearize(i, n)? - 1] = detuning;
        }
        Ok(Ramp {
            duration,
            detuning: d,
            schedule: Schedule::Linear,
            slices: Self::default_slices(duration, detuning),
            warn_below: 0.99,
        })
    }
}

#[derive(Debug, Clone)]
pub struct AdiabaticReport {
    /// Final state over the sector basis.
    pub state: StateVector,
    pub sector: (usize, usize),
    /// `|<ground|psi(T)>|^2` with the lowest state of the target sector.
    pub overlap: f64,
    pub ground_energy: f64,
    pub final_energy: f64,
    /// Largest change of `<N_up>` or `<N_down>` over the slices.
    pub number_drift: f64,
    pub warning: Option<String>,
}

/// Starts from the product state of `pattern` with detuned splittings and
/// ramps the detuning away while evolving under the ladder Hamiltonian.
///
/// To end in the sector ground state the excited qubits need detunings that
/// make them the lowest-energy configuration, i.e. negative ones. The product
/// state only overlaps the detuned ground state up to `1 - O((g^x/delta)^2)`,
/// and an adiabatic ramp carries that deficit to the end.
pub fn adiabatic_prepare(
    p: &LadderParams,
    pattern: &ExcitationPattern,
    ramp: &Ramp,
) -> Result<AdiabaticReport> {
    let n = p.n();
    if ramp.detuning.len() != 2 * n {
        return Err(Error::domain(format!(
            "detuning has {} entries, expected {}",
            ramp.detuning.len(),
            2 * n
        )));
    }
    if !(ramp.duration.is_finite() && ramp.duration >= 0.0) || ramp.slices == 0 {
        return Err(Error::domain("ramp needs a non-negative duration and at least one slice"));
    }
    if ramp.detuning.iter().any(|d| !d.is_finite()) {
        return Err(Error::domain("detunings must be finite"));
    }
    let (up, down) = pattern.counts();
    let basis = SectorBasis::new(n, up, down)?;
    let h0 = build_hqs_on(p, &basis)?;
    // sum_q delta_q Z_q / 2 over the sector
    let detune: Vec<f64> = basis
        .states()
        .iter()
        .map(|&s| {
            ramp.detuning
                .iter()
                .enumerate()
                .map(|(q, d)| if s >> q & 1 == 1 { 0.5 * d } else { -0.5 * d })
                .sum()
        })
        .collect();
    let detune = SparseOperator::diagonal(&detune);

    let mut psi = product_in(pattern, &basis)?;
    let start = chain_numbers(&basis, psi.amplitudes());
    let mut drift: f64 = 0.0;
    let dt = ramp.duration / ramp.slices as f64;
    let opts = KrylovOptions::default();
    if dt > 0.0 {
        for k in 0..ramp.slices {
            let s = (k as f64 + 0.5) / ramp.slices as f64;
            let weight = 1.0 - ramp.schedule.at(s);
            let h = h0.axpy(Complex64::new(weight, 0.0), &detune)?;
            let out = krylov_evolve_with(&h, &psi, &[dt], &opts)?;
            psi = out.states.into_iter().next().expect("one time requested");
            let now = chain_numbers(&basis, psi.amplitudes());
            drift = drift.max((now.0 - start.0).abs()).max((now.1 - start.1).abs());
        }
    }
    let ground = lowest(&h0, 1, basis.sector())?;
    let g = &ground.eigenvectors.as_ref().expect("eigenvectors requested")[0];
    let overlap = g.fidelity(&psi)?;
    let final_energy = h0.expectation(psi.amplitudes())?.re;
    let warning = (overlap < ramp.warn_below).then(|| {
        format!(
            "final overlap {overlap:.6} below {}; ramp of duration {} too fast \
             (energy above ground {:e})",
            ramp.warn_below,
            ramp.duration,
            final_energy - ground.eigenvalues[0]
        )
    });
    Ok(AdiabaticReport {
        state: psi,
        sector: (up, down),
        overlap,
        ground_energy: ground.eigenvalues[0],
        final_energy,
        number_drift: drift,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_hfh, build_hqs, map_params};

    #[test]
    fn product_state_tags() {
        let s = prepare_product_state(&ExcitationPattern::default(), 2).unwrap();
        assert_eq!(s.sector(), Some((0, 0)));
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        let p = LadderParams::uniform(2, 1.0, 0.3, 0.2).unwrap();
        let hfh = build_hfh(&map_params(&p).unwrap()).unwrap();
        assert_eq!(hfh.expectation(s.amplitudes()).unwrap().norm(), 0.0);

        let s = prepare_product_state(&ExcitationPattern::new([LadderIndex::up(1)]), 2).unwrap();
        assert_eq!(s.sector(), Some((1, 0)));
        assert_eq!(s.norm(), 1.0);
        assert_eq!(s.amplitudes()[4], Complex64::new(1.0, 0.0));
        assert!(prepare_product_state(&ExcitationPattern::new([LadderIndex::up(3)]), 2).is_err());
    }

    #[test]
    fn zero_detuning_is_plain_evolution() {
        let p = LadderParams::uniform(3, 1.0, 0.4, 0.1).unwrap();
        let pattern = ExcitationPattern::new([LadderIndex::down(1)]);
        let ramp = Ramp::on_pattern(&pattern, 3, 0.0, 7.0).unwrap();
        let r = adiabatic_prepare(&p, &pattern, &ramp).unwrap();
        let basis = SectorBasis::new(3, 0, 1).unwrap();
        let h = basis.project_operator(&build_hqs(&p).unwrap()).unwrap();
        let g = &lowest(&h, 1, None).unwrap().eigenvectors.unwrap()[0];
        let static_overlap = g.fidelity(&product_in(&pattern, &basis).unwrap()).unwrap();
        assert!((r.overlap - static_overlap).abs() < 1e-9);
        assert!(r.warning.is_some());
    }

    #[test]
    fn slow_ramp_reaches_ground_state() {
        let p = LadderParams::uniform(4, 1.0, 0.5, 0.2).unwrap();
        let pattern = ExcitationPattern::new([LadderIndex::down(2)]);
        let ramp = Ramp::on_pattern(&pattern, 4, -10.0, 200.0).unwrap();
        let r = adiabatic_prepare(&p, &pattern, &ramp).unwrap();
        assert!(r.overlap >= 0.99, "{}", r.overlap);
        assert!(r.warning.is_none());
        assert!(r.number_drift < 1e-12);
    }

    #[test]
    fn bad_ramp_rejected() {
        let p = LadderParams::uniform(2, 1.0, 0.5, 0.2).unwrap();
        let pattern = ExcitationPattern::new([LadderIndex::down(1)]);
        let mut ramp = Ramp::on_pattern(&pattern, 2, -1.0, 1.0).unwrap();
        ramp.detuning.pop();
        assert!(adiabatic_prepare(&p, &pattern, &ramp).unwrap_err().is_validation());
    }
}
