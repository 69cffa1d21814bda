use super::prepare::{prepare_product_state, ExcitationPattern};
use super::{chain_numbers, lowest, occupations};
use crate::error::{Error, Result};
use crate::hamiltonians::{build_hqs, build_hqs_on, LadderParams};
use crate::ladder::{chain_counts, swap_chains};
use crate::sector::{BasisSet, FullBasis, SectorBasis};
use crate::solver::{krylov_evolve_with, KrylovOptions};
use crate::sparse::SparseOperator;

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationReport {
    pub sector: (usize, usize),
    /// Sites compared, boundary sites excluded.
    pub bulk_sites: Vec<usize>,
    /// Largest spread `max_j <n_js> - min_j <n_js>` over both chains, in the
    /// lowest state of the sector.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    /// `max |[H, N_up]|` over matrix entries.
    pub n_up_commutator: f64,
    pub n_down_commutator: f64,
    /// `max |H - S H S|` with `S` exchanging the chains.
    pub swap_violation: f64,
    /// Finite-size information only; `None` for `n < 3`.
    pub translation: Option<TranslationReport>,
}

impl SymmetryReport {
    pub fn conserves_numbers(&self, tol: f64) -> bool {
        self.n_up_commutator <= tol && self.n_down_commutator <= tol
    }

    pub fn swap_symmetric(&self, tol: f64) -> bool {
        self.swap_violation <= tol
    }
}

/// Entry-wise max norms of `[H, N_up]` and `[H, N_down]` for an operator on the full register.
pub fn number_commutators(h: &SparseOperator, n: usize) -> Result<(f64, f64)> {
    let full = FullBasis::new(n)?;
    if h.dim() != full.dim() {
        return Err(Error::domain("operator is not on the full register"));
    }
    let mut up: f64 = 0.0;
    let mut down: f64 = 0.0;
    for (r, c, v) in h.entries() {
        let (ur, dr) = chain_counts(r as u64, n);
        let (uc, dc) = chain_counts(c as u64, n);
        up = up.max(v.norm() * ur.abs_diff(uc) as f64);
        down = down.max(v.norm() * dr.abs_diff(dc) as f64);
    }
    Ok((up, down))
}

fn swap_violation(h: &SparseOperator, n: usize) -> f64 {
    h.entries()
        .map(|(r, c, v)| {
            let (sr, sc) = (swap_chains(r as u64, n) as usize, swap_chains(c as u64, n) as usize);
            (v - h.get(sr, sc)).norm()
        })
        .fold(0.0, f64::max)
}

pub fn check_symmetries(p: &LadderParams) -> Result<SymmetryReport> {
    let n = p.n();
    let h = build_hqs(p)?;
    let (n_up_commutator, n_down_commutator) = number_commutators(&h, n)?;
    let translation = if n >= 3 {
        let basis = SectorBasis::new(n, 1, 1)?;
        let hs = build_hqs_on(p, &basis)?;
        let g = lowest(&hs, 1, basis.sector())?;
        let v = &g.eigenvectors.as_ref().expect("eigenvectors requested")[0];
        let occ = occupations(&basis, v.amplitudes());
        let bulk: Vec<usize> = (2..n).collect();
        let spread = [0, n]
            .iter()
            .map(|&offset| {
                let vals = bulk.iter().map(|&j| occ[offset + j - 1]);
                let hi = vals.clone().fold(f64::NEG_INFINITY, f64::max);
                let lo = vals.fold(f64::INFINITY, f64::min);
                hi - lo
            })
            .fold(0.0, f64::max);
        Some(TranslationReport {
            sector: (1, 1),
            bulk_sites: bulk,
            spread,
        })
    } else {
        None
    };
    Ok(SymmetryReport {
        n_up_commutator,
        n_down_commutator,
        swap_violation: swap_violation(&h, n),
        translation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub times: Vec<f64>,
    pub max_drift_up: f64,
    pub max_drift_down: f64,
    /// Largest weight found outside the initial sector.
    pub max_leakage: f64,
}

/// Evolves a product state on the full register and tracks `<N_up>`,
/// `<N_down>` and the weight outside its sector.
pub fn conservation_drift(
    p: &LadderParams,
    pattern: &ExcitationPattern,
    times: &[f64],
    opts: &KrylovOptions,
) -> Result<DriftReport> {
    let n = p.n();
    let full = FullBasis::new(n)?;
    let psi0 = prepare_product_state(pattern, n)?;
    let sector = pattern.counts();
    let h = build_hqs(p)?;
    let out = krylov_evolve_with(&h, &psi0, times, opts)?;
    let (u0, d0) = chain_numbers(&full, psi0.amplitudes());
    let mut report = DriftReport {
        times: times.to_vec(),
        max_drift_up: 0.0,
        max_drift_down: 0.0,
        max_leakage: 0.0,
    };
    for s in &out.states {
        let (u, d) = chain_numbers(&full, s.amplitudes());
        report.max_drift_up = report.max_drift_up.max((u - u0).abs());
        report.max_drift_down = report.max_drift_down.max((d - d0).abs());
        let outside: f64 = s
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(b, _)| chain_counts(*b as u64, n) != sector)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        report.max_leakage = report.max_leakage.max(outside);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::{Chain, LadderIndex};

    #[test]
    fn uniform_ladder_is_symmetric() {
        let p = LadderParams::uniform(4, 1.0, 0.3, 0.2).unwrap();
        let r = check_symmetries(&p).unwrap();
        assert!(r.conserves_numbers(1e-12));
        assert!(r.swap_symmetric(1e-12));
        let t = r.translation.unwrap();
        assert_eq!(t.bulk_sites, vec![2, 3]);
        // sites 2 and 3 are mirror images, so the bulk spread vanishes here
        assert!(t.spread < 1e-10);
    }

    #[test]
    fn disorder_breaks_swap_only() {
        let mut p = LadderParams::uniform(3, 1.0, 0.3, 0.2).unwrap();
        p.set_epsilon(LadderIndex::down(2), 1.37).unwrap();
        let r = check_symmetries(&p).unwrap();
        assert!(r.conserves_numbers(1e-12));
        assert!((r.swap_violation - 0.37).abs() < 1e-12);
    }

    #[test]
    fn decoupled_ladder() {
        let p = LadderParams::uniform(2, 1.0, 0.0, 0.0).unwrap();
        let r = check_symmetries(&p).unwrap();
        assert_eq!(r.n_up_commutator, 0.0);
        assert_eq!(r.swap_violation, 0.0);
        assert!(r.translation.is_none());
    }

    #[test]
    fn spin_flip_term_detected() {
        let p = LadderParams::uniform(2, 1.0, 0.3, 0.2).unwrap();
        let mut h = build_hqs(&p).unwrap();
        let x = crate::pauli::PauliString::single(1, crate::pauli::Pauli::X);
        h = h.add(&x.realize(2).unwrap().scale(0.5)).unwrap();
        let (up, down) = number_commutators(&h, 2).unwrap();
        assert_eq!(up, 0.0);
        assert!((down - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dynamics_stay_in_sector() {
        let p = LadderParams::uniform(3, 1.0, 0.5, 0.3).unwrap();
        let pattern = ExcitationPattern::new([LadderIndex::down(1), LadderIndex::new(3, Chain::Up)]);
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 5.0).collect();
        let r = conservation_drift(&p, &pattern, &times, &KrylovOptions::default()).unwrap();
        assert!(r.max_drift_up < 1e-10 && r.max_drift_down < 1e-10);
        assert!(r.max_leakage < 1e-20);
    }
}
