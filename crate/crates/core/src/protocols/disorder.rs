use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use rayon::prelude::*;

use super::prepare::{product_in, ExcitationPattern};
use super::symmetry::number_commutators;
use super::{lowest, occupations};
use crate::error::{Error, Result};
use crate::hamiltonians::{build_hqs, build_hqs_on, LadderParams};
use crate::ladder::delinearize;
use crate::sector::{BasisSet, SectorBasis};
use crate::solver::{krylov_evolve_with, KrylovOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distribution {
    /// Flat on `[-sqrt(3), sqrt(3)]` times the spread.
    #[default]
    Uniform,
    Gaussian,
}

/// Relative parameter disorder. Every value is multiplied by `1 + spread * x`
/// with `x` of zero mean and unit variance.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSpec {
    pub epsilon_spread: f64,
    pub gx_spread: f64,
    pub gz_spread: f64,
    pub seed: u64,
    pub distribution: Distribution,
}

impl DisorderSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("epsilon_spread", self.epsilon_spread),
            ("gx_spread", self.gx_spread),
            ("gz_spread", self.gz_spread),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// Quantity compared between the clean and the disordered ladder.
#[derive(Debug, Clone, PartialEq)]
pub enum DisorderObservable {
    /// Lowest `levels` eigenvalues of one sector.
    Spectrum { sector: (usize, usize), levels: usize },
    /// `<n_js>(t)` on every qubit after starting from a product state.
    Dynamics { pattern: ExcitationPattern, times: Vec<f64> },
}

impl DisorderObservable {
    fn labels(&self, n: usize) -> Result<Vec<String>> {
        Ok(match self {
            DisorderObservable::Spectrum { levels, .. } => (0..*levels).map(|k| format!("E{k}")).collect(),
            DisorderObservable::Dynamics { times, .. } => {
                let mut v = Vec::new();
                for t in times {
                    for q in 1..=2 * n {
                        v.push(format!("n:{}@{t}", delinearize(q, n)?));
                    }
                }
                v
            }
        })
    }

    fn evaluate(&self, p: &LadderParams) -> Result<Vec<f64>> {
        let n = p.n();
        match self {
            DisorderObservable::Spectrum { sector, levels } => {
                let basis = SectorBasis::new(n, sector.0, sector.1)?;
                if *levels == 0 || *levels > basis.dim() {
                    return Err(Error::domain(format!(
                        "{levels} levels requested from a sector of dimension {}",
                        basis.dim()
                    )));
                }
                let h = build_hqs_on(p, &basis)?;
                Ok(lowest(&h, *levels, basis.sector())?.eigenvalues)
            }
            DisorderObservable::Dynamics { pattern, times } => {
                let (up, down) = pattern.counts();
                let basis = SectorBasis::new(n, up, down)?;
                let psi = product_in(pattern, &basis)?;
                let h = build_hqs_on(p, &basis)?;
                let out = krylov_evolve_with(&h, &psi, times, &KrylovOptions::default())?;
                Ok(out
                    .states
                    .iter()
                    .flat_map(|s| occupations(&basis, s.amplitudes()))
                    .collect())
            }
        }
    }
}

fn factor(rng: &mut ChaCha8Rng, spread: f64, dist: Distribution) -> f64 {
    let x: f64 = match dist {
        Distribution::Uniform => 3f64.sqrt() * rng.random_range(-1.0..1.0),
        Distribution::Gaussian => StandardNormal.sample(rng),
    };
    1.0 + spread * x
}

/// One disordered copy of `base`; draws `epsilon`, then `gx` (down, up), then `gz`.
pub fn draw_realization(base: &LadderParams, d: &DisorderSpec, rng: &mut ChaCha8Rng) -> Result<LadderParams> {
    let mut scale = |v: &[f64], spread: f64| -> Vec<f64> {
        v.iter().map(|x| x * factor(rng, spread, d.distribution)).collect()
    };
    let eps = scale(base.epsilons(), d.epsilon_spread);
    let down = scale(base.gx(crate::ladder::Chain::Down), d.gx_spread);
    let up = scale(base.gx(crate::ladder::Chain::Up), d.gx_spread);
    let gz = scale(base.gz(), d.gz_spread);
    LadderParams::new(base.n(), eps, down, up, gz)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult {
    pub params: LadderParams,
    /// Observable minus its clean value, in label order.
    pub deviations: Vec<f64>,
    pub n_up_commutator: f64,
    pub n_down_commutator: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisorderReport {
    pub labels: Vec<String>,
    pub clean: Vec<f64>,
    pub mean: Vec<f64>,
    /// Sample standard deviation (zero for a single sample).
    pub std: Vec<f64>,
    pub max_abs_deviation: f64,
    pub max_conservation_violation: f64,
    pub samples: Vec<SampleResult>,
}

/// Runs `observable` on `samples` seeded realizations. Realizations are drawn
/// in order from one stream and evaluated in parallel, so the report only
/// depends on the seed.
pub fn disorder_sweep(
    base: &LadderParams,
    d: &DisorderSpec,
    observable: &DisorderObservable,
    samples: usize,
) -> Result<DisorderReport> {
    d.validate()?;
    if samples == 0 {
        return Err(Error::domain("at least one disorder sample is needed"));
    }
    let labels = observable.labels(base.n())?;
    let clean = observable.evaluate(base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(d.seed);
    let realizations = (0..samples)
        .map(|_| draw_realization(base, d, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let results = realizations
        .into_par_iter()
        .map(|params| {
            let values = observable.evaluate(&params)?;
            let (up, down) = number_commutators(&build_hqs(&params)?, params.n())?;
            Ok(SampleResult {
                deviations: values.iter().zip(&clean).map(|(v, c)| v - c).collect(),
                params,
                n_up_commutator: up,
                n_down_commutator: down,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let k = clean.len();
    let count = samples as f64;
    let mut mean = vec![0.0; k];
    for r in &results {
        for (m, x) in mean.iter_mut().zip(&r.deviations) {
            *m += x / count;
        }
    }
    let mut std = vec![0.0; k];
    if samples > 1 {
        for r in &results {
            for ((s, x), m) in std.iter_mut().zip(&r.deviations).zip(&mean) {
                *s += (x - m).powi(2) / (count - 1.0);
            }
        }
        std.iter_mut().for_each(|s| *s = s.sqrt());
    }
    let max_abs_deviation = results
        .iter()
        .flat_map(|r| r.deviations.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    let max_conservation_violation = results
        .iter()
        .map(|r| r.n_up_commutator.max(r.n_down_commutator))
        .fold(0.0, f64::max);
    Ok(DisorderReport {
        labels,
        clean,
        mean,
        std,
        max_abs_deviation,
        max_conservation_violation,
        samples: results,
    })
}
