use std::f64::consts::PI;

use num_complex::Complex64;

use super::lowest;
use crate::error::{Error, Result};
use crate::hamiltonians::{build_hqs_on, LadderParams};
use crate::sector::{BasisSet, SectorBasis};
use crate::solver::{dense_spectrum, krylov_evolve_with, KrylovOptions};
use crate::state::StateVector;

#[derive(Debug, Clone)]
pub struct TightBindingOptions {
    /// Site of the initially localized excitation; the chain centre by default.
    pub start_site: Option<usize>,
    /// Sample times of the propagation; `20 / |g^x|` in 21 steps by default.
    pub times: Option<Vec<f64>>,
    pub krylov: KrylovOptions,
}

impl Default for TightBindingOptions {
    fn default() -> Self {
        TightBindingOptions {
            start_site: None,
            times: None,
            krylov: KrylovOptions {
                tol: 1e-11,
                ..KrylovOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TightBindingReport {
    /// Hopping `t = -g^x`.
    pub t: f64,
    /// Energy of the empty chain, the `k = 0` sector.
    pub vacuum_energy: f64,
    /// Cost `epsilon - 2 g^z = -mu` of one excitation without hopping.
    pub onsite_energy: f64,
    /// Single-excitation energies minus `vacuum_energy + onsite_energy`, ascending.
    pub single_particle: Vec<f64>,
    /// `-2t cos(m pi / (n+1))`, ascending.
    pub analytic: Vec<f64>,
    pub max_spectrum_deviation: f64,
    /// Largest deviation of any `(0, k)` sector spectrum from filled free-fermion levels.
    pub max_many_body_deviation: f64,
    pub times: Vec<f64>,
    pub start_site: usize,
    /// Largest amplitude deviation from the mode-sum propagator.
    pub max_dynamics_deviation: f64,
}

/// `-2t cos(m pi / (n+1))` for `m = 1..=n`, ascending.
fn open_chain_levels(n: usize, t: f64) -> Vec<f64> {
    let mut e: Vec<f64> = (1..=n)
        .map(|m| -2.0 * t * (m as f64 * PI / (n + 1) as f64).cos())
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Sums of `k` distinct levels, ascending.
fn filled_levels(levels: &[f64], k: usize) -> Vec<f64> {
    let n = levels.len();
    let mut sums = Vec::new();
    for mask in 0u64..1 << n {
        if mask.count_ones() as usize == k {
            sums.push((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| levels[i]).sum());
        }
    }
    sums.sort_by(f64::total_cmp);
    sums
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Excitations confined to the down chain hop as free fermions on an open chain.
pub fn tight_binding_experiment(p: &LadderParams, opts: &TightBindingOptions) -> Result<TightBindingReport> {
    let (eps, gx, gz) = p
        .uniform_values()
        .ok_or_else(|| Error::domain("tight-binding comparison needs uniform parameters"))?;
    let n = p.n();
    if n > 16 {
        return Err(Error::Capacity {
            what: "tight-binding chain length",
            size: n,
            limit: 16,
        });
    }
    let t = -gx;
    let vacuum_basis = SectorBasis::new(n, 0, 0)?;
    let vacuum_energy = build_hqs_on(p, &vacuum_basis)?.get(0, 0).re;
    let onsite_energy = eps - 2.0 * gz;

    let single = SectorBasis::new(n, 0, 1)?;
    let h1 = build_hqs_on(p, &single)?;
    let single_particle: Vec<f64> = dense_spectrum(&h1)?
        .eigenvalues
        .iter()
        .map(|e| e - vacuum_energy - onsite_energy)
        .collect();
    let analytic = open_chain_levels(n, t);
    let max_spectrum_deviation = max_deviation(&single_particle, &analytic);

    let mut max_many_body_deviation: f64 = 0.0;
    for k in 2..=n.min(8) {
        let basis = SectorBasis::new(n, 0, k)?;
        let h = build_hqs_on(p, &basis)?;
        let got: Vec<f64> = lowest(&h, basis.dim(), None)?
            .eigenvalues
            .iter()
            .map(|e| e - vacuum_energy - k as f64 * onsite_energy)
            .collect();
        max_many_body_deviation = max_many_body_deviation.max(max_deviation(&got, &filled_levels(&analytic, k)));
    }

    let start_site = opts.start_site.unwrap_or(n.div_ceil(2));
    if start_site == 0 || start_site > n {
        return Err(Error::domain(format!("start site {start_site} outside 1..={n}")));
    }
    let times = opts.times.clone().unwrap_or_else(|| {
        let horizon = if gx == 0.0 { 1.0 } else { 20.0 / gx.abs() };
        (0..=20).map(|k| horizon * k as f64 / 20.0).collect()
    });
    let psi0 = StateVector::basis(n, start_site - 1, single.sector())?;
    let out = krylov_evolve_with(&h1, &psi0, &times, &opts.krylov)?;
    let norm = (2.0 / (n + 1) as f64).sqrt();
    let mode = |m: usize, j: usize| norm * (PI * (m * j) as f64 / (n + 1) as f64).sin();
    let shift = vacuum_energy + onsite_energy;
    let mut max_dynamics_deviation: f64 = 0.0;
    for (state, &time) in out.states.iter().zip(&times) {
        for j in 1..=n {
            let exact: Complex64 = (1..=n)
                .map(|m| {
                    let e = -2.0 * t * (m as f64 * PI / (n + 1) as f64).cos() + shift;
                    Complex64::from_polar(mode(m, j) * mode(m, start_site), -e * time)
                })
                .sum();
            max_dynamics_deviation = max_dynamics_deviation.max((state.amplitudes()[j - 1] - exact).norm());
        }
    }

    Ok(TightBindingReport {
        t,
        vacuum_energy,
        onsite_energy,
        single_particle,
        analytic,
        max_spectrum_deviation,
        max_many_body_deviation,
        times,
        start_site,
        max_dynamics_deviation,
    })
}
