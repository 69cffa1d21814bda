use num_complex::Complex64;

use qladder_core::hamiltonians::{
    build_hfh, build_hqs_on, build_hqs_xx, inverse_map_params, map_params as ladder_to_hubbard, spectral_offset,
};
use qladder_core::ladder::delinearize;
use qladder_core::protocols::{
    disorder_sweep, prepare_product_state, DisorderObservable, DisorderSpec, Distribution, ExcitationPattern,
};
use qladder_core::solver::{krylov_evolve_with, KrylovOptions};
use qladder_core::{BasisSet, Chain, FullBasis, HubbardParams, SectorBasis, StateVector};

use super::{eigenvalues, linspace, require, Context, Outcome};
use crate::config::{
    parse_qubit, parse_sector, DisorderArgs, DistributionKind, EvolveArgs, ExchangeKind, MapArgs, Model,
    ObservableKind, SpectrumArgs,
};
use crate::error::{at, CliError, CliResult};
use crate::output::{Cell, Table};

const LADDER_DEFAULTS: (usize, f64, f64, f64) = (2, 1.0, 0.5, 0.25);

fn pattern(labels: Option<&Vec<String>>, n: usize, key: &str) -> CliResult<ExcitationPattern> {
    let labels = labels.cloned().unwrap_or_else(|| vec!["1d".to_string()]);
    let sites = labels.iter().map(|l| parse_qubit(l)).collect::<CliResult<Vec<_>>>()?;
    let p = ExcitationPattern::new(sites);
    p.validate(n).map_err(at(key))?;
    Ok(p)
}

pub fn spectrum(a: &SpectrumArgs, ctx: &Context) -> CliResult<Outcome> {
    let p = a.ladder.with_defaults(LADDER_DEFAULTS).build("spectrum")?;
    let n = p.n();
    let mut t = Table::new(&["index", "eigenvalue", "sector_nup", "sector_ndown"]);
    let model = a.model.unwrap_or_default();
    if a.exchange.unwrap_or_default() == ExchangeKind::Xx {
        if model == Model::Hubbard {
            return Err(CliError::validation("[spectrum] exchange = xx applies to the ladder model only"));
        }
        if a.sector.is_some() {
            return Err(CliError::validation(
                "[spectrum] sector: the XX ladder does not conserve N_up and N_down",
            ));
        }
        let h = build_hqs_xx(&p).map_err(at("spectrum: XX ladder"))?;
        for (i, e) in eigenvalues(&h, a.levels, ctx.seed, "spectrum: full register")?.into_iter().enumerate() {
            t.push(vec![i.into(), e.into(), Cell::Empty, Cell::Empty]);
        }
        return Ok(Outcome::table(t));
    }
    let hubbard = match model {
        Model::Hubbard => {
            let hp = ladder_to_hubbard(&p).map_err(at("spectrum: parameter map"))?;
            Some(build_hfh(&hp).map_err(at("spectrum: Hubbard Hamiltonian"))?)
        }
        Model::Ladder => None,
    };
    let sectors = match &a.sector {
        Some(v) => {
            let (u, d) = parse_sector("[spectrum] sector", v)?;
            vec![SectorBasis::new(n, u, d).map_err(at("[spectrum] sector"))?]
        }
        None => SectorBasis::all(n).map_err(at("spectrum: sectors"))?,
    };
    for s in sectors {
        let stage = format!("spectrum: sector ({}, {})", s.n_up, s.n_down);
        let h = match &hubbard {
            Some(full) => s.project_operator(full),
            None => build_hqs_on(&p, &s),
        }
        .map_err(at(&stage))?;
        for (i, e) in eigenvalues(&h, a.levels, ctx.seed, &stage)?.into_iter().enumerate() {
            t.push(vec![i.into(), e.into(), s.n_up.into(), s.n_down.into()]);
        }
    }
    Ok(Outcome::table(t))
}

enum Observable {
    Occupation(usize),
    Number(Chain),
    Energy,
}

fn parse_observable(name: &str, n: usize) -> CliResult<Observable> {
    match name {
        "N_up" => Ok(Observable::Number(Chain::Up)),
        "N_down" => Ok(Observable::Number(Chain::Down)),
        "energy" => Ok(Observable::Energy),
        _ => {
            let label = name.strip_prefix("n_").ok_or_else(|| {
                CliError::validation(format!(
                    "[evolve] observables: unknown `{name}` (use n_<site><u|d>, N_up, N_down or energy)"
                ))
            })?;
            let idx = parse_qubit(label)?;
            let q = qladder_core::ladder::linearize(idx, n).map_err(at("[evolve] observables"))?;
            Ok(Observable::Occupation(q))
        }
    }
}

pub fn evolve(a: &EvolveArgs, _ctx: &Context) -> CliResult<Outcome> {
    let p = a.ladder.with_defaults(LADDER_DEFAULTS).build("evolve")?;
    let n = p.n();
    let pat = pattern(a.excite.as_ref(), n, "[evolve] excite")?;
    let times = linspace(a.t_max.unwrap_or(10.0), a.steps.unwrap_or(100), "[evolve]")?;
    let names: Vec<String> = match &a.observables {
        Some(v) => v.clone(),
        None => (1..=2 * n)
            .map(|q| delinearize(q, n).map(|i| format!("n_{i}")))
            .collect::<Result<Vec<_>, _>>()
            .map_err(at("[evolve] observables"))?
            .into_iter()
            .chain(["N_up".to_string(), "N_down".to_string(), "energy".to_string()])
            .collect(),
    };
    let obs = names.iter().map(|s| parse_observable(s, n)).collect::<CliResult<Vec<_>>>()?;
    let full = prepare_product_state(&pat, n).map_err(at("[evolve] excite"))?;
    let (states, h, psi0): (Vec<u64>, _, StateVector) = match a.exchange.unwrap_or_default() {
        ExchangeKind::FlipFlop => {
            let (u, d) = pat.counts();
            let basis = SectorBasis::new(n, u, d).map_err(at("evolve: sector"))?;
            let h = build_hqs_on(&p, &basis).map_err(at("evolve: ladder Hamiltonian"))?;
            let psi = basis.project_state(&full).map_err(at("evolve: initial state"))?;
            (basis.states().to_vec(), h, psi)
        }
        ExchangeKind::Xx => {
            let basis = FullBasis::new(n).map_err(at("evolve: register"))?;
            let h = build_hqs_xx(&p).map_err(at("evolve: XX ladder"))?;
            let psi = StateVector::from_amplitudes(full.into_amplitudes(), None);
            ((0..basis.dim() as u64).collect(), h, psi)
        }
    };
    let opts = KrylovOptions {
        tol: a.krylov_tol.unwrap_or(1e-10),
        ..KrylovOptions::default()
    };
    let out = krylov_evolve_with(&h, &psi0, &times, &opts).map_err(at("evolve: propagation"))?;

    let mut t = Table::with_columns(std::iter::once("time".to_string()).chain(names).collect());
    for (time, s) in out.times.iter().zip(&out.states) {
        let weights: Vec<f64> = s.amplitudes().iter().map(Complex64::norm_sqr).collect();
        let occ = |q: usize| -> f64 {
            states
                .iter()
                .zip(&weights)
                .filter(|(b, _)| *b >> (q - 1) & 1 == 1)
                .map(|(_, w)| w)
                .sum()
        };
        let mut row = vec![Cell::Num(*time)];
        for o in &obs {
            let v = match o {
                Observable::Occupation(q) => occ(*q),
                Observable::Number(Chain::Down) => (1..=n).map(occ).sum(),
                Observable::Number(Chain::Up) => (n + 1..=2 * n).map(occ).sum(),
                Observable::Energy => h.expectation(s.amplitudes()).map_err(at("evolve: energy"))?.re,
            };
            row.push(Cell::Num(v));
        }
        t.push(row);
    }
    let mut o = Outcome::table(t);
    o.notes.push(format!(
        "krylov steps {}, rejected {}, largest error estimate {:e}",
        out.steps, out.rejected, out.max_error_estimate
    ));
    Ok(o)
}

pub fn map_params(a: &MapArgs, _ctx: &Context) -> CliResult<Outcome> {
    // a single rung has no bonds and so no hopping; two sites by default
    let n = a.n.unwrap_or(2);
    let mut t = Table::new(&["quantity", "value"]);
    if a.mu.is_some() || a.u.is_some() || a.t.is_some() {
        if a.epsilon.is_some() || a.gx.is_some() || a.gz.is_some() {
            return Err(CliError::validation(
                "[map-params] give either epsilon, gx, gz or mu, u, t, not both",
            ));
        }
        let hp = HubbardParams::new(
            n,
            require(a.mu, "map-params", "mu")?,
            require(a.u, "map-params", "u")?,
            require(a.t, "map-params", "t")?,
        )
        .map_err(at("[map-params]"))?;
        let p = inverse_map_params(&hp).map_err(at("map-params: inverse map"))?;
        let (e, x, z) = p.uniform_values().expect("uniform by construction");
        for (k, v) in [("epsilon", e), ("gx", x), ("gz", z)] {
            t.push(vec![k.into(), v.into()]);
        }
        t.push(vec!["spectral_offset".into(), spectral_offset(&p).map_err(at("map-params"))?.into()]);
    } else {
        let p = qladder_core::LadderParams::uniform(
            n,
            require(a.epsilon, "map-params", "epsilon")?,
            require(a.gx, "map-params", "gx")?,
            require(a.gz, "map-params", "gz")?,
        )
        .map_err(at("[map-params]"))?;
        let hp = ladder_to_hubbard(&p).map_err(at("map-params: map"))?;
        for (k, v) in [("mu", hp.mu), ("U", hp.u), ("t", hp.t)] {
            t.push(vec![k.into(), v.into()]);
        }
        t.push(vec!["spectral_offset".into(), spectral_offset(&p).map_err(at("map-params"))?.into()]);
    }
    Ok(Outcome::table(t))
}

pub fn disorder(a: &DisorderArgs, ctx: &Context) -> CliResult<Outcome> {
    let base = a.ladder.with_defaults((3, 1.0, 0.3, 0.1)).build("disorder")?;
    let n = base.n();
    let spec = DisorderSpec {
        epsilon_spread: a.epsilon_spread.unwrap_or(0.0),
        gx_spread: a.gx_spread.unwrap_or(0.0),
        gz_spread: a.gz_spread.unwrap_or(0.0),
        seed: ctx.seed,
        distribution: match a.distribution.unwrap_or_default() {
            DistributionKind::Uniform => Distribution::Uniform,
            DistributionKind::Gaussian => Distribution::Gaussian,
        },
    };
    let observable = match a.observable.unwrap_or_default() {
        ObservableKind::Spectrum => {
            let sector = match &a.sector {
                Some(v) => parse_sector("[disorder] sector", v)?,
                None => (1, 1),
            };
            DisorderObservable::Spectrum {
                sector,
                levels: a.levels.unwrap_or(4),
            }
        }
        ObservableKind::Dynamics => DisorderObservable::Dynamics {
            pattern: pattern(a.excite.as_ref(), n, "[disorder] excite")?,
            times: linspace(a.t_max.unwrap_or(10.0), a.steps.unwrap_or(10), "[disorder]")?,
        },
    };
    let r = disorder_sweep(&base, &spec, &observable, a.samples.unwrap_or(16)).map_err(at("[disorder]"))?;
    let mut t = Table::new(&["label", "clean", "mean_deviation", "std_deviation"]);
    for i in 0..r.labels.len() {
        t.push(vec![r.labels[i].clone().into(), r.clean[i].into(), r.mean[i].into(), r.std[i].into()]);
    }
    let mut o = Outcome::table(t);
    o.notes.push(format!(
        "{} samples, largest deviation from clean {:e}, largest [H, N_s] {:e}",
        r.samples.len(),
        r.max_abs_deviation,
        r.max_conservation_violation
    ));
    Ok(o)
}
