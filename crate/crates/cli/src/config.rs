use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use qladder_core::{Chain, LadderIndex, LadderParams};

use crate::error::{at, CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Spectrum,
    Evolve,
    MapParams,
    Circuit,
    UtCurve,
    Verify,
    Disorder,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Spectrum => "spectrum",
            Mode::Evolve => "evolve",
            Mode::MapParams => "map-params",
            Mode::Circuit => "circuit",
            Mode::UtCurve => "ut-curve",
            Mode::Verify => "verify",
            Mode::Disorder => "disorder",
        }
    }
}

/// Energy unit of a run. Energies are quoted as frequencies `E/h`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Unit {
    #[default]
    #[serde(rename = "dimensionless")]
    #[value(name = "dimensionless")]
    Dimensionless,
    #[serde(rename = "GHz")]
    #[value(name = "GHz")]
    Ghz,
    #[serde(rename = "MHz")]
    #[value(name = "MHz")]
    Mhz,
    #[serde(rename = "kHz")]
    #[value(name = "kHz")]
    Khz,
}

impl Unit {
    pub fn name(self) -> &'static str {
        match self {
            Unit::Dimensionless => "dimensionless",
            Unit::Ghz => "GHz",
            Unit::Mhz => "MHz",
            Unit::Khz => "kHz",
        }
    }

    /// Hertz per unit; `None` when dimensionless.
    pub fn hertz(self) -> Option<f64> {
        match self {
            Unit::Dimensionless => None,
            Unit::Ghz => Some(1e9),
            Unit::Mhz => Some(1e6),
            Unit::Khz => Some(1e3),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExchangeKind {
    #[default]
    FlipFlop,
    Xx,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    #[default]
    Ladder,
    Hubbard,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionKind {
    #[default]
    Uniform,
    Gaussian,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableKind {
    #[default]
    Spectrum,
    Dynamics,
}

/// Ladder parameters. Lists override the uniform scalars entry by entry.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderArgs {
    /// Sites per chain
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Qubit splitting on every site
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Flip-flop coupling along both chains
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gx: Option<f64>,
    /// ZZ coupling on every rung
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gz: Option<f64>,
    /// 2n splittings, down chain first
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    /// n-1 couplings of the down chain
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gx_down: Option<Vec<f64>>,
    /// n-1 couplings of the up chain
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gx_up: Option<Vec<f64>>,
    /// n rung couplings
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gz_rungs: Option<Vec<f64>>,
}

impl LadderArgs {
    /// Fills unset scalars from `defaults = (n, epsilon, gx, gz)`.
    pub fn with_defaults(&self, defaults: (usize, f64, f64, f64)) -> LadderArgs {
        let n = self.n.or_else(|| self.epsilons.as_ref().map(|e| e.len() / 2)).or_else(|| self.gz_rungs.as_ref().map(Vec::len));
        LadderArgs {
            n: Some(n.unwrap_or(defaults.0)),
            epsilon: Some(self.epsilon.unwrap_or(defaults.1)),
            gx: Some(self.gx.unwrap_or(defaults.2)),
            gz: Some(self.gz.unwrap_or(defaults.3)),
            ..self.clone()
        }
    }

    /// Needs [`LadderArgs::with_defaults`] first.
    pub fn build(&self, section: &str) -> CliResult<LadderParams> {
        let n = self.n.unwrap_or(0);
        let (e, x, z) = (self.epsilon.unwrap_or(0.0), self.gx.unwrap_or(0.0), self.gz.unwrap_or(0.0));
        let bonds = n.saturating_sub(1);
        let list = |key: &str, v: &Option<Vec<f64>>, fill: f64, len: usize| -> CliResult<Vec<f64>> {
            match v {
                Some(v) if v.len() != len => Err(CliError::validation(format!(
                    "[{section}.ladder] {key} has {} entries, expected {len} for n = {n}",
                    v.len()
                ))),
                Some(v) => Ok(v.clone()),
                None => Ok(vec![fill; len]),
            }
        };
        let eps = list("epsilons", &self.epsilons, e, 2 * n)?;
        let down = list("gx_down", &self.gx_down, x, bonds)?;
        let up = list("gx_up", &self.gx_up, x, bonds)?;
        let gz = list("gz_rungs", &self.gz_rungs, z, n)?;
        LadderParams::new(n, eps, down, up, gz).map_err(at(format!("[{section}.ladder]")))
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(default)]
    pub ladder: LadderArgs,
    /// Exchange term of the ladder Hamiltonian
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exchange: Option<ExchangeKind>,
    /// Diagonalize the ladder or the mapped Hubbard Hamiltonian
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    /// Restrict to one sector: N_up,N_down
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<Vec<usize>>,
    /// Lowest levels per sector (all by default when dense)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(default)]
    pub ladder: LadderArgs,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exchange: Option<ExchangeKind>,
    /// Initially excited qubits, e.g. 1d,2u
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excite: Option<Vec<String>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Number of time steps after t = 0
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Columns: n_<site><u|d>, N_up, N_down, energy
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observables: Option<Vec<String>>,
    /// Local error tolerance of the Krylov propagator
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub krylov_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gx: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gz: Option<f64>,
    /// Hubbard chemical potential (inverse map)
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Hubbard interaction (inverse map)
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    /// Hubbard hopping (inverse map)
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Charging energy
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_c: Option<f64>,
    /// Josephson energy of one junction
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_j: Option<f64>,
    /// Inductive energy of the loop
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_l: Option<f64>,
    /// External flux of the down chain, in units of the flux quantum times 2 pi
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_down: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_up: Option<f64>,
    /// Mutual inductance ratio M/L of the rung couplers
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_m: Option<f64>,
    /// Coupling capacitance ratio C^x/C along the chains
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cx: Option<f64>,
    /// Qubit decoherence rate
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoherence_rate: Option<f64>,
    /// Unit of the decoherence rate; the energy unit by default
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_unit: Option<Unit>,
    /// Couplings must exceed threshold times the rate
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Also diagonalize the oscillator model for the first rung
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_gz: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtArgs {
    /// Prefactor of the universal curve
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Grid points on [0, pi)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Circuit to evaluate instead of the canonical one (needs e_j, e_l, k_m, cx too)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_c: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_j: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_l: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_m: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cx: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gx: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gz: Option<f64>,
    /// Extra random parameter triples for the equivalence check
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
    /// Bond switched off in the partition check
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_bond: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderArgs {
    #[command(flatten)]
    #[serde(default)]
    pub ladder: LadderArgs,
    /// Relative spread of the splittings
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_spread: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gx_spread: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gz_spread: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionKind>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableKind>,
    /// Sector of the spectrum observable: N_up,N_down
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Initially excited qubits of the dynamics observable
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excite: Option<Vec<String>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

/// Pass criteria of `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub equivalence: f64,
    pub algebra: f64,
    pub commutator: f64,
    pub swap: f64,
    pub drift: f64,
    pub tight_binding_spectrum: f64,
    pub tight_binding_dynamics: f64,
    pub leakage: f64,
    pub block: f64,
    pub krylov: f64,
    pub norm: f64,
    pub energy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equivalence: 1e-10,
            algebra: 1e-12,
            commutator: 1e-12,
            swap: 1e-12,
            drift: 1e-8,
            tight_binding_spectrum: 1e-10,
            tight_binding_dynamics: 1e-7,
            leakage: 1e-9,
            block: 1e-9,
            krylov: 1e-8,
            norm: 1e-8,
            energy: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Contents of a config file. Mode sections stay raw until merged with flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub unit: Option<Unit>,
    pub output: Option<OutputSection>,
    pub tolerances: Option<toml::Table>,
    pub spectrum: Option<toml::Table>,
    pub evolve: Option<toml::Table>,
    #[serde(rename = "map-params")]
    pub map_params: Option<toml::Table>,
    pub circuit: Option<toml::Table>,
    #[serde(rename = "ut-curve")]
    pub ut_curve: Option<toml::Table>,
    pub verify: Option<toml::Table>,
    pub disorder: Option<toml::Table>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("config {}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::validation(e.message().to_string()))
    }

    pub fn section(&self, mode: Mode) -> Option<&toml::Table> {
        match mode {
            Mode::Spectrum => self.spectrum.as_ref(),
            Mode::Evolve => self.evolve.as_ref(),
            Mode::MapParams => self.map_params.as_ref(),
            Mode::Circuit => self.circuit.as_ref(),
            Mode::UtCurve => self.ut_curve.as_ref(),
            Mode::Verify => self.verify.as_ref(),
            Mode::Disorder => self.disorder.as_ref(),
        }
    }

    pub fn tolerances(&self) -> CliResult<Tolerances> {
        let table = self.tolerances.clone().unwrap_or_default();
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::validation(format!("[tolerances] {}", e.message())))
    }
}

fn deep_merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => deep_merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// File section overridden key by key with the flags that were given.
pub fn merge<T: Serialize + DeserializeOwned>(file: Option<&toml::Table>, flags: &T, section: &str) -> CliResult<T> {
    let mut table = file.cloned().unwrap_or_default();
    let over = toml::Table::try_from(flags)
        .map_err(|e| CliError::validation(format!("[{section}] flags: {e}")))?;
    deep_merge(&mut table, over);
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::validation(format!("[{section}] {}", e.message())))
}

/// Parses qubit labels such as `3u` or `1d`.
pub fn parse_qubit(label: &str) -> CliResult<LadderIndex> {
    let bad = || CliError::validation(format!("qubit label `{label}` is not of the form <site><u|d>"));
    let label = label.trim();
    let (site, chain) = label.split_at(label.len().checked_sub(1).ok_or_else(bad)?);
    let chain = match chain {
        "u" => Chain::Up,
        "d" => Chain::Down,
        _ => return Err(bad()),
    };
    let site: usize = site.parse().map_err(|_| bad())?;
    Ok(LadderIndex::new(site, chain))
}

pub fn parse_sector(key: &str, v: &[usize]) -> CliResult<(usize, usize)> {
    match v {
        [u, d] => Ok((*u, *d)),
        _ => Err(CliError::validation(format!("{key} needs two entries N_up,N_down, got {}", v.len()))),
    }
}
