//! `qladder`: command-line front end of qladder-core.

mod config;
mod error;
mod modes;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use config::{
    merge, CircuitArgs, DisorderArgs, EvolveArgs, FileConfig, MapArgs, Mode, SpectrumArgs, Unit, UtArgs,
    VerifyArgs,
};
use error::{CliError, CliResult};
use modes::{Context, Outcome};
use output::{Format, Header};

/// Directory for artifacts when no output path is given.
const OUTPUT_DIR_VAR: &str = "QLADDER_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "qladder", version, about = "Qubit-ladder simulator of the spin-full 1D Fermi-Hubbard model")]
struct Cli {
    /// TOML config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact path; stdout when neither this, the config nor QLADDER_OUTPUT_DIR names one
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Energy unit of the run, as a frequency E/h
    #[arg(long, global = true, value_enum)]
    unit: Option<Unit>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the mode named in the config file
    Run,
    /// Eigenvalues per symmetry sector
    Spectrum(SpectrumArgs),
    /// Time evolution of a product state
    Evolve(EvolveArgs),
    /// Ladder couplings to Hubbard parameters and back
    MapParams(MapArgs),
    /// Circuit parameters to ladder and Hubbard parameters, with a coherence budget
    Circuit(CircuitArgs),
    /// U/t against external flux
    UtCurve(UtArgs),
    /// Run the invariant suite and print a pass/fail table
    Verify(VerifyArgs),
    /// Seeded disorder sweep
    Disorder(DisorderArgs),
}

impl Command {
    fn mode(&self) -> Option<Mode> {
        Some(match self {
            Command::Run => return None,
            Command::Spectrum(_) => Mode::Spectrum,
            Command::Evolve(_) => Mode::Evolve,
            Command::MapParams(_) => Mode::MapParams,
            Command::Circuit(_) => Mode::Circuit,
            Command::UtCurve(_) => Mode::UtCurve,
            Command::Verify(_) => Mode::Verify,
            Command::Disorder(_) => Mode::Disorder,
        })
    }
}

fn apply<T: Serialize + DeserializeOwned + Default>(
    flags: Option<&T>,
    file: &FileConfig,
    mode: Mode,
    ctx: &Context,
    f: fn(&T, &Context) -> CliResult<Outcome>,
) -> CliResult<(Outcome, serde_json::Value)> {
    let args: T = merge(file.section(mode), flags.unwrap_or(&T::default()), mode.name())?;
    let params = serde_json::to_value(&args).map_err(|e| CliError::validation(format!("[{}] {e}", mode.name())))?;
    Ok((f(&args, ctx)?, params))
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mode = match (cli.command.mode(), file.mode) {
        (None, Some(m)) => m,
        (None, None) => return Err(CliError::validation("run needs a config file that sets `mode`")),
        (Some(m), Some(fm)) if m != fm => {
            return Err(CliError::validation(format!(
                "config sets mode = {} but the subcommand is {}",
                fm.name(),
                m.name()
            )))
        }
        (Some(m), _) => m,
    };
    let ctx = Context {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        unit: cli.unit.or(file.unit).unwrap_or_default(),
        tolerances: file.tolerances()?,
    };

    let (outcome, params) = match &cli.command {
        Command::Spectrum(a) => apply(Some(a), &file, mode, &ctx, modes::spectrum),
        Command::Evolve(a) => apply(Some(a), &file, mode, &ctx, modes::evolve),
        Command::MapParams(a) => apply(Some(a), &file, mode, &ctx, modes::map_params),
        Command::Circuit(a) => apply(Some(a), &file, mode, &ctx, modes::circuit),
        Command::UtCurve(a) => apply(Some(a), &file, mode, &ctx, modes::ut_curve),
        Command::Verify(a) => apply(Some(a), &file, mode, &ctx, modes::verify),
        Command::Disorder(a) => apply(Some(a), &file, mode, &ctx, modes::disorder),
        Command::Run => match mode {
            Mode::Spectrum => apply::<SpectrumArgs>(None, &file, mode, &ctx, modes::spectrum),
            Mode::Evolve => apply::<EvolveArgs>(None, &file, mode, &ctx, modes::evolve),
            Mode::MapParams => apply::<MapArgs>(None, &file, mode, &ctx, modes::map_params),
            Mode::Circuit => apply::<CircuitArgs>(None, &file, mode, &ctx, modes::circuit),
            Mode::UtCurve => apply::<UtArgs>(None, &file, mode, &ctx, modes::ut_curve),
            Mode::Verify => apply::<VerifyArgs>(None, &file, mode, &ctx, modes::verify),
            Mode::Disorder => apply::<DisorderArgs>(None, &file, mode, &ctx, modes::disorder),
        },
    }?;

    let out_section = file.output.clone().unwrap_or_default();
    let mut path = cli.output.clone().or(out_section.path);
    let format = cli
        .format
        .or(out_section.format)
        .or_else(|| {
            path.as_ref()
                .filter(|p| p.extension().is_some_and(|e| e == "json"))
                .map(|_| Format::Json)
        })
        .unwrap_or_default();
    if path.is_none() {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_VAR).filter(|d| !d.is_empty()) {
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            path = Some(PathBuf::from(dir).join(format!("{}.{ext}", mode.name())));
        }
    }

    let mut canonical = serde_json::json!({
        "mode": mode.name(),
        "seed": ctx.seed,
        "unit": ctx.unit.name(),
        "format": format,
        "params": params,
    });
    if mode == Mode::Verify {
        canonical["tolerances"] = serde_json::to_value(&ctx.tolerances).expect("plain numbers");
    }
    let header = Header {
        mode: mode.name().to_string(),
        seed: ctx.seed,
        unit: ctx.unit.name().to_string(),
        config_hash: output::config_hash(&canonical),
    };
    let text = output::render(format, &header, &outcome.table);

    if let Some(summary) = &outcome.summary {
        print!("{summary}");
    }
    match &path {
        Some(p) => output::write_file(p, &text)?,
        None if outcome.summary.is_none() => print!("{text}"),
        None => {}
    }
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    match outcome.failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qladder: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
