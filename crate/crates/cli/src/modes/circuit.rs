use std::f64::consts::PI;

use qladder_core::circuit::{
    circuit_to_hubbard, effective_gz_numeric, transmon_splitting, ut_closed_form, ut_curve as canonical_curve,
    ut_curve_for, ut_gamma, ut_turnover, CouplerSpec, DeviceChain, GzOptions, TransmonSpec,
};
use qladder_core::Chain;

use super::{require, Context, Outcome};
use crate::config::{CircuitArgs, Unit, UtArgs};
use crate::error::{at, CliError, CliResult};
use crate::output::{Cell, Table};

/// Rate expressed in the run's energy unit. Rates are plain frequencies,
/// like the energies `E/h`, so the conversion is a ratio of prefixes.
pub fn rate_in_unit(rate: f64, unit: Unit, rate_unit: Option<Unit>) -> CliResult<f64> {
    match (unit.hertz(), rate_unit.map(Unit::hertz)) {
        (_, None) => Ok(rate),
        (None, Some(None)) => Ok(rate),
        (Some(e), Some(Some(r))) => Ok(rate * r / e),
        (None, Some(Some(_))) => Err(CliError::validation(format!(
            "[circuit] rate_unit = {} needs an energy unit (unit = GHz, MHz or kHz)",
            rate_unit.unwrap_or_default().name()
        ))),
        (Some(_), Some(None)) => Err(CliError::validation(format!(
            "[circuit] rate_unit = dimensionless conflicts with unit = {}",
            unit.name()
        ))),
    }
}

pub fn circuit(a: &CircuitArgs, ctx: &Context) -> CliResult<Outcome> {
    let s = "circuit";
    let n = a.n.unwrap_or(2);
    let (e_c, e_j, e_l) = (require(a.e_c, s, "e_c")?, require(a.e_j, s, "e_j")?, require(a.e_l, s, "e_l")?);
    let phi_down = require(a.phi_down, s, "phi_down")?;
    let phi_up = a.phi_up.unwrap_or(phi_down);
    let cx = require(a.cx, s, "cx")?;
    let rate = rate_in_unit(require(a.decoherence_rate, s, "decoherence_rate")?, ctx.unit, a.rate_unit)?;
    let down = TransmonSpec::new(e_c, e_j, e_l, phi_down).map_err(at("[circuit] down-chain transmon"))?;
    let up = TransmonSpec::new(e_c, e_j, e_l, phi_up).map_err(at("[circuit] up-chain transmon"))?;
    let rung = CouplerSpec::new(require(a.k_m, s, "k_m")?, cx).map_err(at("[circuit] rung coupler"))?;
    let device = DeviceChain::uniform(n, down, up, rung, cx).map_err(at("[circuit] device"))?;
    let r = circuit_to_hubbard(&device, rate, a.threshold.unwrap_or(1.0)).map_err(at("circuit: translation"))?;

    let mut t = Table::new(&["quantity", "value"]);
    let mut put = |k: String, v: Cell| t.push(vec![k.into(), v]);
    put("epsilon_down".into(), transmon_splitting(&down).map_err(at("circuit: splitting"))?.into());
    put("epsilon_up".into(), transmon_splitting(&up).map_err(at("circuit: splitting"))?.into());
    for (j, g) in r.ladder.gz().iter().enumerate() {
        put(format!("gz_{}", j + 1), (*g).into());
    }
    for chain in Chain::BOTH {
        for (j, g) in r.ladder.gx(chain).iter().enumerate() {
            put(format!("gx_{chain}_{}", j + 1), (*g).into());
        }
    }
    if let Some(h) = &r.hubbard {
        put("mu".into(), h.mu.into());
        put("U".into(), h.u.into());
        put("t".into(), h.t.into());
    }
    let f = &r.feasibility;
    put("decoherence_rate".into(), f.decoherence_rate.into());
    put("gz_over_rate".into(), f.gz_ratio.into());
    put("gx_over_rate".into(), f.gx_ratio.map_or(Cell::Empty, Cell::Num));
    put("feasible".into(), Cell::Int(f.feasible as i64));
    if a.numeric_gz.unwrap_or(false) {
        let c = effective_gz_numeric(&up, &down, &rung, &GzOptions::default()).map_err(at("circuit: numeric g^z"))?;
        put("gz_numeric".into(), c.numeric.into());
        put("gz_numeric_relative_error".into(), c.relative_error().into());
    }

    let mut o = Outcome::table(t);
    o.notes.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
    o.notes.extend(f.flagged.iter().map(|w| format!("infeasible: {w}")));
    Ok(o)
}

pub fn ut_curve(a: &UtArgs, _ctx: &Context) -> CliResult<Outcome> {
    let points = a.points.unwrap_or(200);
    if points == 0 {
        return Err(CliError::validation("[ut-curve] points must be at least 1"));
    }
    let grid: Vec<f64> = (0..points).map(|i| i as f64 * PI / points as f64).collect();
    let custom = [a.e_c, a.e_j, a.e_l, a.k_m, a.cx].iter().any(Option::is_some);
    let (gamma, curve) = if custom {
        if a.gamma.is_some() {
            return Err(CliError::validation("[ut-curve] gamma follows from the circuit; drop either gamma or the circuit keys"));
        }
        let s = "ut-curve";
        let t = TransmonSpec::new(require(a.e_c, s, "e_c")?, require(a.e_j, s, "e_j")?, require(a.e_l, s, "e_l")?, 0.0)
            .map_err(at("[ut-curve] transmon"))?;
        let c = CouplerSpec::new(require(a.k_m, s, "k_m")?, require(a.cx, s, "cx")?).map_err(at("[ut-curve] coupler"))?;
        let gamma = ut_gamma(&t, &c).map_err(at("ut-curve: gamma"))?;
        (gamma, ut_curve_for(&t, &c, &grid).map_err(at("ut-curve: pipeline"))?)
    } else {
        let gamma = a.gamma.unwrap_or(1.0);
        (gamma, canonical_curve(gamma, &grid).map_err(at("[ut-curve]"))?)
    };
    let mut t = Table::new(&["phi_e", "u_over_t", "closed_form"]);
    for p in &curve {
        t.push(vec![p.phi.into(), p.u_over_t.into(), (gamma * ut_closed_form(p.phi)).into()]);
    }
    let mut o = Outcome::table(t);
    o.notes.push(format!("gamma = {gamma:e}"));
    o.notes.push(match ut_turnover(&curve) {
        Some(phi) => format!("turnover at phi_e = {phi}"),
        None => "no turnover on the grid: U/t increases up to phi_e = pi".to_string(),
    });
    Ok(o)
}
