use std::f64::consts::PI;

use super::transmon::{transmon_splitting, TransmonSpec};
use super::xx::{gx_bond, gx_from_circuit};
use super::zz::{gz_from_circuit, CouplerSpec};
use crate::error::{Error, Result};
use crate::hamiltonians::{map_params, HubbardParams, LadderParams};
use crate::ladder::{check_chain_length, Chain};

/// Two transmon chains with mutual inductances on the rungs and
/// capacitors along the chains.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceChain {
    pub n: usize,
    /// Linear qubit order: down chain sites `1..=n`, then the up chain.
    pub transmons: Vec<TransmonSpec>,
    /// One per rung; only `k_m` is used.
    pub rung_couplers: Vec<CouplerSpec>,
    /// `C^x / C` per bond, down chain bonds first.
    pub chain_couplers: Vec<f64>,
}

impl DeviceChain {
    /// Identical sites; the two chains may sit at different fluxes.
    pub fn uniform(
        n: usize,
        down: TransmonSpec,
        up: TransmonSpec,
        rung: CouplerSpec,
        cx_ratio: f64,
    ) -> Result<Self> {
        check_chain_length(n)?;
        let mut transmons = vec![down; n];
        transmons.extend(std::iter::repeat_n(up, n));
        let d = DeviceChain {
            n,
            transmons,
            rung_couplers: vec![rung; n],
            chain_couplers: vec![cx_ratio; 2 * (n - 1)],
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        check_chain_length(self.n)?;
        let n = self.n;
        for (what, len, want) in [
            ("transmons", self.transmons.len(), 2 * n),
            ("rung_couplers", self.rung_couplers.len(), n),
            ("chain_couplers", self.chain_couplers.len(), 2 * (n - 1)),
        ] {
            if len != want {
                return Err(Error::domain(format!("{what} has {len} entries, expected {want}")));
            }
        }
        for t in &self.transmons {
            t.validate()?;
        }
        for c in &self.rung_couplers {
            c.validate()?;
        }
        if let Some(cx) = self.chain_couplers.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::domain(format!("chain coupler cx_ratio {cx} must be non-negative")));
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w: Vec<String> = Vec::new();
        for (i, t) in self.transmons.iter().enumerate() {
            w.extend(t.warnings().into_iter().map(|m| format!("transmon {}: {m}", i + 1)));
        }
        if let Some(cx) = self.chain_couplers.iter().find(|&&c| c > 0.1) {
            w.push(format!("chain coupler cx_ratio {cx} above 0.1: C^x not small against C"));
        }
        w
    }

    fn transmon(&self, site: usize, chain: Chain) -> &TransmonSpec {
        match chain {
            Chain::Down => &self.transmons[site - 1],
            Chain::Up => &self.transmons[self.n + site - 1],
        }
    }
}

/// Couplings measured against a decoherence rate in the same energy unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub decoherence_rate: f64,
    pub threshold: f64,
    /// Weakest `|g^z| / rate` over the rungs.
    pub gz_ratio: f64,
    /// Weakest `|g^x| / rate` over the bonds; `None` without bonds.
    pub gx_ratio: Option<f64>,
    pub feasible: bool,
    /// Couplings at or below the threshold.
    pub flagged: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitReport {
    pub ladder: LadderParams,
    /// `None` when the device is not uniform.
    pub hubbard: Option<HubbardParams>,
    pub feasibility: Feasibility,
    pub warnings: Vec<String>,
}

/// Translates a device into ladder and Hubbard parameters and checks the
/// couplings against `decoherence_rate`. Couplings must exceed
/// `threshold * decoherence_rate` to count as feasible.
pub fn circuit_to_hubbard(
    d: &DeviceChain,
    decoherence_rate: f64,
    threshold: f64,
) -> Result<CircuitReport> {
    d.validate()?;
    if !(decoherence_rate.is_finite() && decoherence_rate > 0.0) {
        return Err(Error::domain(format!(
            "decoherence rate must be positive, got {decoherence_rate}"
        )));
    }
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(Error::domain(format!("threshold must be non-negative, got {threshold}")));
    }
    let n = d.n;
    let epsilon = d
        .transmons
        .iter()
        .map(transmon_splitting)
        .collect::<Result<Vec<_>>>()?;
    let gz = (1..=n)
        .map(|j| {
            gz_from_circuit(
                d.transmon(j, Chain::Up),
                d.transmon(j, Chain::Down),
                &d.rung_couplers[j - 1],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let bond = |offset: usize, j: usize| -> Result<f64> {
        let (l, r) = (epsilon[offset + j - 1], epsilon[offset + j]);
        let cx = d.chain_couplers[if offset == 0 { j - 1 } else { n - 1 + j - 1 }];
        if l == r {
            gx_from_circuit(l, &CouplerSpec { k_m: 0.5, cx_ratio: cx })
        } else {
            gx_bond(l, r, cx)
        }
    };
    let gx_down = (1..n).map(|j| bond(0, j)).collect::<Result<Vec<_>>>()?;
    let gx_up = (1..n).map(|j| bond(n, j)).collect::<Result<Vec<_>>>()?;

    let mut flagged = Vec::new();
    let limit = threshold * decoherence_rate;
    for (j, g) in gz.iter().enumerate() {
        if g.abs() <= limit {
            flagged.push(format!("g^z on rung {} is {g:e}, not above {limit:e}", j + 1));
        }
    }
    for (chain, list) in [("down", &gx_down), ("up", &gx_up)] {
        for (j, g) in list.iter().enumerate() {
            if g.abs() <= limit {
                flagged.push(format!(
                    "g^x on {chain} bond {}-{} is {g:e}, not above {limit:e}",
                    j + 1,
                    j + 2
                ));
            }
        }
    }
    let weakest = |v: &[f64]| v.iter().map(|g| g.abs()).fold(f64::INFINITY, f64::min);
    let gz_ratio = weakest(&gz) / decoherence_rate;
    let gx_ratio = (n > 1).then(|| weakest(&gx_down).min(weakest(&gx_up)) / decoherence_rate);
    let feasibility = Feasibility {
        decoherence_rate,
        threshold,
        gz_ratio,
        gx_ratio,
        feasible: flagged.is_empty(),
        flagged,
    };
    let ladder = LadderParams::new(n, epsilon, gx_down, gx_up, gz)?;
    let hubbard = map_params(&ladder).ok();
    Ok(CircuitReport {
        ladder,
        hubbard,
        feasibility,
        warnings: d.warnings(),
    })
}

/// `tan^2(phi/2) sqrt(cos(phi/2))`
pub fn ut_closed_form(phi: f64) -> f64 {
    let (s, c) = (0.5 * phi).sin_cos();
    s * s / (c * c) * c.sqrt()
}

/// `gamma = (C / C^x) (M / L) sqrt(8 E_C E_J) / E_L`
pub fn ut_gamma(t: &TransmonSpec, c: &CouplerSpec) -> Result<f64> {
    t.validate()?;
    c.validate()?;
    if c.cx_ratio == 0.0 {
        return Err(Error::domain("cx_ratio must be positive for a finite U/t"));
    }
    Ok(c.k_m / c.cx_ratio * (8.0 * t.e_c * t.e_j).sqrt() / t.e_l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtPoint {
    pub phi: f64,
    pub u_over_t: f64,
}

fn check_grid(phi_grid: &[f64]) -> Result<()> {
    match phi_grid.iter().find(|p| !(p.is_finite() && **p >= 0.0 && **p < PI)) {
        Some(p) => Err(Error::domain(format!("flux phase {p} outside [0, pi)"))),
        None => Ok(()),
    }
}

/// `|U/t|` for two equal-flux chains of the given transmon, built through
/// the splitting, both coupling formulas and the parameter map.
pub fn ut_curve_for(t: &TransmonSpec, c: &CouplerSpec, phi_grid: &[f64]) -> Result<Vec<UtPoint>> {
    check_grid(phi_grid)?;
    ut_gamma(t, c)?;
    phi_grid
        .iter()
        .map(|&phi| {
            let tp = TransmonSpec { phi_e: phi, ..*t };
            let eps = transmon_splitting(&tp)?;
            let gz = gz_from_circuit(&tp, &tp, c)?;
            let gx = gx_from_circuit(eps, c)?;
            let h = map_params(&LadderParams::uniform(2, eps, gx, gz)?)?;
            Ok(UtPoint {
                phi,
                u_over_t: (h.u / h.t).abs(),
            })
        })
        .collect()
}

/// Universal curve at scale `gamma`, evaluated on a circuit with
/// `sqrt(8 E_C E_J) = 1`, `k_M = 1/2`, `C^x/C = 0.04` and `E_L` chosen to give `gamma`.
pub fn ut_curve(gamma: f64, phi_grid: &[f64]) -> Result<Vec<UtPoint>> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::domain(format!("gamma must be positive, got {gamma}")));
    }
    let c = CouplerSpec::new(0.5, 0.04)?;
    let t = TransmonSpec::new(0.125, 1.0, c.k_m / c.cx_ratio / gamma, 0.0)?;
    ut_curve_for(&t, &c, phi_grid)
}

/// First grid phase after which the curve stops increasing; `None` if it
/// increases over the whole grid.
pub fn ut_turnover(points: &[UtPoint]) -> Option<f64> {
    points
        .windows(2)
        .find(|w| w[1].u_over_t <= w[0].u_over_t)
        .map(|w| w[0].phi)
}

/// User bounds on the usable part of the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessibleWindow {
    /// Minimum `|g^z|` in units of the qubit linewidth.
    pub min_gz_over_linewidth: f64,
    pub max_phi: f64,
}

impl AccessibleWindow {
    pub fn contains(&self, phi: f64, gz: f64, linewidth: f64) -> bool {
        phi <= self.max_phi && gz.abs() >= self.min_gz_over_linewidth * linewidth
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_anchor_points() {
        let pts = ut_curve(1.0, &[0.0, PI / 2.0]).unwrap();
        assert_eq!(pts[0].u_over_t, 0.0);
        assert!((pts[1].u_over_t - 2f64.powf(-0.25)).abs() < 1e-12);
        assert!(ut_curve(1.0, &[PI]).unwrap_err().is_validation());
        assert!(ut_curve(0.0, &[1.0]).is_err());
    }

    #[test]
    fn curve_scales_with_gamma() {
        let grid: Vec<f64> = (1..50).map(|i| i as f64 * PI / 50.0).collect();
        for gamma in [0.3, 7.0] {
            for p in ut_curve(gamma, &grid).unwrap() {
                let want = gamma * ut_closed_form(p.phi);
                assert!((p.u_over_t - want).abs() <= 1e-12 * want.max(1.0));
            }
        }
    }

    #[test]
    fn turnover_scan() {
        let grid: Vec<f64> = (0..200).map(|i| i as f64 * PI / 200.0).collect();
        assert_eq!(ut_turnover(&ut_curve(1.0, &grid).unwrap()), None);
        let bumpy = [
            UtPoint { phi: 0.1, u_over_t: 1.0 },
            UtPoint { phi: 0.2, u_over_t: 2.0 },
            UtPoint { phi: 0.3, u_over_t: 1.5 },
        ];
        assert_eq!(ut_turnover(&bumpy), Some(0.2));
    }

    fn ghz_device(cx: f64, k: f64) -> DeviceChain {
        let t = TransmonSpec::new(0.25, 12.5 / (PI / 4.0).cos(), 50.0, PI / 2.0).unwrap();
        DeviceChain::uniform(3, t, t, CouplerSpec::new(k, cx).unwrap(), cx).unwrap()
    }

    #[test]
    fn report_round_trip() {
        let d = ghz_device(0.008, 0.32);
        let r = circuit_to_hubbard(&d, 1e-4, 1.0).unwrap();
        let h = r.hubbard.unwrap();
        assert_eq!(map_params(&r.ladder).unwrap(), h);
        let (eps, gx, gz) = r.ladder.uniform_values().unwrap();
        assert!((eps - 5.0).abs() < 1e-12);
        assert!((gx - 0.01).abs() < 1e-15);
        assert!((gz + 0.01).abs() < 1e-15);
        assert!((r.feasibility.gz_ratio - 100.0).abs() < 1e-9);
        assert!(r.feasibility.feasible);
    }

    #[test]
    fn weak_coupling_flagged() {
        let d = ghz_device(0.008, 0.32);
        let r = circuit_to_hubbard(&d, 0.02, 1.0).unwrap();
        assert!(!r.feasibility.feasible);
        assert_eq!(r.feasibility.flagged.len(), 3 + 4);
    }

    #[test]
    fn nonuniform_device_has_no_hubbard_map() {
        let mut d = ghz_device(0.008, 0.32);
        d.transmons[0].phi_e = 1.0;
        let r = circuit_to_hubbard(&d, 1e-4, 1.0).unwrap();
        assert!(r.hubbard.is_none());
        assert!(r.ladder.gx(Chain::Down)[0] != r.ladder.gx(Chain::Down)[1]);
    }

    #[test]
    fn opposite_fluxes_flip_interaction() {
        let t = TransmonSpec::new(0.25, 12.5, 1250.0, 1.0).unwrap();
        let tm = TransmonSpec { phi_e: -1.0, ..t };
        let c = CouplerSpec::new(0.5, 0.01).unwrap();
        let a = circuit_to_hubbard(&DeviceChain::uniform(2, t, t, c, 0.01).unwrap(), 1e-6, 1.0).unwrap();
        let b = circuit_to_hubbard(&DeviceChain::uniform(2, t, tm, c, 0.01).unwrap(), 1e-6, 1.0).unwrap();
        assert_eq!(a.hubbard.unwrap().u, -b.hubbard.unwrap().u);
    }
}
