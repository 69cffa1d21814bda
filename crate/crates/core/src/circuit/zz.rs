use nalgebra::{DMatrix, SymmetricEigen};

use super::transmon::{transmon_splitting, TransmonSpec};
use crate::error::{Error, Result};

/// Coupling element between two transmons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerSpec {
    /// Mutual-inductance ratio `M / L`.
    pub k_m: f64,
    /// Capacitance ratio `C^x / C`.
    pub cx_ratio: f64,
}

impl CouplerSpec {
    pub fn new(k_m: f64, cx_ratio: f64) -> Result<Self> {
        let c = CouplerSpec { k_m, cx_ratio };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_m.is_finite() && self.k_m > 0.0 && self.k_m < 1.0) {
            return Err(Error::domain(format!("k_m must lie in (0, 1), got {}", self.k_m)));
        }
        if !(self.cx_ratio.is_finite() && self.cx_ratio >= 0.0) {
            return Err(Error::domain(format!(
                "cx_ratio must be non-negative, got {}",
                self.cx_ratio
            )));
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.cx_ratio > 0.1 {
            vec![format!("cx_ratio = {} above 0.1: C^x not small against C", self.cx_ratio)]
        } else {
            Vec::new()
        }
    }

    pub(crate) fn xi_plus(&self) -> f64 {
        2.0 / (1.0 + self.k_m)
    }

    pub(crate) fn xi_minus(&self) -> f64 {
        4.0 / (1.0 - self.k_m * self.k_m) - 2.0 / (1.0 + self.k_m)
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// `g^z = -(k_M/16) tan(phi_1e/2) tan(phi_2e/2) eps_1 eps_2 / E_L`
pub fn gz_from_circuit(t1: &TransmonSpec, t2: &TransmonSpec, c: &CouplerSpec) -> Result<f64> {
    c.validate()?;
    let e1 = transmon_splitting(t1)?;
    let e2 = transmon_splitting(t2)?;
    if !same(t1.e_l, t2.e_l) {
        return Err(Error::domain(format!(
            "coupled transmons need equal e_l, got {} and {}",
            t1.e_l, t2.e_l
        )));
    }
    let tan1 = t1.half_sin() / t1.half_cos();
    let tan2 = t2.half_sin() / t2.half_cos();
    Ok(-(c.k_m / 16.0) * tan1 * tan2 * e1 * e2 / t1.e_l)
}

/// Treatment of the flux-dependent cosines in the two-mode Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GzModel {
    /// Linear coupling `g sigma^z (a^dag + a)` only.
    #[default]
    Linear,
    /// `-2 E_J cos(phi) cos(phi_e/2 + phi_+ +- phi_-)` kept to all orders in `phi_+-`,
    /// with `cos(phi) = alpha sigma^z + beta`. Differs from the displacement
    /// result at relative order `E_J / E_L`.
    FullCosine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GzOptions {
    pub model: GzModel,
    /// Oscillator levels per mode.
    pub truncation: usize,
    /// Allowed change of the result when the truncation is doubled, relative to
    /// the analytic value, on top of a round-off floor of `1e-12 eps`.
    pub convergence_tol: f64,
    /// Required `min(omega_+-) / max(eps)`.
    pub min_frequency_ratio: f64,
}

impl Default for GzOptions {
    fn default() -> Self {
        GzOptions {
            model: GzModel::Linear,
            truncation: 8,
            convergence_tol: 1e-6,
            min_frequency_ratio: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GzComparison {
    pub numeric: f64,
    /// `-2 (g_1+ g_2+ / omega_+ - g_1- g_2- / omega_-)`
    pub analytic: f64,
    pub closed_form: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub epsilon: [f64; 2],
    pub g_plus: [f64; 2],
    pub g_minus: [f64; 2],
    pub truncation: usize,
    /// Change of `numeric` under doubling of the truncation.
    pub truncation_delta: f64,
}

impl GzComparison {
    pub fn relative_error(&self) -> f64 {
        (self.numeric - self.analytic).abs() / self.analytic.abs()
    }
}

struct TwoMode {
    omega: [f64; 2],
    /// zero-point phase of each mode
    x0: [f64; 2],
    alpha: [f64; 2],
    beta: [f64; 2],
    e_j: [f64; 2],
    half_phase: [f64; 2],
    g_plus: [f64; 2],
    g_minus: [f64; 2],
}

/// Projection of `cos(phi)` on the two transmon levels.
fn cosine_projection(t: &TransmonSpec) -> (f64, f64) {
    let r = (2.0 * t.e_c / (t.e_j * t.half_cos())).sqrt();
    (-0.25 * r, 1.0 - 0.5 * r)
}

/// `(a^dag + a)` on `dim` levels.
fn position(dim: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(dim, dim);
    for k in 0..dim - 1 {
        let s = ((k + 1) as f64).sqrt();
        x[(k + 1, k)] = s;
        x[(k, k + 1)] = s;
    }
    x
}

/// `cos(x0 X)` and `sin(x0 X)` evaluated in an enlarged basis and cut to `dim` levels.
fn trig_of_position(x0: f64, dim: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let big = 2 * dim + 24;
    let eig = SymmetricEigen::new(position(big) * x0);
    let v = &eig.eigenvectors;
    let f = |g: fn(f64) -> f64| {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(g));
        (v * d * v.transpose()).view((0, 0), (dim, dim)).into_owned()
    };
    (f(f64::cos), f(f64::sin))
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

impl TwoMode {
    fn new(t1: &TransmonSpec, t2: &TransmonSpec, c: &CouplerSpec) -> Self {
        let xi = [c.xi_plus(), c.xi_minus()];
        let e_c = t1.e_c;
        let e_l = t1.e_l;
        let omega = xi.map(|x| (x * 2.0 * e_c * e_l).sqrt());
        let x0 = xi.map(|x| (2.0 * e_c / (x * e_l)).powf(0.25) / 2f64.sqrt());
        let (a1, b1) = cosine_projection(t1);
        let (a2, b2) = cosine_projection(t2);
        let alpha = [a1, a2];
        let s = [t1.half_sin(), t2.half_sin()];
        let e_j = [t1.e_j, t2.e_j];
        let g = |i: usize, mode: usize| 2.0 * e_j[i] * alpha[i] * s[i] * x0[mode];
        TwoMode {
            omega,
            x0,
            alpha,
            beta: [b1, b2],
            e_j,
            half_phase: [0.5 * t1.phi_e, 0.5 * t2.phi_e],
            g_plus: [g(0, 0), g(1, 0)],
            g_minus: [g(0, 1), g(1, 1)],
        }
    }

    fn analytic(&self) -> f64 {
        -2.0 * (self.g_plus[0] * self.g_plus[1] / self.omega[0]
            - self.g_minus[0] * self.g_minus[1] / self.omega[1])
    }

    /// Oscillator Hamiltonian for each qubit configuration, indexed by `(s1 > 0, s2 > 0)`.
    fn blocks(&self, model: GzModel, dim: usize) -> Vec<(f64, f64, DMatrix<f64>)> {
        let id = DMatrix::<f64>::identity(dim, dim);
        let num = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |k, _| k as f64));
        let free = kron(&num, &id) * self.omega[0] + kron(&id, &num) * self.omega[1];
        let configs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
        match model {
            GzModel::Linear => {
                let xp = kron(&position(dim), &id);
                let xm = kron(&id, &position(dim));
                configs
                    .iter()
                    .map(|&(s1, s2)| {
                        let h = &free
                            + &xp * (self.g_plus[0] * s1 + self.g_plus[1] * s2)
                            + &xm * (self.g_minus[0] * s1 - self.g_minus[1] * s2);
                        (s1, s2, h)
                    })
                    .collect()
            }
            GzModel::FullCosine => {
                let (cp, sp) = trig_of_position(self.x0[0], dim);
                let (cm, sm) = trig_of_position(self.x0[1], dim);
                let cc = kron(&cp, &cm);
                let ss = kron(&sp, &sm);
                let sc = kron(&sp, &cm);
                let cs = kron(&cp, &sm);
                let identity = DMatrix::<f64>::identity(dim * dim, dim * dim);
                // cos(theta + A + sign B) - cos(theta)
                let shifted = |i: usize, sign: f64| {
                    let (st, ct) = self.half_phase[i].sin_cos();
                    (&cc - &ss * sign) * ct - (&sc + &cs * sign) * st - &identity * ct
                };
                let q1 = shifted(0, 1.0);
                let q2 = shifted(1, -1.0);
                configs
                    .iter()
                    .map(|&(s1, s2)| {
                        let c1 = -2.0 * self.e_j[0] * (self.alpha[0] * s1 + self.beta[0]);
                        let c2 = -2.0 * self.e_j[1] * (self.alpha[1] * s2 + self.beta[1]);
                        (s1, s2, &free + &q1 * c1 + &q2 * c2)
                    })
                    .collect()
            }
        }
    }

    /// `(E_uu + E_dd - E_ud - E_du) / 4` from the four block ground states.
    fn numeric(&self, model: GzModel, dim: usize, eps: [f64; 2]) -> Result<f64> {
        let mut ground = Vec::with_capacity(4);
        let mut lowest_excited = f64::INFINITY;
        for (s1, s2, h) in self.blocks(model, dim) {
            let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            let qubit = 0.5 * (eps[0] * s1 + eps[1] * s2);
            ground.push((s1 * s2, ev[0] + qubit));
            lowest_excited = lowest_excited.min(ev[1] + qubit);
        }
        let top = ground.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
        if lowest_excited <= top {
            return Err(Error::Diagnostic(
                "an oscillator excitation lies among the four qubit levels; cannot identify dressed states"
                    .into(),
            ));
        }
        Ok(ground.iter().map(|(sign, e)| sign * e).sum::<f64>() / 4.0)
    }
}

/// Extracts `g^z` by diagonalizing two transmon qubits coupled through the `+-`
/// loop oscillators, and compares with the displacement result and the closed form.
///
/// Asymmetric junctions are rejected: both transmons need equal `e_c`, `e_j`, `e_l`.
pub fn effective_gz_numeric(
    t1: &TransmonSpec,
    t2: &TransmonSpec,
    c: &CouplerSpec,
    opts: &GzOptions,
) -> Result<GzComparison> {
    let closed_form = gz_from_circuit(t1, t2, c)?;
    if !same(t1.e_c, t2.e_c) || !same(t1.e_j, t2.e_j) {
        return Err(Error::domain("coupled transmons need equal e_c and e_j"));
    }
    if opts.truncation < 2 {
        return Err(Error::domain("oscillator truncation must be at least 2"));
    }
    let eps = [transmon_splitting(t1)?, transmon_splitting(t2)?];
    let modes = TwoMode::new(t1, t2, c);
    let omega_min = modes.omega[0].min(modes.omega[1]);
    let eps_max = eps[0].max(eps[1]);
    if omega_min < opts.min_frequency_ratio * eps_max {
        return Err(Error::domain(format!(
            "oscillator frequency {omega_min} not well above qubit splitting {eps_max}"
        )));
    }
    let analytic = modes.analytic();
    let numeric = modes.numeric(opts.model, opts.truncation, eps)?;
    let refined = modes.numeric(opts.model, 2 * opts.truncation, eps)?;
    let delta = (refined - numeric).abs();
    if delta > opts.convergence_tol * analytic.abs() + 1e-12 * eps_max {
        return Err(Error::Accuracy(format!(
            "g^z changes by {delta:e} when the oscillator truncation doubles from {}",
            opts.truncation
        )));
    }
    Ok(GzComparison {
        numeric,
        analytic,
        closed_form,
        omega_plus: modes.omega[0],
        omega_minus: modes.omega[1],
        epsilon: eps,
        g_plus: modes.g_plus,
        g_minus: modes.g_minus,
        truncation: opts.truncation,
        truncation_delta: delta,
    })
}
