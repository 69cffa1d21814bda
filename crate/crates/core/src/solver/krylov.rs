//! Krylov (Lanczos) propagation of `exp(-i H t) psi`.
//!
//! Each step builds an orthonormal Krylov basis from the current vector,
//! exponentiates the small tridiagonal projection exactly, and accepts the
//! step when the estimate `beta_0 * beta_m * |e_m^T exp(-i tau T) e_1|`
//! is below the tolerance. Rejected steps are retried with half the step.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::EvolutionResult;
use crate::error::{Error, Result};
use crate::sparse::SparseOperator;
use crate::state::{dot, norm, StateVector};

#[derive(Debug, Clone)]
pub struct KrylovOptions {
    pub krylov_dim: usize,
    /// Local error tolerance per accepted step.
    pub tol: f64,
    pub max_steps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions {
            krylov_dim: 30,
            tol: 1e-9,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Default)]
struct Stats {
    steps: usize,
    rejected: usize,
    smallest_step: f64,
    max_error: f64,
}

struct KrylovBasis {
    vectors: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// Norm of the residual after the last vector; zero on an invariant subspace.
    beta_last: f64,
}

fn build_basis(h: &SparseOperator, v: &[Complex64], m: usize) -> Result<KrylovBasis> {
    let nv = norm(v);
    let mut vectors = vec![v.iter().map(|x| x / nv).collect::<Vec<_>>()];
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m);
    let invariant = 1e-14 * h.max_abs().max(1e-300);
    loop {
        let j = vectors.len() - 1;
        let mut w = h.matvec(&vectors[j])?;
        alpha.push(dot(&vectors[j], &w).re);
        for _ in 0..2 {
            for b in &vectors {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        if vectors.len() == m || b <= invariant {
            let beta_last = if b <= invariant { 0.0 } else { b };
            return Ok(KrylovBasis {
                vectors,
                alpha,
                beta,
                beta_last,
            });
        }
        beta.push(b);
        vectors.push(w.into_iter().map(|x| x / b).collect());
    }
}

struct SmallExp {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl SmallExp {
    fn new(basis: &KrylovBasis) -> Self {
        let m = basis.alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = basis.alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = basis.beta[i];
                t[(i + 1, i)] = basis.beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        SmallExp {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    /// `exp(-i tau T) e_1`
    fn apply(&self, tau: f64) -> Vec<Complex64> {
        let m = self.values.len();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..m {
            let phase = Complex64::from_polar(self.vectors[(0, k)], -tau * self.values[k]);
            for (r, o) in out.iter_mut().enumerate() {
                *o += phase * self.vectors[(r, k)];
            }
        }
        out
    }
}

/// Advances `v` by `dt`; `v` need not be normalized.
fn propagate(
    h: &SparseOperator,
    v: &mut Vec<Complex64>,
    t_start: f64,
    dt: f64,
    opts: &KrylovOptions,
    stats: &mut Stats,
    tau_hint: &mut f64,
) -> Result<()> {
    let beta0 = norm(v);
    if dt == 0.0 || beta0 == 0.0 {
        return Ok(());
    }
    let m = opts.krylov_dim.max(2).min(h.dim());
    let mut elapsed = 0.0;
    while elapsed < dt {
        let remaining = dt - elapsed;
        let basis = build_basis(h, v, m)?;
        let small = SmallExp::new(&basis);
        let mut tau = tau_hint.min(remaining);
        let beta0 = norm(v);
        loop {
            let c = small.apply(tau);
            let err = beta0 * basis.beta_last * c.last().map_or(0.0, |x| x.norm());
            if err <= opts.tol {
                let mut next = vec![Complex64::new(0.0, 0.0); v.len()];
                for (ck, bk) in c.iter().zip(&basis.vectors) {
                    let s = ck * beta0;
                    next.iter_mut().zip(bk).for_each(|(acc, x)| *acc += s * x);
                }
                *v = next;
                stats.steps += 1;
                stats.max_error = stats.max_error.max(err);
                stats.smallest_step = if stats.steps == 1 {
                    tau
                } else {
                    stats.smallest_step.min(tau)
                };
                // grow cautiously after an easy step
                *tau_hint = if err < 0.01 * opts.tol { 2.0 * tau } else { tau };
                if remaining - tau <= 1e-15 * dt.max(1.0) {
                    elapsed = dt;
                } else {
                    elapsed += tau;
                }
                break;
            }
            stats.rejected += 1;
            tau *= 0.5;
            if tau < 1e-13 * (t_start + dt).abs().max(1.0) {
                return Err(Error::Propagation {
                    time: t_start + elapsed,
                    detail: format!("step size underflow (tau = {tau:e}, error estimate {err:e})"),
                });
            }
        }
        if stats.steps > opts.max_steps {
            return Err(Error::Propagation {
                time: t_start + elapsed,
                detail: format!("exceeded {} propagation steps", opts.max_steps),
            });
        }
    }
    Ok(())
}

fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &t in times {
        if !t.is_finite() || t < prev {
            return Err(Error::domain(format!(
                "times must be finite, non-negative and non-decreasing (got {t} after {prev})"
            )));
        }
        prev = t;
    }
    Ok(())
}

fn check_operator(h: &SparseOperator, dim: usize) -> Result<()> {
    if !h.is_hermitian() {
        return Err(Error::domain("time evolution needs a Hermitian operator"));
    }
    if h.dim() != dim {
        return Err(Error::domain(format!(
            "state dimension {dim} does not match operator dimension {}",
            h.dim()
        )));
    }
    Ok(())
}

/// Evolves a vector (any norm) and returns its value at every requested time.
fn evolve_raw(
    h: &SparseOperator,
    v0: &[Complex64],
    times: &[f64],
    opts: &KrylovOptions,
    stats: &mut Stats,
) -> Result<Vec<Vec<Complex64>>> {
    check_times(times)?;
    let mut v = v0.to_vec();
    let mut now = 0.0;
    let mut tau_hint = f64::INFINITY;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        propagate(h, &mut v, now, t - now, opts, stats, &mut tau_hint)?;
        now = t;
        out.push(v.clone());
    }
    Ok(out)
}

pub fn krylov_evolve(
    h: &SparseOperator,
    psi0: &StateVector,
    times: &[f64],
) -> Result<EvolutionResult> {
    krylov_evolve_with(h, psi0, times, &KrylovOptions::default())
}

pub fn krylov_evolve_with(
    h: &SparseOperator,
    psi0: &StateVector,
    times: &[f64],
    opts: &KrylovOptions,
) -> Result<EvolutionResult> {
    check_operator(h, psi0.dim())?;
    if !psi0.is_normalized() {
        return Err(Error::domain(format!(
            "initial state has norm {}, expected 1",
            psi0.norm()
        )));
    }
    let mut stats = Stats::default();
    let raw = evolve_raw(h, psi0.amplitudes(), times, opts, &mut stats)?;
    let mut states = Vec::with_capacity(raw.len());
    for (v, &t) in raw.into_iter().zip(times) {
        let s = StateVector::from_amplitudes(v, psi0.sector());
        if (s.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Propagation {
                time: t,
                detail: format!("norm drifted to {}", s.norm()),
            });
        }
        states.push(s);
    }
    Ok(EvolutionResult {
        times: times.to_vec(),
        states,
        krylov_dim: opts.krylov_dim,
        steps: stats.steps,
        rejected: stats.rejected,
        smallest_step: stats.smallest_step,
        max_error_estimate: stats.max_error,
    })
}

/// `<psi(t)| O |psi(t)>` at every stored time.
pub fn observable_series(result: &EvolutionResult, o: &SparseOperator) -> Result<Vec<Complex64>> {
    result
        .states
        .iter()
        .map(|s| o.expectation(s.amplitudes()))
        .collect()
}

/// Real part of [`observable_series`]; the operator must be Hermitian.
pub fn real_series(result: &EvolutionResult, o: &SparseOperator) -> Result<Vec<f64>> {
    if !o.is_hermitian() {
        return Err(Error::domain("real expectation values need a Hermitian observable"));
    }
    Ok(observable_series(result, o)?.into_iter().map(|z| z.re).collect())
}

/// `C(t) = <psi0| O_a(t) O_b |psi0>` with `O_a(t) = exp(iHt) O_a exp(-iHt)`.
///
/// Co-propagates `psi0` and `O_b psi0` and returns `<psi(t)| O_a |phi(t)>`.
pub fn correlation(
    h: &SparseOperator,
    psi0: &StateVector,
    o_a: &SparseOperator,
    o_b: &SparseOperator,
    times: &[f64],
    opts: &KrylovOptions,
) -> Result<Vec<Complex64>> {
    check_operator(h, psi0.dim())?;
    if o_a.dim() != h.dim() || o_b.dim() != h.dim() {
        return Err(Error::domain("observable dimensions do not match the Hamiltonian"));
    }
    let mut stats = Stats::default();
    let psi_t = evolve_raw(h, psi0.amplitudes(), times, opts, &mut stats)?;
    let phi0 = o_b.matvec(psi0.amplitudes())?;
    if norm(&phi0) == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); times.len()]);
    }
    let phi_t = evolve_raw(h, &phi0, times, opts, &mut stats)?;
    psi_t
        .iter()
        .zip(&phi_t)
        .map(|(psi, phi)| Ok(dot(psi, &o_a.matvec(phi)?)))
        .collect()
}
