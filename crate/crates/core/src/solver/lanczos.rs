//! Lanczos iteration with full reorthogonalization.
//!
//! Breakdowns (an invariant Krylov subspace) restart from a fresh random
//! vector orthogonal to everything built so far, which leaves a zero
//! off-diagonal in the tridiagonal matrix. The same injection is used once
//! the requested Ritz values converge, so that eigenvalues missed because
//! of degeneracy are picked up; the result is accepted when a round of
//! injection leaves the converged values unchanged.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SpectrumResult, RESIDUAL_TOLERANCE};
use crate::error::{Error, Result};
use crate::sector::SectorBasis;
use crate::sparse::SparseOperator;
use crate::state::{dot, norm, StateVector};

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Cap on the Krylov dimension (defaults to `min(dim, 400)`).
    pub max_iter: Option<usize>,
    /// Ritz residual estimate required for convergence.
    pub tol: f64,
    pub seed: u64,
    pub with_vectors: bool,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            max_iter: None,
            tol: 1e-10,
            seed: 0x5eed,
            with_vectors: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOutcome {
    pub spectrum: SpectrumResult,
    pub iterations: usize,
    /// Lowest Ritz value after each iteration.
    pub lowest_history: Vec<f64>,
}

/// `k` lowest eigenvalues of a Hermitian operator, optionally inside a sector
/// (the operator is then given on the full register and projected first).
pub fn lanczos_extremal(
    h: &SparseOperator,
    k: usize,
    sector: Option<&SectorBasis>,
) -> Result<SpectrumResult> {
    let (op, tag) = match sector {
        Some(s) => (s.project_operator(h)?, Some((s.n_up, s.n_down))),
        None => (h.clone(), None),
    };
    let mut out = lanczos_with(&op, k, &LanczosOptions::default())?;
    out.spectrum.sector = tag;
    if let Some(vs) = out.spectrum.eigenvectors.as_mut() {
        for v in vs.iter_mut() {
            *v = StateVector::from_amplitudes(v.amplitudes().to_vec(), tag);
        }
    }
    Ok(out.spectrum)
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let n = norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

/// Two passes of classical Gram-Schmidt against `basis`.
fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

struct Ritz {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn ritz(alpha: &[f64], beta: &[f64]) -> Ritz {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
    Ritz { values, vectors }
}

pub fn lanczos_with(h: &SparseOperator, k: usize, opts: &LanczosOptions) -> Result<LanczosOutcome> {
    let dim = h.dim();
    if !h.is_hermitian() {
        return Err(Error::domain("Lanczos needs a Hermitian operator"));
    }
    if k == 0 || k > dim {
        return Err(Error::domain(format!("requested {k} eigenvalues of a {dim}-dim operator")));
    }
    let max_iter = opts.max_iter.unwrap_or(400).min(dim).max(k);
    let scale = h.max_abs().max(1.0);
    let breakdown = 1e-12 * scale;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<Complex64>> = vec![random_unit(dim, &mut rng)];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut history = Vec::new();
    let mut previous_round: Option<Vec<f64>> = None;
    let mut residual_estimates: Vec<f64> = Vec::new();

    loop {
        let m = basis.len();
        let v = &basis[m - 1];
        let mut w = h.matvec(v)?;
        let a = dot(v, &w).re;
        alpha.push(a);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);

        let r = ritz(&alpha, &beta);
        history.push(r.values[0]);

        let complete = m == dim;
        let mut converged = false;
        if m >= k {
            residual_estimates = (0..k).map(|i| (b * r.vectors[(m - 1, i)]).abs()).collect();
            converged = complete
                || residual_estimates
                    .iter()
                    .zip(&r.values)
                    .all(|(res, th)| *res <= opts.tol * th.abs().max(1.0));
        }

        if converged {
            let current: Vec<f64> = r.values[..k].to_vec();
            let stable = previous_round.as_ref().is_some_and(|prev| {
                prev.iter()
                    .zip(&current)
                    .all(|(p, c)| (p - c).abs() <= 1e-9 * c.abs().max(1.0))
            });
            if stable || complete {
                return finish(h, &basis, &r, k, opts, m, history);
            }
            previous_round = Some(current);
        }

        if m >= max_iter {
            return Err(Error::Convergence {
                iterations: m,
                detail: format!(
                    "Lanczos did not converge {k} eigenvalues within {max_iter} iterations; \
                     residual estimates {residual_estimates:?}"
                ),
            });
        }

        if converged || b <= breakdown {
            // restart inside the orthogonal complement
            let mut fresh = random_unit(dim, &mut rng);
            orthogonalize(&mut fresh, &basis);
            let nf = norm(&fresh);
            if nf <= 1e-8 {
                return Err(Error::Convergence {
                    iterations: m,
                    detail: "could not find a restart vector orthogonal to the Krylov basis".into(),
                });
            }
            basis.push(fresh.into_iter().map(|x| x / nf).collect());
            beta.push(0.0);
        } else {
            basis.push(w.into_iter().map(|x| x / b).collect());
            beta.push(b);
        }
    }
}

fn finish(
    h: &SparseOperator,
    basis: &[Vec<Complex64>],
    r: &Ritz,
    k: usize,
    opts: &LanczosOptions,
    iterations: usize,
    history: Vec<f64>,
) -> Result<LanczosOutcome> {
    let dim = h.dim();
    let mut vectors = Vec::with_capacity(k);
    for i in 0..k {
        let mut y = vec![Complex64::new(0.0, 0.0); dim];
        for (j, b) in basis.iter().enumerate() {
            let s = r.vectors[(j, i)];
            y.iter_mut().zip(b).for_each(|(acc, x)| *acc += x * s);
        }
        let hy = h.matvec(&y)?;
        let res: Vec<Complex64> = hy.iter().zip(&y).map(|(a, b)| a - b * r.values[i]).collect();
        let res = norm(&res);
        if res > RESIDUAL_TOLERANCE {
            return Err(Error::Convergence {
                iterations,
                detail: format!("Ritz pair {i} (value {}) has residual {res:e}", r.values[i]),
            });
        }
        if opts.with_vectors {
            vectors.push(StateVector::normalized(y, None)?);
        }
    }
    Ok(LanczosOutcome {
        spectrum: SpectrumResult {
            eigenvalues: r.values[..k].to_vec(),
            eigenvectors: opts.with_vectors.then_some(vectors),
            sector: None,
        },
        iterations,
        lowest_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_hqs, build_hqs_on, LadderParams};
    use crate::solver::dense_spectrum;

    #[test]
    fn free_chain_single_excitation() {
        let gx = 0.7;
        let p = LadderParams::uniform(4, 0.0, gx, 0.0).unwrap();
        let s = SectorBasis::new(4, 0, 1).unwrap();
        let h = build_hqs_on(&p, &s).unwrap();
        let out = lanczos_with(&h, 1, &LanczosOptions::default()).unwrap();
        let want = -2.0 * gx * (std::f64::consts::PI / 5.0).cos();
        assert!((out.spectrum.eigenvalues[0] - want).abs() < 1e-10);
    }

    #[test]
    fn full_dimension_matches_dense() {
        let p = LadderParams::uniform(2, 1.0, 0.4, 0.3).unwrap();
        let h = build_hqs(&p).unwrap();
        let l = lanczos_with(&h, 16, &LanczosOptions::default()).unwrap();
        let d = dense_spectrum(&h).unwrap();
        for (a, b) in l.spectrum.eigenvalues.iter().zip(&d.eigenvalues) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_operator() {
        let z = SparseOperator::zeros(6);
        let l = lanczos_with(&z, 3, &LanczosOptions::default()).unwrap();
        assert_eq!(l.spectrum.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn degenerate_lowest_found() {
        // lowest eigenvalue -0.25 twice on the single rung
        let p = LadderParams::uniform(1, 0.0, 0.0, 0.25).unwrap();
        let h = build_hqs(&p).unwrap();
        let l = lanczos_with(&h, 2, &LanczosOptions::default()).unwrap();
        assert!((l.spectrum.eigenvalues[0] + 0.25).abs() < 1e-12);
        assert!((l.spectrum.eigenvalues[1] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn bad_requests() {
        let h = SparseOperator::identity(4);
        assert!(lanczos_with(&h, 0, &LanczosOptions::default()).is_err());
        assert!(lanczos_with(&h, 5, &LanczosOptions::default()).is_err());
    }

    #[test]
    fn sector_tag_set() {
        let p = LadderParams::uniform(2, 1.0, 0.4, 0.3).unwrap();
        let h = build_hqs(&p).unwrap();
        let s = SectorBasis::new(2, 1, 1).unwrap();
        let r = lanczos_extremal(&h, 1, Some(&s)).unwrap();
        assert_eq!(r.sector, Some((1, 1)));
        assert_eq!(r.eigenvectors.unwrap()[0].sector(), Some((1, 1)));
    }
}
