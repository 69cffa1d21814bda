//! Reference constructions that share no code with the library.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qladder_core::{HubbardParams, LadderParams};
use qladder_core::Chain;

pub type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mat2(a: [[f64; 2]; 2]) -> CMat {
    DMatrix::from_fn(2, 2, |r, k| c(a[r][k]))
}

pub fn z() -> CMat {
    mat2([[-1.0, 0.0], [0.0, 1.0]])
}
/// `|1><0|`
pub fn raise() -> CMat {
    mat2([[0.0, 0.0], [1.0, 0.0]])
}
pub fn lower() -> CMat {
    mat2([[0.0, 1.0], [0.0, 0.0]])
}
pub fn x() -> CMat {
    mat2([[0.0, 1.0], [1.0, 0.0]])
}

/// Operator acting with `ops[q]` on qubit `q` (1-based) and identity elsewhere.
/// Qubit 1 is the rightmost Kronecker factor.
pub fn embed(qubits: usize, ops: &[(usize, CMat)]) -> CMat {
    let mut m = DMatrix::from_element(1, 1, c(1.0));
    for q in (1..=qubits).rev() {
        let f = ops
            .iter()
            .find(|(k, _)| *k == q)
            .map(|(_, o)| o.clone())
            .unwrap_or_else(|| DMatrix::identity(2, 2));
        m = m.kronecker(&f);
    }
    m
}

/// Ladder Hamiltonian from Kronecker products.
pub fn dense_hqs(p: &LadderParams, xx: bool) -> CMat {
    let n = p.n();
    let q = 2 * n;
    let dim = 1 << q;
    let mut h = DMatrix::zeros(dim, dim);
    for (i, e) in p.epsilons().iter().enumerate() {
        h += embed(q, &[(i + 1, z())]) * c(0.5 * e);
    }
    for (j, g) in p.gz().iter().enumerate() {
        h += embed(q, &[(j + 1, z()), (j + 1 + n, z())]) * c(*g);
    }
    for (chain, offset) in [(Chain::Down, 0), (Chain::Up, n)] {
        for (j, g) in p.gx(chain).iter().enumerate() {
            let a = offset + j + 1;
            if xx {
                h += embed(q, &[(a, x()), (a + 1, x())]) * c(*g);
            } else {
                h += embed(q, &[(a, raise()), (a + 1, lower())]) * c(*g);
                h += embed(q, &[(a, lower()), (a + 1, raise())]) * c(*g);
            }
        }
    }
    h
}

/// `c_a^dagger c_b` on occupation-number states by explicit sign counting;
/// modes ordered down chain first.
fn hop(state: usize, a: usize, b: usize) -> Option<(usize, f64)> {
    let below = |s: usize, m: usize| (s & ((1 << (m - 1)) - 1)).count_ones();
    if state >> (b - 1) & 1 == 0 {
        return None;
    }
    let mut sign = if below(state, b) % 2 == 0 { 1.0 } else { -1.0 };
    let s = state & !(1 << (b - 1));
    if s >> (a - 1) & 1 == 1 {
        return None;
    }
    if below(s, a) % 2 == 1 {
        sign = -sign;
    }
    Some((s | 1 << (a - 1), sign))
}

/// Hubbard Hamiltonian on the Fock space.
pub fn fock_hubbard(hp: &HubbardParams) -> CMat {
    let n = hp.n;
    let dim = 1 << (2 * n);
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let occ = |m: usize| (s >> (m - 1) & 1) as f64;
        let mut diag = 0.0;
        for j in 1..=n {
            diag += -hp.mu * (occ(j) + occ(j + n)) + hp.u * occ(j) * occ(j + n);
        }
        h[(s, s)] += c(diag);
        for offset in [0, n] {
            for j in 1..n {
                let (a, b) = (offset + j, offset + j + 1);
                for (x, y) in [(a, b), (b, a)] {
                    if let Some((t, sign)) = hop(s, x, y) {
                        h[(t, s)] += c(-hp.t * sign);
                    }
                }
            }
        }
    }
    h
}

/// `exp(-i H t) v` by a Taylor series with scaling and squaring.
pub fn expm_apply(h: &CMat, t: f64, v: &[Complex64]) -> Vec<Complex64> {
    let a = h * Complex64::new(0.0, -t);
    let norm1 = (0..a.ncols())
        .map(|k| a.column(k).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let small = &a * c(0.5f64.powi(squarings));
    let dim = a.nrows();
    let mut e = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &small * c(1.0 / k as f64);
        e += &term;
    }
    for _ in 0..squarings {
        e = &e * &e;
    }
    (e * nalgebra::DVector::from_column_slice(v)).iter().copied().collect()
}

/// Ascending real eigenvalues of a Hermitian matrix.
pub fn eigvals(h: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
