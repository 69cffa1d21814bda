//! The qubit-ladder Hamiltonian, the spin-full Hubbard chain, and the linear
//! map between their parameters.
//!
//! Both models act on the same `2n`-qubit register. Chains have open
//! boundaries. All energies are plain numbers in one caller-chosen unit.

use crate::error::{Error, Result};
use crate::jordan_wigner::build_annihilation;
use crate::ladder::{check_chain_length, linearize, Chain, LadderIndex};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::sector::BasisSet;
use crate::sparse::SparseOperator;

/// Parameters of the qubit ladder, possibly site-dependent.
///
/// `epsilon` is stored per linear qubit (down chain first), `gx_*` per bond
/// `j -> j+1` of each chain, and `gz` per rung.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderParams {
    n: usize,
    epsilon: Vec<f64>,
    gx_down: Vec<f64>,
    gx_up: Vec<f64>,
    gz: Vec<f64>,
}

fn check_finite(name: &str, v: &[f64]) -> Result<()> {
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain(format!("{name} contains non-finite value {x}")));
    }
    Ok(())
}

fn check_len(name: &str, v: &[f64], want: usize) -> Result<()> {
    if v.len() != want {
        return Err(Error::domain(format!(
            "{name} has {} entries, expected {want}",
            v.len()
        )));
    }
    Ok(())
}

impl LadderParams {
    pub fn uniform(n: usize, epsilon: f64, gx: f64, gz: f64) -> Result<Self> {
        check_chain_length(n)?;
        LadderParams::new(
            n,
            vec![epsilon; 2 * n],
            vec![gx; n - 1],
            vec![gx; n - 1],
            vec![gz; n],
        )
    }

    pub fn new(
        n: usize,
        epsilon: Vec<f64>,
        gx_down: Vec<f64>,
        gx_up: Vec<f64>,
        gz: Vec<f64>,
    ) -> Result<Self> {
        check_chain_length(n)?;
        check_len("epsilon", &epsilon, 2 * n)?;
        check_len("gx (down chain)", &gx_down, n - 1)?;
        check_len("gx (up chain)", &gx_up, n - 1)?;
        check_len("gz", &gz, n)?;
        for (name, v) in [
            ("epsilon", &epsilon),
            ("gx (down chain)", &gx_down),
            ("gx (up chain)", &gx_up),
            ("gz", &gz),
        ] {
            check_finite(name, v)?;
        }
        Ok(LadderParams {
            n,
            epsilon,
            gx_down,
            gx_up,
            gz,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Per-qubit splittings in linear order.
    pub fn epsilons(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn epsilon(&self, idx: LadderIndex) -> Result<f64> {
        Ok(self.epsilon[linearize(idx, self.n)? - 1])
    }

    pub fn gx(&self, chain: Chain) -> &[f64] {
        match chain {
            Chain::Down => &self.gx_down,
            Chain::Up => &self.gx_up,
        }
    }

    pub fn gz(&self) -> &[f64] {
        &self.gz
    }

    pub fn set_epsilon(&mut self, idx: LadderIndex, value: f64) -> Result<()> {
        let q = linearize(idx, self.n)?;
        check_finite("epsilon", &[value])?;
        self.epsilon[q - 1] = value;
        Ok(())
    }

    /// Sets the exchange on bond `bond -> bond + 1` of one chain.
    pub fn set_gx(&mut self, chain: Chain, bond: usize, value: f64) -> Result<()> {
        if bond == 0 || bond >= self.n {
            return Err(Error::domain(format!("bond {bond} outside 1..{}", self.n)));
        }
        check_finite("gx", &[value])?;
        match chain {
            Chain::Down => self.gx_down[bond - 1] = value,
            Chain::Up => self.gx_up[bond - 1] = value,
        }
        Ok(())
    }

    /// `(epsilon, gx, gz)` if every list is constant.
    pub fn uniform_values(&self) -> Option<(f64, f64, f64)> {
        fn constant(v: &[f64]) -> Option<Option<f64>> {
            match v.first() {
                None => Some(None),
                Some(&x) => v.iter().all(|&y| y == x).then_some(Some(x)),
            }
        }
        let eps = constant(&self.epsilon)??;
        let gz = constant(&self.gz)??;
        let gx = match (constant(&self.gx_down)?, constant(&self.gx_up)?) {
            (None, None) => 0.0,
            (Some(a), Some(b)) if a == b => a,
            _ => return None,
        };
        Some((eps, gx, gz))
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform_values().is_some()
    }

    /// Keeps sites `1..=m` of both chains.
    pub fn truncated(&self, m: usize) -> Result<LadderParams> {
        self.segment(1, m)
    }

    /// Sites `first..=last` of both chains as a standalone ladder.
    pub fn segment(&self, first: usize, last: usize) -> Result<LadderParams> {
        if first == 0 || first > last || last > self.n {
            return Err(Error::domain(format!(
                "cannot keep sites {first}..={last} of {}",
                self.n
            )));
        }
        let (a, b) = (first - 1, last);
        let mut eps = self.epsilon[a..b].to_vec();
        eps.extend_from_slice(&self.epsilon[self.n + a..self.n + b]);
        LadderParams::new(
            b - a,
            eps,
            self.gx_down[a..b - 1].to_vec(),
            self.gx_up[a..b - 1].to_vec(),
            self.gz[a..b].to_vec(),
        )
    }

    fn qubit(&self, site: usize, chain: Chain) -> usize {
        linearize(LadderIndex::new(site, chain), self.n).expect("site in range")
    }
}

/// Parameters of the spin-full Hubbard chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    pub n: usize,
    pub mu: f64,
    pub u: f64,
    pub t: f64,
}

impl HubbardParams {
    pub fn new(n: usize, mu: f64, u: f64, t: f64) -> Result<Self> {
        check_chain_length(n)?;
        check_finite("hubbard parameters", &[mu, u, t])?;
        Ok(HubbardParams { n, mu, u, t })
    }
}

/// How neighbouring qubits along a chain are coupled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exchange {
    /// `gx (Plus Minus + Minus Plus)`, the rotating-wave form.
    FlipFlop,
    /// `gx X X`, the bare capacitive coupling.
    Xx,
}

/// Ladder Hamiltonian as a sum of Pauli strings.
pub fn hqs_terms(p: &LadderParams, exchange: Exchange) -> PauliSum {
    let n = p.n;
    let mut h = PauliSum::new();
    for (q0, &e) in p.epsilon.iter().enumerate() {
        if e != 0.0 {
            h.push(PauliString::single(q0 + 1, Pauli::Z).scaled(0.5 * e));
        }
    }
    for j in 1..=n {
        let g = p.gz[j - 1];
        if g != 0.0 {
            let s = PauliString::from_factors(
                g,
                [
                    (p.qubit(j, Chain::Down), Pauli::Z),
                    (p.qubit(j, Chain::Up), Pauli::Z),
                ],
            )
            .expect("distinct qubits");
            h.push(s);
        }
    }
    for chain in Chain::BOTH {
        for j in 1..n {
            let g = p.gx(chain)[j - 1];
            if g == 0.0 {
                continue;
            }
            let (a, b) = (p.qubit(j, chain), p.qubit(j + 1, chain));
            let pair = |pa, pb| PauliString::from_factors(g, [(a, pa), (b, pb)]).unwrap();
            match exchange {
                Exchange::FlipFlop => {
                    h.push(pair(Pauli::Plus, Pauli::Minus));
                    h.push(pair(Pauli::Minus, Pauli::Plus));
                }
                Exchange::Xx => h.push(pair(Pauli::X, Pauli::X)),
            }
        }
    }
    h
}

pub fn build_hqs(p: &LadderParams) -> Result<SparseOperator> {
    hqs_terms(p, Exchange::FlipFlop).realize(p.n)
}

/// Same as [`build_hqs`] with `gx X X` in place of the flip-flop exchange.
pub fn build_hqs_xx(p: &LadderParams) -> Result<SparseOperator> {
    hqs_terms(p, Exchange::Xx).realize(p.n)
}

/// Ladder Hamiltonian restricted to a conserved sector (or any invariant basis).
pub fn build_hqs_on<B: BasisSet + ?Sized>(p: &LadderParams, basis: &B) -> Result<SparseOperator> {
    if basis.chain_length() != p.n {
        return Err(Error::domain(format!(
            "basis is for n = {}, parameters for n = {}",
            basis.chain_length(),
            p.n
        )));
    }
    hqs_terms(p, Exchange::FlipFlop).realize_on(basis)
}

/// Hubbard Hamiltonian assembled from Jordan-Wigner mode operators.
///
/// Every term is a product of realized `c^dagger` and `c` matrices, so this
/// route shares nothing with [`hqs_terms`] beyond the register layout.
pub fn build_hfh(p: &HubbardParams) -> Result<SparseOperator> {
    let n = p.n;
    let modes = (1..=2 * n)
        .map(|q| build_annihilation(q, n).map(|c| c.realized))
        .collect::<Result<Vec<_>>>()?;
    let daggers: Vec<SparseOperator> = modes.iter().map(SparseOperator::adjoint).collect();
    let q = |site: usize, chain: Chain| linearize(LadderIndex::new(site, chain), n).unwrap() - 1;
    let numbers = (0..2 * n)
        .map(|k| daggers[k].matmul(&modes[k]))
        .collect::<Result<Vec<_>>>()?;

    let mut h = SparseOperator::zeros(1usize << (2 * n));
    for nk in &numbers {
        h = h.axpy((-p.mu).into(), nk)?;
    }
    for j in 1..=n {
        let pair = numbers[q(j, Chain::Up)].matmul(&numbers[q(j, Chain::Down)])?;
        h = h.axpy(p.u.into(), &pair)?;
    }
    for chain in Chain::BOTH {
        for j in 1..n {
            let (a, b) = (q(j, chain), q(j + 1, chain));
            let fwd = daggers[a].matmul(&modes[b])?;
            let bwd = daggers[b].matmul(&modes[a])?;
            h = h.axpy((-p.t).into(), &fwd)?.axpy((-p.t).into(), &bwd)?;
        }
    }
    Ok(h)
}

/// Ladder to Hubbard: `mu = -epsilon + 2 gz`, `U = 4 gz`, `t = -gx`.
pub fn map_params(p: &LadderParams) -> Result<HubbardParams> {
    let (eps, gx, gz) = p.uniform_values().ok_or_else(|| {
        Error::domain("parameter map is defined for uniform ladders only (disorder lists present)")
    })?;
    HubbardParams::new(p.n, -eps + 2.0 * gz, 4.0 * gz, -gx)
}

/// Hubbard to ladder: `gz = U/4`, `epsilon = 2 gz - mu`, `gx = -t`.
pub fn inverse_map_params(h: &HubbardParams) -> Result<LadderParams> {
    let gz = h.u / 4.0;
    LadderParams::uniform(h.n, 2.0 * gz - h.mu, -h.t, gz)
}

/// `E0 = n (gz - epsilon)` such that `spec(H_QS) = spec(H_FH) + E0`.
///
/// Follows from `Z = 2 n_q - 1`: the single-qubit terms leave `-n epsilon`
/// and each rung leaves `+gz`.
pub fn spectral_offset(p: &LadderParams) -> Result<f64> {
    let (eps, _, gz) = p
        .uniform_values()
        .ok_or_else(|| Error::domain("spectral offset is defined for uniform ladders only"))?;
    Ok(p.n as f64 * (gz - eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(op: &SparseOperator) -> Vec<f64> {
        (0..op.dim()).map(|i| op.get(i, i).re).collect()
    }

    #[test]
    fn single_rung_is_diagonal() {
        let p = LadderParams::uniform(1, 1.0, 0.0, 0.25).unwrap();
        let h = build_hqs(&p).unwrap();
        assert_eq!(h.nnz(), 4);
        // basis: 00, down excited, up excited, both
        assert_eq!(diag(&h), vec![-0.75, -0.25, -0.25, 1.25]);
    }

    #[test]
    fn hubbard_single_site_occupations() {
        let p = HubbardParams::new(1, 0.5, 1.0, 0.3).unwrap();
        let h = build_hfh(&p).unwrap();
        assert_eq!(diag(&h), vec![0.0, -0.5, -0.5, 0.0]);
        assert_eq!(h.nnz(), 2);
    }

    #[test]
    fn hubbard_annihilates_vacuum() {
        let p = HubbardParams::new(3, 0.7, -1.3, 0.4).unwrap();
        let h = build_hfh(&p).unwrap();
        assert!(h.row(0).all(|(_, v)| v.norm() == 0.0));
        assert!((0..h.dim()).all(|r| h.get(r, 0).norm() == 0.0));
    }

    #[test]
    fn map_examples() {
        let p = LadderParams::uniform(2, 1.0, -0.5, 0.25).unwrap();
        let h = map_params(&p).unwrap();
        assert_eq!((h.mu, h.u, h.t), (-0.5, 1.0, 0.5));
        let z = map_params(&LadderParams::uniform(2, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((z.mu, z.u, z.t), (0.0, 0.0, 0.0));
        assert_eq!(inverse_map_params(&h).unwrap(), p);
    }

    #[test]
    fn map_rejects_disorder() {
        let mut p = LadderParams::uniform(3, 1.0, 0.2, 0.1).unwrap();
        p.set_epsilon(LadderIndex::up(2), 1.01).unwrap();
        assert!(map_params(&p).is_err());
        assert!(spectral_offset(&p).is_err());
        let mut q = LadderParams::uniform(3, 1.0, 0.2, 0.1).unwrap();
        q.set_gx(Chain::Down, 1, 0.0).unwrap();
        assert!(!q.is_uniform());
    }

    #[test]
    fn offset_examples() {
        let p = LadderParams::uniform(1, 1.0, 0.0, 0.25).unwrap();
        assert_eq!(spectral_offset(&p).unwrap(), -0.75);
        let q = LadderParams::uniform(4, 0.3, 0.1, 0.3).unwrap();
        assert_eq!(spectral_offset(&q).unwrap(), 0.0);
    }

    #[test]
    fn malformed_lists_rejected() {
        assert!(LadderParams::new(2, vec![1.0; 3], vec![0.0], vec![0.0], vec![0.0; 2]).is_err());
        assert!(LadderParams::new(2, vec![1.0; 4], vec![], vec![0.0], vec![0.0; 2]).is_err());
        assert!(LadderParams::new(2, vec![1.0; 4], vec![0.0], vec![0.0], vec![0.0; 3]).is_err());
        assert!(LadderParams::uniform(0, 1.0, 0.0, 0.0).is_err());
        assert!(LadderParams::uniform(2, f64::NAN, 0.0, 0.0).is_err());
        assert!(HubbardParams::new(2, f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn xx_matches_flip_flop_without_bonds() {
        let p = LadderParams::uniform(1, 0.8, 0.3, 0.2).unwrap();
        let a = build_hqs(&p).unwrap();
        let b = build_hqs_xx(&p).unwrap();
        assert_eq!(a.max_abs_diff(&b).unwrap(), 0.0);
        let p0 = LadderParams::uniform(3, 0.8, 0.0, 0.2).unwrap();
        let d = build_hqs(&p0).unwrap().max_abs_diff(&build_hqs_xx(&p0).unwrap()).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn truncation_keeps_left_sites() {
        let mut p = LadderParams::uniform(4, 1.0, 0.3, 0.1).unwrap();
        p.set_epsilon(LadderIndex::up(2), 1.5).unwrap();
        let t = p.truncated(2).unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.epsilon(LadderIndex::up(2)).unwrap(), 1.5);
        assert_eq!(t.gx(Chain::Up), &[0.3]);
    }
}
