//! Pauli strings and sums over the ladder register.
//!
//! Single-qubit conventions, in the `(|0>, |1>) = (ground, excited)` basis:
//! `Z = diag(-1, +1)`, `Plus = |1><0|`, `Minus = |0><1|`, `X = Plus + Minus`,
//! `Y = -i Plus + i Minus`. With these, `Plus * Minus = (Z + 1) / 2` and the
//! usual algebra `XY = iZ` holds.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sector::BasisSet;
use crate::sparse::{SparseOperator, TripletBuilder};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

impl Pauli {
    /// Action on a single bit: returns the image bit and amplitude, or `None`
    /// when the operator annihilates the state.
    #[inline]
    pub fn apply(self, bit: bool) -> Option<(bool, Complex64)> {
        match (self, bit) {
            (Pauli::X, b) => Some((!b, ONE)),
            (Pauli::Y, false) => Some((true, -I)),
            (Pauli::Y, true) => Some((false, I)),
            (Pauli::Z, false) => Some((false, -ONE)),
            (Pauli::Z, true) => Some((true, ONE)),
            (Pauli::Plus, false) => Some((true, ONE)),
            (Pauli::Plus, true) => None,
            (Pauli::Minus, true) => Some((false, ONE)),
            (Pauli::Minus, false) => None,
        }
    }

    pub fn adjoint(self) -> Pauli {
        match self {
            Pauli::Plus => Pauli::Minus,
            Pauli::Minus => Pauli::Plus,
            p => p,
        }
    }

    /// `m[row][col]` in the `(|0>, |1>)` basis.
    fn matrix(self) -> [[Complex64; 2]; 2] {
        let mut m = [[ZERO; 2]; 2];
        for col in 0..2 {
            if let Some((row, a)) = self.apply(col == 1) {
                m[row as usize][col] = a;
            }
        }
        m
    }

    fn symbol(self) -> &'static str {
        match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
            Pauli::Plus => "+",
            Pauli::Minus => "-",
        }
    }
}

/// Writes a 2x2 matrix as `a*I + b*Z + c*Plus + d*Minus`.
fn decompose(m: [[Complex64; 2]; 2]) -> [(Option<Pauli>, Complex64); 4] {
    [
        (None, (m[0][0] + m[1][1]) * 0.5),
        (Some(Pauli::Z), (m[1][1] - m[0][0]) * 0.5),
        (Some(Pauli::Plus), m[1][0]),
        (Some(Pauli::Minus), m[0][1]),
    ]
}

fn matmul2(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn identity2() -> [[Complex64; 2]; 2] {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// A scaled tensor product of single-qubit factors, identity elsewhere.
///
/// Qubit indices are the 1-based linear indices of the ladder register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: Complex64,
    factors: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity(coefficient: impl Into<Complex64>) -> Self {
        PauliString {
            coefficient: coefficient.into(),
            factors: BTreeMap::new(),
        }
    }

    pub fn single(q: usize, p: Pauli) -> Self {
        PauliString::identity(1.0).with(q, p).expect("fresh string")
    }

    pub fn from_factors(
        coefficient: impl Into<Complex64>,
        factors: impl IntoIterator<Item = (usize, Pauli)>,
    ) -> Result<Self> {
        factors
            .into_iter()
            .try_fold(PauliString::identity(coefficient), |s, (q, p)| s.with(q, p))
    }

    /// Adds a factor on a qubit that does not carry one yet.
    pub fn with(mut self, q: usize, p: Pauli) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("qubit indices start at 1"));
        }
        if self.factors.insert(q, p).is_some() {
            return Err(Error::domain(format!("qubit {q} already carries a factor")));
        }
        Ok(self)
    }

    pub fn scaled(mut self, s: impl Into<Complex64>) -> Self {
        self.coefficient *= s.into();
        self
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.factors.iter().map(|(&q, &p)| (q, p))
    }

    pub fn factor(&self, q: usize) -> Option<Pauli> {
        self.factors.get(&q).copied()
    }

    pub fn max_qubit(&self) -> usize {
        self.factors.keys().next_back().copied().unwrap_or(0)
    }

    pub fn adjoint(&self) -> PauliString {
        PauliString {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().map(|(&q, p)| (q, p.adjoint())).collect(),
        }
    }

    /// Image of a basis state, or `None` if it is annihilated.
    #[inline]
    pub fn apply(&self, state: u64) -> Option<(u64, Complex64)> {
        let mut out = state;
        let mut amp = self.coefficient;
        for (&q, &p) in &self.factors {
            let mask = 1u64 << (q - 1);
            let (bit, a) = p.apply(state & mask != 0)?;
            if bit {
                out |= mask;
            } else {
                out &= !mask;
            }
            amp *= a;
        }
        Some((out, amp))
    }

    /// Matrix on a register of two chains of length `n` (`2n` qubits).
    pub fn realize(&self, n: usize) -> Result<SparseOperator> {
        PauliSum::from(self.clone()).realize(n)
    }
}

impl Mul for &PauliString {
    type Output = PauliSum;

    fn mul(self, rhs: &PauliString) -> PauliSum {
        let qubits: std::collections::BTreeSet<usize> = self
            .factors
            .keys()
            .chain(rhs.factors.keys())
            .copied()
            .collect();
        let mut terms = vec![PauliString::identity(self.coefficient * rhs.coefficient)];
        for q in qubits {
            let a = self.factors.get(&q).map_or_else(identity2, |p| p.matrix());
            let b = rhs.factors.get(&q).map_or_else(identity2, |p| p.matrix());
            let parts: Vec<_> = decompose(matmul2(a, b))
                .into_iter()
                .filter(|(_, c)| *c != ZERO)
                .collect();
            let mut next = Vec::with_capacity(terms.len() * parts.len());
            for t in &terms {
                for &(p, c) in &parts {
                    let mut s = t.clone().scaled(c);
                    if let Some(p) = p {
                        s.factors.insert(q, p);
                    }
                    next.push(s);
                }
            }
            terms = next;
        }
        PauliSum { terms }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficient)?;
        for (q, p) in &self.factors {
            write!(f, " {}{}", p.symbol(), q)?;
        }
        Ok(())
    }
}

/// A linear combination of Pauli strings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PauliSum {
    terms: Vec<PauliString>,
}

impl From<PauliString> for PauliSum {
    fn from(s: PauliString) -> Self {
        PauliSum { terms: vec![s] }
    }
}

impl FromIterator<PauliString> for PauliSum {
    fn from_iter<T: IntoIterator<Item = PauliString>>(iter: T) -> Self {
        PauliSum {
            terms: iter.into_iter().collect(),
        }
    }
}

impl PauliSum {
    pub fn new() -> Self {
        PauliSum::default()
    }

    pub fn push(&mut self, s: PauliString) {
        self.terms.push(s);
    }

    pub fn extend(&mut self, other: PauliSum) {
        self.terms.extend(other.terms);
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        self.terms.into_iter().map(|t| t.scaled(s)).collect()
    }

    pub fn adjoint(&self) -> PauliSum {
        self.terms.iter().map(PauliString::adjoint).collect()
    }

    pub fn max_qubit(&self) -> usize {
        self.terms.iter().map(PauliString::max_qubit).max().unwrap_or(0)
    }

    pub fn product(&self, rhs: &PauliSum) -> PauliSum {
        let mut out = PauliSum::new();
        for a in &self.terms {
            for b in &rhs.terms {
                out.extend(a * b);
            }
        }
        out
    }

    /// Matrix on the full register of `2n` qubits.
    pub fn realize(&self, n: usize) -> Result<SparseOperator> {
        let basis = crate::sector::FullBasis::new(n)?;
        self.realize_on(&basis)
    }

    /// Matrix restricted to the span of `basis`. Terms that map a basis state
    /// outside the span are an error, since the restriction would not be an
    /// invariant block.
    pub fn realize_on<B: BasisSet + ?Sized>(&self, basis: &B) -> Result<SparseOperator> {
        let nq = 2 * basis.chain_length();
        if self.max_qubit() > nq {
            return Err(Error::domain(format!(
                "operator acts on qubit {} but the register has {nq}",
                self.max_qubit()
            )));
        }
        let dim = basis.dim();
        let mut builder = TripletBuilder::new(dim);
        for col in 0..dim {
            let state = basis.state(col);
            for term in &self.terms {
                if let Some((image, amp)) = term.apply(state) {
                    let row = basis.index_of(image).ok_or_else(|| {
                        Error::domain(format!(
                            "term {term} leaves the basis (state {state:#b} -> {image:#b})"
                        ))
                    })?;
                    builder.push(row, col, amp);
                }
            }
        }
        Ok(builder.build())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z_trace_zero() {
        let z = PauliString::single(1, Pauli::Z).realize(1).unwrap();
        assert_eq!(z.dim(), 4);
        assert!(z.trace().norm() < 1e-15);
        // qubit 1 is the least significant bit: basis 0b01 has it excited
        let d = z.to_dense();
        assert_eq!(d[(0, 0)], c(-1.0, 0.0));
        assert_eq!(d[(1, 1)], c(1.0, 0.0));
        assert_eq!(d[(2, 2)], c(-1.0, 0.0));
        assert_eq!(d[(3, 3)], c(1.0, 0.0));
    }

    #[test]
    fn scaled_identity() {
        let id = PauliString::identity(2.5).realize(1).unwrap();
        assert!((id.trace() - c(10.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn xx_is_involution() {
        let p = PauliString::from_factors(1.0, [(1, Pauli::X), (2, Pauli::X)]).unwrap();
        let a = p.realize(1).unwrap();
        assert!((a.max_abs() - 1.0).abs() < 1e-15);
        let sq = a.matmul(&a).unwrap();
        let id = PauliString::identity(1.0).realize(1).unwrap();
        assert!(sq.max_abs_diff(&id).unwrap() < 1e-15);
    }

    #[test]
    fn single_qubit_algebra() {
        let x = PauliString::single(1, Pauli::X);
        let y = PauliString::single(1, Pauli::Y);
        let z = PauliString::single(1, Pauli::Z);
        let xz = (&x * &z).realize(1).unwrap();
        let minus_iy = y.clone().scaled(c(0.0, -1.0)).realize(1).unwrap();
        assert!(xz.max_abs_diff(&minus_iy).unwrap() < 1e-15);
        let xy = (&x * &y).realize(1).unwrap();
        let iz = z.scaled(c(0.0, 1.0)).realize(1).unwrap();
        assert!(xy.max_abs_diff(&iz).unwrap() < 1e-15);
    }

    #[test]
    fn raising_lowering_gives_number_projector() {
        let p = PauliString::single(1, Pauli::Plus);
        let m = PauliString::single(1, Pauli::Minus);
        let pm = (&p * &m).realize(1).unwrap();
        let proj: PauliSum = [
            PauliString::single(1, Pauli::Z).scaled(0.5),
            PauliString::identity(0.5),
        ]
        .into_iter()
        .collect();
        assert!(pm.max_abs_diff(&proj.realize(1).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn duplicate_factor_rejected() {
        assert!(PauliString::from_factors(1.0, [(1, Pauli::X), (1, Pauli::Z)]).is_err());
        assert!(PauliString::identity(1.0).with(0, Pauli::X).is_err());
    }

    #[test]
    fn register_overflow_rejected() {
        assert!(PauliString::single(3, Pauli::Z).realize(1).is_err());
    }

    #[test]
    fn adjoint_swaps_ladder_operators() {
        let s = PauliString::from_factors(c(1.0, 2.0), [(1, Pauli::Plus), (2, Pauli::Y)]).unwrap();
        let a = s.realize(1).unwrap();
        let b = s.adjoint().realize(1).unwrap();
        assert!(a.adjoint().max_abs_diff(&b).unwrap() < 1e-15);
    }
}
