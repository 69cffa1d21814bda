//! Fermionic modes on the ladder register via the Jordan-Wigner string.
//!
//! Mode `j` is the linear qubit `j`. The phase `exp(i pi lambda_j)` with
//! `lambda_j = sum_{k<j} n_k` is realized as `prod_{k<j} (1 - 2 n_k)`, which
//! under the `Z = 2n - 1` convention is `prod_{k<j} (-Z_k)`.


use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::sparse::SparseOperator;

#[derive(Debug, Clone)]
pub struct FermionOp {
    pub mode: usize,
    pub dagger: bool,
    pub string: PauliString,
    pub realized: SparseOperator,
}

impl FermionOp {
    /// Wraps an arbitrary string as a mode operator. Used to build corrupted
    /// fixtures for [`check_algebra_ops`].
    pub fn from_string(mode: usize, dagger: bool, string: PauliString, n: usize) -> Result<Self> {
        let realized = string.realize(n)?;
        Ok(FermionOp {
            mode,
            dagger,
            string,
            realized,
        })
    }

    pub fn adjoint(&self) -> FermionOp {
        FermionOp {
            mode: self.mode,
            dagger: !self.dagger,
            string: self.string.adjoint(),
            realized: self.realized.adjoint(),
        }
    }
}

fn check_mode(j: usize, n: usize) -> Result<()> {
    if j == 0 || j > 2 * n {
        return Err(Error::domain(format!("mode {j} outside 1..={}", 2 * n)));
    }
    Ok(())
}

/// `c_j` as a Pauli string.
pub fn annihilation_string(j: usize) -> PauliString {
    let sign = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
    PauliString::from_factors(
        sign,
        (1..j).map(|k| (k, Pauli::Z)).chain(std::iter::once((j, Pauli::Minus))),
    )
    .expect("distinct qubits")
}

pub fn build_annihilation(j: usize, n: usize) -> Result<FermionOp> {
    check_mode(j, n)?;
    FermionOp::from_string(j, false, annihilation_string(j), n)
}

pub fn build_creation(j: usize, n: usize) -> Result<FermionOp> {
    Ok(build_annihilation(j, n)?.adjoint())
}

/// `c_j^dagger c_{j'}` for `j != j'`: `Plus_j prod_{k strictly between} (-Z_k) Minus_{j'}`.
pub fn hopping_string(j: usize, jp: usize) -> Result<PauliString> {
    if j == jp {
        return Err(Error::domain(format!(
            "hopping needs distinct modes (got {j} twice); use number_operator"
        )));
    }
    let (lo, hi) = (j.min(jp), j.max(jp));
    let between = hi - lo - 1;
    let sign = if between % 2 == 0 { 1.0 } else { -1.0 };
    PauliString::from_factors(
        sign,
        (lo + 1..hi)
            .map(|k| (k, Pauli::Z))
            .chain([(j, Pauli::Plus), (jp, Pauli::Minus)]),
    )
}

pub fn hopping_operator(j: usize, jp: usize, n: usize) -> Result<SparseOperator> {
    check_mode(j, n)?;
    check_mode(jp, n)?;
    hopping_string(j, jp)?.realize(n)
}

/// `n_j = (Z_j + 1) / 2`.
pub fn number_terms(j: usize) -> PauliSum {
    [
        PauliString::single(j, Pauli::Z).scaled(0.5),
        PauliString::identity(0.5),
    ]
    .into_iter()
    .collect()
}

pub fn number_operator(j: usize, n: usize) -> Result<SparseOperator> {
    check_mode(j, n)?;
    number_terms(j).realize(n)
}

/// Global fermion parity `prod_k (-Z_k)` over all `2n` modes.
pub fn parity_operator(n: usize) -> Result<SparseOperator> {
    let sign = if (2 * n) % 2 == 0 { 1.0 } else { -1.0 };
    PauliString::from_factors(sign, (1..=2 * n).map(|k| (k, Pauli::Z)))?.realize(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport {
    /// `max |{c_j^dagger, c_j'} - delta_jj'|` and `max |{c_j, c_j'}|` over all pairs.
    pub max_deviation: f64,
    /// Mode pair `(j, j')` attaining the maximum.
    pub worst_pair: (usize, usize),
    pub pairs_checked: usize,
}

/// Checks the canonical anticommutation relations of an arbitrary list of
/// annihilation operators.
pub fn check_algebra_ops(ops: &[FermionOp]) -> Result<AlgebraReport> {
    let mut report = AlgebraReport {
        max_deviation: 0.0,
        worst_pair: (0, 0),
        pairs_checked: 0,
    };
    let Some(first) = ops.first() else {
        return Ok(report);
    };
    let id = SparseOperator::identity(first.realized.dim());
    let daggers: Vec<SparseOperator> = ops.iter().map(|c| c.realized.adjoint()).collect();
    for (a, ca) in ops.iter().enumerate() {
        for (b, cb) in ops.iter().enumerate() {
            let mut mixed = daggers[a].anticommutator(&cb.realized)?;
            if a == b {
                mixed = mixed.sub(&id)?;
            }
            let same = ca.realized.anticommutator(&cb.realized)?;
            let dev = mixed.max_abs().max(same.max_abs());
            report.pairs_checked += 1;
            if dev > report.max_deviation {
                report.max_deviation = dev;
                report.worst_pair = (ca.mode, cb.mode);
            }
        }
    }
    Ok(report)
}

/// Verifies the full CAR algebra for all `2n` modes.
pub fn check_algebra(n: usize) -> Result<AlgebraReport> {
    if 2 * n > 12 {
        return Err(Error::Capacity {
            what: "algebra check (modes)",
            size: 2 * n,
            limit: 12,
        });
    }
    let ops = (1..=2 * n)
        .map(|j| build_annihilation(j, n))
        .collect::<Result<Vec<_>>>()?;
    check_algebra_ops(&ops)
}


#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;

    #[test]
    fn first_mode_has_no_string() {
        let c1 = build_annihilation(1, 2).unwrap();
        let bare = PauliString::single(1, Pauli::Minus).realize(2).unwrap();
        assert_eq!(c1.realized.max_abs_diff(&bare).unwrap(), 0.0);
    }

    #[test]
    fn second_mode_dense_check() {
        // c_2 = (-Z_1) Minus_2 on the 4-dim register, built by hand.
        let c2 = build_annihilation(2, 1).unwrap().realized.to_dense();
        // basis index b = bit0 (qubit 1) + 2 bit1 (qubit 2)
        let mut want = nalgebra::DMatrix::<Complex64>::zeros(4, 4);
        // Minus_2 maps |q2=1,q1> -> |q2=0,q1>, with factor -Z_1 = +1 if q1 = 0, -1 if q1 = 1
        want[(0, 2)] = Complex64::new(1.0, 0.0);
        want[(1, 3)] = Complex64::new(-1.0, 0.0);
        assert_eq!(c2, want);
        let cd = want.adjoint();
        let anti = &cd * &want + &want * &cd;
        assert!((anti - nalgebra::DMatrix::<Complex64>::identity(4, 4)).camax() < 1e-12);
    }

    #[test]
    fn modes_one_and_three_anticommute() {
        let c1 = build_annihilation(1, 2).unwrap().realized.to_dense();
        let c3 = build_annihilation(3, 2).unwrap().realized.to_dense();
        assert!((&c1 * &c3 + &c3 * &c1).camax() < 1e-12);
        let c3d = c3.adjoint();
        assert!((&c1 * &c3d + &c3d * &c1).camax() < 1e-12);
    }

    #[test]
    fn algebra_small() {
        assert!(check_algebra(1).unwrap().max_deviation <= 1e-12);
        let r = check_algebra(3).unwrap();
        assert!(r.max_deviation <= 1e-12);
        assert_eq!(r.pairs_checked, 36);
    }

    #[test]
    fn stripped_string_detected() {
        let n = 2;
        let mut ops: Vec<_> = (1..=4).map(|j| build_annihilation(j, n).unwrap()).collect();
        ops[1] = FermionOp::from_string(2, false, PauliString::single(2, Pauli::Minus), n).unwrap();
        let r = check_algebra_ops(&ops).unwrap();
        assert!((r.max_deviation - 2.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn adjacent_hopping_is_bare_flip_flop() {
        let h = hopping_operator(2, 3, 2).unwrap();
        let ff = PauliString::from_factors(1.0, [(2, Pauli::Plus), (3, Pauli::Minus)])
            .unwrap()
            .realize(2)
            .unwrap();
        assert!(h.max_abs_diff(&ff).unwrap() <= 1e-15);
    }

    #[test]
    fn distant_hopping_matches_composition() {
        let n = 2;
        let h = hopping_operator(1, 3, n).unwrap();
        assert_eq!(hopping_string(1, 3).unwrap().factor(2), Some(Pauli::Z));
        let cd1 = build_creation(1, n).unwrap().realized;
        let c3 = build_annihilation(3, n).unwrap().realized;
        assert!(h.max_abs_diff(&cd1.matmul(&c3).unwrap()).unwrap() <= 1e-12);
        let back = hopping_operator(3, 1, n).unwrap();
        let cd3 = build_creation(3, n).unwrap().realized;
        let c1 = build_annihilation(1, n).unwrap().realized;
        assert!(back.max_abs_diff(&cd3.matmul(&c1).unwrap()).unwrap() <= 1e-12);
        assert!(h.adjoint().max_abs_diff(&back).unwrap() <= 1e-12);
    }

    #[test]
    fn same_mode_hopping_rejected() {
        assert!(hopping_operator(2, 2, 2).is_err());
        assert!(hopping_operator(1, 5, 2).is_err());
    }

    #[test]
    fn number_operator_properties() {
        let n = 2;
        for j in 1..=4 {
            let nj = number_operator(j, n).unwrap();
            assert!(nj.matmul(&nj).unwrap().max_abs_diff(&nj).unwrap() <= 1e-12);
            let cd = build_creation(j, n).unwrap().realized;
            let c = build_annihilation(j, n).unwrap().realized;
            assert!(cd.matmul(&c).unwrap().max_abs_diff(&nj).unwrap() <= 1e-12);
        }
        let n1 = number_operator(1, 1).unwrap();
        assert!((n1.trace().re - 2.0).abs() < 1e-15);
        assert!(number_operator(5, 2).is_err());
    }

    #[test]
    fn parity_commutes_with_bilinears() {
        let n = 2;
        let p = parity_operator(n).unwrap();
        for j in 1..=4 {
            for jp in 1..=4 {
                let b = if j == jp {
                    number_operator(j, n).unwrap()
                } else {
                    hopping_operator(j, jp, n).unwrap()
                };
                assert!(p.commutator(&b).unwrap().max_abs() <= 1e-12);
            }
        }
    }
}
