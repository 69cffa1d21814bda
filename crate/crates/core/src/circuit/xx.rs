use nalgebra::DMatrix;

use super::zz::CouplerSpec;
use crate::error::{Error, Result};

/// `g^x = (1/4) (C^x / C) eps`
pub fn gx_from_circuit(epsilon: f64, c: &CouplerSpec) -> Result<f64> {
    check_cx(c.cx_ratio)?;
    check_energy(epsilon)?;
    Ok(0.25 * c.cx_ratio * epsilon)
}

/// Bond coupling between neighbours of different splitting,
/// `g^x_j = (lambda / 2) sqrt(eps_j eps_{j+1})` with `lambda = C^x / 2C`.
pub fn gx_bond(eps_left: f64, eps_right: f64, cx_ratio: f64) -> Result<f64> {
    check_cx(cx_ratio)?;
    check_energy(eps_left)?;
    check_energy(eps_right)?;
    let lambda = 0.5 * cx_ratio;
    Ok(0.5 * lambda * (eps_left * eps_right).sqrt())
}

fn check_cx(cx: f64) -> Result<()> {
    if cx.is_finite() && cx >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("cx_ratio must be non-negative, got {cx}")))
    }
}

fn check_energy(e: f64) -> Result<()> {
    if e.is_finite() && e >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("qubit splitting must be non-negative, got {e}")))
    }
}

/// Tridiagonal `A_lambda`: ones on the diagonal, `lambda` beside it.
pub fn capacitance_matrix(n: usize, lambda: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |r, c| match r.abs_diff(c) {
        0 => 1.0,
        1 => lambda,
        _ => 0.0,
    })
}

/// `max |A_lambda^{-1} - A_{-lambda}|`
pub fn capacitance_matrix_check(n: usize, lambda: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("matrix size must be positive"));
    }
    if !(lambda.is_finite() && lambda.abs() < 0.5) {
        return Err(Error::domain(format!("|lambda| must be below 1/2, got {lambda}")));
    }
    let inv = capacitance_matrix(n, lambda)
        .try_inverse()
        .ok_or_else(|| Error::Diagnostic("capacitance matrix is singular".into()))?;
    Ok((inv - capacitance_matrix(n, -lambda)).amax())
}

/// Log-log slope of the inverse error between two values of `lambda`.
pub fn capacitance_slope(n: usize, lambda_a: f64, lambda_b: f64) -> Result<f64> {
    let ea = capacitance_matrix_check(n, lambda_a)?;
    let eb = capacitance_matrix_check(n, lambda_b)?;
    if ea == 0.0 || eb == 0.0 || lambda_a.abs() == lambda_b.abs() {
        return Err(Error::domain("slope needs two distinct nonzero lambdas"));
    }
    Ok((ea / eb).ln() / (lambda_a.abs() / lambda_b.abs()).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_coupling() {
        let c = CouplerSpec::new(0.5, 0.04).unwrap();
        assert!((gx_from_circuit(5.0, &c).unwrap() - 0.05).abs() < 1e-16);
        let zero = CouplerSpec::new(0.5, 0.0).unwrap();
        assert_eq!(gx_from_circuit(5.0, &zero).unwrap(), 0.0);
        for eps in [0.3, 5.0, 17.0] {
            let a = gx_bond(eps, eps, 0.04).unwrap();
            let b = gx_from_circuit(eps, &c).unwrap();
            assert!((a - b).abs() <= 1e-15 * b);
        }
        assert!(gx_bond(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn inverse_error() {
        assert_eq!(capacitance_matrix_check(6, 0.0).unwrap(), 0.0);
        let e = capacitance_matrix_check(2, 0.1).unwrap();
        assert!((e - 0.01 / 0.99).abs() < 1e-15);
        let slope = capacitance_slope(6, 0.01, 0.001).unwrap();
        assert!((slope - 2.0).abs() < 0.1, "{slope}");
        assert!(capacitance_matrix_check(4, 0.5).is_err());
    }
}
