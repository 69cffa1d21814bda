use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Energies of one flux-tunable transmon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonSpec {
    /// `E_C = e^2 / 2C`
    pub e_c: f64,
    pub e_j: f64,
    /// Loop inductive energy `E_L = hbar^2 / (e^2 L)`.
    pub e_l: f64,
    /// External phase in radians.
    pub phi_e: f64,
}

impl TransmonSpec {
    pub fn new(e_c: f64, e_j: f64, e_l: f64, phi_e: f64) -> Result<Self> {
        let t = TransmonSpec { e_c, e_j, e_l, phi_e };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("e_c", self.e_c), ("e_j", self.e_j), ("e_l", self.e_l)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !self.phi_e.is_finite() {
            return Err(Error::domain("phi_e must be finite"));
        }
        if self.half_cos() <= f64::EPSILON {
            return Err(Error::domain(format!(
                "cos(phi_e/2) = {} <= 0: qubit splitting collapses",
                self.half_cos()
            )));
        }
        Ok(())
    }

    /// Soft limits of the transmon regime that are not errors.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.e_j / self.e_c < 20.0 {
            w.push(format!("E_J/E_C = {:.3} below 20: outside the transmon limit", self.e_j / self.e_c));
        }
        if self.e_l / self.e_j < 10.0 {
            w.push(format!("E_L/E_J = {:.3} below 10: loop inductance not small", self.e_l / self.e_j));
        }
        w
    }

    pub(crate) fn half_cos(&self) -> f64 {
        (0.5 * self.phi_e).cos()
    }

    pub(crate) fn half_sin(&self) -> f64 {
        (0.5 * self.phi_e).sin()
    }
}

/// `epsilon = sqrt(8 E_C E_J cos(phi_e / 2))`
pub fn transmon_splitting(t: &TransmonSpec) -> Result<f64> {
    t.validate()?;
    Ok((8.0 * t.e_c * t.e_j * t.half_cos()).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuffingLevels {
    /// Levels adiabatically connected to Fock states 0, 1, 2.
    pub levels: [f64; 3],
    pub epsilon: f64,
    pub truncation: usize,
}

impl DuffingLevels {
    pub fn splitting(&self) -> f64 {
        self.levels[1] - self.levels[0]
    }

    pub fn anharmonicity(&self) -> f64 {
        self.levels[2] - 2.0 * self.levels[1] + self.levels[0]
    }
}

/// Population allowed in the two highest basis states of a returned level.
const DUFFING_EDGE_POPULATION: f64 = 1e-12;

/// Lowest levels of `epsilon (a^dag a + 1/2) - 2 E_J cos(phi_e/2) - (E_C/24)(a^dag - a)^4`
/// in a basis of `n_max` oscillator states.
///
/// The quartic is unbounded below, so large truncations contain spurious
/// deep states; levels are picked by their overlap with the low Fock states
/// rather than by energy order.
pub fn duffing_levels(t: &TransmonSpec, n_max: usize) -> Result<DuffingLevels> {
    if n_max < 10 {
        return Err(Error::domain(format!("truncation {n_max} below the minimum of 10")));
    }
    let eps = transmon_splitting(t)?;
    // (a^dag - a) on two extra states so the 4th power is exact on the kept block
    let big = n_max + 2;
    let mut x = DMatrix::<f64>::zeros(big, big);
    for k in 0..big - 1 {
        let s = ((k + 1) as f64).sqrt();
        x[(k + 1, k)] = s;
        x[(k, k + 1)] = -s;
    }
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let offset = -2.0 * t.e_j * t.half_cos();
    let h = DMatrix::from_fn(n_max, n_max, |r, c| {
        let diag = if r == c { eps * (r as f64 + 0.5) } else { 0.0 };
        diag - t.e_c / 24.0 * x4[(r, c)]
    });
    let eig = SymmetricEigen::new(h);

    let mut levels = [0.0; 3];
    let mut picked = [usize::MAX; 3];
    for (m, level) in levels.iter_mut().enumerate() {
        let (best, w) = (0..n_max)
            .map(|k| (k, eig.eigenvectors[(m, k)].powi(2)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty basis");
        if w < 0.5 || picked.contains(&best) {
            return Err(Error::Diagnostic(format!(
                "cannot identify the level connected to Fock state {m} (best overlap {w:.3})"
            )));
        }
        picked[m] = best;
        *level = eig.eigenvalues[best] + offset;
        let edge: f64 = (n_max - 2..n_max).map(|r| eig.eigenvectors[(r, best)].powi(2)).sum();
        if edge > DUFFING_EDGE_POPULATION {
            return Err(Error::Accuracy(format!(
                "level {m} has population {edge:e} in the top truncation states; raise n_max"
            )));
        }
    }
    Ok(DuffingLevels {
        levels,
        epsilon: eps,
        truncation: n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn splitting_examples() {
        let t = TransmonSpec::new(0.25, 12.5, 1000.0, 0.0).unwrap();
        assert_eq!(transmon_splitting(&t).unwrap(), 5.0);
        let t = TransmonSpec::new(0.2, 10.0, 1000.0, PI / 2.0).unwrap();
        let want = 4.0 * 2f64.powf(-0.25);
        assert!((transmon_splitting(&t).unwrap() - want).abs() < 1e-14);
        assert!((want - 3.3636).abs() < 1e-4);
        let near = TransmonSpec::new(0.25, 12.5, 1000.0, PI - 1e-9).unwrap();
        assert!(transmon_splitting(&near).unwrap() < 1e-3);
    }

    #[test]
    fn collapse_rejected() {
        assert!(TransmonSpec::new(0.25, 12.5, 1000.0, PI).is_err());
        assert!(TransmonSpec::new(0.25, 12.5, 1000.0, 3.5).is_err());
        assert!(TransmonSpec::new(-0.25, 12.5, 1000.0, 0.0).is_err());
    }

    #[test]
    fn warnings_flag_regime() {
        let t = TransmonSpec::new(1.0, 10.0, 50.0, 0.0).unwrap();
        assert_eq!(t.warnings().len(), 2);
        let t = TransmonSpec::new(0.25, 12.5, 1250.0, 0.0).unwrap();
        assert!(t.warnings().is_empty());
    }

    #[test]
    fn harmonic_limit() {
        // tiny E_C at fixed epsilon: first-order shift is -E_C/2
        let e_c = 1e-9;
        let e_j = 25.0 / (8.0 * e_c);
        let t = TransmonSpec::new(e_c, e_j, 1e12, 0.0).unwrap();
        let d = duffing_levels(&t, 12).unwrap();
        assert!((d.splitting() - 5.0).abs() < 1e-8);
    }

    #[test]
    fn too_small_truncation() {
        let t = TransmonSpec::new(0.25, 12.5, 1250.0, 0.0).unwrap();
        assert!(duffing_levels(&t, 9).is_err());
        // a barely anharmonic regime spreads the levels over many Fock states
        let soft = TransmonSpec::new(1.0, 2.0, 1250.0, 0.0).unwrap();
        assert!(duffing_levels(&soft, 10).is_err());
    }
}
