use crate::fock::QuadratureMoments;
use crate::gaussian::spectra::{physicality_check, PhysicalityReport};
use crate::gaussian::symplectic::SymplecticForm;
use crate::linalg::{max_abs, symmetry_defect};
use crate::{CMatrix, CVector, Complex64, Error, Result};

/// Relative asymmetry allowed when constructing directly.
const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Relative asymmetry absorbed when building from measured Fock moments.
const MEASURED_SYMMETRY_TOLERANCE: f64 = 1e-8;

/// Operator with characteristic function `scale · exp(i r·d − rᵀΓr/4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianOperator {
    scale: Complex64,
    d: CVector,
    gamma: CMatrix,
}

fn check_symmetric(gamma: &CMatrix, tol: f64) -> Result<()> {
    let defect = symmetry_defect(gamma);
    if defect > tol * max_abs(gamma).max(1.0) {
        return Err(Error::Asymmetric(defect));
    }
    Ok(())
}

impl GaussianOperator {
    pub fn new(scale: Complex64, d: CVector, gamma: CMatrix) -> Result<Self> {
        if gamma.nrows() != gamma.ncols() || gamma.nrows() % 2 != 0 || d.len() != gamma.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "Gaussian with d of length {} and {}x{} covariance",
                d.len(),
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        check_symmetric(&gamma, SYMMETRY_TOLERANCE)?;
        Ok(Self { scale, d, gamma })
    }

    /// Zero-mean, unit-scale operator.
    pub fn centered(gamma: CMatrix) -> Result<Self> {
        let n = gamma.nrows();
        Self::new(Complex64::new(1.0, 0.0), CVector::zeros(n), gamma)
    }

    /// Normalised Gaussian with the measured moments; `Γ` is symmetrised and
    /// asymmetry beyond `1e−8` (relative) is an error.
    pub fn from_moments(m: &QuadratureMoments) -> Result<Self> {
        check_symmetric(&m.gamma, MEASURED_SYMMETRY_TOLERANCE)?;
        let gamma = (&m.gamma + m.gamma.transpose()) * Complex64::new(0.5, 0.0);
        Self::new(Complex64::new(1.0, 0.0), m.d.clone(), gamma)
    }

    pub fn mode_count(&self) -> usize {
        self.gamma.nrows() / 2
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn d(&self) -> &CVector {
        &self.d
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    pub fn physicality(&self) -> PhysicalityReport {
        physicality_check(&self.gamma, &SymplecticForm::new(self.mode_count()))
    }

    /// Real `Γ` with `Γ + iΣ ⪰ 0`, within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.physicality().is_physical(tol)
    }
}

pub fn gaussian_char(g: &GaussianOperator, r: &[f64]) -> Result<Complex64> {
    let n = g.gamma.nrows();
    if r.len() != n {
        return Err(Error::DimensionMismatch(format!("χ argument has {} components, expected {n}", r.len())));
    }
    let mut lin = Complex64::new(0.0, 0.0);
    let mut quad = Complex64::new(0.0, 0.0);
    for j in 0..n {
        lin += g.d[j] * r[j];
        for k in 0..n {
            quad += g.gamma[(j, k)] * r[j] * r[k];
        }
    }
    Ok(g.scale * (Complex64::new(0.0, 1.0) * lin - quad / 4.0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{char_fn, thermal, BasisSpec};
    use crate::linalg::c;

    #[test]
    fn vacuum_values() {
        let g = GaussianOperator::centered(CMatrix::identity(2, 2)).unwrap();
        assert!((gaussian_char(&g, &[0.0, 0.0]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let r = [2.0f64.sqrt(), 2.0f64.sqrt()];
        assert!((gaussian_char(&g, &r).unwrap() - c((-1.0f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn thermal_matches_fock_char_fn() {
        let b = BasisSpec::uniform(1, 40).unwrap();
        let rho = thermal(&b, &[1.0]).unwrap();
        let g = GaussianOperator::centered(CMatrix::identity(2, 2) * c(3.0, 0.0)).unwrap();
        for i in 0..20 {
            let r = [-1.9 + 0.2 * i as f64, 1.0 - 0.1 * i as f64];
            let f = char_fn(&rho, &r).unwrap();
            // thermal truncation at 40 leaves weight (1/2)^40 outside
            assert!((f - gaussian_char(&g, &r).unwrap()).norm() < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn asymmetric_rejected() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(GaussianOperator::centered(m), Err(Error::Asymmetric(_))));
    }
}
