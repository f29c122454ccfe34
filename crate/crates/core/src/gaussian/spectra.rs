//! Physicality, symplectic spectra and Gaussian log-negativity.

use serde::Serialize;

use crate::gaussian::symplectic::SymplecticForm;
use crate::linalg::{hermitian_eigenvalues, symmetric_eigen, imag_defect, real_part, symmetry_defect, to_complex};
use crate::{CMatrix, Complex64, Error, RMatrix, Result};

/// Imaginary parts of `Γ` above this make symplectic spectra undefined.
pub const COMPLEX_RESIDUE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalityReport {
    /// Smallest eigenvalue of the Hermitian matrix `Γ + iΣ`.
    pub min_eigenvalue: f64,
    /// `max |Im Γ_jk|`.
    pub reality_defect: f64,
    /// `max |Γ − Γᵀ|`.
    pub symmetry_defect: f64,
}

impl PhysicalityReport {
    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_eigenvalue >= -tol && self.reality_defect <= tol && self.symmetry_defect <= tol
    }
}

pub fn physicality_check(gamma: &CMatrix, sigma: &SymplecticForm) -> PhysicalityReport {
    let real = to_complex(&real_part(gamma));
    PhysicalityReport {
        min_eigenvalue: hermitian_eigenvalues(&(real + sigma.i_sigma()))[0],
        reality_defect: imag_defect(gamma),
        symmetry_defect: symmetry_defect(gamma),
    }
}

fn require_real(gamma: &CMatrix) -> Result<RMatrix> {
    let residue = imag_defect(gamma);
    if residue > COMPLEX_RESIDUE_TOLERANCE {
        return Err(Error::ComplexResidue(residue));
    }
    let g = real_part(gamma);
    Ok((&g + g.transpose()) * 0.5)
}

/// The `m` moduli of the eigenvalues of `iΣΓ`, ascending.
///
/// Computed as the positive spectrum of the Hermitian `i Γ^{1/2} Σ Γ^{1/2}`,
/// which is similar to `iΣΓ` and requires `Γ > 0`.
pub fn symplectic_eigenvalues(gamma: &CMatrix, sigma: &SymplecticForm) -> Result<Vec<f64>> {
    let g = require_real(gamma)?;
    let eig = symmetric_eigen(g);
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidArgument("symplectic spectrum needs a positive-definite covariance".into()));
    }
    let sqrt = &eig.eigenvectors * RMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let h = (&sqrt * sigma.matrix() * &sqrt).map(|v| Complex64::new(0.0, v));
    let ev = hermitian_eigenvalues(&h);
    let m = sigma.mode_count();
    // eigenvalues come in ± pairs; the upper half are the moduli
    Ok(ev[m..].to_vec())
}

/// `Γ` with the momentum quadratures of `modes` sign-flipped (partial transpose).
pub fn momentum_flip(gamma: &CMatrix, modes: &[usize]) -> CMatrix {
    let n = gamma.nrows();
    let sign: Vec<f64> = (0..n).map(|i| if i % 2 == 1 && modes.contains(&(i / 2)) { -1.0 } else { 1.0 }).collect();
    CMatrix::from_fn(n, n, |i, j| gamma[(i, j)] * sign[i] * sign[j])
}

/// `Σ_k max(0, −log₂ ν̃_k)` over the symplectic spectrum of the partially
/// transposed covariance.
pub fn logneg_gaussian(gamma: &CMatrix, modes: &[usize], sigma: &SymplecticForm) -> Result<f64> {
    for &m in modes {
        if m >= sigma.mode_count() {
            return Err(Error::ModeOutOfRange { mode: m, mode_count: sigma.mode_count() });
        }
    }
    let nu = symplectic_eigenvalues(&momentum_flip(gamma, modes), sigma)?;
    Ok(nu.iter().map(|&v| (-v.log2()).max(0.0)).sum())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::c;

    /// Two-mode squeezed vacuum with `λ = tanh r`.
    pub(crate) fn tmsv(lambda: f64) -> CMatrix {
        let ch = (1.0 + lambda * lambda) / (1.0 - lambda * lambda);
        let sh = 2.0 * lambda / (1.0 - lambda * lambda);
        #[rustfmt::skip]
        let v = [
            ch, 0.0, sh, 0.0,
            0.0, ch, 0.0, -sh,
            sh, 0.0, ch, 0.0,
            0.0, -sh, 0.0, ch,
        ];
        CMatrix::from_row_slice(4, 4, &v.map(|x| c(x, 0.0)))
    }

    #[test]
    fn physicality_examples() {
        let s = SymplecticForm::new(2);
        assert!(physicality_check(&CMatrix::identity(4, 4), &s).min_eigenvalue.abs() < 1e-14);
        assert!(physicality_check(&(CMatrix::identity(4, 4) * c(0.5, 0.0)), &s).min_eigenvalue < -0.4);
        assert!(physicality_check(&tmsv(0.5), &s).min_eigenvalue >= -1e-12);
    }

    #[test]
    fn spectra_examples() {
        let s2 = SymplecticForm::new(2);
        for v in symplectic_eigenvalues(&CMatrix::identity(4, 4), &s2).unwrap() {
            assert!((v - 1.0).abs() < 1e-12);
        }
        let s1 = SymplecticForm::new(1);
        let nu = symplectic_eigenvalues(&(CMatrix::identity(2, 2) * c(3.0, 0.0)), &s1).unwrap();
        assert!((nu[0] - 3.0).abs() < 1e-12);
        let lam: f64 = 0.5;
        let r = lam.atanh();
        let nu = symplectic_eigenvalues(&momentum_flip(&tmsv(lam), &[1]), &s2).unwrap();
        assert!((nu[0] - (-2.0 * r).exp()).abs() < 1e-12);
        assert!((nu[1] - (2.0 * r).exp()).abs() < 1e-12);
        let mut complex = CMatrix::identity(2, 2);
        complex[(0, 1)] = c(0.0, 0.1);
        complex[(1, 0)] = c(0.0, 0.1);
        assert!(matches!(symplectic_eigenvalues(&complex, &s1), Err(Error::ComplexResidue(_))));
    }

    #[test]
    fn tmsv_logneg_closed_form() {
        let s = SymplecticForm::new(2);
        for i in 1..10 {
            let lam = i as f64 / 10.0;
            let want = ((1.0 + lam) / (1.0 - lam)).log2();
            assert!((logneg_gaussian(&tmsv(lam), &[1], &s).unwrap() - want).abs() < 1e-9);
            assert!((logneg_gaussian(&tmsv(lam), &[0], &s).unwrap() - want).abs() < 1e-9);
        }
        assert!(logneg_gaussian(&CMatrix::identity(4, 4), &[0], &s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn tmsv_logneg_matches_fock() {
        use crate::fock::{logneg_fock, schmidt_diagonal, BasisSpec};
        let lam: f64 = 0.5;
        let d = 25;
        let coeffs: Vec<f64> = (0..d).map(|n| lam.powi(n as i32)).collect();
        let rho = schmidt_diagonal(&coeffs, &BasisSpec::uniform(2, d).unwrap()).unwrap();
        let fock = logneg_fock(&rho, &[1]).unwrap();
        let s = SymplecticForm::new(2);
        // the truncated Schmidt sum misses a relative λ^25 of its weight
        assert!((fock - logneg_gaussian(&tmsv(lam), &[1], &s).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn physical_spectra_at_least_one() {
        use proptest::prelude::*;
        let s = SymplecticForm::new(2);
        proptest!(|(lam in 0.0f64..0.95, n0 in 0.0f64..3.0, n1 in 0.0f64..3.0)| {
            // thermal noise added to a two-mode squeezed state stays physical
            let mut g = tmsv(lam);
            for i in 0..2 { g[(i, i)] += c(2.0 * n0, 0.0); }
            for i in 2..4 { g[(i, i)] += c(2.0 * n1, 0.0); }
            for v in symplectic_eigenvalues(&g, &s).unwrap() {
                prop_assert!(v >= 1.0 - 1e-9);
            }
        });
    }
}
