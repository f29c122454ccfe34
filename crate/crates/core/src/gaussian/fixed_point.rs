//! Products of Gaussian operators and the protocol fixed point.

use serde::Serialize;

use crate::gaussian::ladder::{covariance_from_ladder, ladder_from_covariance, LadderMoments};
use crate::gaussian::spectra::{physicality_check, PhysicalityReport};
use crate::gaussian::symplectic::SymplecticForm;
use crate::linalg::{guarded_inverse, guarded_solve, hermitian_eigenvalues, max_abs, real_part, singular_values, to_complex, DEFAULT_MAX_CONDITION};
use crate::{CMatrix, Complex64, Error, Result};

/// Tolerance on `⟨a†a⟩_σ`, `⟨a†a†⟩_σ` for the vacuum-filter route.
const VACUUM_SUPPORT_TOLERANCE: f64 = 1e-8;

fn symmetrize(m: CMatrix) -> CMatrix {
    (&m + m.transpose()) * Complex64::new(0.5, 0.0)
}

/// Covariance of the product `AB`:
/// `Γ_AB = Γ_B − (Γ_B + iΣ)(Γ_A + Γ_B)⁻¹(Γ_B − iΣ)`.
pub fn gaussian_product_cov(gamma_a: &CMatrix, gamma_b: &CMatrix, sigma: &SymplecticForm) -> Result<CMatrix> {
    let is = sigma.i_sigma();
    let x = guarded_solve(&(gamma_a + gamma_b), &(gamma_b - &is), DEFAULT_MAX_CONDITION, "Γ_A + Γ_B in operator product")?;
    Ok(symmetrize(gamma_b - (gamma_b + &is) * x))
}

/// Fixed-point covariance with the verdict on positivity and physicality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointCov {
    #[serde(skip)]
    pub gamma: CMatrix,
    /// Condition number of the inverted matrix (`1` on the vacuum-filter route).
    pub condition: f64,
    /// Smallest eigenvalue of `Re Γ`.
    pub min_eigenvalue: f64,
    pub physicality: PhysicalityReport,
}

impl FixedPointCov {
    pub(crate) fn assess(gamma: CMatrix, condition: f64, sigma: &SymplecticForm) -> Self {
        let min_eigenvalue = hermitian_eigenvalues(&to_complex(&real_part(&gamma)))[0];
        let physicality = physicality_check(&gamma, sigma);
        Self { gamma, condition, min_eigenvalue, physicality }
    }

    /// Real symmetric, positive definite and `Γ + iΣ ⪰ 0`, within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.min_eigenvalue > 0.0 && self.physicality.is_physical(tol)
    }
}

/// `Γ_ρ∞ = Γ_σ + (Γ_σ − iΣ)(Γ_Π − Γ_σ)⁻¹(Γ_σ + iΣ)`.
///
/// Algebraically equal to `(Γ_Π − iΣ)(Γ_Π − Γ_σ)⁻¹(Γ_Π + iΣ) − Γ_Π` but avoids
/// the cancellation between two terms of size `Γ_Π` for weak filters.
pub fn fixed_point_cov(gamma_sigma: &CMatrix, gamma_pi: &CMatrix, sigma: &SymplecticForm) -> Result<FixedPointCov> {
    let is = sigma.i_sigma();
    let (condition, solved) = fixed_point_solve(gamma_sigma, gamma_pi, &(gamma_sigma + &is))?;
    let gamma = symmetrize(gamma_sigma + (gamma_sigma - &is) * solved);
    Ok(FixedPointCov::assess(gamma, condition, sigma))
}

/// The same map written as `(Γ_Π − iΣ)(Γ_Π − Γ_σ)⁻¹(Γ_Π + iΣ) − Γ_Π`.
pub fn fixed_point_cov_direct(gamma_sigma: &CMatrix, gamma_pi: &CMatrix, sigma: &SymplecticForm) -> Result<FixedPointCov> {
    let is = sigma.i_sigma();
    let (condition, solved) = fixed_point_solve(gamma_sigma, gamma_pi, &(gamma_pi + &is))?;
    let gamma = symmetrize((gamma_pi - &is) * solved - gamma_pi);
    Ok(FixedPointCov::assess(gamma, condition, sigma))
}

/// `(Γ_Π − Γ_σ)⁻¹ rhs` and the condition number of `Γ_Π − Γ_σ`.
fn fixed_point_solve(gamma_sigma: &CMatrix, gamma_pi: &CMatrix, rhs: &CMatrix) -> Result<(f64, CMatrix)> {
    let diff = gamma_pi - gamma_sigma;
    let s = singular_values(&diff);
    let condition = match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    match guarded_solve(&diff, rhs, DEFAULT_MAX_CONDITION, "Γ_Π − Γ_σ") {
        Ok(x) => Ok((condition, x)),
        Err(_) => Err(Error::NoFixedPoint(format!("Γ_Π − Γ_σ is singular (condition number {condition:e})"))),
    }
}

/// Fixed point for the vacuum projector on every mode, where `Γ_Π − Γ_σ` is
/// singular.
///
/// Here `σ = |φ⟩⟨0|/⟨0|φ⟩`, so `⟨a†a⟩_σ = ⟨a†a†⟩_σ = 0` and the limit is the pure
/// state `exp(½ a†Z a†)|0⟩` with `Z = ⟨a aᵀ⟩_σ`. Its moments are
/// `⟨a aᵀ⟩ = (1 − ZZ̄)⁻¹Z` and `⟨a_j† a_k⟩ = [Z̄(1 − ZZ̄)⁻¹Z]_jk`.
pub fn vacuum_filter_fixed_point_cov(gamma_sigma: &CMatrix, sigma: &SymplecticForm) -> Result<FixedPointCov> {
    let l = ladder_from_covariance(gamma_sigma, sigma);
    let scale = max_abs(gamma_sigma).max(1.0);
    let stray = max_abs(&l.cc).max(max_abs(&l.ca));
    if stray > VACUUM_SUPPORT_TOLERANCE * scale {
        return Err(Error::NoFixedPoint(format!(
            "vacuum filter requires ⟨a†a⟩_σ = ⟨a†a†⟩_σ = 0, found {stray:e}"
        )));
    }
    let z = l.aa;
    let m = z.nrows();
    let zbar = z.map(|v| v.conj());
    let norm = singular_values(&z).first().copied().unwrap_or(0.0);
    if norm >= 1.0 {
        return Err(Error::NoFixedPoint(format!("pure limit is not normalisable (‖Z‖ = {norm})")));
    }
    let inv = guarded_inverse(&(CMatrix::identity(m, m) - &z * &zbar), DEFAULT_MAX_CONDITION, "1 − ZZ̄")?;
    let aa = &inv * &z;
    let ca = &zbar * &aa;
    let cc = aa.map(|v| v.conj());
    let gamma = symmetrize(covariance_from_ladder(&LadderMoments { aa, cc, ca }));
    Ok(FixedPointCov::assess(gamma, 1.0, sigma))
}
