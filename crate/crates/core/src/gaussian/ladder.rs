//! Conversion between covariance matrices and second moments of ladder
//! operators, with `a_j = (X_j + iP_j)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::gaussian::symplectic::SymplecticForm;
use crate::{CMatrix, CVector, Complex64};

/// Central second moments `⟨a_j a_k⟩`, `⟨a_j† a_k†⟩`, `⟨a_j† a_k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderMoments {
    pub aa: CMatrix,
    pub cc: CMatrix,
    pub ca: CMatrix,
}

/// `R_r = u_r a + v_r a†` on mode `r / 2`.
pub(crate) fn quadrature_coefficients(index: usize) -> (Complex64, Complex64) {
    let s = FRAC_1_SQRT_2;
    if index % 2 == 0 {
        (Complex64::new(s, 0.0), Complex64::new(s, 0.0))
    } else {
        (Complex64::new(0.0, -s), Complex64::new(0.0, s))
    }
}

/// Quadrature-coordinate vector `c` with `a_j = cᵀR` (or `a_j†` when `dagger`).
pub(crate) fn ladder_vector(mode_count: usize, mode: usize, dagger: bool) -> CVector {
    let mut c = CVector::zeros(2 * mode_count);
    let s = FRAC_1_SQRT_2;
    c[2 * mode] = Complex64::new(s, 0.0);
    c[2 * mode + 1] = Complex64::new(0.0, if dagger { -s } else { s });
    c
}

/// `Γ_rs = ⟨{R_r, R_s}⟩` expanded in normally ordered central moments.
pub fn covariance_from_ladder(l: &LadderMoments) -> CMatrix {
    let n = 2 * l.aa.nrows();
    CMatrix::from_fn(n, n, |r, s| {
        let (ur, vr) = quadrature_coefficients(r);
        let (us, vs) = quadrature_coefficients(s);
        let (j, k) = (r / 2, s / 2);
        let mut v = 2.0 * ur * us * l.aa[(j, k)]
            + 2.0 * vr * vs * l.cc[(j, k)]
            + 2.0 * ur * vs * l.ca[(k, j)]
            + 2.0 * vr * us * l.ca[(j, k)];
        if j == k {
            v += ur * vs + us * vr;
        }
        v
    })
}

/// Ordered pair expectation `⟨L L'⟩ = cᵀ (Γ + iΣ) c' / 2` for zero-mean operators.
pub(crate) fn pair_expectation(gamma_plus: &CMatrix, c: &CVector, c2: &CVector) -> Complex64 {
    (c.transpose() * gamma_plus * c2)[(0, 0)] * 0.5
}

pub fn ladder_from_covariance(gamma: &CMatrix, sigma: &SymplecticForm) -> LadderMoments {
    let m = gamma.nrows() / 2;
    let gp = gamma + sigma.i_sigma();
    let a: Vec<CVector> = (0..m).map(|j| ladder_vector(m, j, false)).collect();
    let c: Vec<CVector> = (0..m).map(|j| ladder_vector(m, j, true)).collect();
    LadderMoments {
        aa: CMatrix::from_fn(m, m, |j, k| pair_expectation(&gp, &a[j], &a[k])),
        cc: CMatrix::from_fn(m, m, |j, k| pair_expectation(&gp, &c[j], &c[k])),
        ca: CMatrix::from_fn(m, m, |j, k| pair_expectation(&gp, &c[j], &a[k])),
    }
}
