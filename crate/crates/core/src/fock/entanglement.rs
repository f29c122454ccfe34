//! Partial transposition and log-negativity on the Fock side.

use crate::fock::operator::FockOperator;
use crate::linalg::hermitian_eigenvalues;
use crate::{CMatrix, Error, Result};

/// Hermiticity defects above this reject a state.
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;

/// Partial transpose over `modes`.
pub fn partial_transpose(rho: &FockOperator, modes: &[usize]) -> Result<FockOperator> {
    let basis = rho.basis();
    for &m in modes {
        basis.check_mode(m)?;
    }
    let states: Vec<Vec<usize>> = basis.states().collect();
    let n = basis.total_dim();
    let data = rho.data();
    let mut out = CMatrix::zeros(n, n);
    let mut row_t = vec![0usize; basis.mode_count()];
    let mut col_t = vec![0usize; basis.mode_count()];
    for (i, si) in states.iter().enumerate() {
        for (j, sj) in states.iter().enumerate() {
            row_t.copy_from_slice(si);
            col_t.copy_from_slice(sj);
            for &m in modes {
                row_t[m] = sj[m];
                col_t[m] = si[m];
            }
            out[(basis.flat(&row_t), basis.flat(&col_t))] = data[(i, j)];
        }
    }
    FockOperator::new(basis.clone(), out)
}

/// `log₂ ‖ρ^{T_B}‖₁` for the bipartition `modes | rest`, with `ρ` normalised by
/// its trace.
pub fn logneg_fock(rho: &FockOperator, modes: &[usize]) -> Result<f64> {
    let defect = rho.hermiticity_defect();
    if defect > HERMITICITY_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let tr = rho.trace().re;
    if tr.abs() < 1e-300 {
        return Err(Error::ZeroTrace(tr));
    }
    let pt = partial_transpose(rho, modes)?;
    let norm: f64 = hermitian_eigenvalues(pt.data()).iter().map(|l| l.abs()).sum();
    Ok((norm / tr).log2().max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::basis::BasisSpec;
    use crate::fock::states::{state_psi_lambda, thermal};
    use crate::linalg::c;

    #[test]
    fn product_states_have_zero() {
        let b = BasisSpec::uniform(2, 4).unwrap();
        assert!(logneg_fock(&thermal(&b, &[0.3, 0.8]).unwrap(), &[1]).unwrap().abs() < 1e-12);
        let vac = FockOperator::outer(&b, &[0, 0], &[0, 0]).unwrap();
        assert!(logneg_fock(&vac, &[0]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bell_state_is_one_bit() {
        let b = BasisSpec::uniform(2, 3).unwrap();
        let rho = state_psi_lambda(1.0, &b).unwrap();
        assert!((logneg_fock(&rho, &[1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi_half_matches_two_qubit_oracle() {
        // at cutoff 2 the partial transpose of (|00⟩ + λ|11⟩)/√(1+λ²) has
        // eigenvalues 1/(1+λ²), λ²/(1+λ²), ±λ/(1+λ²)
        let lam: f64 = 0.5;
        let b = BasisSpec::uniform(2, 2).unwrap();
        let rho = state_psi_lambda(lam, &b).unwrap();
        let want = ((1.0 + lam * lam + 2.0 * lam) / (1.0 + lam * lam)).log2();
        assert!((logneg_fock(&rho, &[0]).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let b = BasisSpec::uniform(2, 2).unwrap();
        let mut data = CMatrix::zeros(4, 4);
        data[(0, 0)] = c(1.0, 0.0);
        data[(3, 0)] = c(0.5, 0.0);
        let a = FockOperator::new(b, data).unwrap();
        assert!(matches!(logneg_fock(&a, &[1]), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn transpose_twice_is_identity() {
        let b = BasisSpec::uniform(3, 2).unwrap();
        let data = CMatrix::from_fn(8, 8, |i, j| c(i as f64 + 0.1 * j as f64, j as f64 - 0.3 * i as f64));
        let a = FockOperator::new(b, data).unwrap();
        let back = partial_transpose(&partial_transpose(&a, &[0, 2]).unwrap(), &[0, 2]).unwrap();
        assert_eq!(back, a);
    }
}
