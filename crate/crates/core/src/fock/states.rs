//! Input state constructors.

use crate::fock::basis::BasisSpec;
use crate::fock::operator::FockOperator;
use crate::{CVector, Complex64, Error, Result};

/// Normalised pure state with the given Fock amplitudes.
pub fn state_from_amplitudes(basis: &BasisSpec, amplitudes: &[(Vec<usize>, Complex64)]) -> Result<FockOperator> {
    let mut ket = CVector::zeros(basis.total_dim());
    for (multi, amp) in amplitudes {
        if multi.len() != basis.mode_count() {
            return Err(Error::DimensionMismatch(format!("amplitude index {multi:?}")));
        }
        let i = basis.try_flat(multi).ok_or_else(|| {
            Error::InvalidArgument(format!("amplitude on {multi:?} lies outside cutoff {:?}", basis.dims()))
        })?;
        ket[i] += *amp;
    }
    let norm = ket.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidArgument("amplitudes have zero or non-finite norm".into()));
    }
    FockOperator::from_ket(basis, &(ket / Complex64::new(norm, 0.0)))
}

fn real_amps(list: Vec<(Vec<usize>, f64)>) -> Vec<(Vec<usize>, Complex64)> {
    list.into_iter().map(|(k, v)| (k, Complex64::new(v, 0.0))).collect()
}

fn require(basis: &BasisSpec, modes: usize, min_dim: usize, name: &str) -> Result<()> {
    if basis.mode_count() != modes {
        return Err(Error::DimensionMismatch(format!("{name} needs {modes} modes, basis has {}", basis.mode_count())));
    }
    if basis.dims().iter().any(|&d| d < min_dim) {
        return Err(Error::InvalidArgument(format!("{name} needs cutoff dimension at least {min_dim}")));
    }
    Ok(())
}

/// `|Ψ_λ⟩ ∝ |0,0⟩ + λ|1,1⟩`.
pub fn state_psi_lambda(lambda: f64, basis: &BasisSpec) -> Result<FockOperator> {
    require(basis, 2, 2, "Psi")?;
    state_from_amplitudes(basis, &real_amps(vec![(vec![0, 0], 1.0), (vec![1, 1], lambda)]))
}

/// `|Φ_μ⟩ ∝ |0,0,0⟩ + μ(|1,1,0⟩ + |1,0,1⟩ + |0,1,1⟩)`.
pub fn state_phi_mu(mu: f64, basis: &BasisSpec) -> Result<FockOperator> {
    require(basis, 3, 2, "Phi")?;
    state_from_amplitudes(
        basis,
        &real_amps(vec![
            (vec![0, 0, 0], 1.0),
            (vec![1, 1, 0], mu),
            (vec![1, 0, 1], mu),
            (vec![0, 1, 1], mu),
        ]),
    )
}

/// Two-mode `Σ_n c_n |n, n⟩`, normalised.
pub fn schmidt_diagonal(coefficients: &[f64], basis: &BasisSpec) -> Result<FockOperator> {
    require(basis, 2, coefficients.len(), "Schmidt-diagonal state")?;
    state_from_amplitudes(basis, &real_amps(coefficients.iter().enumerate().map(|(n, &c)| (vec![n, n], c)).collect()))
}

pub fn vacuum(basis: &BasisSpec) -> FockOperator {
    let zero = vec![0; basis.mode_count()];
    FockOperator::outer(basis, &zero, &zero).expect("vacuum lies in every basis")
}

/// Product of thermal states with mean photon numbers `nbar`, truncated and
/// renormalised.
pub fn thermal(basis: &BasisSpec, nbar: &[f64]) -> Result<FockOperator> {
    if nbar.len() != basis.mode_count() {
        return Err(Error::DimensionMismatch("one mean photon number per mode".into()));
    }
    if nbar.iter().any(|&n| !(n >= 0.0 && n.is_finite())) {
        return Err(Error::InvalidArgument("mean photon numbers must be finite and nonnegative".into()));
    }
    let diag: Vec<Complex64> = basis
        .states()
        .map(|s| {
            let w: f64 = s.iter().zip(nbar).map(|(&k, &n)| (n / (1.0 + n)).powi(k as i32) / (1.0 + n)).product();
            Complex64::new(w, 0.0)
        })
        .collect();
    let total: f64 = diag.iter().map(|z| z.re).sum();
    let diag: Vec<Complex64> = diag.into_iter().map(|z| z / total).collect();
    FockOperator::from_diagonal(basis, &diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_construction() {
        let b = BasisSpec::uniform(2, 3).unwrap();
        let zero = state_psi_lambda(0.0, &b).unwrap();
        assert_eq!(zero, vacuum(&b));
        for lam in [0.1, 0.5, 2.0] {
            let rho = state_psi_lambda(lam, &b).unwrap();
            assert!((rho.trace().re - 1.0).abs() < 1e-14);
            let ratio = rho.element(&[1, 1], &[0, 0]) / rho.element(&[0, 0], &[0, 0]);
            assert!((ratio.re - lam).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_trace_and_cutoff() {
        let b = BasisSpec::uniform(3, 2).unwrap();
        assert!((state_phi_mu(0.3, &b).unwrap().trace().re - 1.0).abs() < 1e-14);
        assert!(state_phi_mu(0.3, &BasisSpec::uniform(3, 1).unwrap()).is_err());
        assert!(state_psi_lambda(0.3, &b).is_err());
    }

    #[test]
    fn reduced_bell_state() {
        let b = BasisSpec::uniform(2, 2).unwrap();
        let red = state_psi_lambda(1.0, &b).unwrap().partial_trace(&[0]).unwrap();
        assert!((red.data()[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((red.data()[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!(red.data()[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn amplitudes_outside_cutoff_rejected() {
        let b = BasisSpec::uniform(2, 2).unwrap();
        assert!(schmidt_diagonal(&[1.0, 0.1, 6.0], &b).is_err());
    }
}
