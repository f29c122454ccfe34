//! Thermal-form filters `Π = ⊗_j Σ_n q_jⁿ |n⟩⟨n|` with `q = (1 − Δ)/(1 + Δ)`
//! and covariance `Γ_Π = Δ⁻¹·1`.
//!
//! `Δ = 1` is the vacuum projector, `Δ → 0` approaches the identity. The
//! identity itself has no finite covariance and is represented by a flag.

use serde::{Deserialize, Serialize};

use crate::fock::{BasisSpec, FockOperator};
use crate::{CMatrix, Complex64, Error, Result};

/// Acceptances `tr(ρΠ)` below this are treated as zero.
pub const ACCEPTANCE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    deltas: Vec<f64>,
    identity: bool,
}

impl FilterSpec {
    /// Per-mode `Δ_j ∈ (0, 1]`.
    pub fn from_deltas(deltas: &[f64]) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InvalidArgument("filter needs at least one mode".into()));
        }
        if let Some(bad) = deltas.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
            return Err(Error::InvalidArgument(format!("Δ = {bad} outside (0, 1]")));
        }
        Ok(Self { deltas: deltas.to_vec(), identity: false })
    }

    /// Uniform `Δ` on `mode_count` modes.
    pub fn from_delta(delta: f64, mode_count: usize) -> Result<Self> {
        Self::from_deltas(&vec![delta; mode_count])
    }

    /// The identity filter, the `Δ → 0` endpoint.
    pub fn identity(mode_count: usize) -> Self {
        Self { deltas: vec![0.0; mode_count], identity: true }
    }

    pub fn mode_count(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Every mode projects onto the vacuum.
    pub fn is_vacuum_projector(&self) -> bool {
        !self.identity && self.deltas.iter().all(|&d| d == 1.0)
    }

    /// Some but not all modes project onto the vacuum.
    pub fn is_partial_vacuum_projector(&self) -> bool {
        !self.identity && self.deltas.contains(&1.0) && !self.is_vacuum_projector()
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    /// `q_j = (1 − Δ_j)/(1 + Δ_j)`, equal to 1 for the identity.
    pub fn q(&self, mode: usize) -> f64 {
        if self.identity {
            1.0
        } else {
            let d = self.deltas[mode];
            (1.0 - d) / (1.0 + d)
        }
    }

    /// `Γ_Π = diag(Δ_j⁻¹)`; `None` for the identity.
    pub fn gamma_pi(&self) -> Option<CMatrix> {
        if self.identity {
            return None;
        }
        let n = 2 * self.mode_count();
        Some(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0 / self.deltas[i / 2], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `∏_j q_j^{n_j}`, with `0⁰ = 1`.
    pub fn weight(&self, occupation: &[usize]) -> f64 {
        occupation.iter().enumerate().map(|(j, &n)| self.q(j).powi(n as i32)).product()
    }

    fn check_basis(&self, basis: &BasisSpec) -> Result<()> {
        if basis.mode_count() != self.mode_count() {
            return Err(Error::DimensionMismatch(format!(
                "filter on {} modes applied to a {}-mode basis",
                self.mode_count(),
                basis.mode_count()
            )));
        }
        Ok(())
    }

    /// Diagonal weights on `basis`, maximum entry 1 (at the vacuum).
    pub fn diagonal(&self, basis: &BasisSpec) -> Result<Vec<f64>> {
        self.check_basis(basis)?;
        Ok(basis.states().map(|s| self.weight(&s)).collect())
    }

    pub fn filter_fock(&self, basis: &BasisSpec) -> Result<FockOperator> {
        let diag: Vec<Complex64> = self.diagonal(basis)?.into_iter().map(|w| Complex64::new(w, 0.0)).collect();
        FockOperator::from_diagonal(basis, &diag)
    }

    /// `Π⁻¹` with weights `q⁻ⁿ`. A vacuum-projecting mode admits only its vacuum.
    pub fn filter_inverse_fock(&self, basis: &BasisSpec) -> Result<FockOperator> {
        self.check_basis(basis)?;
        for j in 0..self.mode_count() {
            if self.q(j) == 0.0 && basis.dim(j) > 1 {
                return Err(Error::InvalidArgument(format!(
                    "inverse of the vacuum projector on mode {j} exists only on the vacuum component"
                )));
            }
        }
        let diag: Vec<Complex64> = basis.states().map(|s| Complex64::new(1.0 / self.weight(&s), 0.0)).collect();
        FockOperator::from_diagonal(basis, &diag)
    }

    /// `σ = ρΠ / tr(ρΠ)` and the acceptance `tr(ρΠ)`.
    pub fn sigma_of(&self, rho: &FockOperator) -> Result<(FockOperator, f64)> {
        let w = self.diagonal(rho.basis())?;
        let mut data = rho.data().clone();
        for (j, &wj) in w.iter().enumerate() {
            data.column_mut(j).scale_mut(wj);
        }
        let accept = (0..w.len()).map(|j| data[(j, j)]).sum::<Complex64>().re;
        if !(accept > ACCEPTANCE_TOLERANCE) {
            return Err(Error::VanishingAcceptance(accept));
        }
        let sigma = FockOperator::new(rho.basis().clone(), data / Complex64::new(accept, 0.0))?;
        Ok((sigma, accept))
    }
}
