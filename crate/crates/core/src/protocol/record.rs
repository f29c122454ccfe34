//! Per-round ledger.

use serde::Serialize;

use crate::filter::FilterSpec;
use crate::fock::{quadrature_moments, FockOperator, QuadratureMoments};
use crate::linalg::hermitian_eigenvalues;
use crate::Result;

#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub round: usize,
    /// `ρ_n` on the working basis, unit trace.
    pub state: FockOperator,
    /// Normalised output of the round before re-truncation, on the expanded
    /// basis. `None` for the input record.
    pub raw_state: Option<FockOperator>,
    /// `tr[U(ρ⊗ρ)U†(1⊗Π)]` of the round that produced `ρ_n` (1 for the input).
    pub success_prob: f64,
    /// `2ⁿ`.
    pub cumulative_copies: u128,
    /// Trace removed by re-truncation, relative to the untruncated output.
    pub leakage: f64,
    /// `tr(ρ_n Π)`.
    pub acceptance: f64,
    pub rho_moments: QuadratureMoments,
    pub sigma_moments: QuadratureMoments,
    pub diagnostics: StateDiagnostics,
}

/// Hermiticity, positivity and normalisation of `ρ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDiagnostics {
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub trace_defect: f64,
}

impl StateDiagnostics {
    pub fn of(rho: &FockOperator) -> Self {
        Self {
            hermiticity_defect: rho.hermiticity_defect(),
            min_eigenvalue: hermitian_eigenvalues(rho.data())[0],
            trace_defect: (rho.trace() - 1.0).norm(),
        }
    }

    /// Violations of: Hermitian to 1e−10, positive to −1e−10, trace 1 to 1e−12.
    /// Non-finite values count as violations.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.hermiticity_defect <= 1e-10) {
            v.push(format!("hermiticity defect {:e}", self.hermiticity_defect));
        }
        if !(self.min_eigenvalue >= -1e-10) {
            v.push(format!("negative eigenvalue {:e}", self.min_eigenvalue));
        }
        if !(self.trace_defect <= 1e-12) {
            v.push(format!("trace defect {:e}", self.trace_defect));
        }
        v
    }
}

impl IterationRecord {
    pub(crate) fn build(
        round: usize,
        state: FockOperator,
        raw_state: Option<FockOperator>,
        success_prob: f64,
        leakage: f64,
        filter: &FilterSpec,
    ) -> Result<Self> {
        let (sigma, acceptance) = filter.sigma_of(&state)?;
        Ok(Self {
            round,
            rho_moments: quadrature_moments(&state)?,
            sigma_moments: quadrature_moments(&sigma)?,
            diagnostics: StateDiagnostics::of(&state),
            raw_state,
            success_prob,
            cumulative_copies: 1u128 << round.min(127),
            leakage,
            acceptance,
            state,
        })
    }

    /// Input record: round 0, no leakage.
    pub fn initial(state: FockOperator, filter: &FilterSpec) -> Result<Self> {
        Self::build(0, state, None, 1.0, 0.0, filter)
    }

    /// `σ_n = ρ_nΠ / tr(ρ_nΠ)`.
    pub fn sigma(&self, filter: &FilterSpec) -> Result<FockOperator> {
        Ok(filter.sigma_of(&self.state)?.0)
    }

    /// `σ` built from the untruncated output, when there is one.
    pub fn raw_sigma(&self, filter: &FilterSpec) -> Result<Option<FockOperator>> {
        self.raw_state.as_ref().map(|r| Ok(filter.sigma_of(r)?.0)).transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport {
    pub per_round: Vec<f64>,
    pub total: f64,
    pub max: f64,
    pub bound: f64,
    /// Rounds whose leakage exceeds `bound`.
    pub flagged: Vec<usize>,
}

pub fn leakage_report(records: &[IterationRecord], bound: f64) -> LeakageReport {
    let per_round: Vec<f64> = records.iter().map(|r| r.leakage).collect();
    LeakageReport {
        total: per_round.iter().sum(),
        max: per_round.iter().copied().fold(0.0, f64::max),
        flagged: records.iter().filter(|r| r.leakage > bound).map(|r| r.round).collect(),
        per_round,
        bound,
    }
}
