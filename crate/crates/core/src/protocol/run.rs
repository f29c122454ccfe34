//! Protocol configuration and multi-round runs.

use serde::{Deserialize, Serialize};

use crate::filter::FilterSpec;
use crate::fock::{state_from_amplitudes, state_phi_mu, state_psi_lambda, BasisSpec, FockOperator};
use crate::protocol::engine::{contract, Window};
use crate::protocol::record::IterationRecord;
use crate::{Complex64, Error, Result};

/// How the two-copy space is truncated during a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeadroomPolicy {
    /// Each party's pair is embedded at cutoff `2(d−1)`, so the beam splitter
    /// is exact and only the final re-truncation to `d` loses weight.
    #[default]
    ExactPair,
    /// Both copies stay below `d`: the beam splitter is projected onto the
    /// truncated pair space and copy 2 is traced over `0..d` only.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Abort when a round's leakage exceeds this.
    pub leakage_bound: f64,
    /// Abort when `tr(ρΠ)` falls below this.
    pub min_acceptance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { leakage_bound: 1e-4, min_acceptance: 1e-14 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub index: Vec<usize>,
    pub value: f64,
    #[serde(default)]
    pub imag: f64,
}

/// Input state family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// `|0,0⟩ + λ|1,1⟩`.
    PsiLambda { lambda: f64 },
    /// `|0,0,0⟩ + μ(|1,1,0⟩ + |1,0,1⟩ + |0,1,1⟩)`.
    PhiMu { mu: f64 },
    /// Explicit amplitudes on Fock multi-indices.
    Custom { modes: usize, amplitudes: Vec<Amplitude> },
}

impl StateSpec {
    pub fn mode_count(&self) -> usize {
        match self {
            Self::PsiLambda { .. } => 2,
            Self::PhiMu { .. } => 3,
            Self::Custom { modes, .. } => *modes,
        }
    }

    pub fn build(&self, basis: &BasisSpec) -> Result<FockOperator> {
        match self {
            Self::PsiLambda { lambda } => state_psi_lambda(*lambda, basis),
            Self::PhiMu { mu } => state_phi_mu(*mu, basis),
            Self::Custom { amplitudes, .. } => {
                let amps: Vec<(Vec<usize>, Complex64)> =
                    amplitudes.iter().map(|a| (a.index.clone(), Complex64::new(a.value, a.imag))).collect();
                state_from_amplitudes(basis, &amps)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub state: StateSpec,
    pub filter: FilterSpec,
    pub rounds: usize,
    /// Per-mode dimension `d` (photon numbers `0..d`).
    pub cutoff: usize,
    pub policy: HeadroomPolicy,
    pub tolerances: Tolerances,
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cutoff < 2 {
            return Err(Error::Config(format!("cutoff must be at least 2, got {}", self.cutoff)));
        }
        if self.filter.mode_count() != self.state.mode_count() {
            return Err(Error::Config(format!(
                "filter acts on {} modes but the state has {}",
                self.filter.mode_count(),
                self.state.mode_count()
            )));
        }
        if !(self.tolerances.leakage_bound >= 0.0) || !(self.tolerances.min_acceptance >= 0.0) {
            return Err(Error::Config("tolerances must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<BasisSpec> {
        BasisSpec::uniform(self.state.mode_count(), self.cutoff)
    }
}

/// A round that could not be completed.
#[derive(Debug, Clone)]
pub struct RoundFailure {
    pub round: usize,
    pub error: Error,
    /// The offending record when the round itself finished but broke a bound.
    pub record: Option<Box<IterationRecord>>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Records `0..=n` of all completed rounds.
    pub records: Vec<IterationRecord>,
    pub failure: Option<RoundFailure>,
}

impl RunOutcome {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

/// One round from `ρ`, unchecked against the leakage bound.
pub(crate) fn step(
    rho: &FockOperator,
    filter: &FilterSpec,
    policy: HeadroomPolicy,
    tolerances: &Tolerances,
    round: usize,
) -> Result<IterationRecord> {
    let basis = rho.basis();
    let (_, accept) = filter.sigma_of(rho)?;
    if accept < tolerances.min_acceptance {
        return Err(Error::VanishingAcceptance(accept));
    }
    let exact: Vec<Window> = basis.dims().iter().map(|&d| Window::exact(d)).collect();
    let raw = contract(rho, filter, &exact)?;
    let z = raw.trace().re;
    if !(z > tolerances.min_acceptance) {
        return Err(Error::VanishingAcceptance(z));
    }
    let raw = raw.scale(Complex64::new(1.0 / z, 0.0));
    let (kept, success_prob, leakage) = match policy {
        HeadroomPolicy::ExactPair => {
            let (kept, dropped) = raw.reembed(basis)?;
            (kept, z, dropped.max(0.0))
        }
        HeadroomPolicy::Fixed => {
            let windows: Vec<Window> = basis.dims().iter().map(|&d| Window::truncated(d)).collect();
            let out = contract(rho, filter, &windows)?;
            let zf = out.trace().re;
            if !(zf > 0.0) {
                return Err(Error::VanishingAcceptance(zf));
            }
            (out, zf, ((z - zf) / z).max(0.0))
        }
    };
    let tr = kept.trace().re;
    if !(tr > 0.0) {
        return Err(Error::VanishingAcceptance(tr));
    }
    let state = kept.scale(Complex64::new(1.0 / tr, 0.0));
    IterationRecord::build(round, state, Some(raw), success_prob, leakage, filter)
}

/// One round of the protocol: two copies of `ρ`, beam splitters on every
/// party, filter on copy 2, trace out copy 2, re-truncate and renormalise.
pub fn iterate_once(
    rho: &FockOperator,
    filter: &FilterSpec,
    policy: HeadroomPolicy,
    tolerances: &Tolerances,
) -> Result<IterationRecord> {
    let record = step(rho, filter, policy, tolerances, 1)?;
    if record.leakage > tolerances.leakage_bound {
        return Err(Error::Leakage { round: 1, leakage: record.leakage, bound: tolerances.leakage_bound });
    }
    Ok(record)
}

/// Records for rounds `0..=rounds`. Errors before round 0 exists are
/// returned directly; later failures stop the run and are reported in the
/// outcome together with the completed records.
pub fn run(config: &ProtocolConfig) -> Result<RunOutcome> {
    config.validate()?;
    let basis = config.basis()?;
    let rho = config.state.build(&basis)?;
    let mut records = vec![IterationRecord::initial(rho, &config.filter)?];
    for round in 1..=config.rounds {
        let prev = &records[records.len() - 1].state;
        match step(prev, &config.filter, config.policy, &config.tolerances, round) {
            Ok(rec) if rec.leakage > config.tolerances.leakage_bound => {
                let error = Error::Leakage { round, leakage: rec.leakage, bound: config.tolerances.leakage_bound };
                return Ok(RunOutcome { records, failure: Some(RoundFailure { round, error, record: Some(Box::new(rec)) }) });
            }
            Ok(rec) => records.push(rec),
            Err(error) => return Ok(RunOutcome { records, failure: Some(RoundFailure { round, error, record: None }) }),
        }
    }
    Ok(RunOutcome { records, failure: None })
}
