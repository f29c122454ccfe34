//! Filter-strength sweeps.

use serde::Serialize;

use crate::analysis::predict::predict;
use crate::filter::FilterSpec;
use crate::protocol::{run, HeadroomPolicy, ProtocolConfig, StateSpec, Tolerances};
use crate::Result;

/// `Δ` grid with the identity endpoint replaced by `1e−6`.
pub fn default_delta_grid() -> Vec<f64> {
    std::iter::once(1e-6).chain((1..=10).map(|k| k as f64 / 10.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta: f64,
    /// Summed over the reported cuts.
    pub logneg_inf: Option<f64>,
    pub logneg_rho_fock: Option<f64>,
    pub logneg_rho_gaussian: Option<f64>,
    pub theorem1_holds: Option<bool>,
    /// Success probabilities of rounds `1..=k`, as far as the run got.
    pub success_probs: Vec<f64>,
    /// First error met for this `Δ`, if any.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub state: StateSpec,
    pub cutoff: usize,
    pub rounds: usize,
    pub policy: HeadroomPolicy,
    pub tolerances: Tolerances,
}

fn sweep_point(s: &SweepSettings, delta: f64) -> SweepRow {
    let mut row = SweepRow {
        delta,
        logneg_inf: None,
        logneg_rho_fock: None,
        logneg_rho_gaussian: None,
        theorem1_holds: None,
        success_probs: Vec::new(),
        error: None,
    };
    let filter = match FilterSpec::from_delta(delta, s.state.mode_count()) {
        Ok(f) => f,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let config = ProtocolConfig { state: s.state.clone(), filter, rounds: s.rounds, cutoff: s.cutoff, policy: s.policy, tolerances: s.tolerances };
    let predicted = config.basis().and_then(|b| s.state.build(&b)).and_then(|rho| predict(&rho, &config.filter, None));
    match predicted {
        Ok(p) => {
            row.logneg_inf = p.logneg_inf_total();
            row.logneg_rho_fock = Some(p.logneg_rho_fock_total());
            row.logneg_rho_gaussian = Some(p.logneg_rho_gaussian_total());
            row.theorem1_holds = Some(p.verdict.holds);
            if !p.verdict.holds {
                row.error = Some(p.verdict.failures.join("; "));
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    match run(&config) {
        Ok(out) => {
            row.success_probs = out.records.iter().skip(1).map(|r| r.success_prob).collect();
            if let (Some(f), None) = (&out.failure, &row.error) {
                row.error = Some(f.error.to_string());
            }
        }
        Err(e) => row.error = row.error.take().or(Some(e.to_string())),
    }
    row
}

/// One row per `Δ`. Points are independent and run in parallel when the
/// `parallel` feature is on; row order follows `deltas`.
pub fn sweep_delta(settings: &SweepSettings, deltas: &[f64]) -> Result<Vec<SweepRow>> {
    #[cfg(feature = "parallel")]
    let rows = {
        use rayon::prelude::*;
        deltas.par_iter().map(|&d| sweep_point(settings, d)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows = deltas.iter().map(|&d| sweep_point(settings, d)).collect();
    Ok(rows)
}
