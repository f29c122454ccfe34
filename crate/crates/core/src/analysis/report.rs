//! End-to-end reports behind the command-line subcommands.

use serde::Serialize;

use crate::analysis::config::ExperimentConfig;
use crate::analysis::diagnostics::doubling_check;
use crate::analysis::output::{num, opt, CsvTable};
use crate::analysis::predict::{bipartitions, predict, Prediction};
use crate::analysis::sweep::{sweep_delta, SweepRow};
use crate::analysis::weak::{fidelity_to_target, gp_target_ket, weak_convergence_report, WeakConvergenceReport};
use crate::fock::logneg_fock;
use crate::gaussian::GaussianOperator;
use crate::linalg::{max_abs_diff, real_part, to_complex};
use crate::moments::{moment_step, moments_from_fock, strong_convergence_check, MomentTable, StrongConvergenceReport};
use crate::protocol::{leakage_report, run, IterationRecord, LeakageReport};
use crate::{Error, Result};

pub const RUN_SCHEMA: &str = "gaussify-run/1";
pub const PREDICT_SCHEMA: &str = "gaussify-predict/1";
pub const SWEEP_SCHEMA: &str = "gaussify-sweep/1";
pub const MOMENTS_SCHEMA: &str = "gaussify-moments/1";

fn index_label(x: &[usize]) -> String {
    x.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(".")
}

fn pair_label(x: &[usize], y: &[usize]) -> String {
    format!("{}_{}", index_label(x), index_label(y))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub n: usize,
    /// `false` for a round that finished but broke the leakage bound.
    pub accepted: bool,
    pub success_prob: f64,
    pub cumulative_copies: u128,
    pub leakage: f64,
    pub acceptance: f64,
    pub min_eigenvalue: f64,
    /// Summed over the reported cuts.
    pub logneg_fock: f64,
    /// `max |Γ_ρn − Γ_ρ∞|`.
    pub gamma_residual: Option<f64>,
    /// Doubling-law residual between rounds `n−1` and `n`.
    pub doubling_residual: Option<f64>,
    pub fidelity_to_target: Option<f64>,
    /// Real parts of `⟨x|ρ_n|y⟩/tr(ρ_nΠ)` in `ratio_pairs` order.
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunFailure {
    pub round: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub config: ExperimentConfig,
    pub complete: bool,
    pub failure: Option<RunFailure>,
    pub ratio_pairs: Vec<(Vec<usize>, Vec<usize>)>,
    /// Limits of the ratios, present for the vacuum projector.
    pub ratio_targets: Option<Vec<f64>>,
    pub rows: Vec<RunRow>,
    pub leakage: LeakageReport,
    pub weak: WeakConvergenceReport,
    pub prediction: Option<Prediction>,
    pub prediction_error: Option<String>,
}

/// Runs the protocol and evaluates every per-round diagnostic.
pub fn run_report(cfg: &ExperimentConfig) -> Result<RunReport> {
    let pc = cfg.protocol_config()?;
    let outcome = run(&pc)?;
    let mut records: Vec<IterationRecord> = outcome.records.clone();
    let accepted = records.len();
    if let Some(rec) = outcome.failure.as_ref().and_then(|f| f.record.as_ref()) {
        records.push((**rec).clone());
    }
    let filter = &pc.filter;
    let basis = pc.basis()?;
    let cuts = bipartitions(basis.mode_count());
    let (prediction, prediction_error) = match predict(&records[0].state, filter, None) {
        Ok(p) => (Some(p), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let gamma_inf = prediction.as_ref().and_then(|p| p.gamma_rho_inf.clone());
    let target = if filter.is_vacuum_projector() {
        Some(gp_target_ket(&GaussianOperator::from_moments(&records[0].sigma_moments)?, &basis)?)
    } else {
        None
    };
    let pairs = cfg.ratio_pairs();
    let weak = weak_convergence_report(&records, filter, &pairs)?;

    let mut rows = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let logneg = cuts.iter().map(|c| logneg_fock(&rec.state, c)).sum::<Result<f64>>()?;
        let gamma_residual = gamma_inf.as_ref().map(|g| max_abs_diff(&to_complex(&real_part(&rec.rho_moments.gamma)), g));
        let doubling_residual = match (cfg.diagnostics.doubling, i, rec.raw_sigma(filter)?) {
            (true, 1.., Some(raw)) => Some(doubling_check(&records[i - 1].sigma(filter)?, &raw, &cfg.grid)?),
            _ => None,
        };
        let fidelity = target.as_ref().map(|t| fidelity_to_target(&rec.state, t)).transpose()?;
        rows.push(RunRow {
            n: rec.round,
            accepted: i < accepted,
            success_prob: rec.success_prob,
            cumulative_copies: rec.cumulative_copies,
            leakage: rec.leakage,
            acceptance: rec.acceptance,
            min_eigenvalue: rec.diagnostics.min_eigenvalue,
            logneg_fock: logneg,
            gamma_residual,
            doubling_residual,
            fidelity_to_target: fidelity,
            ratios: weak.entries.iter().map(|e| e.values[i].0).collect(),
        });
    }
    let ratio_targets = if filter.is_vacuum_projector() {
        Some(weak.entries.iter().map(|e| e.target.map(|t| t.0).unwrap_or(f64::NAN)).collect())
    } else {
        None
    };
    Ok(RunReport {
        schema: RUN_SCHEMA,
        config: cfg.clone(),
        complete: outcome.failure.is_none(),
        failure: outcome.failure.as_ref().map(|f| RunFailure { round: f.round, message: f.error.to_string() }),
        ratio_pairs: pairs,
        ratio_targets,
        rows,
        leakage: leakage_report(&outcome.records, pc.tolerances.leakage_bound),
        weak,
        prediction,
        prediction_error,
    })
}

impl RunReport {
    pub fn csv(&self) -> Result<CsvTable> {
        let mut cols: Vec<String> = [
            "n",
            "success_prob",
            "cumulative_copies",
            "leakage",
            "logneg_fock",
            "gamma_residual",
            "doubling_residual",
            "fidelity_to_target",
            "acceptance",
            "min_eigenvalue",
            "accepted",
        ]
        .map(String::from)
        .to_vec();
        for (x, y) in &self.ratio_pairs {
            cols.push(format!("ratio_{}", pair_label(x, y)));
            cols.push(format!("target_{}", pair_label(x, y)));
        }
        let mut t = CsvTable::new(RUN_SCHEMA, cols);
        for r in &self.rows {
            let mut row = vec![
                r.n.to_string(),
                num(r.success_prob),
                r.cumulative_copies.to_string(),
                num(r.leakage),
                num(r.logneg_fock),
                opt(r.gamma_residual),
                opt(r.doubling_residual),
                opt(r.fidelity_to_target),
                num(r.acceptance),
                num(r.min_eigenvalue),
                r.accepted.to_string(),
            ];
            for (k, v) in r.ratios.iter().enumerate() {
                row.push(num(*v));
                row.push(opt(self.ratio_targets.as_ref().map(|t| t[k])));
            }
            t.push(row)?;
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictReport {
    pub schema: &'static str,
    pub config: ExperimentConfig,
    pub prediction: Prediction,
}

/// Prediction for the configured state and filter, with the sampled `|χ_σ|`
/// check on the configured grid.
pub fn predict_report(cfg: &ExperimentConfig) -> Result<PredictReport> {
    let pc = cfg.protocol_config()?;
    let rho = pc.state.build(&pc.basis()?)?;
    let prediction = predict(&rho, &pc.filter, Some(&cfg.grid))?;
    Ok(PredictReport { schema: PREDICT_SCHEMA, config: cfg.clone(), prediction })
}

impl PredictReport {
    pub fn csv(&self) -> Result<CsvTable> {
        let cols = ["cut", "logneg_inf", "logneg_rho_fock", "logneg_rho_gaussian"].map(String::from).to_vec();
        let mut t = CsvTable::new(PREDICT_SCHEMA, cols);
        let p = &self.prediction;
        for (k, cut) in p.bipartitions.iter().enumerate() {
            t.push(vec![
                index_label(cut),
                opt(p.logneg_inf.as_ref().map(|v| v[k])),
                num(p.logneg_rho_fock[k]),
                num(p.logneg_rho_gaussian[k]),
            ])?;
        }
        t.push(vec!["total".into(), opt(p.logneg_inf_total()), num(p.logneg_rho_fock_total()), num(p.logneg_rho_gaussian_total())])?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub config: ExperimentConfig,
    pub rows: Vec<SweepRow>,
}

pub fn sweep_report(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let rows = sweep_delta(&cfg.sweep_settings(), &cfg.sweep.deltas)?;
    Ok(SweepReport { schema: SWEEP_SCHEMA, config: cfg.clone(), rows })
}

impl SweepReport {
    pub fn csv(&self) -> Result<CsvTable> {
        let mut cols = ["delta", "logneg_inf", "logneg_rho_fock", "logneg_rho_gaussian", "theorem1_holds"].map(String::from).to_vec();
        cols.extend((1..=self.config.rounds).map(|k| format!("success_prob_{k}")));
        cols.push("error".into());
        let mut t = CsvTable::new(SWEEP_SCHEMA, cols);
        for r in &self.rows {
            let mut row = vec![
                num(r.delta),
                opt(r.logneg_inf),
                opt(r.logneg_rho_fock),
                opt(r.logneg_rho_gaussian),
                r.theorem1_holds.map(|b| b.to_string()).unwrap_or_default(),
            ];
            row.extend((0..self.config.rounds).map(|k| opt(r.success_probs.get(k).copied())));
            row.push(r.error.clone().unwrap_or_default());
            t.push(row)?;
        }
        Ok(t)
    }

    /// Rows that recorded an error.
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentsReport {
    pub schema: &'static str,
    pub config: ExperimentConfig,
    pub steps: usize,
    pub alpha0: MomentTable,
    pub recursion: MomentTable,
    /// Moments of `σ` after `steps` engine rounds, when the run got there.
    pub engine: Option<MomentTable>,
    pub engine_error: Option<String>,
    pub max_difference: Option<f64>,
    pub strong: StrongConvergenceReport,
}

/// Moment recursion against the engine, and the strong-convergence check
/// of the input moments against the limiting Gaussian.
pub fn moments_report(cfg: &ExperimentConfig) -> Result<MomentsReport> {
    let order = cfg.moments.max_order;
    let steps = cfg.moments.steps;
    let mut pc = cfg.protocol_config()?;
    pc.rounds = steps;
    let basis = pc.basis()?;
    let rho = pc.state.build(&basis)?;
    let rec0 = IterationRecord::initial(rho, &pc.filter)?;
    let alpha0 = moments_from_fock(&rec0.sigma(&pc.filter)?, order)?;
    let mut recursion = alpha0.clone();
    for _ in 0..steps {
        recursion = moment_step(&recursion);
    }
    let outcome = run(&pc)?;
    let (engine, engine_error) = match &outcome.failure {
        Some(f) => (None, Some(f.error.to_string())),
        None => {
            let last = outcome.records.last().expect("round 0 exists");
            (Some(moments_from_fock(&last.sigma(&pc.filter)?, order)?), None)
        }
    };
    let max_difference = engine.as_ref().and_then(|e| e.max_abs_diff(&recursion));
    let sigma_inf = GaussianOperator::from_moments(&rec0.sigma_moments)?;
    let strong = strong_convergence_check(&alpha0, &sigma_inf, order)?;
    Ok(MomentsReport { schema: MOMENTS_SCHEMA, config: cfg.clone(), steps, alpha0, recursion, engine, engine_error, max_difference, strong })
}

impl MomentsReport {
    pub fn csv(&self) -> Result<CsvTable> {
        let cols = ["x", "y", "alpha0_re", "alpha0_im", "recursion_re", "recursion_im", "engine_re", "engine_im", "alpha_inf_re", "alpha_inf_im", "strong_holds"]
            .map(String::from)
            .to_vec();
        let mut t = CsvTable::new(MOMENTS_SCHEMA, cols);
        for e in &self.strong.entries {
            let a0 = self.alpha0.get(&e.x, &e.y).ok_or_else(|| Error::InvalidArgument("moment table is incomplete".into()))?;
            let r = self.recursion.get(&e.x, &e.y).expect("same index set");
            let g = self.engine.as_ref().and_then(|t| t.get(&e.x, &e.y));
            t.push(vec![
                index_label(&e.x),
                index_label(&e.y),
                num(a0.re),
                num(a0.im),
                num(r.re),
                num(r.im),
                opt(g.map(|v| v.re)),
                opt(g.map(|v| v.im)),
                num(e.alpha_inf_re),
                num(e.alpha_inf_im),
                e.holds.to_string(),
            ])?;
        }
        Ok(t)
    }
}
