//! Diagnostics, predictions, sweeps, configuration and output.

pub mod config;
pub mod diagnostics;
pub mod grid;
pub mod output;
pub mod predict;
pub mod report;
pub mod sweep;
pub mod validate;
pub mod weak;

pub use config::ExperimentConfig;
pub use diagnostics::{bounded_chi_check, doubling_check, BoundedChiReport};
pub use grid::PhaseSpaceGrid;
pub use predict::{bipartitions, predict, Prediction, Route, TheoremOneVerdict};
pub use report::{moments_report, predict_report, run_report, sweep_report, MomentsReport, PredictReport, RunReport, SweepReport};
pub use sweep::{default_delta_grid, sweep_delta, SweepRow, SweepSettings};
pub use validate::{validate_suite, InvariantCheck, ValidationReport};
pub use weak::{diagonal_pairs, fidelity_to_target, gp_amplitude, gp_target_ket, weak_convergence_report, WeakConvergenceReport};
