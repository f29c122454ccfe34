//! The two-copy iteration and multi-round runs.

mod engine;
pub mod record;
pub mod run;

pub use engine::MAX_INTERMEDIATE;
pub use record::{leakage_report, IterationRecord, LeakageReport};
pub use run::{iterate_once, run, HeadroomPolicy, ProtocolConfig, RoundFailure, RunOutcome, StateSpec, Tolerances};
