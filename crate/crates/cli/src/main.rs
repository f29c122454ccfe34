//! `gaussify`: run, predict, sweep, validate and moments from a TOML config.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical-guard abort,
//! 3 a limit-theorem condition fails (`predict` only).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaussify::analysis::output::{write_json, CsvTable};
use gaussify::analysis::{moments_report, predict_report, run_report, sweep_report, validate_suite, ExperimentConfig};
use gaussify::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "gaussify", version, about = "Gaussification protocol simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Io {
    /// TOML experiment configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir` in the config.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the protocol and write the per-round ledger.
    Run(Io),
    /// Predict the limit state from the input alone.
    Predict(Io),
    /// Sweep the filter strength Δ.
    Sweep(Io),
    /// Run the invariant suite.
    Validate(Io),
    /// Moment recursion, engine comparison and the strong-convergence check.
    Moments(Io),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Ok = 0,
    Config = 1,
    Numerical = 2,
    Theorem = 3,
}

fn exit_for(e: &Error) -> Exit {
    match e {
        Error::Config(_) => Exit::Config,
        _ => Exit::Numerical,
    }
}

struct Sink {
    dir: PathBuf,
    prefix: String,
}

impl Sink {
    fn new(io: &Io, cfg: Option<&ExperimentConfig>, name: &str) -> Result<Self, Error> {
        let dir = io
            .out
            .clone()
            .or_else(|| cfg.and_then(|c| c.output.dir.clone()))
            .unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        let prefix = cfg.and_then(|c| c.output.prefix.clone()).unwrap_or_else(|| name.to_string());
        Ok(Self { dir, prefix })
    }

    fn path(&self, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{ext}", self.prefix))
    }

    fn write<T: Serialize>(&self, csv: &CsvTable, json: &T) -> Result<(), Error> {
        csv.write(&self.path("csv"))?;
        write_json(&self.path("json"), json)?;
        println!("wrote {} and {}", self.path("csv").display(), self.path("json").display());
        Ok(())
    }
}

fn load(io: &Io) -> Result<ExperimentConfig, Error> {
    match &io.config {
        Some(p) => ExperimentConfig::load(p),
        None => Err(Error::Config("--config <path> is required for this subcommand".into())),
    }
}

fn load_optional(path: Option<&Path>) -> Result<Option<ExperimentConfig>, Error> {
    path.map(ExperimentConfig::load).transpose()
}

fn run(cmd: Command) -> Result<Exit, Error> {
    match cmd {
        Command::Run(io) => {
            let cfg = load(&io)?;
            let sink = Sink::new(&io, Some(&cfg), "run")?;
            let report = run_report(&cfg)?;
            sink.write(&report.csv()?, &report)?;
            for r in &report.rows {
                println!(
                    "round {:>3}  success {:.6e}  leakage {:.3e}  E_N {:.6}{}",
                    r.n,
                    r.success_prob,
                    r.leakage,
                    r.logneg_fock,
                    r.fidelity_to_target.map(|f| format!("  fidelity {f:.6}")).unwrap_or_default()
                );
            }
            match &report.failure {
                Some(f) => {
                    eprintln!("error: run stopped at round {}: {}", f.round, f.message);
                    Ok(Exit::Numerical)
                }
                None => Ok(Exit::Ok),
            }
        }
        Command::Predict(io) => {
            let cfg = load(&io)?;
            let sink = Sink::new(&io, Some(&cfg), "predict")?;
            let report = predict_report(&cfg)?;
            sink.write(&report.csv()?, &report)?;
            let p = &report.prediction;
            if let Some(total) = p.logneg_inf_total() {
                println!("E_N(ρ∞) = {total:.9} over {} cut(s); E_N(ρ) = {:.9}", p.bipartitions.len(), p.logneg_rho_fock_total());
            }
            if p.verdict.holds {
                Ok(Exit::Ok)
            } else {
                for f in &p.verdict.failures {
                    eprintln!("theorem condition failed: {f}");
                }
                Ok(Exit::Theorem)
            }
        }
        Command::Sweep(io) => {
            let cfg = load(&io)?;
            let sink = Sink::new(&io, Some(&cfg), "sweep")?;
            let report = sweep_report(&cfg)?;
            sink.write(&report.csv()?, &report)?;
            for r in &report.rows {
                let e = r.logneg_inf.map(|v| format!("{v:.9}")).unwrap_or_else(|| "-".into());
                println!("Δ = {:<8} E_N(ρ∞) = {e}{}", r.delta, r.error.as_ref().map(|m| format!("  [{m}]")).unwrap_or_default());
            }
            Ok(Exit::Ok)
        }
        Command::Validate(io) => {
            let cfg = load_optional(io.config.as_deref())?;
            let sink = Sink::new(&io, cfg.as_ref(), "validate")?;
            let report = validate_suite(cfg.as_ref());
            sink.write(&report.csv()?, &report)?;
            for c in &report.checks {
                println!("{} {:<45} {:.3e} (tolerance {:.0e}) {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance, c.detail);
            }
            Ok(if report.all_passed { Exit::Ok } else { Exit::Numerical })
        }
        Command::Moments(io) => {
            let cfg = load(&io)?;
            let sink = Sink::new(&io, Some(&cfg), "moments")?;
            let report = moments_report(&cfg)?;
            sink.write(&report.csv()?, &report)?;
            println!("{}", report.strong.summary);
            match (&report.max_difference, &report.engine_error) {
                (Some(d), _) => {
                    println!("recursion vs engine after {} steps: max |Δα| = {d:.3e}", report.steps);
                    Ok(Exit::Ok)
                }
                (None, Some(e)) => {
                    eprintln!("error: engine run failed: {e}");
                    Ok(Exit::Numerical)
                }
                (None, None) => Ok(Exit::Ok),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Config } else { Exit::Ok };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    };
    ExitCode::from(code as u8)
}
