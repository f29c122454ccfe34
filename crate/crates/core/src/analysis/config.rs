//! TOML experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::grid::PhaseSpaceGrid;
use crate::analysis::sweep::{default_delta_grid, SweepSettings};
use crate::filter::FilterSpec;
use crate::moments::DEFAULT_MAX_ORDER;
use crate::protocol::{HeadroomPolicy, ProtocolConfig, StateSpec, Tolerances};
use crate::{Error, Result};

/// Exactly one of `delta`, `deltas` or `identity = true`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub delta: Option<f64>,
    pub deltas: Option<Vec<f64>>,
    #[serde(default)]
    pub identity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_delta_grid")]
    pub deltas: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { deltas: default_delta_grid() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    /// Recursion steps compared against engine rounds.
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_max_order() -> usize {
    DEFAULT_MAX_ORDER
}

fn default_steps() -> usize {
    2
}

impl Default for MomentsConfig {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, steps: 2 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Used when `--out` is not given.
    pub dir: Option<PathBuf>,
    /// File-name stem; defaults to the subcommand name.
    pub prefix: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Largest `n` of the `(|n…n⟩, |n…n⟩)` ratio pairs.
    #[serde(default = "default_ratio_max")]
    pub ratio_max: usize,
    /// Extra `[x, y]` pairs for the ratio table.
    #[serde(default)]
    pub pairs: Vec<[Vec<usize>; 2]>,
    /// Compute the doubling residual for every round pair.
    #[serde(default = "default_true")]
    pub doubling: bool,
}

fn default_ratio_max() -> usize {
    3
}

fn default_true() -> bool {
    true
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self { ratio_max: 3, pairs: Vec::new(), doubling: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub state: StateSpec,
    #[serde(default)]
    pub filter: FilterConfig,
    pub cutoff: usize,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default)]
    pub policy: HeadroomPolicy,
    #[serde(default)]
    pub grid: PhaseSpaceGrid,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub moments: MomentsConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_rounds() -> usize {
    8
}

/// Rounds beyond this would overflow the copy counter long before they
/// finish.
pub const MAX_ROUNDS: usize = 100;

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.state.mode_count();
        match &self.state {
            StateSpec::PsiLambda { lambda } if !lambda.is_finite() => return Err(Error::Config("state.lambda must be finite".into())),
            StateSpec::PhiMu { mu } if !mu.is_finite() => return Err(Error::Config("state.mu must be finite".into())),
            StateSpec::Custom { modes, amplitudes } => {
                if *modes == 0 || amplitudes.is_empty() {
                    return Err(Error::Config("custom state needs modes ≥ 1 and at least one amplitude".into()));
                }
                if let Some(a) = amplitudes.iter().find(|a| a.index.len() != *modes || a.index.iter().any(|&n| n >= self.cutoff)) {
                    return Err(Error::Config(format!("amplitude index {:?} does not fit {modes} modes below cutoff {}", a.index, self.cutoff)));
                }
                if amplitudes.iter().any(|a| !a.value.is_finite() || !a.imag.is_finite()) {
                    return Err(Error::Config("custom amplitudes must be finite".into()));
                }
            }
            _ => {}
        }
        if self.rounds > MAX_ROUNDS {
            return Err(Error::Config(format!("rounds = {} exceeds {MAX_ROUNDS}", self.rounds)));
        }
        self.grid.validate()?;
        if self.sweep.deltas.is_empty() {
            return Err(Error::Config("sweep.deltas is empty".into()));
        }
        if let Some(d) = self.sweep.deltas.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
            return Err(Error::Config(format!("sweep.deltas entry {d} outside (0, 1]")));
        }
        if self.diagnostics.pairs.iter().flatten().any(|ix| ix.len() != m) {
            return Err(Error::Config(format!("diagnostics.pairs entries need {m} indices")));
        }
        self.filter_spec()?;
        self.protocol_config()?.validate()
    }

    pub fn filter_spec(&self) -> Result<FilterSpec> {
        let m = self.state.mode_count();
        let f = &self.filter;
        let given = f.delta.is_some() as u8 + f.deltas.is_some() as u8 + f.identity as u8;
        if given != 1 {
            return Err(Error::Config("filter needs exactly one of delta, deltas or identity = true".into()));
        }
        let spec = if f.identity {
            Ok(FilterSpec::identity(m))
        } else if let Some(d) = f.delta {
            FilterSpec::from_delta(d, m)
        } else {
            let ds = f.deltas.as_ref().expect("counted above");
            if ds.len() != m {
                return Err(Error::Config(format!("filter.deltas has {} entries for {m} modes", ds.len())));
            }
            FilterSpec::from_deltas(ds)
        };
        spec.map_err(|e| Error::Config(format!("filter: {e}")))
    }

    pub fn protocol_config(&self) -> Result<ProtocolConfig> {
        Ok(ProtocolConfig {
            state: self.state.clone(),
            filter: self.filter_spec()?,
            rounds: self.rounds,
            cutoff: self.cutoff,
            policy: self.policy,
            tolerances: self.tolerances,
        })
    }

    pub fn sweep_settings(&self) -> SweepSettings {
        SweepSettings { state: self.state.clone(), cutoff: self.cutoff, rounds: self.rounds, policy: self.policy, tolerances: self.tolerances }
    }

    /// Ratio pairs: the diagonal `|n…n⟩` up to `ratio_max` (inside the
    /// cutoff), then any explicit pairs.
    pub fn ratio_pairs(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let m = self.state.mode_count();
        let top = self.diagnostics.ratio_max.min(self.cutoff - 1);
        let mut pairs: Vec<_> = (1..=top).map(|n| (vec![n; m], vec![n; m])).collect();
        pairs.extend(self.diagnostics.pairs.iter().map(|[x, y]| (x.clone(), y.clone())));
        pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PSI: &str = r#"
        cutoff = 6
        rounds = 3
        [state]
        family = "psi_lambda"
        lambda = 0.5
        [filter]
        delta = 1.0
    "#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml_str(PSI).unwrap();
        assert_eq!(c.policy, HeadroomPolicy::ExactPair);
        assert_eq!(c.grid, PhaseSpaceGrid::default());
        assert_eq!(c.sweep.deltas.len(), 11);
        assert!(c.filter_spec().unwrap().is_vacuum_projector());
        assert_eq!(c.ratio_pairs().len(), 3);
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            PSI.replace("lambda = 0.5", "lambda = 0.5\nextra = 1"),
            PSI.replace("delta = 1.0", "delta = 1.0\nidentity = true"),
            PSI.replace("delta = 1.0", "delta = 1.5"),
            PSI.replace("cutoff = 6", "cutoff = 1"),
            PSI.replace("psi_lambda", "psi"),
            format!("{PSI}\n[grid]\nradius = 4.0\npoints = 8\n"),
            format!("{PSI}\n[sweep]\ndeltas = [0.0]\n"),
        ] {
            assert!(matches!(ExperimentConfig::from_toml_str(&bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn custom_amplitudes() {
        let text = r#"
            cutoff = 4
            [state]
            family = "custom"
            modes = 2
            amplitudes = [{ index = [0, 0], value = 1.0 }, { index = [2, 2], value = 6.0 }]
            [filter]
            deltas = [1.0, 1.0]
        "#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(c.state.mode_count(), 2);
        assert!(ExperimentConfig::from_toml_str(&text.replace("[2, 2]", "[4, 4]")).is_err());
    }
}
