//! Limit prediction from the input state alone.

use serde::{Serialize, Serializer};

use crate::analysis::diagnostics::{bounded_chi_check, BoundedChiReport};
use crate::analysis::grid::PhaseSpaceGrid;
use crate::filter::FilterSpec;
use crate::fock::{logneg_fock, quadrature_moments, FockOperator};
use crate::gaussian::{fixed_point_cov, logneg_gaussian, vacuum_filter_fixed_point_cov, FixedPointCov, GaussianOperator, SymplecticForm};
use crate::{CMatrix, Error, Result};

/// `|d_σ|` below this counts as zero mean.
pub const MEAN_TOLERANCE: f64 = 1e-10;
/// Physicality tolerance for `Γ_ρ∞`.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// One side of each reported cut: `{0}` vs `{1}` for two modes, every
/// single mode against the rest for three or more.
pub fn bipartitions(mode_count: usize) -> Vec<Vec<usize>> {
    match mode_count {
        0 | 1 => Vec::new(),
        2 => vec![vec![0]],
        m => (0..m).map(|j| vec![j]).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Identity filter: `Γ_ρ∞ = Γ_ρ`.
    Identity,
    /// Vacuum projector on every mode.
    VacuumFilter,
    /// `Γ_Π` finite and `Γ_Π − Γ_σ` invertible.
    FixedPoint,
}

/// Outcome of the three conditions, with the numbers behind each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremOneVerdict {
    pub holds: bool,
    /// `max_j |d_σ,j|`.
    pub mean_norm: f64,
    /// Sampled `|χ_σ| ≤ 1`; absent when no grid was given.
    pub bounded_chi: Option<BoundedChiReport>,
    pub fixed_point: Option<FixedPointCov>,
    /// One line per failed condition.
    pub failures: Vec<String>,
}

fn real_rows<S: Serializer>(m: &Option<CMatrix>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Option<Vec<Vec<f64>>> = m.as_ref().map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect());
    rows.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub route: Route,
    pub bipartitions: Vec<Vec<usize>>,
    #[serde(serialize_with = "real_rows")]
    pub gamma_sigma: Option<CMatrix>,
    #[serde(serialize_with = "real_rows")]
    pub gamma_rho_inf: Option<CMatrix>,
    /// `E_N(ρ_∞)` per cut, when `Γ_ρ∞` exists and is physical.
    pub logneg_inf: Option<Vec<f64>>,
    /// `E_N(ρ)` per cut from the Fock matrix.
    pub logneg_rho_fock: Vec<f64>,
    /// `E_N` of the Gaussian with `Γ_ρ`, per cut.
    pub logneg_rho_gaussian: Vec<f64>,
    pub verdict: TheoremOneVerdict,
}

impl Prediction {
    pub fn logneg_inf_total(&self) -> Option<f64> {
        self.logneg_inf.as_ref().map(|v| v.iter().sum())
    }

    pub fn logneg_rho_fock_total(&self) -> f64 {
        self.logneg_rho_fock.iter().sum()
    }

    pub fn logneg_rho_gaussian_total(&self) -> f64 {
        self.logneg_rho_gaussian.iter().sum()
    }
}

/// Predicts `Γ_ρ∞` and its entanglement from `ρ` and `Π` without running
/// rounds. Condition failures are reported in the verdict; malformed input
/// is an error.
pub fn predict(rho: &FockOperator, filter: &FilterSpec, grid: Option<&PhaseSpaceGrid>) -> Result<Prediction> {
    let m = rho.basis().mode_count();
    if filter.mode_count() != m {
        return Err(Error::DimensionMismatch(format!("filter on {} modes, state on {m}", filter.mode_count())));
    }
    let sf = SymplecticForm::new(m);
    let cuts = bipartitions(m);
    let rho_moments = quadrature_moments(rho)?;
    let gamma_rho = GaussianOperator::from_moments(&rho_moments)?.gamma().clone();
    let (sigma, _) = filter.sigma_of(rho)?;
    let sigma_moments = quadrature_moments(&sigma)?;
    let mut failures = Vec::new();

    let mean_norm = sigma_moments.d.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if mean_norm > MEAN_TOLERANCE {
        failures.push(format!("condition (i): σ has nonzero first moments, max |d_σ| = {mean_norm:e}"));
    }
    let bounded_chi = grid.map(|g| bounded_chi_check(&sigma, g)).transpose()?;
    if let Some(r) = &bounded_chi {
        if r.exceeds {
            failures.push(format!("condition (ii): |χ_σ| reaches {:.12} > 1 at r = {:?}", r.max_abs, r.argmax));
        }
    }

    let gamma_sigma = match GaussianOperator::from_moments(&sigma_moments) {
        Ok(g) => Some(g.gamma().clone()),
        Err(e) => {
            failures.push(format!("Γ_σ is not a valid covariance: {e}"));
            None
        }
    };
    let route = if filter.is_identity() {
        Route::Identity
    } else if filter.is_vacuum_projector() {
        Route::VacuumFilter
    } else {
        Route::FixedPoint
    };
    let fixed_point = match &gamma_sigma {
        None => None,
        Some(gs) => {
            let fp = match route {
                Route::Identity => Ok(FixedPointCov::assess(gamma_rho.clone(), 1.0, &sf)),
                Route::VacuumFilter => vacuum_filter_fixed_point_cov(gs, &sf),
                Route::FixedPoint => {
                    let pi = filter.gamma_pi().ok_or_else(|| Error::NoFixedPoint("a mode projects onto the vacuum, so Γ_Π is unbounded there".into()));
                    pi.and_then(|pi| fixed_point_cov(gs, &pi, &sf))
                }
            };
            match fp {
                Ok(fp) => Some(fp),
                Err(Error::NoFixedPoint(why)) => {
                    failures.push(format!("condition (iii): {why}"));
                    None
                }
                Err(e) => return Err(e),
            }
        }
    };
    if let Some(fp) = &fixed_point {
        if fp.min_eigenvalue <= 0.0 {
            failures.push(format!("condition (iii): Γ_ρ∞ is not positive definite (min eigenvalue {:e})", fp.min_eigenvalue));
        }
        if !fp.physicality.is_physical(PHYSICALITY_TOLERANCE) {
            failures.push(format!(
                "condition (iii): Γ_ρ∞ violates Γ + iΣ ⪰ 0 (min eigenvalue {:e}, reality defect {:e})",
                fp.physicality.min_eigenvalue, fp.physicality.reality_defect
            ));
        }
    }

    let logneg_inf = match &fixed_point {
        Some(fp) if fp.is_valid(PHYSICALITY_TOLERANCE) => {
            Some(cuts.iter().map(|c| logneg_gaussian(&fp.gamma, c, &sf)).collect::<Result<Vec<_>>>()?)
        }
        _ => None,
    };
    let logneg_rho_fock = cuts.iter().map(|c| logneg_fock(rho, c)).collect::<Result<Vec<_>>>()?;
    let logneg_rho_gaussian = cuts.iter().map(|c| logneg_gaussian(&gamma_rho, c, &sf)).collect::<Result<Vec<_>>>()?;

    Ok(Prediction {
        route,
        bipartitions: cuts,
        gamma_sigma,
        gamma_rho_inf: fixed_point.as_ref().map(|f| f.gamma.clone()),
        logneg_inf,
        logneg_rho_fock,
        logneg_rho_gaussian,
        verdict: TheoremOneVerdict { holds: failures.is_empty(), mean_norm, bounded_chi, fixed_point, failures },
    })
}
