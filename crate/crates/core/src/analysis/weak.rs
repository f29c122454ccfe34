//! Convergence of filter-eigenbasis matrix elements.

use serde::Serialize;

use crate::filter::FilterSpec;
use crate::fock::{BasisSpec, FockOperator};
use crate::gaussian::{wick_moments, GaussianOperator};
use crate::protocol::IterationRecord;
use crate::{CVector, Complex64, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakEntry {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// `Re, Im` of `⟨x|ρ_n|y⟩ / tr(ρ_n Π)` for each record.
    pub values: Vec<(f64, f64)>,
    /// `|v_{n+1} − v_n|`.
    pub differences: Vec<f64>,
    /// Limit predicted from `σ` when the filter is the vacuum projector.
    pub target: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakConvergenceReport {
    pub entries: Vec<WeakEntry>,
}

/// `⟨x|ψ_∞⟩/⟨0|ψ_∞⟩ = tr(a^x σ_∞)/√(x!)` for the vacuum projector, where the
/// limit is pure and `σ_∞` is the Gaussian with the conserved `Γ_σ`.
pub fn gp_amplitude(sigma_inf: &GaussianOperator, x: &[usize]) -> Result<Complex64> {
    let zero = vec![0; x.len()];
    let fact: f64 = x.iter().map(|&k| (1..=k).map(|i| i as f64).product::<f64>()).product();
    Ok(wick_moments(sigma_inf, &zero, x)? / fact.sqrt())
}

/// The normalised pure limit `ψ_∞` of a vacuum-projector run, truncated to
/// `basis` and renormalised there.
pub fn gp_target_ket(sigma_inf: &GaussianOperator, basis: &BasisSpec) -> Result<CVector> {
    let amps: Vec<Complex64> = basis.states().map(|s| gp_amplitude(sigma_inf, &s)).collect::<Result<_>>()?;
    let v = CVector::from_vec(amps);
    let n = v.norm();
    Ok(v / Complex64::new(n, 0.0))
}

/// `√⟨ψ|ρ|ψ⟩`, the root fidelity of `ρ` with a pure target.
pub fn fidelity_to_target(rho: &FockOperator, target: &CVector) -> Result<f64> {
    if target.len() != rho.dim() {
        return Err(Error::DimensionMismatch("target ket and state differ in dimension".into()));
    }
    Ok((target.dotc(&(rho.data() * target))).re.max(0.0).sqrt())
}

/// Sequences `⟨x|ρ_n|y⟩/tr(ρ_nΠ)` for each requested pair. With the vacuum
/// projector the denominator is `⟨0|ρ_n|0⟩` and the limits are
/// `t_x conj(t_y)` with `t` from [`gp_amplitude`].
pub fn weak_convergence_report(records: &[IterationRecord], filter: &FilterSpec, pairs: &[(Vec<usize>, Vec<usize>)]) -> Result<WeakConvergenceReport> {
    let first = records.first().ok_or_else(|| Error::InvalidArgument("no records".into()))?;
    let basis = first.state.basis();
    for (x, y) in pairs {
        if basis.try_flat(x).is_none() || basis.try_flat(y).is_none() {
            return Err(Error::InvalidArgument(format!("pair {x:?}, {y:?} lies outside the basis")));
        }
    }
    let sigma_inf = if filter.is_vacuum_projector() {
        Some(GaussianOperator::from_moments(&first.sigma_moments)?)
    } else {
        None
    };
    let mut entries = Vec::new();
    for (x, y) in pairs {
        let values: Vec<(f64, f64)> = records
            .iter()
            .map(|r| {
                let v = r.state.element(x, y) / r.acceptance;
                (v.re, v.im)
            })
            .collect();
        let differences = values.windows(2).map(|w| Complex64::new(w[1].0 - w[0].0, w[1].1 - w[0].1).norm()).collect();
        let target = match &sigma_inf {
            Some(g) => {
                let t = gp_amplitude(g, x)? * gp_amplitude(g, y)?.conj();
                Some((t.re, t.im))
            }
            None => None,
        };
        entries.push(WeakEntry { x: x.clone(), y: y.clone(), values, differences, target });
    }
    Ok(WeakConvergenceReport { entries })
}

/// `(|n…n⟩, |n…n⟩)` for `n < n_max`, the diagonal pairs used for
/// Schmidt-diagonal inputs.
pub fn diagonal_pairs(mode_count: usize, n_max: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0..n_max).map(|n| (vec![n; mode_count], vec![n; mode_count])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{state_psi_lambda, vacuum};
    use crate::protocol::{run, HeadroomPolicy, ProtocolConfig, StateSpec, Tolerances};

    #[test]
    fn gp_targets_are_powers_of_lambda() {
        let cfg = ProtocolConfig {
            state: StateSpec::PsiLambda { lambda: 0.5 },
            filter: FilterSpec::from_delta(1.0, 2).unwrap(),
            rounds: 6,
            cutoff: 6,
            policy: HeadroomPolicy::ExactPair,
            tolerances: Tolerances { leakage_bound: 1.0, ..Default::default() },
        };
        let out = run(&cfg).unwrap();
        let rep = weak_convergence_report(&out.records, &cfg.filter, &diagonal_pairs(2, 3)).unwrap();
        for (n, e) in rep.entries.iter().enumerate() {
            let t = e.target.unwrap();
            assert!((t.0 - 0.25f64.powi(n as i32)).abs() < 1e-12);
            assert!(t.1.abs() < 1e-12);
            assert!((e.values[0].0 - [1.0, 0.25, 0.0][n]).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_ratios_are_constant() {
        let b = BasisSpec::uniform(2, 3).unwrap();
        let f = FilterSpec::from_delta(0.5, 2).unwrap();
        let r = IterationRecord::initial(vacuum(&b), &f).unwrap();
        let recs = vec![r.clone(), r];
        let rep = weak_convergence_report(&recs, &f, &diagonal_pairs(2, 2)).unwrap();
        assert!(rep.entries.iter().all(|e| e.differences.iter().all(|&d| d == 0.0)));
        assert!(rep.entries[1].target.is_none());
    }

    #[test]
    fn target_fidelity_of_the_limit_is_one() {
        let b = BasisSpec::uniform(2, 8).unwrap();
        let rho = state_psi_lambda(0.5, &b).unwrap();
        let f = FilterSpec::from_delta(1.0, 2).unwrap();
        let rec = IterationRecord::initial(rho.clone(), &f).unwrap();
        let g = GaussianOperator::from_moments(&rec.sigma_moments).unwrap();
        let psi = gp_target_ket(&g, &b).unwrap();
        let limit = FockOperator::from_ket(&b, &psi).unwrap();
        assert!((fidelity_to_target(&limit, &psi).unwrap() - 1.0).abs() < 1e-12);
        let f0 = fidelity_to_target(&rho, &psi).unwrap();
        assert!((f0 - rho.fidelity(&limit).unwrap()).abs() < 1e-7);
    }
}
