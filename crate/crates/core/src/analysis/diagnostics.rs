//! Phase-space checks evaluated on a grid.

use serde::Serialize;

use crate::analysis::grid::PhaseSpaceGrid;
use crate::fock::{CharFn, FockOperator};
use crate::{Error, Result};

/// `max_r f(r)` over the grid; errors from `f` propagate.
fn grid_max<F>(grid: &PhaseSpaceGrid, mode_count: usize, f: F) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let eval = |i: usize| -> Result<(f64, usize)> { Ok((f(&grid.point(mode_count, i))?, i)) };
    let mut best = (f64::NEG_INFINITY, 0usize);
    for i in 0..grid.len(mode_count) {
        let (val, i) = eval(i)?;
        if val > best.0 {
            best = (val, i);
        }
    }
    Ok((best.0, grid.point(mode_count, best.1)))
}

/// `max_r |χ_{σ_{n+1}}(r) − χ_{σ_n}(r/√2)²|`.
pub fn doubling_check(sigma_n: &FockOperator, sigma_next: &FockOperator, grid: &PhaseSpaceGrid) -> Result<f64> {
    let m = sigma_n.basis().mode_count();
    if sigma_next.basis().mode_count() != m {
        return Err(Error::DimensionMismatch("σ_n and σ_{n+1} have different mode counts".into()));
    }
    let prev = CharFn::new(sigma_n);
    let next = CharFn::new(sigma_next);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (max, _) = grid_max(grid, m, |r| {
        let half: Vec<f64> = r.iter().map(|v| v * s).collect();
        let a = prev.eval(&half)?;
        Ok((next.eval(r)? - a * a).norm())
    })?;
    Ok(max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedChiReport {
    pub max_abs: f64,
    pub argmax: Vec<f64>,
    /// `max |χ| > 1 + 1e−9` somewhere on the grid.
    pub exceeds: bool,
    pub points: usize,
}

/// `max |χ_σ(r)|` over the grid. Sampled, so it can refute but never prove
/// `|χ_σ| ≤ 1`.
pub fn bounded_chi_check(sigma: &FockOperator, grid: &PhaseSpaceGrid) -> Result<BoundedChiReport> {
    let m = sigma.basis().mode_count();
    let chi = CharFn::new(sigma);
    let (max_abs, argmax) = grid_max(grid, m, |r| Ok(chi.eval(r)?.norm()))?;
    Ok(BoundedChiReport { max_abs, argmax, exceeds: max_abs > 1.0 + 1e-9, points: grid.len(m) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::FilterSpec;
    use crate::fock::{state_psi_lambda, vacuum, BasisSpec};

    #[test]
    fn vacuum_is_a_fixed_point() {
        let b = BasisSpec::uniform(1, 12).unwrap();
        let v = vacuum(&b);
        assert!(doubling_check(&v, &v, &PhaseSpaceGrid::default()).unwrap() < 1e-12);
        let r = bounded_chi_check(&v, &PhaseSpaceGrid::default()).unwrap();
        assert!((r.max_abs - 1.0).abs() < 1e-15);
        assert_eq!(r.argmax, vec![0.0, 0.0]);
    }

    #[test]
    fn filtered_psi_is_bounded() {
        let b = BasisSpec::uniform(2, 3).unwrap();
        let (sigma, _) = FilterSpec::from_delta(1.0, 2).unwrap().sigma_of(&state_psi_lambda(0.5, &b).unwrap()).unwrap();
        let r = bounded_chi_check(&sigma, &PhaseSpaceGrid::default()).unwrap();
        assert!(!r.exceeds);
        assert_eq!(r.points, 6561);
    }
}
