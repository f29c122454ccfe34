//! Strong-convergence condition: `|α_0^{x,y}| ≤ α_∞^{x,y}` with `α_∞` real and
//! nonnegative, checked up to a finite order.

use serde::Serialize;

use crate::gaussian::{wick_moments, GaussianOperator};
use crate::moments::table::{multi_indices, MomentTable};
use crate::{Error, Result};

/// Absolute slack for the comparisons.
const SLACK: f64 = 1e-12;
/// Relative imaginary part of `α_∞` tolerated as real.
const REALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongConvergenceEntry {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub alpha0_abs: f64,
    pub alpha_inf_re: f64,
    pub alpha_inf_im: f64,
    pub holds: bool,
    /// Why the entry fails, empty when it holds.
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongConvergenceReport {
    pub max_order: usize,
    pub entries: Vec<StrongConvergenceEntry>,
    pub all_hold: bool,
    pub summary: String,
}

impl StrongConvergenceReport {
    pub fn failures(&self) -> impl Iterator<Item = &StrongConvergenceEntry> {
        self.entries.iter().filter(|e| !e.holds)
    }
}

/// Compare the input moments with those of the limiting Gaussian
/// `σ_∞`, for all `|x|, |y| ≤ max_order`.
pub fn strong_convergence_check(alpha0: &MomentTable, sigma_inf: &GaussianOperator, max_order: usize) -> Result<StrongConvergenceReport> {
    let m = alpha0.mode_count();
    if sigma_inf.mode_count() != m {
        return Err(Error::DimensionMismatch(format!("moments on {m} modes, Gaussian on {}", sigma_inf.mode_count())));
    }
    if max_order > alpha0.max_order() {
        return Err(Error::InvalidArgument(format!("table holds order {} < {max_order}", alpha0.max_order())));
    }
    let idx = multi_indices(m, max_order);
    let mut entries = Vec::new();
    for x in &idx {
        for y in &idx {
            let a0 = alpha0.get(x, y).expect("table is closed").norm();
            let ai = wick_moments(sigma_inf, x, y)?;
            let reason = if ai.im.abs() > REALITY_TOLERANCE * ai.norm().max(1.0) {
                format!("α_∞ has imaginary part {:e}", ai.im)
            } else if ai.re < -SLACK {
                format!("α_∞ = {:e} is negative", ai.re)
            } else if a0 > ai.re + SLACK + 1e-9 * ai.re.abs() {
                format!("|α_0| = {a0:e} exceeds α_∞ = {:e}", ai.re)
            } else {
                String::new()
            };
            entries.push(StrongConvergenceEntry {
                x: x.clone(),
                y: y.clone(),
                alpha0_abs: a0,
                alpha_inf_re: ai.re,
                alpha_inf_im: ai.im,
                holds: reason.is_empty(),
                reason,
            });
        }
    }
    let failed = entries.iter().filter(|e| !e.holds).count();
    let all_hold = failed == 0;
    let summary = if all_hold {
        format!("conditions hold up to order {max_order}; higher orders are not checked")
    } else {
        format!("{failed} of {} moment conditions fail up to order {max_order}", entries.len())
    };
    Ok(StrongConvergenceReport { max_order, entries, all_hold, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{vacuum, BasisSpec};
    use crate::moments::moments_from_fock;
    use crate::CMatrix;

    #[test]
    fn vacuum_passes() {
        let t = moments_from_fock(&vacuum(&BasisSpec::uniform(2, 5).unwrap()), 4).unwrap();
        let g = GaussianOperator::centered(CMatrix::identity(4, 4)).unwrap();
        let r = strong_convergence_check(&t, &g, 4).unwrap();
        assert!(r.all_hold);
        assert!(r.summary.contains("not checked"));
    }
}
