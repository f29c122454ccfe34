//! Normally ordered moments of zero-mean Gaussian operators by Wick pairing.

use crate::gaussian::ladder::{ladder_vector, pair_expectation};
use crate::gaussian::operator::GaussianOperator;
use crate::gaussian::symplectic::SymplecticForm;
use crate::{CMatrix, CVector, Complex64, Error, Result};

/// First moments above this are rejected.
const MEAN_TOLERANCE: f64 = 1e-12;

/// `tr((∏_k a_k^{x_k})† (∏_j a_j^{y_j}) G)`, summing over all perfect pairings
/// of the ordered operator string `a†…a† a…a`.
pub fn wick_moments(g: &GaussianOperator, x: &[usize], y: &[usize]) -> Result<Complex64> {
    let m = g.mode_count();
    if x.len() != m || y.len() != m {
        return Err(Error::DimensionMismatch(format!("moment indices need {m} entries")));
    }
    let mean = g.d().iter().fold(0.0f64, |acc, v| acc.max(v.norm()));
    if mean > MEAN_TOLERANCE {
        return Err(Error::NonzeroMean(mean));
    }
    let mut ops: Vec<CVector> = Vec::new();
    for (mode, &k) in x.iter().enumerate() {
        ops.extend(std::iter::repeat_n(ladder_vector(m, mode, true), k));
    }
    for (mode, &k) in y.iter().enumerate() {
        ops.extend(std::iter::repeat_n(ladder_vector(m, mode, false), k));
    }
    if ops.len() % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let gp = g.gamma() + SymplecticForm::new(m).i_sigma();
    let n = ops.len();
    let pair = CMatrix::from_fn(n, n, |i, j| if i < j { pair_expectation(&gp, &ops[i], &ops[j]) } else { Complex64::new(0.0, 0.0) });
    let mut used = vec![false; n];
    Ok(g.scale() * pairings(&pair, &mut used))
}

/// Sum over perfect matchings of the unused indices, pairing the first free
/// index with each later one.
fn pairings(pair: &CMatrix, used: &mut [bool]) -> Complex64 {
    let Some(first) = used.iter().position(|u| !u) else {
        return Complex64::new(1.0, 0.0);
    };
    used[first] = true;
    let mut total = Complex64::new(0.0, 0.0);
    for j in first + 1..used.len() {
        if !used[j] {
            let w = pair[(first, j)];
            if w != Complex64::new(0.0, 0.0) {
                used[j] = true;
                total += w * pairings(pair, used);
                used[j] = false;
            }
        }
    }
    used[first] = false;
    total
}
