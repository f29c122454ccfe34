//! Ladder and quadrature operators, and exact normally-ordered expectation
//! values.

use crate::fock::basis::BasisSpec;
use crate::fock::operator::FockOperator;
use crate::{CMatrix, Complex64, Error, Result};

/// Lowering operator `a` on `mode`, identity elsewhere.
pub fn annihilation(basis: &BasisSpec, mode: usize) -> Result<FockOperator> {
    basis.check_mode(mode)?;
    let n = basis.total_dim();
    let stride = basis.stride(mode);
    let mut data = CMatrix::zeros(n, n);
    for (col, state) in basis.states().enumerate() {
        let k = state[mode];
        if k > 0 {
            data[(col - stride, col)] = Complex64::new((k as f64).sqrt(), 0.0);
        }
    }
    FockOperator::new(basis.clone(), data)
}

pub fn creation(basis: &BasisSpec, mode: usize) -> Result<FockOperator> {
    Ok(annihilation(basis, mode)?.adjoint())
}

/// `a†a` on `mode`.
pub fn number(basis: &BasisSpec, mode: usize) -> Result<FockOperator> {
    basis.check_mode(mode)?;
    let diag: Vec<Complex64> =
        basis.states().map(|s| Complex64::new(s[mode] as f64, 0.0)).collect();
    FockOperator::from_diagonal(basis, &diag)
}

/// Total photon number `Σ_j a_j† a_j`.
pub fn total_number(basis: &BasisSpec) -> FockOperator {
    let diag: Vec<Complex64> =
        basis.states().map(|s| Complex64::new(s.iter().sum::<usize>() as f64, 0.0)).collect();
    FockOperator::from_diagonal(basis, &diag).expect("diagonal matches basis")
}

/// `X = (a† + a)/√2`.
pub fn position(basis: &BasisSpec, mode: usize) -> Result<FockOperator> {
    let a = annihilation(basis, mode)?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Ok((&a.adjoint() + &a).scale(s))
}

/// `P = i(a† − a)/√2`.
pub fn momentum(basis: &BasisSpec, mode: usize) -> Result<FockOperator> {
    let a = annihilation(basis, mode)?;
    let s = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    Ok((&a.adjoint() - &a).scale(s))
}

/// Quadrature `R_j` in the ordering `(X₁, P₁, …, X_m, P_m)`.
pub fn quadrature(basis: &BasisSpec, index: usize) -> Result<FockOperator> {
    if index % 2 == 0 {
        position(basis, index / 2)
    } else {
        momentum(basis, index / 2)
    }
}

/// `tr((∏_k a_k^{x_k})† (∏_j a_j^{y_j}) A)` evaluated exactly from matrix
/// elements, without forming truncated operator products.
pub fn normal_moment(op: &FockOperator, x: &[usize], y: &[usize]) -> Result<Complex64> {
    let basis = op.basis();
    let m = basis.mode_count();
    if x.len() != m || y.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "moment indices need {m} entries, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let data = op.data();
    let mut total = Complex64::new(0.0, 0.0);
    let mut target = vec![0usize; m];
    'states: for (col, state) in basis.states().enumerate() {
        // (a†)^x a^y |n'⟩ = c |n' − y + x⟩ ; contributes c · A[n', n' − y + x]
        let mut coef = 1.0;
        for j in 0..m {
            let n = state[j];
            if n < y[j] {
                continue 'states;
            }
            let lowered = n - y[j];
            let raised = lowered + x[j];
            if raised >= basis.dim(j) {
                continue 'states;
            }
            coef *= falling_sqrt(n, y[j]) * falling_sqrt(raised, x[j]);
            target[j] = raised;
        }
        let row = basis.flat(&target);
        total += data[(col, row)] * coef;
    }
    Ok(total)
}

/// `sqrt(n! / (n − k)!)`.
fn falling_sqrt(n: usize, k: usize) -> f64 {
    ((n + 1 - k)..=n).fold(1.0, |acc, v| acc * (v as f64).sqrt())
}
