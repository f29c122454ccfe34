//! Small dense helpers shared by the Fock and Gaussian layers.

use nalgebra::linalg::SymmetricEigen;

use crate::{CMatrix, CVector, Complex64, Error, RMatrix, Result};

/// Matrices whose 2-norm condition number exceeds this are treated as singular.
pub const DEFAULT_MAX_CONDITION: f64 = 1e12;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Singular values, descending.
///
/// The iterative SVD can stall on some rank-deficient inputs, so it is capped
/// and falls back to `√eig(M†M)`.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let cap = 200 * (m.nrows().max(m.ncols()) + 1);
    let mut s: Vec<f64> = match nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, cap) {
        Some(svd) => svd.singular_values.iter().copied().collect(),
        None => hermitian_eigenvalues(&(m.adjoint() * m)).iter().map(|v| v.max(0.0).sqrt()).collect(),
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// 2-norm condition number; infinite for exactly singular input.
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Inverse with a condition-number guard.
///
/// Goes through an LU factorisation: the closed-form small-matrix inverse in
/// nalgebra loses digits on ill-conditioned 4×4 inputs.
pub fn guarded_inverse(m: &CMatrix, max_condition: f64, context: &str) -> Result<CMatrix> {
    check_condition(m, max_condition, context)?;
    m.clone().lu().try_inverse().ok_or(Error::Singular { condition: f64::INFINITY, context: context.to_string() })
}

/// Solution of `m x = rhs` with a condition-number guard.
pub fn guarded_solve(m: &CMatrix, rhs: &CMatrix, max_condition: f64, context: &str) -> Result<CMatrix> {
    check_condition(m, max_condition, context)?;
    m.clone().lu().solve(rhs).ok_or(Error::Singular { condition: f64::INFINITY, context: context.to_string() })
}

fn check_condition(m: &CMatrix, max_condition: f64, context: &str) -> Result<f64> {
    let condition = condition_number(m);
    if !condition.is_finite() || condition > max_condition {
        return Err(Error::Singular { condition, context: context.to_string() });
    }
    Ok(condition)
}

/// Eigendecomposition of a Hermitian (or real symmetric) matrix with a
/// capped iteration count, relaxing the tolerance if the first pass stalls.
pub fn symmetric_eigen<T: nalgebra::ComplexField<RealField = f64>>(h: nalgebra::DMatrix<T>) -> SymmetricEigen<T, nalgebra::Dyn> {
    let cap = 200 * (h.nrows() + 1);
    SymmetricEigen::try_new(h.clone(), f64::EPSILON, cap)
        .or_else(|| SymmetricEigen::try_new(h.clone(), 1e3 * f64::EPSILON, 10 * cap))
        .unwrap_or_else(|| SymmetricEigen::new(h))
}

/// Index sets of the connected components of the nonzero pattern of `h`.
fn components(h: &CMatrix) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && (h[(i, j)] != Complex64::new(0.0, 0.0) || h[(j, i)] != Complex64::new(0.0, 0.0)) {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part
/// of `m`.
///
/// Decoupled blocks are diagonalised separately. Besides saving work on the
/// sparse states the protocol produces, this avoids NaNs the dense solver
/// returns for some matrices with many exactly zero rows.
pub fn hermitian_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let mut pairs: Vec<(f64, CVector)> = Vec::with_capacity(n);
    for comp in components(&h) {
        let k = comp.len();
        if k == 1 {
            pairs.push((h[(comp[0], comp[0])].re, CVector::from_fn(n, |i, _| if i == comp[0] { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })));
            continue;
        }
        let sub = CMatrix::from_fn(k, k, |a, b| h[(comp[a], comp[b])]);
        let mut eig = symmetric_eigen(sub.clone());
        let mut shift = 0.0;
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            shift = max_abs(&sub).max(1.0);
            eig = symmetric_eigen(sub + CMatrix::identity(k, k) * Complex64::new(shift, 0.0));
        }
        for c in 0..k {
            let mut v = CVector::zeros(n);
            for (a, &row) in comp.iter().enumerate() {
                v[row] = eig.eigenvectors[(a, c)];
            }
            pairs.push((eig.eigenvalues[c] - shift, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = CMatrix::from_columns(&pairs.into_iter().map(|p| p.1).collect::<Vec<_>>());
    (values, vectors)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigh(m).0
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

pub fn symmetry_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.transpose())
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn imag_defect(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
