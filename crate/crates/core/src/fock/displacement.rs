//! Displacement operators `D(r) = exp(i r·R)` and characteristic functions
//! `χ_A(r) = tr(D(r) A)`.
//!
//! For one mode, `i(xX + pP) = α a† − α* a` with `α = (i x − p)/√2`. Matrix
//! elements come from `⟨m|D|0⟩ = e^{−|α|²/2} αᵐ/√m!` and
//! `⟨m|D|n+1⟩ = (√m ⟨m−1|D|n⟩ − α* ⟨m|D|n⟩)/√(n+1)`, which reproduces the
//! untruncated operator projected onto the basis, entry for entry.

use serde::{Deserialize, Serialize};

use crate::fock::basis::BasisSpec;
use crate::fock::operator::FockOperator;
use crate::{CMatrix, Complex64, Error, Result};

/// Rejects displacement vectors whose Euclidean norm exceeds `max_norm`.
///
/// Large `|r|` pushes coherent amplitude past the cutoff, so the projected
/// operator stops being close to unitary and `χ` loses meaning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementGuard {
    pub max_norm: f64,
}

impl Default for DisplacementGuard {
    fn default() -> Self {
        Self { max_norm: 16.0 }
    }
}

impl DisplacementGuard {
    pub fn check(&self, r: &[f64]) -> Result<()> {
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > self.max_norm {
            return Err(Error::DisplacementGuard { norm, limit: self.max_norm });
        }
        Ok(())
    }
}

/// Single-mode displacement matrix for quadrature shift `(x, p)` at dimension `d`.
pub fn single_mode_displacement(d: usize, x: f64, p: f64) -> CMatrix {
    let alpha = Complex64::new(-p, x) * std::f64::consts::FRAC_1_SQRT_2;
    let ac = alpha.conj();
    let mut m = CMatrix::zeros(d, d);
    let mut v = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for row in 0..d {
        m[(row, 0)] = v;
        v = v * alpha / ((row + 1) as f64).sqrt();
    }
    for n in 0..d.saturating_sub(1) {
        let norm = 1.0 / ((n + 1) as f64).sqrt();
        for row in 0..d {
            let up = if row > 0 { m[(row - 1, n)] * (row as f64).sqrt() } else { Complex64::new(0.0, 0.0) };
            m[(row, n + 1)] = (up - ac * m[(row, n)]) * norm;
        }
    }
    m
}

fn check_length(basis: &BasisSpec, r: &[f64]) -> Result<()> {
    if r.len() != 2 * basis.mode_count() {
        return Err(Error::DimensionMismatch(format!(
            "displacement needs {} components, got {}",
            2 * basis.mode_count(),
            r.len()
        )));
    }
    Ok(())
}

/// `D(r)` on `basis` with the default guard.
pub fn displacement(basis: &BasisSpec, r: &[f64]) -> Result<FockOperator> {
    displacement_guarded(basis, r, &DisplacementGuard::default())
}

pub fn displacement_guarded(basis: &BasisSpec, r: &[f64], guard: &DisplacementGuard) -> Result<FockOperator> {
    check_length(basis, r)?;
    guard.check(r)?;
    let mut data = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for j in 0..basis.mode_count() {
        data = data.kronecker(&single_mode_displacement(basis.dim(j), r[2 * j], r[2 * j + 1]));
    }
    FockOperator::new(basis.clone(), data)
}

/// `χ_A(r) = tr(D(r) A)` with the default guard.
pub fn char_fn(a: &FockOperator, r: &[f64]) -> Result<Complex64> {
    CharFn::new(a).eval(r)
}

/// Characteristic function of a fixed operator, prepared for repeated
/// evaluation. Only the nonzero entries of `A` are visited.
#[derive(Debug, Clone)]
pub struct CharFn {
    basis: BasisSpec,
    /// `(row multi-index, column multi-index, A[row, col])`.
    entries: Vec<(Vec<usize>, Vec<usize>, Complex64)>,
    guard: DisplacementGuard,
}

impl CharFn {
    pub fn new(a: &FockOperator) -> Self {
        Self::with_guard(a, DisplacementGuard::default())
    }

    pub fn with_guard(a: &FockOperator, guard: DisplacementGuard) -> Self {
        let basis = a.basis().clone();
        let states: Vec<Vec<usize>> = basis.states().collect();
        let data = a.data();
        let mut entries = Vec::new();
        for (i, si) in states.iter().enumerate() {
            for (j, sj) in states.iter().enumerate() {
                let v = data[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((si.clone(), sj.clone(), v));
                }
            }
        }
        Self { basis, entries, guard }
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    /// `tr(D A) = Σ_{y,x} A[y, x] ∏_j D_j[x_j, y_j]`.
    pub fn eval(&self, r: &[f64]) -> Result<Complex64> {
        check_length(&self.basis, r)?;
        self.guard.check(r)?;
        let blocks: Vec<CMatrix> = (0..self.basis.mode_count())
            .map(|j| single_mode_displacement(self.basis.dim(j), r[2 * j], r[2 * j + 1]))
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (row, col, v) in &self.entries {
            let mut prod = *v;
            for (j, b) in blocks.iter().enumerate() {
                prod *= b[(col[j], row[j])];
            }
            total += prod;
        }
        Ok(total)
    }
}
