use std::ops::{Add, Mul, Sub};

use crate::fock::basis::BasisSpec;
use crate::linalg::{self, hermitian_eigenvalues};
use crate::{CMatrix, CVector, Complex64, Error, Result};

/// Dense operator on a truncated multimode Fock basis.
///
/// Hermiticity and positivity are checkable properties, not invariants: the
/// filtered operators `ρΠ / tr(ρΠ)` used by the protocol analysis are not
/// Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    basis: BasisSpec,
    data: CMatrix,
}

impl FockOperator {
    pub fn new(basis: BasisSpec, data: CMatrix) -> Result<Self> {
        let n = basis.total_dim();
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "basis dimension {n} vs matrix {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { basis, data })
    }

    pub fn zeros(basis: &BasisSpec) -> Self {
        let n = basis.total_dim();
        Self { basis: basis.clone(), data: CMatrix::zeros(n, n) }
    }

    pub fn identity(basis: &BasisSpec) -> Self {
        let n = basis.total_dim();
        Self { basis: basis.clone(), data: CMatrix::identity(n, n) }
    }

    pub fn from_diagonal(basis: &BasisSpec, diag: &[Complex64]) -> Result<Self> {
        if diag.len() != basis.total_dim() {
            return Err(Error::DimensionMismatch("diagonal length".into()));
        }
        let data = CMatrix::from_diagonal(&CVector::from_column_slice(diag));
        Ok(Self { basis: basis.clone(), data })
    }

    /// `|ψ⟩⟨ψ|` for the (not necessarily normalised) vector `ket`.
    pub fn from_ket(basis: &BasisSpec, ket: &CVector) -> Result<Self> {
        if ket.len() != basis.total_dim() {
            return Err(Error::DimensionMismatch("ket length".into()));
        }
        Ok(Self { basis: basis.clone(), data: ket * ket.adjoint() })
    }

    /// `|x⟩⟨y|` for Fock multi-indices `x`, `y`.
    pub fn outer(basis: &BasisSpec, x: &[usize], y: &[usize]) -> Result<Self> {
        let (i, j) = match (basis.try_flat(x), basis.try_flat(y)) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(Error::InvalidArgument(format!("Fock index {x:?} or {y:?} outside basis"))),
        };
        let mut op = Self::zeros(basis);
        op.data[(i, j)] = Complex64::new(1.0, 0.0);
        Ok(op)
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Matrix element `⟨x|A|y⟩`; zero when either index is outside the cutoff.
    pub fn element(&self, x: &[usize], y: &[usize]) -> Complex64 {
        match (self.basis.try_flat(x), self.basis.try_flat(y)) {
            (Some(i), Some(j)) => self.data[(i, j)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self { basis: self.basis.clone(), data: self.data.adjoint() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { basis: self.basis.clone(), data: &self.data * s }
    }

    /// `A / tr(A)`.
    pub fn normalized(&self, tol: f64) -> Result<Self> {
        let t = self.trace();
        if t.norm() <= tol {
            return Err(Error::ZeroTrace(t.norm()));
        }
        Ok(self.scale(t.inv()))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_basis(other)?;
        Ok(Self { basis: self.basis.clone(), data: &self.data * &other.data })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            basis: self.basis.clone(),
            data: &self.matmul(other)?.data - &other.matmul(self)?.data,
        })
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.data)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.data).first().copied().unwrap_or(0.0)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.min_eigenvalue() >= -tol
    }

    /// `tr(B A)` for an observable `B` on the same basis.
    pub fn expectation(&self, observable: &Self) -> Result<Complex64> {
        self.check_same_basis(observable)?;
        // tr(BA) = Σ_ij B_ij A_ji
        Ok(observable
            .data
            .iter()
            .zip(self.data.transpose().iter())
            .map(|(b, a)| b * a)
            .sum())
    }

    /// Tensor product on the concatenated basis: `self` modes come first.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let basis = self.basis.concat(&other.basis)?;
        Ok(Self { basis, data: linalg::kron(&self.data, &other.data) })
    }

    /// Partial trace keeping the listed modes (returned in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::InvalidArgument("partial trace needs a nonempty keep set".into()));
        }
        for &m in &keep {
            self.basis.check_mode(m)?;
        }
        let traced: Vec<usize> = (0..self.basis.mode_count()).filter(|m| !keep.contains(m)).collect();
        let kept_basis = self.basis.select(&keep)?;
        let kept_off = self.offsets(&keep)?;
        let traced_off = if traced.is_empty() { vec![0] } else { self.offsets(&traced)? };
        let n = kept_basis.total_dim();
        let mut out = CMatrix::zeros(n, n);
        for (r, &ro) in kept_off.iter().enumerate() {
            for (c, &co) in kept_off.iter().enumerate() {
                out[(r, c)] = traced_off.iter().map(|&t| self.data[(ro + t, co + t)]).sum();
            }
        }
        Ok(Self { basis: kept_basis, data: out })
    }

    /// Flat-index contribution of each state of the sub-basis formed by `modes`.
    pub(crate) fn offsets(&self, modes: &[usize]) -> Result<Vec<usize>> {
        let sub = self.basis.select(modes)?;
        let strides: Vec<usize> = modes.iter().map(|&m| self.basis.stride(m)).collect();
        Ok(sub
            .states()
            .map(|s| s.iter().zip(&strides).map(|(n, st)| n * st).sum())
            .collect())
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        linalg::singular_values(&self.data).iter().sum()
    }

    /// Root fidelity `tr √(√ρ σ √ρ)` between two density operators.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        self.check_same_basis(other)?;
        let a = psd_sqrt(&self.data);
        let inner = &a * &other.data * &a;
        Ok(linalg::hermitian_eigenvalues(&inner).iter().map(|v| v.max(0.0).sqrt()).sum())
    }

    /// Copy embedded into (or truncated onto) `target`, matching multi-indices.
    /// Returns the operator and the trace weight of dropped diagonal entries.
    pub fn reembed(&self, target: &BasisSpec) -> Result<(Self, f64)> {
        if target.mode_count() != self.basis.mode_count() {
            return Err(Error::DimensionMismatch("reembed needs equal mode counts".into()));
        }
        let map: Vec<Option<usize>> = self.basis.states().map(|s| target.try_flat(&s)).collect();
        let n = target.total_dim();
        let mut out = CMatrix::zeros(n, n);
        let mut dropped = 0.0;
        for (i, mi) in map.iter().enumerate() {
            match mi {
                Some(ti) => {
                    for (j, mj) in map.iter().enumerate() {
                        if let Some(tj) = mj {
                            out[(*ti, *tj)] = self.data[(i, j)];
                        }
                    }
                }
                None => dropped += self.data[(i, i)].re,
            }
        }
        Ok((Self { basis: target.clone(), data: out }, dropped))
    }

    fn check_same_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch(format!(
                "bases {:?} and {:?}",
                self.basis.dims(),
                other.basis.dims()
            )));
        }
        Ok(())
    }
}

/// `|⟨ψ|φ⟩|` for unit vectors.
pub fn fidelity_pure(psi: &CVector, phi: &CVector) -> Result<f64> {
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch("ket lengths differ".into()));
    }
    Ok(psi.dotc(phi).norm())
}

fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = linalg::hermitian_eigh(m);
    let sq: Vec<Complex64> = values.iter().map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)).collect();
    &vectors * CMatrix::from_diagonal(&CVector::from_vec(sq)) * vectors.adjoint()
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: Self) -> FockOperator {
        assert_eq!(self.basis, rhs.basis, "basis mismatch");
        FockOperator { basis: self.basis.clone(), data: &self.data + &rhs.data }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: Self) -> FockOperator {
        assert_eq!(self.basis, rhs.basis, "basis mismatch");
        FockOperator { basis: self.basis.clone(), data: &self.data - &rhs.data }
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: Self) -> FockOperator {
        assert_eq!(self.basis, rhs.basis, "basis mismatch");
        FockOperator { basis: self.basis.clone(), data: &self.data * &rhs.data }
    }
}
