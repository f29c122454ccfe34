use crate::{CMatrix, Complex64, RMatrix};

/// `Σ = ⊕_j [[0, 1], [−1, 0]]` in `(X₁, P₁, …)` ordering, so `[R_j, R_k] = iΣ_jk`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    sigma: RMatrix,
}

impl SymplecticForm {
    pub fn new(mode_count: usize) -> Self {
        let n = 2 * mode_count;
        let mut sigma = RMatrix::zeros(n, n);
        for j in 0..mode_count {
            sigma[(2 * j, 2 * j + 1)] = 1.0;
            sigma[(2 * j + 1, 2 * j)] = -1.0;
        }
        Self { sigma }
    }

    pub fn mode_count(&self) -> usize {
        self.sigma.nrows() / 2
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.sigma
    }

    /// `iΣ` as a complex matrix.
    pub fn i_sigma(&self) -> CMatrix {
        self.sigma.map(|v| Complex64::new(0.0, v))
    }
}
