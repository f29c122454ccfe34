use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest total dimension accepted for dense operators.
pub const MAX_DENSE_DIMENSION: usize = 1 << 14;

/// A truncated multimode Fock basis.
///
/// Mode `j` holds photon numbers `0..dims[j]`. Multi-indices are flattened
/// row-major with mode 0 most significant. When two copies of an `m`-party
/// state are combined, mode `2j + k` is party `j`, copy `k`, so the ordering
/// is party-major and copy-minor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisSpec {
    dims: Vec<usize>,
}

impl BasisSpec {
    /// `mode_count` modes, each with photon numbers `0..dim`.
    pub fn uniform(mode_count: usize, dim: usize) -> Result<Self> {
        Self::new(vec![dim; mode_count])
    }

    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("basis needs at least one mode".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("every mode needs dimension >= 1".into()));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::TooLarge(usize::MAX))?;
        if total > MAX_DENSE_DIMENSION {
            return Err(Error::TooLarge(total));
        }
        Ok(Self { dims })
    }

    pub fn mode_count(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, mode: usize) -> usize {
        self.dims[mode]
    }

    /// Uniform per-mode dimension, if all modes share one.
    pub fn uniform_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count() {
            return Err(Error::ModeOutOfRange { mode, mode_count: self.mode_count() });
        }
        Ok(())
    }

    pub fn flat(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        multi.iter().zip(&self.dims).fold(0, |acc, (&n, &d)| {
            debug_assert!(n < d);
            acc * d + n
        })
    }

    /// Flat index, or `None` when some photon number falls outside the cutoff.
    pub fn try_flat(&self, multi: &[usize]) -> Option<usize> {
        if multi.len() != self.dims.len() || multi.iter().zip(&self.dims).any(|(&n, &d)| n >= d) {
            return None;
        }
        Some(self.flat(multi))
    }

    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    /// All multi-indices in flat order.
    pub fn states(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.total_dim()).map(move |i| self.multi(i))
    }

    /// Stride of `mode` in the flat index.
    pub fn stride(&self, mode: usize) -> usize {
        self.dims[mode + 1..].iter().product()
    }

    /// Basis of the concatenated modes `self ⊗ other`.
    pub fn concat(&self, other: &BasisSpec) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }

    /// Basis restricted to the listed modes, in the given order.
    pub fn select(&self, modes: &[usize]) -> Result<Self> {
        for &m in modes {
            self.check_mode(m)?;
        }
        Self::new(modes.iter().map(|&m| self.dims[m]).collect())
    }

    /// Same mode count with every dimension replaced by `dim`.
    pub fn with_uniform_dim(&self, dim: usize) -> Result<Self> {
        Self::uniform(self.mode_count(), dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn party_major_copy_minor() {
        // modes (party 0, copy 0), (party 0, copy 1), (party 1, copy 0), (party 1, copy 1)
        let b = BasisSpec::uniform(4, 3).unwrap();
        assert_eq!(b.flat(&[0, 0, 0, 1]), 1);
        assert_eq!(b.flat(&[0, 1, 0, 0]), 9);
        assert_eq!(b.flat(&[1, 0, 0, 0]), 27);
        assert_eq!(b.stride(1), 9);
    }

    #[test]
    fn rejects_empty_and_huge() {
        assert!(BasisSpec::new(vec![]).is_err());
        assert!(BasisSpec::new(vec![3, 0]).is_err());
        assert!(matches!(BasisSpec::uniform(8, 10), Err(Error::TooLarge(_))));
    }

    proptest! {
        #[test]
        fn flat_multi_round_trip(dims in prop::collection::vec(1usize..5, 1..4), seed in 0usize..10_000) {
            let b = BasisSpec::new(dims).unwrap();
            let flat = seed % b.total_dim();
            prop_assert_eq!(b.flat(&b.multi(flat)), flat);
        }
    }
}
