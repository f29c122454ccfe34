//! 50:50 beam splitter, `U a_a U† = (a_a − a_b)/√2`, `U a_b U† = (a_a + a_b)/√2`.
//!
//! `U = exp(θ G)` with `G = a_a† a_b − a_a a_b†` and `θ = π/4`. `G` conserves
//! the pair photon number `N = n_a + n_b`, so `U` is block diagonal with one
//! `(N+1)×(N+1)` real orthogonal block per `N`, indexed by `n_a`.

use std::f64::consts::FRAC_PI_4;

use crate::fock::basis::BasisSpec;
use crate::fock::operator::FockOperator;
use crate::{CMatrix, Complex64, Error, RMatrix, Result};

/// Generator restricted to pair states `|n_a, N − n_a⟩` with `n_a ∈ lo..=hi`.
fn block_generator(total: usize, lo: usize, hi: usize) -> RMatrix {
    let size = hi - lo + 1;
    let mut g = RMatrix::zeros(size, size);
    for na in lo..=hi {
        let nb = total - na;
        let col = na - lo;
        // a_a† a_b |na, nb⟩ = √(na+1)√nb |na+1, nb−1⟩
        if nb > 0 && na < hi {
            g[(col + 1, col)] += ((na + 1) as f64).sqrt() * (nb as f64).sqrt();
        }
        // −a_a a_b† |na, nb⟩ = −√na √(nb+1) |na−1, nb+1⟩
        if na > lo {
            g[(col - 1, col)] -= (na as f64).sqrt() * ((nb + 1) as f64).sqrt();
        }
    }
    g
}

fn block_unitary(total: usize, lo: usize, hi: usize) -> RMatrix {
    (block_generator(total, lo, hi) * FRAC_PI_4).exp()
}

/// Exact pair-space blocks of the beam splitter for `N = 0..=max_total`.
#[derive(Debug, Clone)]
pub struct PairBlocks {
    blocks: Vec<RMatrix>,
}

impl PairBlocks {
    pub fn new(max_total: usize) -> Self {
        Self { blocks: (0..=max_total).map(|n| block_unitary(n, 0, n)).collect() }
    }

    pub fn max_total(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `⟨i, k| U |p, q⟩`; zero unless `i + k = p + q`.
    #[inline]
    pub fn amplitude(&self, i: usize, k: usize, p: usize, q: usize) -> f64 {
        let n = p + q;
        if i + k != n {
            return 0.0;
        }
        self.blocks[n][(i, p)]
    }

    pub fn block(&self, total: usize) -> &RMatrix {
        &self.blocks[total]
    }
}

/// Beam splitter between `mode_a` and `mode_b` on a truncated basis.
///
/// Blocks with `N` below both cutoffs are exact. Blocks cut by the truncation
/// are the exponential of the truncated generator, which keeps `U` unitary.
pub fn beam_splitter_5050(basis: &BasisSpec, mode_a: usize, mode_b: usize) -> Result<FockOperator> {
    basis.check_mode(mode_a)?;
    basis.check_mode(mode_b)?;
    if mode_a == mode_b {
        return Err(Error::InvalidArgument("beam splitter needs two distinct modes".into()));
    }
    let (da, db) = (basis.dim(mode_a), basis.dim(mode_b));
    if da != db {
        return Err(Error::InvalidArgument(format!("beam splitter modes have unequal cutoffs {da} and {db}")));
    }
    let d = da;
    let blocks: Vec<(usize, RMatrix)> = (0..=2 * (d - 1))
        .map(|n| {
            let lo = n.saturating_sub(d - 1);
            let hi = n.min(d - 1);
            (lo, block_unitary(n, lo, hi))
        })
        .collect();
    let (sa, sb) = (basis.stride(mode_a), basis.stride(mode_b));
    let dim = basis.total_dim();
    let mut data = CMatrix::zeros(dim, dim);
    for (col, state) in basis.states().enumerate() {
        let (na, nb) = (state[mode_a], state[mode_b]);
        let n = na + nb;
        let base = col - na * sa - nb * sb;
        let (lo, ref block) = blocks[n];
        let hi = n.min(d - 1);
        for out_a in lo..=hi {
            let amp = block[(out_a - lo, na - lo)];
            if amp != 0.0 {
                let row = base + out_a * sa + (n - out_a) * sb;
                data[(row, col)] = Complex64::new(amp, 0.0);
            }
        }
    }
    FockOperator::new(basis.clone(), data)
}
