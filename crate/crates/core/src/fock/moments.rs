//! First moments and covariance matrix of a Fock operator.

use crate::fock::ladder::normal_moment;
use crate::fock::operator::FockOperator;
use crate::gaussian::ladder::{covariance_from_ladder, quadrature_coefficients, LadderMoments};
use crate::{CMatrix, CVector, Error, Result};

/// Traces below this are treated as zero.
pub const TRACE_TOLERANCE: f64 = 1e-14;

/// `d_j = tr(R_j A)` and `Γ_jk = tr({R_j − d_j, R_k − d_k} A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMoments {
    pub d: CVector,
    pub gamma: CMatrix,
}

/// Moments of `A / tr(A)`, computed from exact normally-ordered expectation
/// values so the cutoff never enters through truncated operator products.
pub fn quadrature_moments(a: &FockOperator) -> Result<QuadratureMoments> {
    let tr = a.trace();
    if tr.norm() < TRACE_TOLERANCE {
        return Err(Error::ZeroTrace(tr.norm()));
    }
    let m = a.basis().mode_count();
    let unit = |mode: usize| {
        let mut e = vec![0usize; m];
        e[mode] = 1;
        e
    };
    let pair = |j: usize, k: usize| {
        let mut e = vec![0usize; m];
        e[j] += 1;
        e[k] += 1;
        e
    };
    let zero = vec![0usize; m];
    let nm = |x: &[usize], y: &[usize]| normal_moment(a, x, y).map(|v| v / tr);

    let mut lower = Vec::with_capacity(m);
    let mut raise = Vec::with_capacity(m);
    for mode in 0..m {
        lower.push(nm(&zero, &unit(mode))?);
        raise.push(nm(&unit(mode), &zero)?);
    }
    let n = 2 * m;
    let d = CVector::from_fn(n, |i, _| {
        let (u, v) = quadrature_coefficients(i);
        u * lower[i / 2] + v * raise[i / 2]
    });

    // ⟨a_j a_k⟩, ⟨a_j† a_k†⟩, ⟨a_j† a_k⟩ indexed by modes
    let mut aa = CMatrix::zeros(m, m);
    let mut cc = CMatrix::zeros(m, m);
    let mut ca = CMatrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            aa[(j, k)] = nm(&zero, &pair(j, k))?;
            cc[(j, k)] = nm(&pair(j, k), &zero)?;
            ca[(j, k)] = nm(&unit(j), &unit(k))?;
        }
    }

    let raw = covariance_from_ladder(&LadderMoments { aa, cc, ca });
    let gamma = CMatrix::from_fn(n, n, |r, s| raw[(r, s)] - 2.0 * d[r] * d[s]);
    Ok(QuadratureMoments { d, gamma })
}
