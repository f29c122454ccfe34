//! One protocol round on the truncated Fock space, without forming `ρ ⊗ ρ`.
//!
//! With `Π` diagonal and `U = ⊗_j U_j` real, the output is
//!
//! `ρ'[i, i'] = Σ ρ[p, p'] ρ[q, q'] ∏_j κ_j(i_j, i'_j; p_j, p'_j, q_j, q'_j)`,
//!
//! `κ_j = Σ_k π_j(k) ⟨i_j, k|U_j|p_j, q_j⟩ ⟨i'_j, k|U_j|p'_j, q'_j⟩`,
//!
//! where `k` and `q'_j` are fixed by photon-number conservation. The sum is
//! contracted one party at a time.

use crate::filter::FilterSpec;
use crate::fock::{BasisSpec, FockOperator, PairBlocks};
use crate::{CMatrix, Complex64, Error, Result};

/// Largest intermediate tensor, in complex entries.
pub const MAX_INTERMEDIATE: usize = 1 << 26;

/// Copy-1 output photon numbers `0..out_dim`; copy-2 photon numbers `0..=k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Window {
    pub out_dim: usize,
    pub k_max: usize,
}

impl Window {
    /// All photon numbers reachable from inputs below `d`.
    pub fn exact(d: usize) -> Self {
        Self { out_dim: 2 * d - 1, k_max: 2 * (d - 1) }
    }

    /// Both copies kept below `d`.
    pub fn truncated(d: usize) -> Self {
        Self { out_dim: d, k_max: d - 1 }
    }
}

/// `κ` for one party, grouped by output pair `o = i·out_dim + i'`; each entry
/// holds the input group `g = ((p·d + p')·d + q)·d + q'` and its weight.
struct PartyKernel {
    out_dim: usize,
    entries: Vec<Vec<(usize, f64)>>,
}

impl PartyKernel {
    fn new(d: usize, q_filter: f64, window: Window, blocks: &PairBlocks) -> Self {
        let out = window.out_dim;
        let mut entries = vec![Vec::new(); out * out];
        for p in 0..d {
            for pp in 0..d {
                for q in 0..d {
                    for i in 0..out.min(p + q + 1) {
                        let k = p + q - i;
                        if k > window.k_max {
                            continue;
                        }
                        let u = blocks.amplitude(i, k, p, q);
                        if u == 0.0 {
                            continue;
                        }
                        let w = u * q_filter.powi(k as i32);
                        if w == 0.0 {
                            continue;
                        }
                        for ip in 0..out {
                            let Some(qp) = (ip + k).checked_sub(pp) else { continue };
                            if qp >= d {
                                continue;
                            }
                            let v = w * blocks.amplitude(ip, k, pp, qp);
                            if v != 0.0 {
                                entries[i * out + ip].push((((p * d + pp) * d + q) * d + qp, v));
                            }
                        }
                    }
                }
            }
        }
        Self { out_dim: out, entries }
    }
}

/// Unnormalised output operator on the window basis.
pub(crate) fn contract(rho: &FockOperator, filter: &FilterSpec, windows: &[Window]) -> Result<FockOperator> {
    let basis = rho.basis();
    let m = basis.mode_count();
    if filter.mode_count() != m || windows.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "state on {m} modes, filter on {}, {} windows",
            filter.mode_count(),
            windows.len()
        )));
    }
    let dims = basis.dims().to_vec();
    let max_total = dims.iter().map(|&d| 2 * (d - 1)).max().unwrap_or(0);
    let blocks = PairBlocks::new(max_total);
    let kernels: Vec<PartyKernel> =
        (0..m).map(|j| PartyKernel::new(dims[j], filter.q(j), windows[j], &blocks)).collect();
    let out_sq: Vec<usize> = kernels.iter().map(|k| k.out_dim * k.out_dim).collect();
    let group: Vec<usize> = dims.iter().map(|&d| d.pow(4)).collect();

    // largest intermediate: after stage s, ∏_{t≤s} out_t² · ∏_{t>s} d_t⁴
    for s in 0..m {
        let size = out_sq[..=s].iter().chain(&group[s + 1..]).try_fold(1usize, |a, &b| a.checked_mul(b));
        match size {
            Some(n) if n <= MAX_INTERMEDIATE => {}
            _ => return Err(Error::TooLarge(size.unwrap_or(usize::MAX))),
        }
    }

    let mut y = first_stage(rho, &kernels[0], &group)?;
    for s in 1..m {
        let outer: usize = out_sq[..s].iter().product();
        let rest: usize = group[s + 1..].iter().product();
        y = later_stage(&y, &kernels[s], outer, group[s], rest);
    }

    let out_dims: Vec<usize> = kernels.iter().map(|k| k.out_dim).collect();
    let out_basis = BasisSpec::new(out_dims.clone())?;
    let n = out_basis.total_dim();
    let mut data = CMatrix::zeros(n, n);
    let mut row = vec![0usize; m];
    let mut col = vec![0usize; m];
    for (flat, &v) in y.iter().enumerate() {
        let mut rem = flat;
        for j in (0..m).rev() {
            let o = rem % out_sq[j];
            rem /= out_sq[j];
            row[j] = o / out_dims[j];
            col[j] = o % out_dims[j];
        }
        data[(out_basis.flat(&row), out_basis.flat(&col))] = v;
    }
    FockOperator::new(out_basis, data)
}

/// Contract party 0, reading `ρ ⊗ ρ` lazily from sparse slices of `ρ`.
fn first_stage(rho: &FockOperator, kernel: &PartyKernel, group: &[usize]) -> Result<Vec<Complex64>> {
    let basis = rho.basis();
    let m = basis.mode_count();
    let dims = basis.dims();
    let d0 = dims[0];
    let rest: usize = group[1..].iter().product();
    // group strides of the rest parties, party-major
    let mut gstride = vec![1usize; m];
    for j in (1..m.saturating_sub(1)).rev() {
        gstride[j] = gstride[j + 1] * group[j + 1];
    }
    let states: Vec<Vec<usize>> = basis.states().collect();
    // slices[(p0, p0')] lists (offset of (p_rest, p'_rest)), (offset of
    // (q_rest, q'_rest)) and the value
    let mut slices: Vec<Vec<(usize, usize, Complex64)>> = vec![Vec::new(); d0 * d0];
    let data = rho.data();
    for (r, sr) in states.iter().enumerate() {
        for (c, sc) in states.iter().enumerate() {
            let v = data[(r, c)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (mut off_p, mut off_q) = (0usize, 0usize);
            for j in 1..m {
                let d = dims[j];
                off_p += gstride[j] * (sr[j] * d * d * d + sc[j] * d * d);
                off_q += gstride[j] * (sr[j] * d + sc[j]);
            }
            slices[sr[0] * d0 + sc[0]].push((off_p, off_q, v));
        }
    }
    let out_sq = kernel.out_dim * kernel.out_dim;
    let mut y = vec![Complex64::new(0.0, 0.0); out_sq * rest];
    let fill = |o: usize, chunk: &mut [Complex64]| {
        for &(g, w) in &kernel.entries[o] {
            let q_pair = g % (d0 * d0);
            let p_pair = g / (d0 * d0);
            let a = &slices[p_pair];
            let b = &slices[q_pair];
            for &(pa, _, va) in a {
                let wa = va * w;
                for &(_, qb, vb) in b {
                    chunk[pa + qb] += wa * vb;
                }
            }
        }
    };
    for_each_chunk(&mut y, rest, fill);
    Ok(y)
}

/// `Y'[D, o, R] = Σ_g κ[o][g] Y[D, g, R]`, skipping vanishing blocks of `Y`.
fn later_stage(y: &[Complex64], kernel: &PartyKernel, outer: usize, group: usize, rest: usize) -> Vec<Complex64> {
    let out_sq = kernel.out_dim * kernel.out_dim;
    let mut by_group: Vec<Vec<(usize, f64)>> = vec![Vec::new(); group];
    for (o, list) in kernel.entries.iter().enumerate() {
        for &(g, w) in list {
            by_group[g].push((o, w));
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut next = vec![zero; outer * out_sq * rest];
    let fill = |dd: usize, chunk: &mut [Complex64]| {
        let base = dd * group * rest;
        for (g, targets) in by_group.iter().enumerate() {
            let src = &y[base + g * rest..base + (g + 1) * rest];
            if src.iter().all(|v| *v == zero) {
                continue;
            }
            for &(o, w) in targets {
                for (dst, s) in chunk[o * rest..(o + 1) * rest].iter_mut().zip(src) {
                    *dst += s * w;
                }
            }
        }
    };
    for_each_chunk(&mut next, out_sq * rest, fill);
    next
}

#[cfg(feature = "parallel")]
fn for_each_chunk<F>(y: &mut [Complex64], size: usize, f: F)
where
    F: Fn(usize, &mut [Complex64]) + Sync,
{
    use rayon::prelude::*;
    y.par_chunks_mut(size).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(not(feature = "parallel"))]
fn for_each_chunk<F>(y: &mut [Complex64], size: usize, f: F)
where
    F: Fn(usize, &mut [Complex64]),
{
    y.chunks_mut(size).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{beam_splitter_5050, state_phi_mu, state_psi_lambda};
    use crate::linalg::{c, max_abs_diff};

    /// Dense reference: embed each party's two copies at `2(d−1)`, apply the
    /// beam splitters and `1 ⊗ Π` explicitly, trace out copy 2.
    fn brute_force(rho: &FockOperator, filter: &FilterSpec) -> FockOperator {
        let m = rho.basis().mode_count();
        let d = rho.basis().uniform_dim().unwrap();
        let big = 2 * d - 1;
        // modes of ρ⊗ρ: (party j, copy 0) = j, (party j, copy 1) = m + j;
        // permute into party-major, copy-minor order
        let two = rho.tensor(rho).unwrap();
        let src_basis = two.basis().clone();
        let pair_basis = BasisSpec::uniform(2 * m, big).unwrap();
        let n = pair_basis.total_dim();
        let mut x = CMatrix::zeros(n, n);
        let to_pair = |s: &[usize]| {
            let mut t = vec![0; 2 * m];
            for j in 0..m {
                t[2 * j] = s[j];
                t[2 * j + 1] = s[m + j];
            }
            pair_basis.flat(&t)
        };
        let states: Vec<Vec<usize>> = src_basis.states().collect();
        for (i, si) in states.iter().enumerate() {
            for (k, sk) in states.iter().enumerate() {
                x[(to_pair(si), to_pair(sk))] = two.data()[(i, k)];
            }
        }
        let mut op = FockOperator::new(pair_basis.clone(), x).unwrap();
        for j in 0..m {
            let u = beam_splitter_5050(&pair_basis, 2 * j, 2 * j + 1).unwrap();
            op = &(&u * &op) * &u.adjoint();
        }
        let diag: Vec<Complex64> = pair_basis
            .states()
            .map(|s| {
                let w: f64 = (0..m).map(|j| filter.q(j).powi(s[2 * j + 1] as i32)).product();
                c(w, 0.0)
            })
            .collect();
        let pi = FockOperator::from_diagonal(&pair_basis, &diag).unwrap();
        let keep: Vec<usize> = (0..m).map(|j| 2 * j).collect();
        (&op * &pi).partial_trace(&keep).unwrap()
    }

    #[test]
    fn matches_dense_two_copy_construction() {
        let b = BasisSpec::uniform(2, 3).unwrap();
        let data = CMatrix::from_fn(9, 9, |i, j| c(0.1 * (i + j) as f64 + if i == j { 1.0 } else { 0.0 }, 0.03 * (i as f64 - j as f64)));
        let rho = FockOperator::new(b.clone(), data).unwrap();
        for filter in [FilterSpec::from_deltas(&[0.4, 0.8]).unwrap(), FilterSpec::from_delta(1.0, 2).unwrap(), FilterSpec::identity(2)] {
            let fast = contract(&rho, &filter, &[Window::exact(3); 2]).unwrap();
            let slow = brute_force(&rho, &filter);
            assert_eq!(fast.basis(), slow.basis());
            assert!(max_abs_diff(fast.data(), slow.data()) < 1e-12);
        }
    }

    #[test]
    fn three_parties_match_dense() {
        let b = BasisSpec::uniform(3, 2).unwrap();
        let rho = state_phi_mu(0.3, &b).unwrap();
        let filter = FilterSpec::from_delta(0.7, 3).unwrap();
        let fast = contract(&rho, &filter, &[Window::exact(2); 3]).unwrap();
        let slow = brute_force(&rho, &filter);
        assert!(max_abs_diff(fast.data(), slow.data()) < 1e-13);
    }

    #[test]
    fn truncated_window_is_a_sub_block_of_projected_terms() {
        let b = BasisSpec::uniform(2, 3).unwrap();
        let rho = state_psi_lambda(0.7, &b).unwrap();
        let filter = FilterSpec::from_delta(0.5, 2).unwrap();
        let exact = contract(&rho, &filter, &[Window::exact(3); 2]).unwrap();
        let fixed = contract(&rho, &filter, &[Window::truncated(3); 2]).unwrap();
        assert!(fixed.trace().re <= exact.trace().re);
        assert!(fixed.trace().re > 0.0);
    }

    #[test]
    fn vacuum_is_invariant() {
        let b = BasisSpec::uniform(2, 4).unwrap();
        let vac = crate::fock::vacuum(&b);
        let out = contract(&vac, &FilterSpec::from_delta(0.3, 2).unwrap(), &[Window::exact(4); 2]).unwrap();
        assert!((out.element(&[0, 0], &[0, 0]) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((out.trace() - c(1.0, 0.0)).norm() < 1e-15);
    }
}
