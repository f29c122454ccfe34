use std::collections::BTreeMap;

use serde::Serialize;

use crate::fock::{normal_moment, FockOperator};
use crate::moments::coefficients::recursion_coefficients;
use crate::{Complex64, Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 4;

/// All multi-indices with `m` entries and total at most `max_order`,
/// in lexicographic order.
pub fn multi_indices(m: usize, max_order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    fn rec(j: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[j] = k;
            rec(j + 1, left - k, cur, out);
        }
        cur[j] = 0;
    }
    rec(0, max_order, &mut cur, &mut out);
    out
}

/// `α^{x,y}` for every `(x, y)` with `|x|, |y| ≤ max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    mode_count: usize,
    max_order: usize,
    entries: BTreeMap<(Vec<usize>, Vec<usize>), Complex64>,
}

#[derive(Serialize)]
struct EntryView<'a> {
    x: &'a [usize],
    y: &'a [usize],
    re: f64,
    im: f64,
}

impl Serialize for MomentTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<EntryView> =
            self.entries.iter().map(|((x, y), a)| EntryView { x, y, re: a.re, im: a.im }).collect();
        v.serialize(s)
    }
}

impl MomentTable {
    /// Table filled by `f(x, y)`.
    pub fn from_fn(mode_count: usize, max_order: usize, mut f: impl FnMut(&[usize], &[usize]) -> Result<Complex64>) -> Result<Self> {
        let idx = multi_indices(mode_count, max_order);
        let mut entries = BTreeMap::new();
        for x in &idx {
            for y in &idx {
                entries.insert((x.clone(), y.clone()), f(x, y)?);
            }
        }
        Ok(Self { mode_count, max_order, entries })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn get(&self, x: &[usize], y: &[usize]) -> Option<Complex64> {
        self.entries.get(&(x.to_vec(), y.to_vec())).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &[usize], Complex64)> {
        self.entries.iter().map(|((x, y), v)| (x.as_slice(), y.as_slice(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest entrywise difference; `None` if the index sets differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.mode_count != other.mode_count || self.max_order != other.max_order {
            return None;
        }
        Some(self.iter().map(|(x, y, a)| (a - other.get(x, y).unwrap_or_default()).norm()).fold(0.0, f64::max))
    }
}

fn dominated(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(p, q)| p <= q)
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

/// One round of the recursion on the whole table.
pub fn moment_step(table: &MomentTable) -> MomentTable {
    let idx = multi_indices(table.mode_count, table.max_order);
    let mut entries = BTreeMap::new();
    for x in &idx {
        for y in &idx {
            let mut total = Complex64::new(0.0, 0.0);
            for u in idx.iter().filter(|u| dominated(u, x)) {
                let xu = minus(x, u);
                for v in idx.iter().filter(|v| dominated(v, y)) {
                    let c = recursion_coefficients(x, y, u, v).expect("u ≤ x, v ≤ y").value();
                    let a = table.entries[&(u.clone(), v.clone())];
                    let b = table.entries[&(xu.clone(), minus(y, v))];
                    total += a * b * c;
                }
            }
            entries.insert((x.clone(), y.clone()), total);
        }
    }
    MomentTable { mode_count: table.mode_count, max_order: table.max_order, entries }
}

/// Moments of `σ / tr σ` from its matrix elements. Needs every cutoff
/// dimension above `max_order`.
pub fn moments_from_fock(sigma: &FockOperator, max_order: usize) -> Result<MomentTable> {
    let basis = sigma.basis();
    if let Some(&d) = basis.dims().iter().find(|&&d| d <= max_order) {
        return Err(Error::InvalidArgument(format!("cutoff dimension {d} too small for moments of order {max_order}")));
    }
    let tr = sigma.trace();
    if tr.norm() < 1e-300 {
        return Err(Error::ZeroTrace(tr.norm()));
    }
    MomentTable::from_fn(basis.mode_count(), max_order, |x, y| Ok(normal_moment(sigma, x, y)? / tr))
}
