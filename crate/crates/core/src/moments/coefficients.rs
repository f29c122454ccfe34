//! Exact recursion coefficients.

use serde::Serialize;

use crate::{Error, Result};

/// `integer · 2^{−half_powers/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactCoefficient {
    pub integer: u128,
    pub half_powers: u32,
}

impl ExactCoefficient {
    pub fn value(&self) -> f64 {
        self.integer as f64 * 2f64.powf(-(self.half_powers as f64) / 2.0)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// `C^{x,y}_{u,v} = ∏_j 2^{−(x_j+y_j)/2} binom(x_j, u_j) binom(y_j, v_j)`.
pub fn recursion_coefficients(x: &[usize], y: &[usize], u: &[usize], v: &[usize]) -> Result<ExactCoefficient> {
    let m = x.len();
    if y.len() != m || u.len() != m || v.len() != m {
        return Err(Error::DimensionMismatch("multi-indices of unequal length".into()));
    }
    if (0..m).any(|j| u[j] > x[j] || v[j] > y[j]) {
        return Err(Error::InvalidArgument(format!("need u ≤ x and v ≤ y componentwise: x={x:?} y={y:?} u={u:?} v={v:?}")));
    }
    let integer = (0..m).map(|j| binomial(x[j], u[j]) * binomial(y[j], v[j])).product();
    let half_powers = (0..m).map(|j| (x[j] + y[j]) as u32).sum();
    Ok(ExactCoefficient { integer, half_powers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::table::multi_indices;

    /// Expand `((a₁† + a₂†)/√2)^x ((a₁ + a₂)/√2)^y` for one mode term by term
    /// and collect the coefficient of `a₁†^u a₂†^{x−u} a₁^v a₂^{y−v}`.
    fn expand_one_mode(x: usize, y: usize, u: usize, v: usize) -> f64 {
        let mut total = 0.0;
        for left in 0..(1u32 << x) {
            if left.count_ones() as usize != u {
                continue;
            }
            for right in 0..(1u32 << y) {
                if right.count_ones() as usize == v {
                    total += 1.0;
                }
            }
        }
        total * 2f64.powf(-((x + y) as f64) / 2.0)
    }

    #[test]
    fn hand_values() {
        for (u, v) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(recursion_coefficients(&[1], &[1], &[u], &[v]).unwrap().value(), 0.5);
        }
        let top = recursion_coefficients(&[2, 1], &[0, 3], &[2, 1], &[0, 3]).unwrap();
        assert_eq!(top.integer, 1);
        assert!((top.value() - 2f64.powf(-3.0)).abs() < 1e-15);
        assert_eq!(recursion_coefficients(&[2], &[0], &[1], &[0]).unwrap().value(), 1.0);
        assert!(recursion_coefficients(&[1], &[1], &[2], &[0]).is_err());
    }

    #[test]
    fn matches_term_by_term_expansion() {
        for x in 0..5 {
            for y in 0..5 {
                for u in 0..=x {
                    for v in 0..=y {
                        let c = recursion_coefficients(&[x], &[y], &[u], &[v]).unwrap().value();
                        assert!((c - expand_one_mode(x, y, u, v)).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_sum_identity_is_exact() {
        for m in 1..=3 {
            for x in multi_indices(m, 4) {
                for y in multi_indices(m, 4) {
                    let order = x.iter().sum::<usize>() + y.iter().sum::<usize>();
                    let mut sum = 0u128;
                    for u in multi_indices(m, 4).into_iter().filter(|u| u.iter().zip(&x).all(|(a, b)| a <= b)) {
                        for v in multi_indices(m, 4).into_iter().filter(|v| v.iter().zip(&y).all(|(a, b)| a <= b)) {
                            let c = recursion_coefficients(&x, &y, &u, &v).unwrap();
                            assert_eq!(c.half_powers as usize, order);
                            sum += c.integer;
                        }
                    }
                    // Σ C = 2^{order/2} ⇔ Σ integer = 2^{order}
                    assert_eq!(sum, 1u128 << order);
                }
            }
        }
    }
}
