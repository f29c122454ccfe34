use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Cartesian grid on `[−R, R]^{2m}` with an odd number of points per axis, so
/// it contains the origin and is symmetric under `r → −r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSpaceGrid {
    pub radius: f64,
    pub points: usize,
}

impl Default for PhaseSpaceGrid {
    fn default() -> Self {
        Self { radius: 4.0, points: 9 }
    }
}

impl PhaseSpaceGrid {
    pub fn new(radius: f64, points: usize) -> Result<Self> {
        let g = Self { radius, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Config(format!("grid radius must be positive, got {}", self.radius)));
        }
        if self.points % 2 == 0 {
            return Err(Error::Config(format!("grid needs an odd number of points per axis, got {}", self.points)));
        }
        Ok(())
    }

    pub fn axis(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![0.0];
        }
        let h = 2.0 * self.radius / (self.points - 1) as f64;
        let half = (self.points / 2) as i64;
        (-half..=half).map(|k| k as f64 * h).collect()
    }

    /// Number of points in dimension `2m`.
    pub fn len(&self, mode_count: usize) -> usize {
        self.points.pow(2 * mode_count as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    /// The `index`-th point in dimension `2m`, first coordinate most significant.
    pub fn point(&self, mode_count: usize, mut index: usize) -> Vec<f64> {
        let axis = self.axis();
        let n = 2 * mode_count;
        let mut r = vec![0.0; n];
        for j in (0..n).rev() {
            r[j] = axis[index % self.points];
            index /= self.points;
        }
        r
    }

    pub fn points(&self, mode_count: usize) -> Vec<Vec<f64>> {
        (0..self.len(mode_count)).map(|i| self.point(mode_count, i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_origin_and_is_symmetric() {
        let g = PhaseSpaceGrid::default();
        let pts = g.points(1);
        assert_eq!(pts.len(), 81);
        assert!(pts.contains(&vec![0.0, 0.0]));
        for p in &pts {
            let neg: Vec<f64> = p.iter().map(|v| -v).collect();
            assert!(pts.contains(&neg));
        }
        assert_eq!(g.axis().first(), Some(&-4.0));
        assert!(PhaseSpaceGrid::new(4.0, 8).is_err());
    }
}
