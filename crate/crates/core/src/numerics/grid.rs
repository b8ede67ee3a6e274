use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniformly spaced sample points `start + i * step`, `0 <= i < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() || step <= 0.0 {
            return Err(Error::Contract(format!(
                "grid needs finite start and positive step (start = {start}, step = {step})"
            )));
        }
        if count < 2 {
            return Err(Error::Contract(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Ok(Self { start, step, count })
    }

    /// Grid with `count` points spanning `[start, end]` inclusive.
    pub fn spanning(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Contract(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    /// Index of the grid point closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let i = ((x - self.start) / self.step).round();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(self.count - 1)
        }
    }

    /// Same sample points up to round-off.
    pub fn matches(&self, other: &UniformGrid) -> bool {
        let scale = self.step.max(other.step);
        self.count == other.count
            && (self.step - other.step).abs() <= 1e-12 * scale
            && (self.start - other.start).abs() <= 1e-9 * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_follow_start_and_step() {
        let g = UniformGrid::new(-1.0, 0.25, 9).unwrap();
        assert_eq!(g.point(0), -1.0);
        assert_eq!(g.point(4), 0.0);
        assert_eq!(g.end(), 1.0);
        assert_eq!(g.points().len(), 9);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(UniformGrid::new(0.0, 0.0, 10).is_err());
        assert!(UniformGrid::new(0.0, -0.1, 10).is_err());
        assert!(UniformGrid::new(0.0, 0.1, 1).is_err());
        assert!(UniformGrid::new(f64::NAN, 0.1, 10).is_err());
        assert!(UniformGrid::spanning(0.0, 0.0, 10).is_err());
    }

    #[test]
    fn nearest_index_clamps() {
        let g = UniformGrid::spanning(0.0, 1.0, 11).unwrap();
        assert_eq!(g.nearest_index(-3.0), 0);
        assert_eq!(g.nearest_index(0.26), 3);
        assert_eq!(g.nearest_index(7.0), 10);
    }
}
