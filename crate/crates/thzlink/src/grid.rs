//! Uniform frequency grids.

use crate::error::{Result, ThzError};

/// Upper edge of the modeled band, Hz.
pub const F_MAX_HZ: f64 = 10e12;

/// A uniform frequency grid over `[f_start, f_stop]` with `n_points` samples.
///
/// Grid points are always computed as `f_start + i * step` with
/// `step = (f_stop - f_start) / (n_points - 1)`, so a grid with `2n - 1`
/// points shares every other point bitwise with the `n`-point grid over the
/// same span.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    f_start: f64,
    f_stop: f64,
    n_points: usize,
}

impl FrequencyGrid {
    /// Builds a grid. `f_start` must be positive, below `f_stop`, and the
    /// band must stay within [`F_MAX_HZ`]; at least two points are required.
    pub fn new(f_start: f64, f_stop: f64, n_points: usize) -> Result<Self> {
        if !f_start.is_finite() || !f_stop.is_finite() {
            return Err(ThzError::InvalidGrid("non-finite bound".into()));
        }
        if f_start <= 0.0 || f_start >= f_stop {
            return Err(ThzError::InvalidGrid(format!(
                "need 0 < f_start < f_stop, got {f_start:e}..{f_stop:e}"
            )));
        }
        if f_stop > F_MAX_HZ {
            return Err(ThzError::InvalidGrid(format!(
                "f_stop {f_stop:e} above {F_MAX_HZ:e} Hz"
            )));
        }
        if n_points < 2 {
            return Err(ThzError::InvalidGrid(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        Ok(Self {
            f_start,
            f_stop,
            n_points,
        })
    }

    pub fn f_start(&self) -> f64 {
        self.f_start
    }

    pub fn f_stop(&self) -> f64 {
        self.f_stop
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Spacing between adjacent points, Hz.
    pub fn step(&self) -> f64 {
        (self.f_stop - self.f_start) / (self.n_points - 1) as f64
    }

    /// Frequency of point `i`.
    pub fn frequency(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        self.f_start + i as f64 * self.step()
    }

    /// All grid frequencies in ascending order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.frequency(i)).collect()
    }

    /// Whether `f` lies within the closed grid span.
    pub fn contains(&self, f: f64) -> bool {
        f >= self.f_start && f <= self.f_stop
    }

    /// Index of the grid point nearest to `f`, if `f` is in span.
    pub fn nearest_index(&self, f: f64) -> Option<usize> {
        if !self.contains(f) {
            return None;
        }
        let i = ((f - self.f_start) / self.step()).round() as usize;
        Some(i.min(self.n_points - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_bounds() {
        assert!(FrequencyGrid::new(0.0, 1e12, 10).is_err());
        assert!(FrequencyGrid::new(2e12, 1e12, 10).is_err());
        assert!(FrequencyGrid::new(1e11, 11e12, 10).is_err());
        assert!(FrequencyGrid::new(1e11, 1e12, 1).is_err());
    }

    #[test]
    fn endpoints_are_exact() {
        let g = FrequencyGrid::new(1e11, 2e12, 77).unwrap();
        assert_eq!(g.frequency(0), 1e11);
        assert_eq!(g.frequency(76), 1e11 + 76.0 * g.step());
        assert!((g.frequency(76) - 2e12).abs() < 1e-3);
    }

    #[test]
    fn refinement_shares_points_bitwise() {
        let coarse = FrequencyGrid::new(1e11, 2e12, 1001).unwrap();
        let fine = FrequencyGrid::new(1e11, 2e12, 2001).unwrap();
        for i in 0..coarse.n_points() {
            assert_eq!(coarse.frequency(i).to_bits(), fine.frequency(2 * i).to_bits());
        }
    }

    #[test]
    fn nearest_index_clamps_to_span() {
        let g = FrequencyGrid::new(1e11, 2e11, 11).unwrap();
        assert_eq!(g.nearest_index(1.04e11), Some(0));
        assert_eq!(g.nearest_index(1.96e11), Some(10));
        assert_eq!(g.nearest_index(9e10), None);
    }
}
