use serde::Serialize;

use crate::error::{DdeError, Result};

/// Uniform grid `t_k^j = j tau + k h` with `h = tau / N`, for
/// `k in 0..=N` and `j in -1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid {
    tau: f64,
    n_steps: usize,
    h: f64,
    n_intervals: usize,
}

impl UniformGrid {
    pub fn new(tau: f64, n_steps: usize, n_intervals: usize) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(DdeError::InvalidParameter(format!(
                "tau = {tau} must be positive and finite"
            )));
        }
        if n_steps == 0 {
            return Err(DdeError::InvalidParameter(
                "number of steps per interval must be at least 1".into(),
            ));
        }
        Ok(Self {
            tau,
            n_steps,
            h: tau / n_steps as f64,
            n_intervals,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Steps per interval, `N`.
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    /// Grid node `t_k^j`. Interval endpoints are computed as multiples of
    /// `tau`, so `node(N, j) == node(0, j + 1)` exactly.
    pub fn node(&self, k: usize, j: isize) -> f64 {
        debug_assert!(k <= self.n_steps);
        if k == 0 {
            j as f64 * self.tau
        } else if k == self.n_steps {
            (j + 1) as f64 * self.tau
        } else {
            j as f64 * self.tau + k as f64 * self.h
        }
    }
}

/// Same as [`UniformGrid::new`].
pub fn build_grid(tau: f64, n_steps: usize, n_intervals: usize) -> Result<UniformGrid> {
    UniformGrid::new(tau, n_steps, n_intervals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_nodes() {
        let g = build_grid(1.0, 4, 2).unwrap();
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.node(2, 1), 1.5);

        let g = build_grid(2.0, 2, 0).unwrap();
        assert_eq!(g.node(1, 0), 1.0);
    }

    #[test]
    fn junction_node_matches() {
        let g = build_grid(1.0, 3, 1).unwrap();
        assert_eq!(g.node(3, 0), 1.0);
        assert_eq!(g.node(0, 1), 1.0);
        // the generic formula is within one ulp of the junction
        let generic = 0.0 + 3.0 * g.h();
        assert!((generic - 1.0).abs() <= f64::EPSILON);
        assert_eq!(g.node(3, -1), 0.0);
    }

    #[test]
    fn step_times_count_recovers_tau() {
        for &(tau, n) in &[(1.0, 3usize), (0.7, 11), (2.5, 64), (1e-3, 7)] {
            let g = build_grid(tau, n, 1).unwrap();
            assert!((g.h() * n as f64 - tau).abs() <= tau * f64::EPSILON);
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(build_grid(0.0, 4, 1).is_err());
        assert!(build_grid(-1.0, 4, 1).is_err());
        assert!(build_grid(1.0, 0, 1).is_err());
        assert!(build_grid(f64::NAN, 4, 1).is_err());
    }
}
