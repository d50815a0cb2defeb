//! A priori solution bounds and theoretical convergence orders.

use serde::Serialize;

use crate::error::{DdeError, Result};
use crate::problem::DdeProblem;
use crate::trajectory::Trajectory;

/// Interval-wise sup bounds `K_{-1}, K_0, ..., K_n` on the exact solution
/// and the Lipschitz constants of its restriction to each interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisBounds {
    /// `k_seq[0]` is `K_{-1}`; `k_seq[j + 1]` is `K_j`.
    pub k_seq: Vec<f64>,
    /// `lipschitz_seq[j]` for `j = 0..=n`.
    pub lipschitz_seq: Vec<f64>,
    /// Set when the recursion overflowed to `+inf`.
    pub saturated: bool,
}

impl AnalysisBounds {
    /// `K_j` for `j >= -1`.
    pub fn k(&self, j: isize) -> f64 {
        self.k_seq[(j + 1) as usize]
    }

    pub fn n_intervals(&self) -> usize {
        self.lipschitz_seq.len().saturating_sub(1)
    }
}

/// `K_{-1} = initial_sup`,
/// `K_j = (1 + K_{j-1})(1 + K tau) exp((1 + K_{j-1}) K tau)`, and the
/// Lipschitz constants `(1 + K_{j-1})(1 + K_j) K`.
///
/// Overflow is not an error: the affected entries are `+inf` and
/// `saturated` is set.
pub fn a_priori_bounds(
    growth_k: f64,
    initial_sup: f64,
    tau: f64,
    n: usize,
) -> Result<AnalysisBounds> {
    if !(growth_k.is_finite() && growth_k > 0.0) {
        return Err(DdeError::InvalidParameter(format!(
            "growth constant K = {growth_k} must be positive and finite"
        )));
    }
    if !(initial_sup.is_finite() && initial_sup >= 0.0) {
        return Err(DdeError::InvalidParameter(format!(
            "initial sup = {initial_sup} must be nonnegative and finite"
        )));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(DdeError::InvalidParameter(format!(
            "tau = {tau} must be positive and finite"
        )));
    }
    let kt = growth_k * tau;
    let mut k_seq = Vec::with_capacity(n + 2);
    let mut lipschitz_seq = Vec::with_capacity(n + 1);
    k_seq.push(initial_sup);
    for _ in 0..=n {
        let prev = *k_seq.last().unwrap();
        let kj = (1.0 + prev) * (1.0 + kt) * ((1.0 + prev) * kt).exp();
        lipschitz_seq.push((1.0 + prev) * (1.0 + kj) * growth_k);
        k_seq.push(kj);
    }
    let saturated = k_seq.iter().chain(&lipschitz_seq).any(|v| v.is_infinite());
    Ok(AnalysisBounds {
        k_seq,
        lipschitz_seq,
        saturated,
    })
}

/// Bounds from the problem's declared regularity, if any.
pub fn bounds_for(problem: &DdeProblem) -> Option<Result<AnalysisBounds>> {
    problem.regularity().map(|r| {
        a_priori_bounds(
            r.growth_constant(),
            r.initial_sup,
            problem.tau(),
            problem.n_intervals(),
        )
    })
}

/// `alpha^j (1/2 + min(gamma, alpha))`, the `L^p` error exponent on interval `j`.
pub fn theoretical_order(alpha: f64, gamma: f64, j: usize) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("gamma", gamma)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(DdeError::InvalidParameter(format!(
                "{name} = {v} must lie in (0,1]"
            )));
        }
    }
    Ok(alpha.powi(j as i32) * (0.5 + gamma.min(alpha)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalBoundCheck {
    pub interval: usize,
    pub sup: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub intervals: Vec<IntervalBoundCheck>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.intervals.iter().all(|c| c.pass)
    }
}

/// Compares `max_k |y_k^j|` with `K_j` on each interval `j >= 0`.
///
/// A violation is reported, not raised.
pub fn check_trajectory_bound(traj: &Trajectory, bounds: &AnalysisBounds) -> Result<BoundReport> {
    let n = traj.grid().n_intervals();
    if bounds.n_intervals() != n {
        return Err(DdeError::InvalidParameter(format!(
            "bounds cover {} intervals, trajectory {}",
            bounds.n_intervals() + 1,
            n + 1
        )));
    }
    let intervals = (0..=n)
        .map(|j| {
            let sup = traj.interval_sup(j as isize);
            let bound = bounds.k(j as isize);
            IntervalBoundCheck {
                interval: j,
                sup,
                bound,
                pass: sup <= bound,
            }
        })
        .collect();
    Ok(BoundReport { intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn first_bound_values() {
        let b = a_priori_bounds(1.0, 0.0, 1.0, 0).unwrap();
        assert!((b.k(0) - 2.0 * E).abs() < 1e-12);
        assert!((b.lipschitz_seq[0] - (1.0 + 2.0 * E)).abs() < 1e-12);
        let b = a_priori_bounds(1.0, 1.0, 1.0, 0).unwrap();
        assert!((b.k(0) - 4.0 * E * E).abs() < 1e-12);
        assert!((b.k(0) - 29.5562).abs() < 1e-4);
    }

    #[test]
    fn strictly_increasing_and_saturation() {
        let b = a_priori_bounds(0.5, 0.0, 0.3, 3).unwrap();
        assert!(b.k_seq.windows(2).all(|w| w[1] > w[0]));
        assert!(!b.saturated);
        let b = a_priori_bounds(1.0, 1.0, 1.0, 4).unwrap();
        assert!(b.saturated);
        assert_eq!(b.k(4), f64::INFINITY);
    }

    #[test]
    fn monotone_in_parameters() {
        let base = a_priori_bounds(0.7, 0.5, 0.4, 2).unwrap();
        for other in [
            a_priori_bounds(0.9, 0.5, 0.4, 2).unwrap(),
            a_priori_bounds(0.7, 0.8, 0.4, 2).unwrap(),
            a_priori_bounds(0.7, 0.5, 0.6, 2).unwrap(),
        ] {
            for (a, b) in base.k_seq.iter().zip(&other.k_seq) {
                assert!(b >= a);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(a_priori_bounds(0.0, 1.0, 1.0, 1).is_err());
        assert!(a_priori_bounds(1.0, -1.0, 1.0, 1).is_err());
        assert!(a_priori_bounds(1.0, 1.0, 0.0, 1).is_err());
        assert!(theoretical_order(0.0, 0.5, 0).is_err());
        assert!(theoretical_order(0.5, 1.5, 0).is_err());
    }

    #[test]
    fn order_values() {
        assert!((theoretical_order(0.5, 0.5, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((theoretical_order(0.1, 0.1, 2).unwrap() - 0.006).abs() < 1e-15);
        assert!((theoretical_order(1.0, 1.0, 5).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn order_monotone_in_j_and_swap_symmetry_only_at_zero() {
        let (a, g) = (0.3, 0.8);
        for j in 0..6 {
            assert!(theoretical_order(a, g, j + 1).unwrap() <= theoretical_order(a, g, j).unwrap());
        }
        assert_eq!(
            theoretical_order(a, g, 0).unwrap(),
            theoretical_order(g, a, 0).unwrap()
        );
        assert_ne!(
            theoretical_order(a, g, 1).unwrap(),
            theoretical_order(g, a, 1).unwrap()
        );
    }
}
