//! The delay differential equation
//!
//! ```text
//! x'(t) = f(t, x(t), x(t - tau)),   t in [0, (n + 1) tau]
//! x(t)  = phi(t),                   t in [-tau, 0]
//! ```
//!
//! with a constant lag `tau`. The right-hand side and the initial function
//! are opaque callables; regularity constants are declared, never inferred.

use std::fmt;
use std::sync::Arc;

use crate::error::{DdeError, Result};

/// Right-hand side `f(t, x, z)`, writing its value into `out`.
pub type RhsFn = dyn Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync;

/// Initial function `phi(t)` on `[-tau, 0]`, writing its value into `out`.
pub type InitialFn = dyn Fn(f64, &mut [f64]) + Send + Sync;

/// Declared regularity constants of the right-hand side and initial function.
///
/// `alpha` is the Hölder exponent in the delayed state, `gamma` the Hölder
/// exponent in time, `lipschitz_l` the common Lipschitz/Hölder constant,
/// `bound_kbar` a bound on `|f(t, 0, 0)|`. The linear-growth constant is
/// `growth_k` when given, otherwise `bound_kbar + lipschitz_l`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Regularity {
    pub alpha: f64,
    pub gamma: f64,
    pub lipschitz_l: f64,
    pub bound_kbar: f64,
    pub growth_k: Option<f64>,
    pub initial_sup: f64,
}

impl Regularity {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("gamma", self.gamma)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(DdeError::InvalidParameter(format!(
                    "{name} = {v} must lie in (0,1]"
                )));
            }
        }
        for (name, v) in [
            ("lipschitz_l", self.lipschitz_l),
            ("bound_kbar", self.bound_kbar),
            ("initial_sup", self.initial_sup),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(DdeError::InvalidParameter(format!(
                    "{name} = {v} must be finite and nonnegative"
                )));
            }
        }
        if let Some(k) = self.growth_k {
            if !(k.is_finite() && k > 0.0) {
                return Err(DdeError::InvalidParameter(format!(
                    "growth_k = {k} must be finite and positive"
                )));
            }
        }
        Ok(())
    }

    /// Linear-growth constant; falls back to `K̄ + L`.
    pub fn growth_constant(&self) -> f64 {
        self.growth_k.unwrap_or(self.bound_kbar + self.lipschitz_l)
    }
}

/// A constant-lag DDE with its horizon and optional regularity metadata.
///
/// Cheap to clone; the callables are shared.
#[derive(Clone)]
pub struct DdeProblem {
    rhs: Arc<RhsFn>,
    initial: Arc<InitialFn>,
    tau: f64,
    n_intervals: usize,
    dim: usize,
    regularity: Option<Regularity>,
}

impl fmt::Debug for DdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DdeProblem")
            .field("tau", &self.tau)
            .field("n_intervals", &self.n_intervals)
            .field("dim", &self.dim)
            .field("regularity", &self.regularity)
            .finish_non_exhaustive()
    }
}

impl DdeProblem {
    pub fn new<F, G>(rhs: F, initial: G, tau: f64, n_intervals: usize, dim: usize) -> Result<Self>
    where
        F: Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
        G: Fn(f64, &mut [f64]) + Send + Sync + 'static,
    {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(DdeError::InvalidParameter(format!(
                "tau = {tau} must be positive and finite"
            )));
        }
        if dim == 0 {
            return Err(DdeError::InvalidParameter("dim must be at least 1".into()));
        }
        Ok(Self {
            rhs: Arc::new(rhs),
            initial: Arc::new(initial),
            tau,
            n_intervals,
            dim,
            regularity: None,
        })
    }

    /// Scalar convenience constructor for `d = 1`.
    pub fn scalar<F, G>(rhs: F, initial: G, tau: f64, n_intervals: usize) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(
            move |t, x, z, out| out[0] = rhs(t, x[0], z[0]),
            move |t, out| out[0] = initial(t),
            tau,
            n_intervals,
            1,
        )
    }

    pub fn with_regularity(mut self, regularity: Regularity) -> Result<Self> {
        regularity.validate()?;
        self.regularity = Some(regularity);
        Ok(self)
    }

    pub fn with_n_intervals(mut self, n_intervals: usize) -> Self {
        self.n_intervals = n_intervals;
        self
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn regularity(&self) -> Option<&Regularity> {
        self.regularity.as_ref()
    }

    /// End of the solve horizon, `(n + 1) tau`.
    pub fn horizon(&self) -> f64 {
        (self.n_intervals as f64 + 1.0) * self.tau
    }

    /// Evaluates `f(t, x, z)` into `out`, rejecting non-finite results.
    pub fn rhs_into(&self, t: f64, x: &[f64], z: &[f64], out: &mut [f64]) -> Result<()> {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(z.len(), self.dim);
        (self.rhs)(t, x, z, out);
        if out.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(DdeError::NonFiniteRhs {
                t,
                x: x.to_vec(),
                z: z.to_vec(),
            })
        }
    }

    pub fn evaluate_rhs(&self, t: f64, x: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim || z.len() != self.dim {
            return Err(DdeError::InvalidParameter(format!(
                "state vectors must have length {}",
                self.dim
            )));
        }
        let mut out = vec![0.0; self.dim];
        self.rhs_into(t, x, z, &mut out)?;
        Ok(out)
    }

    /// Evaluates `phi(t)` into `out`; `t` must lie in the closed interval `[-tau, 0]`.
    pub fn initial_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        if !(t >= -self.tau && t <= 0.0) {
            return Err(DdeError::OutsideInitialDomain {
                t,
                lower: -self.tau,
            });
        }
        (self.initial)(t, out);
        if out.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(DdeError::NonFiniteInitial { t })
        }
    }

    pub fn evaluate_initial(&self, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.initial_into(t, &mut out)?;
        Ok(out)
    }
}

/// Wraps a problem and counts right-hand-side evaluations.
#[derive(Debug)]
pub struct Evaluator<'a> {
    problem: &'a DdeProblem,
    evals: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a DdeProblem) -> Self {
        Self { problem, evals: 0 }
    }

    pub fn problem(&self) -> &'a DdeProblem {
        self.problem
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn rhs(&mut self, t: f64, x: &[f64], z: &[f64], out: &mut [f64]) -> Result<()> {
        self.evals += 1;
        self.problem.rhs_into(t, x, z, out)
    }

    pub fn initial(&self, t: f64, out: &mut [f64]) -> Result<()> {
        self.problem.initial_into(t, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_rhs() -> DdeProblem {
        DdeProblem::scalar(|_, _, _| 0.0, |_| 1.0, 1.0, 2).unwrap()
    }

    #[test]
    fn constant_zero_rhs() {
        let p = zero_rhs();
        assert_eq!(p.evaluate_rhs(0.3, &[2.0], &[5.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn pure_delay_projection() {
        let p = DdeProblem::scalar(|_, _, z| z, |_| 1.0, 1.0, 2).unwrap();
        assert_eq!(p.evaluate_rhs(0.7, &[9.0], &[3.0]).unwrap(), vec![3.0]);
    }

    #[test]
    fn initial_on_closed_interval() {
        let p = DdeProblem::scalar(|_, _, _| 0.0, |t| t + 1.0, 1.0, 2).unwrap();
        assert_eq!(p.evaluate_initial(-0.25).unwrap(), vec![0.75]);
        assert_eq!(p.evaluate_initial(-1.0).unwrap(), vec![0.0]);
        assert_eq!(p.evaluate_initial(0.0).unwrap(), vec![1.0]);
        assert!(matches!(
            p.evaluate_initial(0.1),
            Err(DdeError::OutsideInitialDomain { .. })
        ));
        assert!(p.evaluate_initial(-1.5).is_err());
    }

    #[test]
    fn non_finite_rhs_reports_location() {
        let p = DdeProblem::scalar(|_, x, _| 1.0 / x, |_| 1.0, 1.0, 0).unwrap();
        match p.evaluate_rhs(0.5, &[0.0], &[2.0]) {
            Err(DdeError::NonFiniteRhs { t, x, z }) => {
                assert_eq!(t, 0.5);
                assert_eq!(x, vec![0.0]);
                assert_eq!(z, vec![2.0]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(DdeProblem::scalar(|_, _, _| 0.0, |_| 1.0, 0.0, 1).is_err());
        assert!(DdeProblem::scalar(|_, _, _| 0.0, |_| 1.0, -1.0, 1).is_err());
        assert!(DdeProblem::new(|_, _, _, _| {}, |_, _| {}, 1.0, 1, 0).is_err());
        let reg = Regularity {
            alpha: 1.5,
            gamma: 0.5,
            lipschitz_l: 1.0,
            bound_kbar: 0.0,
            growth_k: None,
            initial_sup: 1.0,
        };
        assert!(zero_rhs().with_regularity(reg).is_err());
    }

    #[test]
    fn evaluator_counts_calls() {
        let p = zero_rhs();
        let mut ev = Evaluator::new(&p);
        let mut out = [0.0];
        for _ in 0..5 {
            ev.rhs(0.0, &[1.0], &[1.0], &mut out).unwrap();
        }
        assert_eq!(ev.evals(), 5);
    }
}
