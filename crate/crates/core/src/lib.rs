//! Randomized solvers for constant-lag delay differential equations
//!
//! ```text
//! x'(t) = f(t, x(t), x(t - tau)),  t in [0, (n + 1) tau],   x = phi on [-tau, 0]
//! ```
//!
//! whose right-hand side may be only measurable (or Hölder) in time. The
//! crate provides a randomized two-stage Runge-Kutta scheme, a randomized
//! Euler baseline, closed-form a priori bounds, built-in test problems, and a
//! Monte Carlo harness that estimates empirical convergence orders.
//!
//! ```
//! use rrk_dde::{problems, schemes::{rrk_solve, TrialStreams}};
//!
//! let problem = problems::example2(0.5, 0.5, 1.0).unwrap();
//! let traj = rrk_solve(&problem, 64, &TrialStreams::new(7, 0)).unwrap();
//! assert_eq!(traj.f_evals(), 2 * 64 + 3 * 64 * 2);
//! println!("x(3) ~ {}", traj.value(64, 2)[0]);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod grid;
pub mod harness;
pub mod problem;
pub mod problems;
pub mod rng;
pub mod schemes;
pub mod trajectory;

pub use error::{DdeError, Result};
pub use grid::{build_grid, UniformGrid};
pub use problem::{DdeProblem, Evaluator, Regularity};
pub use rng::RandomStream;
pub use schemes::{euler_solve, rrk_solve, Method, RecordedDraws, StreamFamily, TrialStreams};
pub use trajectory::Trajectory;
