//! Randomized two-stage Runge-Kutta scheme and the randomized Euler baseline.
//!
//! Both schemes march interval by interval (method of steps). On interval
//! `j` step `k`, one uniform draw `gamma` fixes the random sub-step
//! `h' = h gamma` and the random node `theta = t_k^j + h'`.
//!
//! Randomized Runge-Kutta, interval `j = 0` (delayed values come from `phi`):
//!
//! ```text
//! delay_stage = phi(t_k^{-1} + h')
//! stage       = y_k + h' f(t_k, y_k, phi(t_k^{-1}))
//! y_{k+1}     = y_k + h f(theta, stage, delay_stage)
//! ```
//!
//! Interval `j >= 1`:
//!
//! ```text
//! delay_stage = y_k^{j-1} + h' f(t_k^{j-1}, y_k^{j-1}, y_k^{j-2})
//! stage       = y_k^j     + h' f(t_k^j,     y_k^j,     y_k^{j-1})
//! y_{k+1}^j   = y_k^j     + h  f(theta,     stage,     delay_stage)
//! ```
//!
//! The delay stage is recomputed with the current interval's draw; the stage
//! values of interval `j - 1` are never reused.

use serde::{Deserialize, Serialize};

use crate::error::{DdeError, Result};
use crate::grid::UniformGrid;
use crate::problem::{DdeProblem, Evaluator};
use crate::rng::RandomStream;
use crate::trajectory::Trajectory;

/// Supplies one stream of uniform draws per interval.
pub trait StreamFamily {
    type Stream: Iterator<Item = f64>;

    fn interval_stream(&self, interval: usize) -> Self::Stream;
}

/// Counter-based substreams of one Monte Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStreams {
    pub master_seed: u64,
    pub trial: u64,
}

impl TrialStreams {
    pub fn new(master_seed: u64, trial: u64) -> Self {
        Self { master_seed, trial }
    }
}

impl StreamFamily for TrialStreams {
    type Stream = RandomStream;

    fn interval_stream(&self, interval: usize) -> RandomStream {
        RandomStream::substream(self.master_seed, self.trial, interval as u64)
    }
}

/// Explicit draws, one vector per interval. Used to inject or replay draws.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecordedDraws {
    draws: Vec<Vec<f64>>,
}

impl RecordedDraws {
    pub fn new(draws: Vec<Vec<f64>>) -> Self {
        Self { draws }
    }

    /// The same draw on every step of every interval.
    pub fn constant(gamma: f64, n_steps: usize, n_intervals: usize) -> Self {
        Self::new(vec![vec![gamma; n_steps]; n_intervals + 1])
    }

    /// Replays the draws recorded in a trajectory.
    pub fn from_trajectory(traj: &Trajectory) -> Option<Self> {
        (0..=traj.grid().n_intervals())
            .map(|j| traj.interval_draws(j).map(<[f64]>::to_vec))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn draws_mut(&mut self) -> &mut Vec<Vec<f64>> {
        &mut self.draws
    }
}

impl StreamFamily for RecordedDraws {
    type Stream = std::vec::IntoIter<f64>;

    fn interval_stream(&self, interval: usize) -> Self::Stream {
        self.draws
            .get(interval)
            .cloned()
            .unwrap_or_default()
            .into_iter()
    }
}

/// Which randomized scheme to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rrk,
    Euler,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rrk => "rrk",
            Method::Euler => "euler",
        }
    }

    pub fn solve<S: StreamFamily>(
        self,
        problem: &DdeProblem,
        n_steps: usize,
        streams: &S,
    ) -> Result<Trajectory> {
        match self {
            Method::Rrk => rrk_solve(problem, n_steps, streams),
            Method::Euler => euler_solve(problem, n_steps, streams),
        }
    }

    /// Right-hand-side evaluations of one solve.
    pub fn expected_evals(self, n_steps: usize, n_intervals: usize) -> u64 {
        let (n, m) = (n_steps as u64, n_intervals as u64);
        match self {
            Method::Rrk => 2 * n + 3 * n * m,
            Method::Euler => n * (m + 1),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-solve scratch buffers.
struct Scratch {
    drift: Vec<f64>,
    stage: Vec<f64>,
    delay_stage: Vec<f64>,
    delayed: Vec<f64>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Self {
            drift: vec![0.0; dim],
            stage: vec![0.0; dim],
            delay_stage: vec![0.0; dim],
            delayed: vec![0.0; dim],
        }
    }
}

fn fail(interval: isize, step: usize) -> impl Fn(DdeError) -> DdeError {
    move |err| DdeError::SolverFailure {
        interval,
        step,
        reason: err.to_string(),
    }
}

fn check_finite(v: &[f64], what: &str, interval: isize, step: usize) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(DdeError::SolverFailure {
            interval,
            step,
            reason: format!("non-finite {what}"),
        })
    }
}

/// out = base + scale * drift
#[inline]
fn axpy(out: &mut [f64], base: &[f64], scale: f64, drift: &[f64]) {
    for ((o, b), d) in out.iter_mut().zip(base).zip(drift) {
        *o = b + scale * d;
    }
}

fn check_gamma(gamma: f64, interval: isize, step: usize) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(DdeError::SolverFailure {
            interval,
            step,
            reason: format!("draw {gamma} outside (0,1)"),
        })
    }
}

fn first_interval_into(
    ev: &mut Evaluator<'_>,
    grid: &UniformGrid,
    k: usize,
    y_k: &[f64],
    gamma: f64,
    s: &mut Scratch,
    out: &mut [f64],
) -> Result<()> {
    check_gamma(gamma, 0, k)?;
    let h = grid.h();
    let hp = h * gamma;
    let t_k = grid.node(k, 0);
    let t_delay = grid.node(k, -1);
    let theta = t_k + hp;
    let err = fail(0, k);

    ev.initial((t_delay + hp).min(0.0), &mut s.delay_stage)
        .map_err(&err)?;
    ev.initial(t_delay, &mut s.delayed).map_err(&err)?;
    ev.rhs(t_k, y_k, &s.delayed, &mut s.drift).map_err(&err)?;
    axpy(&mut s.stage, y_k, hp, &s.drift);
    check_finite(&s.stage, "stage", 0, k)?;
    ev.rhs(theta, &s.stage, &s.delay_stage, &mut s.drift)
        .map_err(&err)?;
    axpy(out, y_k, h, &s.drift);
    check_finite(out, "update", 0, k)
}

#[allow(clippy::too_many_arguments)]
fn later_interval_into(
    ev: &mut Evaluator<'_>,
    grid: &UniformGrid,
    j: usize,
    k: usize,
    y_j: &[f64],
    y_jm1: &[f64],
    y_jm2: &[f64],
    gamma: f64,
    s: &mut Scratch,
    out: &mut [f64],
) -> Result<()> {
    let ji = j as isize;
    check_gamma(gamma, ji, k)?;
    let h = grid.h();
    let hp = h * gamma;
    let t_k = grid.node(k, ji);
    let theta = t_k + hp;
    let err = fail(ji, k);

    ev.rhs(grid.node(k, ji - 1), y_jm1, y_jm2, &mut s.drift)
        .map_err(&err)?;
    axpy(&mut s.delay_stage, y_jm1, hp, &s.drift);
    check_finite(&s.delay_stage, "delay stage", ji, k)?;

    ev.rhs(t_k, y_j, y_jm1, &mut s.drift).map_err(&err)?;
    axpy(&mut s.stage, y_j, hp, &s.drift);
    check_finite(&s.stage, "stage", ji, k)?;

    ev.rhs(theta, &s.stage, &s.delay_stage, &mut s.drift)
        .map_err(&err)?;
    axpy(out, y_j, h, &s.drift);
    check_finite(out, "update", ji, k)
}

/// One randomized Runge-Kutta step on the first interval `[0, tau]`.
///
/// Performs two right-hand-side and two initial-function evaluations.
pub fn rrk_step_first_interval(
    ev: &mut Evaluator<'_>,
    grid: &UniformGrid,
    k: usize,
    y_k: &[f64],
    gamma: f64,
) -> Result<Vec<f64>> {
    let dim = ev.problem().dim();
    let mut out = vec![0.0; dim];
    first_interval_into(ev, grid, k, y_k, gamma, &mut Scratch::new(dim), &mut out)?;
    Ok(out)
}

/// One randomized Runge-Kutta step on interval `j >= 1`.
///
/// `y_k_jm2` is `y_k^{j-2}`; for `j = 1` that is the initial-column value
/// `phi(t_k^{-1})`. Performs three right-hand-side evaluations.
#[allow(clippy::too_many_arguments)]
pub fn rrk_step_later_interval(
    ev: &mut Evaluator<'_>,
    grid: &UniformGrid,
    j: usize,
    k: usize,
    y_k_j: &[f64],
    y_k_jm1: &[f64],
    y_k_jm2: &[f64],
    gamma: f64,
) -> Result<Vec<f64>> {
    if j == 0 {
        return Err(DdeError::InvalidParameter(
            "later-interval step requires j >= 1".into(),
        ));
    }
    let dim = ev.problem().dim();
    let mut out = vec![0.0; dim];
    later_interval_into(
        ev,
        grid,
        j,
        k,
        y_k_j,
        y_k_jm1,
        y_k_jm2,
        gamma,
        &mut Scratch::new(dim),
        &mut out,
    )?;
    Ok(out)
}

/// One randomized Euler step on interval `j`, with `delayed` the grid-node
/// delayed value (`phi(t_k^{-1})` for `j = 0`, `y_k^{j-1}` otherwise).
pub fn euler_step(
    ev: &mut Evaluator<'_>,
    grid: &UniformGrid,
    j: usize,
    k: usize,
    y_k: &[f64],
    delayed: &[f64],
    gamma: f64,
) -> Result<Vec<f64>> {
    let dim = ev.problem().dim();
    let mut out = vec![0.0; dim];
    euler_into(
        ev,
        grid,
        j,
        k,
        y_k,
        delayed,
        gamma,
        &mut vec![0.0; dim],
        &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn euler_into(
    ev: &mut Evaluator<'_>,
    grid: &UniformGrid,
    j: usize,
    k: usize,
    y_k: &[f64],
    delayed: &[f64],
    gamma: f64,
    drift: &mut [f64],
    out: &mut [f64],
) -> Result<()> {
    let ji = j as isize;
    check_gamma(gamma, ji, k)?;
    let theta = grid.node(k, ji) + grid.h() * gamma;
    ev.rhs(theta, y_k, delayed, drift).map_err(fail(ji, k))?;
    axpy(out, y_k, grid.h(), drift);
    check_finite(out, "update", ji, k)
}

/// Allocates the trajectory and fills the initial column `j = -1`.
fn start_trajectory(problem: &DdeProblem, n_steps: usize) -> Result<Trajectory> {
    let grid = UniformGrid::new(problem.tau(), n_steps, problem.n_intervals())?;
    let mut traj = Trajectory::zeros(grid, problem.dim());
    for k in 0..=n_steps {
        let t = grid.node(k, -1);
        problem
            .initial_into(t, traj.value_mut(k, -1))
            .map_err(fail(-1, k))?;
    }
    Ok(traj)
}

fn next_draw<I: Iterator<Item = f64>>(
    stream: &mut I,
    interval: usize,
    drawn: usize,
) -> Result<f64> {
    stream
        .next()
        .ok_or(DdeError::StreamExhausted { interval, drawn })
}

/// Full randomized Runge-Kutta trajectory on `[-tau, (n + 1) tau]`.
///
/// Interval `j` consumes exactly `N` draws from `streams.interval_stream(j)`.
pub fn rrk_solve<S: StreamFamily>(
    problem: &DdeProblem,
    n_steps: usize,
    streams: &S,
) -> Result<Trajectory> {
    let mut traj = start_trajectory(problem, n_steps)?;
    let grid = *traj.grid();
    let dim = problem.dim();
    let mut ev = Evaluator::new(problem);
    let mut scratch = Scratch::new(dim);
    let mut next = vec![0.0; dim];
    let mut draws = Vec::with_capacity(n_steps * (grid.n_intervals() + 1));

    for j in 0..=grid.n_intervals() {
        let ji = j as isize;
        let junction = traj.value(n_steps, ji - 1).to_vec();
        traj.value_mut(0, ji).copy_from_slice(&junction);
        let mut stream = streams.interval_stream(j);
        for k in 0..n_steps {
            let gamma = next_draw(&mut stream, j, k)?;
            draws.push(gamma);
            if j == 0 {
                first_interval_into(
                    &mut ev,
                    &grid,
                    k,
                    traj.value(k, 0),
                    gamma,
                    &mut scratch,
                    &mut next,
                )?;
            } else {
                later_interval_into(
                    &mut ev,
                    &grid,
                    j,
                    k,
                    traj.value(k, ji),
                    traj.value(k, ji - 1),
                    traj.value(k, ji - 2),
                    gamma,
                    &mut scratch,
                    &mut next,
                )?;
            }
            traj.value_mut(k + 1, ji).copy_from_slice(&next);
        }
    }
    traj.set_f_evals(ev.evals());
    traj.set_draws(draws);
    Ok(traj)
}

/// Randomized Euler baseline: `y_{k+1}^j = y_k^j + h f(theta, y_k^j, Z_k^j)`
/// with `Z_k^j` the delayed value at the grid node.
pub fn euler_solve<S: StreamFamily>(
    problem: &DdeProblem,
    n_steps: usize,
    streams: &S,
) -> Result<Trajectory> {
    let mut traj = start_trajectory(problem, n_steps)?;
    let grid = *traj.grid();
    let dim = problem.dim();
    let mut ev = Evaluator::new(problem);
    let mut drift = vec![0.0; dim];
    let mut next = vec![0.0; dim];
    let mut draws = Vec::with_capacity(n_steps * (grid.n_intervals() + 1));

    for j in 0..=grid.n_intervals() {
        let ji = j as isize;
        let junction = traj.value(n_steps, ji - 1).to_vec();
        traj.value_mut(0, ji).copy_from_slice(&junction);
        let mut stream = streams.interval_stream(j);
        for k in 0..n_steps {
            let gamma = next_draw(&mut stream, j, k)?;
            draws.push(gamma);
            euler_into(
                &mut ev,
                &grid,
                j,
                k,
                traj.value(k, ji),
                traj.value(k, ji - 1),
                gamma,
                &mut drift,
                &mut next,
            )?;
            traj.value_mut(k + 1, ji).copy_from_slice(&next);
        }
    }
    traj.set_f_evals(ev.evals());
    traj.set_draws(draws);
    Ok(traj)
}
