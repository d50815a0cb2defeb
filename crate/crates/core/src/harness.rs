//! Monte Carlo convergence studies.
//!
//! Every coarse trajectory is compared with one shared reference: either a
//! fine randomized Runge-Kutta run on its own substream family, or the exact
//! solution sampled on the reference grid when the problem has one. Errors
//! are aggregated per interval as `(mean_m err_m^p)^(1/p)` and an order is
//! fitted to `log2(error)` against `log2(h)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{self, AnalysisBounds};
use crate::error::{DdeError, Result};
use crate::grid::UniformGrid;
use crate::problems::ProblemSpec;
use crate::rng::REFERENCE_TRIAL;
use crate::schemes::{rrk_solve, Method, TrialStreams};
use crate::trajectory::{fmt17, norm, Trajectory};

/// Which nodes of an interval enter the error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMetric {
    /// `max_k |x(t_k^j) - y_k^j|`
    #[default]
    MaxOverGrid,
    /// `|x(t_N^j) - y_N^j|`
    Terminal,
}

/// Which reference the coarse runs are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Exact solution when the problem has one, otherwise simulated.
    #[default]
    Auto,
    /// Always a fine randomized Runge-Kutta run.
    Simulated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub problem_name: String,
    pub step_exponents: Vec<u32>,
    pub ref_exponent: u32,
    pub trials: usize,
    pub p_norm: f64,
    pub metric: ErrorMetric,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    pub reference: ReferenceKind,
    /// Worker threads; `None` lets rayon decide. Results do not depend on it.
    pub jobs: Option<usize>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            problem_name: String::new(),
            step_exponents: (5..=10).collect(),
            ref_exponent: 13,
            trials: 200,
            p_norm: 2.0,
            metric: ErrorMetric::MaxOverGrid,
            master_seed: 0,
            methods: vec![Method::Rrk],
            reference: ReferenceKind::Auto,
            jobs: None,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(DdeError::InvalidParameter(m));
        if self.step_exponents.is_empty() {
            return bad("at least one step exponent is required".into());
        }
        let finest = *self.step_exponents.iter().max().unwrap();
        if self.ref_exponent <= finest {
            return bad(format!(
                "reference exponent {} must exceed every step exponent (max {finest})",
                self.ref_exponent
            ));
        }
        if self.ref_exponent > 40 {
            return bad(format!(
                "reference exponent {} is too large",
                self.ref_exponent
            ));
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if !(self.p_norm.is_finite() && self.p_norm >= 2.0) {
            return bad(format!("p = {} must be finite and at least 2", self.p_norm));
        }
        if self.methods.is_empty() {
            return bad("at least one method is required".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be positive".into());
        }
        Ok(())
    }
}

/// Steps per interval for `h = 2^-exponent`, if `tau / h` is an integer.
pub fn dyadic_steps(tau: f64, exponent: u32) -> Result<usize> {
    let n = tau * 2f64.powi(exponent as i32);
    if n >= 1.0 && n.fract() == 0.0 && n <= 1e15 {
        Ok(n as usize)
    } else {
        Err(DdeError::InvalidParameter(format!(
            "h = 2^-{exponent} does not divide tau = {tau}"
        )))
    }
}

/// Reference trajectory at `h_ref = 2^-ref_exponent`, drawn from a substream
/// family that no trial uses.
pub fn compute_reference(
    spec: &ProblemSpec,
    ref_exponent: u32,
    master_seed: u64,
) -> Result<Trajectory> {
    let n_ref = dyadic_steps(spec.problem.tau(), ref_exponent)?;
    rrk_solve(
        &spec.problem,
        n_ref,
        &TrialStreams::new(master_seed, REFERENCE_TRIAL),
    )
}

/// Reference according to `kind`.
pub fn reference_for(
    spec: &ProblemSpec,
    ref_exponent: u32,
    master_seed: u64,
    kind: ReferenceKind,
) -> Result<Trajectory> {
    match (&spec.exact, kind) {
        (Some(exact), ReferenceKind::Auto) => {
            let n_ref = dyadic_steps(spec.problem.tau(), ref_exponent)?;
            let grid = UniformGrid::new(spec.problem.tau(), n_ref, spec.problem.n_intervals())?;
            Ok(Trajectory::from_exact(grid, spec.problem.dim(), |t| {
                exact(t)
            }))
        }
        _ => compute_reference(spec, ref_exponent, master_seed),
    }
}

/// Error of `coarse` on interval `j` against `reference` at the shared nodes.
pub fn interval_error(
    coarse: &Trajectory,
    reference: &Trajectory,
    j: usize,
    metric: ErrorMetric,
) -> Result<f64> {
    let (cg, rg) = (coarse.grid(), reference.grid());
    if cg.tau() != rg.tau() {
        return Err(DdeError::GridMismatch(format!(
            "tau {} vs {}",
            cg.tau(),
            rg.tau()
        )));
    }
    if cg.n_intervals() != rg.n_intervals() || j > cg.n_intervals() {
        return Err(DdeError::GridMismatch(format!(
            "interval {j} not shared (horizons {} and {})",
            cg.n_intervals(),
            rg.n_intervals()
        )));
    }
    if coarse.dim() != reference.dim() {
        return Err(DdeError::GridMismatch("dimension differs".into()));
    }
    if rg.n_steps() % cg.n_steps() != 0 {
        return Err(DdeError::GridMismatch(format!(
            "reference has {} steps per interval, not a multiple of {}",
            rg.n_steps(),
            cg.n_steps()
        )));
    }
    let ratio = rg.n_steps() / cg.n_steps();
    let ji = j as isize;
    let dist = |k: usize| {
        let diff: Vec<f64> = coarse
            .value(k, ji)
            .iter()
            .zip(reference.value(k * ratio, ji))
            .map(|(a, b)| a - b)
            .collect();
        norm(&diff)
    };
    Ok(match metric {
        ErrorMetric::Terminal => dist(cg.n_steps()),
        ErrorMetric::MaxOverGrid => (0..=cg.n_steps()).map(dist).fold(0.0, f64::max),
    })
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `(mean x^p)^(1/p)`; `None` for an empty sample.
pub fn power_mean(samples: &[f64], p: f64) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    let s = compensated_sum(samples.iter().map(|e| e.powf(p)));
    Some((s / samples.len() as f64).powf(1.0 / p))
}

/// Per-trial outcome of one `(method, h)` row.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEstimate {
    /// `error[j]`, the p-th power mean over successful trials.
    pub error: Vec<f64>,
    /// Standard error of the mean of `err^p`, per interval.
    pub std_error_p: Vec<f64>,
    /// `per_trial[m][j]` for each successful trial.
    pub per_trial: Vec<Vec<f64>>,
    pub trials_used: usize,
    pub failures: usize,
    pub wall_time_s: f64,
}

enum TrialOutcome {
    Ok { errors: Vec<f64>, seconds: f64 },
    Failed { seconds: f64 },
}

fn run_in_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(1) => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| DdeError::StudyFailure(e.to_string()))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Runs `trials` independent trajectories at `h = 2^-h_exponent` and
/// aggregates their interval errors against `reference`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_error_norm(
    spec: &ProblemSpec,
    method: Method,
    h_exponent: u32,
    reference: &Trajectory,
    trials: usize,
    p: f64,
    metric: ErrorMetric,
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<ErrorEstimate> {
    let n_steps = dyadic_steps(spec.problem.tau(), h_exponent)?;
    let n_intervals = spec.problem.n_intervals();
    let one = |m: usize| -> Result<TrialOutcome> {
        let start = Instant::now();
        let solved = method.solve(
            &spec.problem,
            n_steps,
            &TrialStreams::new(master_seed, m as u64),
        );
        let seconds = start.elapsed().as_secs_f64();
        match solved {
            Ok(traj) => {
                let errors = (0..=n_intervals)
                    .map(|j| interval_error(&traj, reference, j, metric))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TrialOutcome::Ok { errors, seconds })
            }
            Err(DdeError::SolverFailure { .. }) => Ok(TrialOutcome::Failed { seconds }),
            Err(e) => Err(e),
        }
    };
    let outcomes: Vec<Result<TrialOutcome>> = if jobs == Some(1) {
        (0..trials).map(one).collect()
    } else {
        run_in_pool(jobs, || (0..trials).into_par_iter().map(one).collect())?
    };

    let mut per_trial = Vec::with_capacity(trials);
    let mut failures = 0;
    let mut times = Vec::with_capacity(trials);
    for outcome in outcomes {
        match outcome? {
            TrialOutcome::Ok { errors, seconds } => {
                per_trial.push(errors);
                times.push(seconds);
            }
            TrialOutcome::Failed { seconds } => {
                failures += 1;
                times.push(seconds);
            }
        }
    }
    if per_trial.is_empty() {
        return Err(DdeError::StudyFailure(format!(
            "all {trials} trials failed for {method} at h = 2^-{h_exponent}"
        )));
    }
    let mut error = Vec::with_capacity(n_intervals + 1);
    let mut std_error_p = Vec::with_capacity(n_intervals + 1);
    for j in 0..=n_intervals {
        let col: Vec<f64> = per_trial.iter().map(|e| e[j]).collect();
        error.push(power_mean(&col, p).expect("nonempty"));
        std_error_p.push(std_error_of_powers(&col, p));
    }
    Ok(ErrorEstimate {
        error,
        std_error_p,
        trials_used: per_trial.len(),
        per_trial,
        failures,
        wall_time_s: compensated_sum(times),
    })
}

fn std_error_of_powers(samples: &[f64], p: f64) -> f64 {
    let m = samples.len();
    if m < 2 {
        return 0.0;
    }
    let powers: Vec<f64> = samples.iter().map(|e| e.powf(p)).collect();
    let mean = compensated_sum(powers.iter().copied()) / m as f64;
    let var = compensated_sum(powers.iter().map(|v| (v - mean) * (v - mean))) / (m - 1) as f64;
    (var / m as f64).sqrt()
}

/// Least-squares line through `(log2 h, log2 error)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderFit {
    /// Empirical order: positive when the error shrinks with `h`.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log2 units.
    pub residual: f64,
    pub points: usize,
}

/// Fits `log2(error) = slope * log2(h) + intercept`. Points with a
/// nonpositive or non-finite error are dropped.
pub fn fit_order(h_values: &[f64], errors: &[f64]) -> Result<OrderFit> {
    if h_values.len() != errors.len() {
        return Err(DdeError::FitFailure(format!(
            "{} step sizes but {} errors",
            h_values.len(),
            errors.len()
        )));
    }
    let pts: Vec<(f64, f64)> = h_values
        .iter()
        .zip(errors)
        .filter(|(h, e)| **h > 0.0 && **e > 0.0 && e.is_finite() && h.is_finite())
        .map(|(h, e)| (h.log2(), e.log2()))
        .collect();
    if pts.len() < 2 {
        return Err(DdeError::FitFailure(format!(
            "{} usable points, need at least 2",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(DdeError::FitFailure("all step sizes are equal".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(OrderFit {
        slope,
        intercept,
        residual,
        points: pts.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub method: Method,
    pub h_exponent: u32,
    pub h: f64,
    pub interval: usize,
    /// `None` when every trial failed.
    pub error: Option<f64>,
    pub std_error_p: Option<f64>,
    pub p: f64,
    pub trials_used: usize,
    pub failures: usize,
    pub theory_order: Option<f64>,
    pub k_bound: Option<f64>,
    pub wall_time_s: f64,
    /// More than 1% of the trials failed.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeRow {
    pub method: Method,
    pub interval: usize,
    /// Order fitted on the p-th-root error (root-MSE for `p = 2`).
    pub slope: Option<f64>,
    pub residual: Option<f64>,
    /// Order fitted on `error^p` (the MSE itself for `p = 2`).
    pub mse_slope: Option<f64>,
    pub theory_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub reference: String,
    pub rows: Vec<StudyRow>,
    pub slopes: Vec<SlopeRow>,
    pub theory: Vec<Option<f64>>,
    pub bounds: Option<AnalysisBounds>,
}

impl StudyResult {
    pub fn any_row_all_failed(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_none())
    }

    pub fn slope(&self, method: Method, interval: usize) -> Option<f64> {
        self.slopes
            .iter()
            .find(|s| s.method == method && s.interval == interval)
            .and_then(|s| s.slope)
    }

    pub fn error(&self, method: Method, h_exponent: u32, interval: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.h_exponent == h_exponent && r.interval == interval)
            .and_then(|r| r.error)
    }

    pub fn wall_time(&self, method: Method, h_exponent: u32) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.h_exponent == h_exponent)
            .map(|r| r.wall_time_s)
    }

    /// `method,h,interval,error,p,trials,failures,theory_order,k_bound,wall_time_s`.
    ///
    /// Without `with_timing` the wall-time column is left empty so that the
    /// file depends only on the configuration and seed.
    pub fn rows_csv(&self, with_timing: bool) -> String {
        let mut out = String::from(
            "method,h,interval,error,p,trials,failures,theory_order,k_bound,wall_time_s\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.method,
                fmt17(r.h),
                r.interval,
                opt17(r.error),
                fmt17(r.p),
                r.trials_used,
                r.failures,
                opt17(r.theory_order),
                opt17(r.k_bound),
                if with_timing {
                    fmt17(r.wall_time_s)
                } else {
                    String::new()
                },
            ));
        }
        out
    }

    /// `method,interval,slope,residual,theory_order`; degenerate fits print
    /// `degenerate` in the slope column.
    pub fn slopes_csv(&self) -> String {
        let mut out = String::from("method,interval,slope,residual,theory_order\n");
        for s in &self.slopes {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.method,
                s.interval,
                s.slope.map(fmt17).unwrap_or_else(|| "degenerate".into()),
                opt17(s.residual),
                opt17(s.theory_order),
            ));
        }
        out
    }

    /// `method,h,interval,error,wall_time_s`, pairing cost with accuracy.
    pub fn comparison_csv(&self) -> String {
        let mut out = String::from("method,h,interval,error,wall_time_s\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.method,
                fmt17(r.h),
                r.interval,
                opt17(r.error),
                fmt17(r.wall_time_s)
            ));
        }
        out
    }

    pub fn to_json(&self, with_timing: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("study result serializes");
        if !with_timing {
            if let Some(rows) = v.get_mut("rows").and_then(|r| r.as_array_mut()) {
                for row in rows {
                    row["wall_time_s"] = serde_json::Value::Null;
                }
            }
        }
        v
    }

    /// Human-readable slope table.
    pub fn slope_table(&self) -> String {
        let mut out = format!(
            "{:<6} {:>8} {:>10} {:>10} {:>10} {:>10}\n",
            "method", "interval", "slope", "mse_slope", "residual", "theory"
        );
        let show = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
        for s in &self.slopes {
            out.push_str(&format!(
                "{:<6} {:>8} {:>10} {:>10} {:>10} {:>10}\n",
                s.method.name(),
                format!("[{},{}]", s.interval, s.interval + 1),
                s.slope
                    .map(|x| format!("{x:.4}"))
                    .unwrap_or_else(|| "degenerate".into()),
                show(s.mse_slope),
                show(s.residual),
                show(s.theory_order),
            ));
        }
        out
    }
}

fn opt17(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

/// Runs every `(method, h)` row of a study against one shared reference.
pub fn run_study(spec: &ProblemSpec, config: &StudyConfig) -> Result<StudyResult> {
    config.validate()?;
    let problem = &spec.problem;
    let n_intervals = problem.n_intervals();
    for &l in &config.step_exponents {
        dyadic_steps(problem.tau(), l)?;
    }
    let reference = reference_for(
        spec,
        config.ref_exponent,
        config.master_seed,
        config.reference,
    )?;
    let reference_label = match (&spec.exact, config.reference) {
        (Some(_), ReferenceKind::Auto) => "exact".to_string(),
        _ => format!("rrk h=2^-{}", config.ref_exponent),
    };

    let theory: Vec<Option<f64>> = (0..=n_intervals)
        .map(|j| {
            problem
                .regularity()
                .and_then(|r| analysis::theoretical_order(r.alpha, r.gamma, j).ok())
        })
        .collect();
    let bounds = analysis::bounds_for(problem).transpose()?;

    let mut exps = config.step_exponents.clone();
    exps.sort_unstable();
    exps.dedup();

    let mut rows = Vec::new();
    for &method in &config.methods {
        for &l in &exps {
            let h = 2f64.powi(-(l as i32));
            let estimate = estimate_error_norm(
                spec,
                method,
                l,
                &reference,
                config.trials,
                config.p_norm,
                config.metric,
                config.master_seed,
                config.jobs,
            );
            for (j, &theory_order) in theory.iter().enumerate() {
                let (error, std_error_p, used, failures, wall) = match &estimate {
                    Ok(e) => (
                        Some(e.error[j]),
                        Some(e.std_error_p[j]),
                        e.trials_used,
                        e.failures,
                        e.wall_time_s,
                    ),
                    Err(DdeError::StudyFailure(_)) => (None, None, 0, config.trials, 0.0),
                    Err(other) => return Err(other.clone()),
                };
                rows.push(StudyRow {
                    method,
                    h_exponent: l,
                    h,
                    interval: j,
                    error,
                    std_error_p,
                    p: config.p_norm,
                    trials_used: used,
                    failures,
                    theory_order,
                    k_bound: bounds.as_ref().map(|b| b.k(j as isize)),
                    wall_time_s: wall,
                    flagged: failures * 100 > config.trials,
                });
            }
        }
    }

    let mut slopes = Vec::new();
    for &method in &config.methods {
        for (j, &theory_order) in theory.iter().enumerate() {
            let (hs, errs): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.method == method && r.interval == j)
                .filter_map(|r| r.error.map(|e| (r.h, e)))
                .unzip();
            let fit = fit_order(&hs, &errs).ok();
            let powered: Vec<f64> = errs.iter().map(|e| e.powf(config.p_norm)).collect();
            let mse_fit = fit_order(&hs, &powered).ok();
            slopes.push(SlopeRow {
                method,
                interval: j,
                slope: fit.map(|f| f.slope),
                residual: fit.map(|f| f.residual),
                mse_slope: mse_fit.map(|f| f.slope),
                theory_order,
            });
        }
    }

    Ok(StudyResult {
        config: config.clone(),
        reference: reference_label,
        rows,
        slopes,
        theory,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::problems::{oracle_constant, oracle_pure_delay};

    #[test]
    fn fit_recovers_exact_power_laws() {
        let hs: Vec<f64> = (4..10).map(|l| 2f64.powi(-l)).collect();
        for q in [0.5, 1.0, 1.5] {
            let errs: Vec<f64> = hs.iter().map(|h| 3.7 * h.powf(q)).collect();
            let fit = fit_order(&hs, &errs).unwrap();
            assert!((fit.slope - q).abs() < 1e-12, "{q}: {}", fit.slope);
            assert!(fit.residual < 1e-12);
        }
        let flat = fit_order(&hs, &vec![0.25; hs.len()]).unwrap();
        assert!(flat.slope.abs() < 1e-15);
    }

    #[test]
    fn fit_drops_nonpositive_points() {
        let hs = [0.5, 0.25, 0.125];
        let fit = fit_order(&hs, &[0.0, 0.25, 0.125]).unwrap();
        assert_eq!(fit.points, 2);
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(fit_order(&hs, &[0.0, 0.0, 1.0]).is_err());
        assert!(fit_order(&hs, &[1.0]).is_err());
    }

    #[test]
    fn interval_error_metrics() {
        let fine = build_grid(1.0, 8, 1).unwrap();
        let coarse = build_grid(1.0, 4, 1).unwrap();
        let reference = Trajectory::from_exact(fine, 1, |_| vec![0.0]);
        let ones = Trajectory::from_exact(coarse, 1, |_| vec![1.0]);
        for metric in [ErrorMetric::MaxOverGrid, ErrorMetric::Terminal] {
            assert_eq!(interval_error(&ones, &reference, 1, metric).unwrap(), 1.0);
        }
        let sampled = Trajectory::from_exact(coarse, 1, |t| vec![t * t]);
        let fine_sampled = Trajectory::from_exact(fine, 1, |t| vec![t * t]);
        assert_eq!(
            interval_error(&sampled, &fine_sampled, 0, ErrorMetric::MaxOverGrid).unwrap(),
            0.0
        );
        let odd = Trajectory::from_exact(build_grid(1.0, 3, 1).unwrap(), 1, |_| vec![0.0]);
        assert!(matches!(
            interval_error(&odd, &reference, 0, ErrorMetric::MaxOverGrid),
            Err(DdeError::GridMismatch(_))
        ));
        let other_tau = Trajectory::from_exact(build_grid(2.0, 4, 1).unwrap(), 1, |_| vec![0.0]);
        assert!(interval_error(&other_tau, &reference, 0, ErrorMetric::Terminal).is_err());
    }

    #[test]
    fn power_mean_is_monotone_in_p() {
        let xs = [0.1, 0.5, 0.2, 0.9, 0.05];
        let mut prev = 0.0;
        for p in [2.0, 3.0, 4.0, 8.0] {
            let v = power_mean(&xs, p).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        assert!(power_mean(&[], 2.0).is_none());
    }

    #[test]
    fn compensated_sum_is_order_insensitive_here() {
        let xs: Vec<f64> = (0..1000).map(|i| 1e-3 * (i as f64).sin() + 1e8).collect();
        let mut rev = xs.clone();
        rev.reverse();
        assert_eq!(compensated_sum(xs), compensated_sum(rev));
    }

    #[test]
    fn reference_grid_nests_coarse_nodes() {
        let spec = oracle_pure_delay(1.0, 2).unwrap();
        let r = compute_reference(&spec, 8, 0).unwrap();
        let g = build_grid(1.0, 32, 2).unwrap();
        for k in 0..=32 {
            assert_eq!(r.grid().node(k * 8, 1), g.node(k, 1));
        }
    }

    #[test]
    fn constant_problem_estimates_are_zero() {
        let spec = oracle_constant(vec![2.5], 1.0, 2).unwrap();
        let r = compute_reference(&spec, 6, 1).unwrap();
        let est = estimate_error_norm(
            &spec,
            Method::Rrk,
            3,
            &r,
            10,
            2.0,
            ErrorMetric::MaxOverGrid,
            1,
            Some(1),
        )
        .unwrap();
        assert_eq!(est.error, vec![0.0; 3]);
        assert_eq!(est.failures, 0);
        assert_eq!(est.trials_used, 10);
    }

    #[test]
    fn config_validation() {
        let ok = StudyConfig {
            step_exponents: vec![5, 6, 7],
            ref_exponent: 8,
            ..Default::default()
        };
        assert!(ok.validate().is_ok());
        let coarse_ref = StudyConfig {
            ref_exponent: 5,
            step_exponents: vec![5, 6, 7],
            ..Default::default()
        };
        assert!(coarse_ref.validate().is_err());
        assert!(StudyConfig {
            p_norm: 1.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(StudyConfig {
            trials: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(dyadic_steps(0.3, 4).is_err());
        assert_eq!(dyadic_steps(0.5, 4).unwrap(), 8);
    }
}
