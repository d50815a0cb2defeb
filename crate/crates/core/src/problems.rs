//! Built-in problems: two time-irregular test equations and closed-form
//! oracle problems.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{DdeError, Result};
use crate::problem::{DdeProblem, Regularity};

/// Exact solution `t -> x(t)` on `[-tau, (n + 1) tau]`.
pub type ExactFn = dyn Fn(f64) -> Vec<f64> + Send + Sync;

/// A named problem together with its exact solution, when one is known.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub params: ProblemParams,
    pub problem: DdeProblem,
    pub exact: Option<Arc<ExactFn>>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("problem", &self.problem)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn exact_at(&self, t: f64) -> Option<Vec<f64>> {
        self.exact.as_ref().map(|x| x(t))
    }

    /// `|x'(t) - f(t, x(t), x(t - tau))|` with a central difference of width `2 dt`.
    pub fn residual(&self, t: f64, dt: f64) -> Option<f64> {
        let x = self.exact.as_ref()?;
        let tau = self.problem.tau();
        let slope: Vec<f64> = x(t + dt)
            .iter()
            .zip(x(t - dt))
            .map(|(a, b)| (a - b) / (2.0 * dt))
            .collect();
        let rhs = self.problem.evaluate_rhs(t, &x(t), &x(t - tau)).ok()?;
        Some(
            slope
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Constructor parameters shared by the built-in problems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemParams {
    pub alpha: f64,
    pub gamma: f64,
    pub tau: f64,
    /// Horizon `n`; `None` means the problem's default (2).
    pub n_taus: Option<usize>,
    pub lambda: f64,
    pub constant: f64,
}

impl Default for ProblemParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            gamma: 0.5,
            tau: 1.0,
            n_taus: None,
            lambda: 1.0,
            constant: 1.0,
        }
    }
}

/// `sgn` with `sgn(0) = 0`.
pub fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Piecewise-constant coefficient of the first example equation, with jumps
/// at `T/4`, `T/2`, `3T/4`.
pub fn example1_coefficient(t: f64, horizon: f64) -> f64 {
    -0.1 * sgn(0.25 * horizon - t) - 0.2 * sgn(0.5 * horizon - t) - 0.7 * sgn(0.75 * horizon - t)
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(DdeError::InvalidParameter(format!(
            "{name} = {v} must lie in (0,1]"
        )))
    }
}

/// `u'(t) = g(t) (u(t) + (1 + |u(t - tau)|)^alpha)` on `[0, 3 tau]`, `u = 1`
/// on `[-tau, 0]`. Discontinuous in time, so no regularity is declared.
pub fn example1(alpha: f64, tau: f64) -> Result<DdeProblem> {
    check_exponent("alpha", alpha)?;
    let horizon = 3.0 * tau;
    DdeProblem::scalar(
        move |t, x, z| example1_coefficient(t, horizon) * (x + (1.0 + z.abs()).powf(alpha)),
        |_| 1.0,
        tau,
        2,
    )
}

/// `u'(t) = u(t) - |u(t - tau)|^alpha + |t|^gamma` on `[0, 3 tau]`,
/// `u(t) = t + tau` on `[-tau, 0]`.
pub fn example2(alpha: f64, gamma: f64, tau: f64) -> Result<DdeProblem> {
    check_exponent("alpha", alpha)?;
    check_exponent("gamma", gamma)?;
    let problem = DdeProblem::scalar(
        move |t, x, z| x - z.abs().powf(alpha) + t.abs().powf(gamma),
        move |t| t + tau,
        tau,
        2,
    )?;
    // |d f / d x| = 1, Hölder constants of |z|^alpha and |t|^gamma are 1,
    // phi has slope 1; |f(t, 0, 0)| <= (3 tau)^gamma on the horizon.
    problem.with_regularity(Regularity {
        alpha,
        gamma,
        lipschitz_l: 1.0,
        bound_kbar: (3.0 * tau).powf(gamma),
        growth_k: None,
        initial_sup: tau,
    })
}

/// `f = 0`, `phi = c`; the solution is `c` everywhere.
pub fn oracle_constant(c: Vec<f64>, tau: f64, n: usize) -> Result<ProblemSpec> {
    let dim = c.len();
    let initial = c.clone();
    let sup = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let problem = DdeProblem::new(
        |_, _, _, out: &mut [f64]| out.fill(0.0),
        move |_, out: &mut [f64]| out.copy_from_slice(&initial),
        tau,
        n,
        dim,
    )?
    .with_regularity(Regularity {
        alpha: 1.0,
        gamma: 1.0,
        lipschitz_l: 0.0,
        bound_kbar: 0.0,
        // any positive growth constant is valid for f = 0
        growth_k: Some(1.0),
        initial_sup: sup,
    })?;
    let exact = c.clone();
    Ok(ProblemSpec {
        name: "constant".into(),
        params: ProblemParams {
            tau,
            n_taus: Some(n),
            constant: c.first().copied().unwrap_or(0.0),
            ..Default::default()
        },
        problem,
        exact: Some(Arc::new(move |_| exact.clone())),
    })
}

/// Method-of-steps solution of `x' = x(t - tau)`, `x = 1` on `[-tau, 0]`:
/// on `[j tau, (j + 1) tau]`, `x(t) = sum_{i=0}^{j+1} (t - (i - 1) tau)^i / i!`.
pub fn pure_delay_exact(t: f64, tau: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    // on a junction both neighbouring formulas agree
    let j = (t / tau).floor() as i64;
    let mut sum = 0.0;
    let mut fact = 1.0;
    for i in 0..=(j + 1) {
        if i > 0 {
            fact *= i as f64;
        }
        sum += (t - (i - 1) as f64 * tau).powi(i as i32) / fact;
    }
    sum
}

/// `f(t, x, z) = z`, `phi = 1`.
pub fn oracle_pure_delay(tau: f64, n: usize) -> Result<ProblemSpec> {
    let problem =
        DdeProblem::scalar(|_, _, z| z, |_| 1.0, tau, n)?.with_regularity(Regularity {
            alpha: 1.0,
            gamma: 1.0,
            lipschitz_l: 1.0,
            bound_kbar: 0.0,
            growth_k: Some(1.0),
            initial_sup: 1.0,
        })?;
    Ok(ProblemSpec {
        name: "pure-delay".into(),
        params: ProblemParams {
            tau,
            n_taus: Some(n),
            ..Default::default()
        },
        problem,
        exact: Some(Arc::new(move |t| vec![pure_delay_exact(t, tau)])),
    })
}

/// `f(t, x, z) = lambda x`, `phi = 1`; the solution is `exp(lambda t)` for `t >= 0`.
pub fn oracle_scalar_linear(lambda: f64, tau: f64, n: usize) -> Result<ProblemSpec> {
    if !lambda.is_finite() {
        return Err(DdeError::InvalidParameter(format!(
            "lambda = {lambda} must be finite"
        )));
    }
    let problem = DdeProblem::scalar(move |_, x, _| lambda * x, |_| 1.0, tau, n)?.with_regularity(
        Regularity {
            alpha: 1.0,
            gamma: 1.0,
            lipschitz_l: lambda.abs(),
            bound_kbar: 0.0,
            growth_k: if lambda == 0.0 { Some(1.0) } else { None },
            initial_sup: 1.0,
        },
    )?;
    Ok(ProblemSpec {
        name: "scalar-linear".into(),
        params: ProblemParams {
            tau,
            n_taus: Some(n),
            lambda,
            ..Default::default()
        },
        problem,
        exact: Some(Arc::new(move |t| {
            vec![if t <= 0.0 { 1.0 } else { (lambda * t).exp() }]
        })),
    })
}

/// One row of `problems list`.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: &'static str,
    pub exact_solution: bool,
    pub summary: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "example1",
            parameters: "alpha, tau (horizon fixed at n = 2)",
            exact_solution: false,
            summary: "u' = g(t)(u + (1+|u(t-tau)|)^alpha), g piecewise constant with jumps at T/4, T/2, 3T/4; u = 1 on [-tau,0]",
        },
        CatalogEntry {
            name: "example2",
            parameters: "alpha, gamma, tau (horizon fixed at n = 2)",
            exact_solution: false,
            summary: "u' = u - |u(t-tau)|^alpha + |t|^gamma; u = t + tau on [-tau,0]",
        },
        CatalogEntry {
            name: "constant",
            parameters: "constant, tau, n-taus",
            exact_solution: true,
            summary: "x' = 0; x = c on [-tau,0]",
        },
        CatalogEntry {
            name: "pure-delay",
            parameters: "tau, n-taus",
            exact_solution: true,
            summary: "x' = x(t-tau); x = 1 on [-tau,0]",
        },
        CatalogEntry {
            name: "scalar-linear",
            parameters: "lambda, tau, n-taus",
            exact_solution: true,
            summary: "x' = lambda x; x = 1 on [-tau,0]",
        },
    ]
}

/// Builds a catalogued problem by name.
pub fn build(name: &str, params: &ProblemParams) -> Result<ProblemSpec> {
    let fixed_horizon = |name: &str| -> Result<()> {
        match params.n_taus {
            None | Some(2) => Ok(()),
            Some(n) => Err(DdeError::InvalidParameter(format!(
                "{name} has a fixed horizon n = 2, got {n}"
            ))),
        }
    };
    let n = params.n_taus.unwrap_or(2);
    match name {
        "example1" => {
            fixed_horizon(name)?;
            Ok(ProblemSpec {
                name: name.into(),
                params: ProblemParams {
                    n_taus: Some(2),
                    ..params.clone()
                },
                problem: example1(params.alpha, params.tau)?,
                exact: None,
            })
        }
        "example2" => {
            fixed_horizon(name)?;
            Ok(ProblemSpec {
                name: name.into(),
                params: ProblemParams {
                    n_taus: Some(2),
                    ..params.clone()
                },
                problem: example2(params.alpha, params.gamma, params.tau)?,
                exact: None,
            })
        }
        "constant" => oracle_constant(vec![params.constant], params.tau, n),
        "pure-delay" => oracle_pure_delay(params.tau, n),
        "scalar-linear" => oracle_scalar_linear(params.lambda, params.tau, n),
        other => Err(DdeError::UnknownProblem(other.into())),
    }
}
