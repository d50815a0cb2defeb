//! Command-line front end: `solve`, `study`, `compare`, `problems list`.
//!
//! Exit codes: 0 success, 1 solver or i/o failure, 2 usage error,
//! 3 a study row in which every trial failed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis;
use crate::error::DdeError;
use crate::harness::{self, ErrorMetric, ReferenceKind, StudyConfig, StudyResult};
use crate::problems::{self, ProblemParams};
use crate::schemes::{Method, TrialStreams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "rrk-dde",
    version,
    about = "Randomized Runge-Kutta solvers and convergence studies for constant-lag DDEs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one trajectory and write it as CSV or JSON.
    Solve(SolveArgs),
    /// Monte Carlo convergence study: errors per step size and fitted orders.
    Study(StudyArgs),
    /// Randomized Runge-Kutta against randomized Euler: error and cost per step size.
    Compare(CompareArgs),
    /// Built-in problems.
    Problems {
        #[command(subcommand)]
        action: ProblemsAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProblemsAction {
    /// List built-in problems, their parameters, and whether an exact solution is known.
    List,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct ProblemArgs {
    /// Hölder exponent in the delayed state, in (0,1].
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Hölder exponent in time, in (0,1].
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Time lag.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Horizon n; the solve covers [0, (n+1) tau]. Defaults to 2.
    #[arg(long = "n-taus")]
    pub n_taus: Option<usize>,
    /// Rate of the scalar-linear oracle.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Value of the constant oracle.
    #[arg(long, default_value_t = 1.0)]
    pub constant: f64,
}

impl ProblemArgs {
    fn params(&self) -> Result<ProblemParams, DdeError> {
        for (name, v) in [("alpha", self.alpha), ("gamma", self.gamma)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(DdeError::InvalidParameter(format!(
                    "--{name} {v}: must lie in (0,1]"
                )));
            }
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(DdeError::InvalidParameter(format!(
                "--tau {}: must be positive",
                self.tau
            )));
        }
        Ok(ProblemParams {
            alpha: self.alpha,
            gamma: self.gamma,
            tau: self.tau,
            n_taus: self.n_taus,
            lambda: self.lambda,
            constant: self.constant,
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Rrk,
    Euler,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Rrk => vec![Method::Rrk],
            MethodArg::Euler => vec![Method::Euler],
            MethodArg::Both => vec![Method::Rrk, Method::Euler],
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SingleMethodArg {
    Rrk,
    Euler,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    Max,
    Terminal,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceArg {
    Auto,
    Simulated,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// Problem name (see `problems list`).
    pub problem: String,
    #[command(flatten)]
    pub problem_args: ProblemArgs,
    /// Steps per interval N.
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    /// Master seed (decimal u64).
    #[arg(long, env = "RRK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Trial index of the substream family.
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    #[arg(long, value_enum, default_value_t = SingleMethodArg::Rrk)]
    pub method: SingleMethodArg,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct StudyFlags {
    /// Step exponents l (h = 2^-l): `A..B` inclusive or a comma list.
    #[arg(long = "h-exps", value_parser = parse_exponent_list)]
    pub h_exps: Option<Exponents>,
    /// Reference exponent (h_ref = 2^-href_exp).
    #[arg(long = "href-exp", default_value_t = 13)]
    pub href_exp: u32,
    /// Monte Carlo trials per step size.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Moment p of the error norm (p >= 2).
    #[arg(long = "p", default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Max)]
    pub metric: MetricArg,
    /// Master seed (decimal u64).
    #[arg(long, env = "RRK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Reference: exact solution when available (auto) or a fine simulated run.
    #[arg(long, value_enum, default_value_t = ReferenceArg::Auto)]
    pub reference: ReferenceArg,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output path; slopes go to `<stem>.slopes.csv` next to it. Stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args, Serialize)]
pub struct StudyArgs {
    /// Problem name (see `problems list`).
    pub problem: String,
    #[command(flatten)]
    pub problem_args: ProblemArgs,
    #[command(flatten)]
    pub flags: StudyFlags,
    #[arg(long, value_enum, default_value_t = MethodArg::Rrk)]
    pub method: MethodArg,
    /// Fill the wall_time_s column (makes the output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Problem name; defaults to example1.
    #[arg(default_value = "example1")]
    pub problem: String,
    #[command(flatten)]
    pub problem_args: ProblemArgs,
    #[command(flatten)]
    pub flags: StudyFlags,
}

/// A list of step exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Exponents(pub Vec<u32>);

fn parse_exponent_list(s: &str) -> Result<Exponents, String> {
    parse_exponents(s).map(Exponents)
}

/// Parses `A..B` (inclusive), `A,B,C`, or a single exponent.
pub fn parse_exponents(s: &str) -> Result<Vec<u32>, String> {
    let s = s.trim();
    let parse = |v: &str| {
        v.trim()
            .parse::<u32>()
            .map_err(|_| format!("`{v}` is not a nonnegative integer"))
    };
    let list = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(parse).collect::<Result<Vec<_>, _>>()?
    };
    if list.is_empty() {
        return Err("no exponents given".into());
    }
    Ok(list)
}

fn usage(err: impl std::fmt::Display, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {err}");
    EXIT_USAGE
}

fn exit_for(err: &DdeError) -> i32 {
    match err {
        DdeError::InvalidParameter(_)
        | DdeError::UnknownProblem(_)
        | DdeError::GridMismatch(_)
        | DdeError::OutsideInitialDomain { .. } => EXIT_USAGE,
        _ => EXIT_SOLVER,
    }
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), DdeError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn slopes_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "study".into());
    out.with_file_name(format!("{stem}.slopes.csv"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match cli.command {
        Command::Solve(args) => cmd_solve(&args, stdout, stderr),
        Command::Study(args) => cmd_study(&args, stdout, stderr),
        Command::Compare(args) => cmd_compare(&args, stdout, stderr),
        Command::Problems {
            action: ProblemsAction::List,
        } => cmd_problems_list(stdout),
    }
}

fn print_config<T: Serialize>(config: &T, stderr: &mut dyn Write) {
    let json = serde_json::to_string(config).unwrap_or_default();
    let _ = writeln!(stderr, "# config: {json}");
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    print_config(args, stderr);
    let params = match args.problem_args.params() {
        Ok(p) => p,
        Err(e) => return usage(e, stderr),
    };
    if args.steps == 0 {
        return usage("--steps must be at least 1", stderr);
    }
    let spec = match problems::build(&args.problem, &params) {
        Ok(s) => s,
        Err(e) => return usage(e, stderr),
    };
    let method = match args.method {
        SingleMethodArg::Rrk => Method::Rrk,
        SingleMethodArg::Euler => Method::Euler,
    };
    let traj = match method.solve(
        &spec.problem,
        args.steps,
        &TrialStreams::new(args.seed, args.trial),
    ) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_for(&e);
        }
    };
    let text = match args.format {
        FormatArg::Csv => traj.to_csv_string(),
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&traj.to_json()).expect("serializable");
            s.push('\n');
            s
        }
    };
    if let Err(e) = write_output(args.out.as_deref(), &text, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_SOLVER;
    }
    let _ = writeln!(
        stderr,
        "f_evals: {} (expected {})",
        traj.f_evals(),
        method.expected_evals(args.steps, spec.problem.n_intervals())
    );
    let _ = writeln!(
        stderr,
        "junctions: {}",
        if traj.junctions_consistent() {
            "ok"
        } else {
            "MISMATCH"
        }
    );
    if let Some(Ok(bounds)) = analysis::bounds_for(&spec.problem) {
        if let Ok(report) = analysis::check_trajectory_bound(&traj, &bounds) {
            for c in &report.intervals {
                let _ = writeln!(
                    stderr,
                    "bound j={}: sup {:.6e} <= K_j {:.6e}: {}",
                    c.interval,
                    c.sup,
                    c.bound,
                    if c.pass { "ok" } else { "WARNING exceeded" }
                );
            }
        }
    }
    EXIT_OK
}

fn study_config(
    problem: &str,
    flags: &StudyFlags,
    methods: Vec<Method>,
    default_exps: std::ops::RangeInclusive<u32>,
) -> StudyConfig {
    StudyConfig {
        problem_name: problem.to_string(),
        step_exponents: flags
            .h_exps
            .clone()
            .map(|e| e.0)
            .unwrap_or_else(|| default_exps.collect()),
        ref_exponent: flags.href_exp,
        trials: flags.trials,
        p_norm: flags.p,
        metric: match flags.metric {
            MetricArg::Max => ErrorMetric::MaxOverGrid,
            MetricArg::Terminal => ErrorMetric::Terminal,
        },
        master_seed: flags.seed,
        methods,
        reference: match flags.reference {
            ReferenceArg::Auto => ReferenceKind::Auto,
            ReferenceArg::Simulated => ReferenceKind::Simulated,
        },
        jobs: flags.jobs,
    }
}

fn execute_study(
    problem: &str,
    problem_args: &ProblemArgs,
    config: &StudyConfig,
    stderr: &mut dyn Write,
) -> Result<StudyResult, i32> {
    let params = problem_args.params().map_err(|e| usage(e, stderr))?;
    config.validate().map_err(|e| usage(e, stderr))?;
    let spec = problems::build(problem, &params).map_err(|e| usage(e, stderr))?;
    let mut resolved = serde_json::to_value(config).unwrap_or_default();
    resolved["problem_params"] = serde_json::to_value(&spec.params).unwrap_or_default();
    print_config(&resolved, stderr);
    harness::run_study(&spec, config).map_err(|e| {
        let _ = writeln!(stderr, "error: {e}");
        exit_for(&e)
    })
}

pub fn cmd_study(args: &StudyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let config = study_config(&args.problem, &args.flags, args.method.methods(), 5..=10);
    let result = match execute_study(&args.problem, &args.problem_args, &config, stderr) {
        Ok(r) => r,
        Err(code) => return code,
    };
    let written = match (args.flags.format, args.flags.out.as_deref()) {
        (FormatArg::Json, out) => {
            let mut s =
                serde_json::to_string_pretty(&result.to_json(args.timing)).expect("serializable");
            s.push('\n');
            write_output(out, &s, stdout)
        }
        (FormatArg::Csv, Some(out)) => fs::write(out, result.rows_csv(args.timing))
            .and_then(|_| fs::write(slopes_path(out), result.slopes_csv()))
            .map_err(DdeError::from),
        (FormatArg::Csv, None) => {
            let text = format!("{}\n{}", result.rows_csv(args.timing), result.slopes_csv());
            write_output(None, &text, stdout)
        }
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_SOLVER;
    }
    let _ = write!(
        stderr,
        "reference: {}\n{}",
        result.reference,
        result.slope_table()
    );
    finish(&result, stderr)
}

fn finish(result: &StudyResult, stderr: &mut dyn Write) -> i32 {
    for r in result.rows.iter().filter(|r| r.flagged && r.interval == 0) {
        let _ = writeln!(
            stderr,
            "warning: {} at h = {:e}: {} of {} trials failed",
            r.method,
            r.h,
            r.failures,
            r.failures + r.trials_used
        );
    }
    if result.any_row_all_failed() {
        let _ = writeln!(stderr, "error: at least one row had every trial fail");
        EXIT_DEGENERATE
    } else {
        EXIT_OK
    }
}

pub fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let config = study_config(
        &args.problem,
        &args.flags,
        vec![Method::Rrk, Method::Euler],
        2..=7,
    );
    let result = match execute_study(&args.problem, &args.problem_args, &config, stderr) {
        Ok(r) => r,
        Err(code) => return code,
    };
    let text = match args.flags.format {
        FormatArg::Csv => result.comparison_csv(),
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&result.to_json(true)).expect("serializable");
            s.push('\n');
            s
        }
    };
    if let Err(e) = write_output(args.flags.out.as_deref(), &text, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_SOLVER;
    }
    let mut exps = config.step_exponents.clone();
    exps.sort_unstable();
    exps.dedup();
    let _ = writeln!(
        stderr,
        "{:>8} {:>8} {:>12} {:>12} {:>10}",
        "h", "interval", "rrk", "euler", "time x"
    );
    for &l in &exps {
        let ratio = match (
            result.wall_time(Method::Rrk, l),
            result.wall_time(Method::Euler, l),
        ) {
            (Some(a), Some(b)) if b > 0.0 => a / b,
            _ => f64::NAN,
        };
        for j in 0..result.theory.len() {
            let show = |m| {
                result
                    .error(m, l, j)
                    .map(|e| format!("{e:.4e}"))
                    .unwrap_or_else(|| "-".into())
            };
            let _ = writeln!(
                stderr,
                "{:>8} {:>8} {:>12} {:>12} {:>10.2}",
                format!("2^-{l}"),
                j,
                show(Method::Rrk),
                show(Method::Euler),
                ratio
            );
        }
    }
    let _ = write!(stderr, "{}", result.slope_table());
    finish(&result, stderr)
}

pub fn cmd_problems_list(stdout: &mut dyn Write) -> i32 {
    let _ = writeln!(
        stdout,
        "{:<14} {:<8} {:<44} equation",
        "name", "exact", "parameters"
    );
    for e in problems::catalog() {
        let _ = writeln!(
            stdout,
            "{:<14} {:<8} {:<44} {}",
            e.name,
            if e.exact_solution { "yes" } else { "no" },
            e.parameters,
            e.summary
        );
    }
    EXIT_OK
}
