//! Monte Carlo convergence study on the Hölder test problem: root mean
//! square errors per interval and fitted orders next to the proven ones.
//!
//!     cargo run --release --example convergence_study -- [alpha] [gamma] [trials]

use rrk_dde::harness::{run_study, StudyConfig};
use rrk_dde::problems::{self, ProblemParams};
use rrk_dde::Method;

fn main() -> rrk_dde::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(0.5, |s| s.parse().expect("alpha"));
    let gamma: f64 = args.next().map_or(0.5, |s| s.parse().expect("gamma"));
    let trials: usize = args.next().map_or(200, |s| s.parse().expect("trials"));

    let params = ProblemParams {
        alpha,
        gamma,
        ..Default::default()
    };
    let spec = problems::build("example2", &params)?;
    let config = StudyConfig {
        problem_name: "example2".into(),
        step_exponents: (5..=9).collect(),
        ref_exponent: 13,
        trials,
        methods: vec![Method::Rrk],
        ..Default::default()
    };
    let result = run_study(&spec, &config)?;

    for row in &result.rows {
        println!(
            "h = 2^-{:<2} j = {}  error = {:.4e}",
            row.h_exponent,
            row.interval,
            row.error.unwrap_or(f64::NAN)
        );
    }
    println!();
    print!("{}", result.slope_table());
    Ok(())
}
