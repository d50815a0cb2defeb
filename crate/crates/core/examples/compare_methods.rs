//! Randomized Runge-Kutta against randomized Euler on the jump-coefficient
//! problem: error per step size and the cost ratio.

use rrk_dde::harness::{run_study, StudyConfig};
use rrk_dde::problems::{self, ProblemParams};
use rrk_dde::Method;

fn main() -> rrk_dde::Result<()> {
    let spec = problems::build("example1", &ProblemParams::default())?;
    let config = StudyConfig {
        problem_name: "example1".into(),
        step_exponents: (2..=7).collect(),
        trials: 300,
        methods: vec![Method::Rrk, Method::Euler],
        jobs: Some(1),
        ..Default::default()
    };
    let result = run_study(&spec, &config)?;

    println!("{:>6} {:>3} {:>12} {:>12}", "h", "j", "rrk", "euler");
    for &l in &config.step_exponents {
        for j in 0..=2 {
            println!(
                "2^-{l:<3} {j:>3} {:>12.4e} {:>12.4e}",
                result.error(Method::Rrk, l, j).unwrap(),
                result.error(Method::Euler, l, j).unwrap()
            );
        }
        let ratio =
            result.wall_time(Method::Rrk, l).unwrap() / result.wall_time(Method::Euler, l).unwrap();
        println!("       time rrk / euler = {ratio:.2}");
    }
    println!();
    print!("{}", result.slope_table());
    Ok(())
}
