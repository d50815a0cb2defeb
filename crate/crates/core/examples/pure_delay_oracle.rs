//! x'(t) = x(t - 1) with x = 1 on [-1, 0] has a polynomial solution, so the
//! scheme's error can be read off directly. On [0, 1] it is exact; on [1, 2]
//! each step errs by h^2 (gamma - 1/2).

use rrk_dde::problems::{oracle_pure_delay, pure_delay_exact};
use rrk_dde::{rrk_solve, TrialStreams};

fn main() -> rrk_dde::Result<()> {
    let spec = oracle_pure_delay(1.0, 2)?;
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "N", "err [0,1]", "err [1,2]", "err [2,3]"
    );
    for exp in 3..=10 {
        let n_steps = 1usize << exp;
        let traj = rrk_solve(&spec.problem, n_steps, &TrialStreams::new(1, 0))?;
        let errs: Vec<f64> = (0..=2isize)
            .map(|j| (traj.value(n_steps, j)[0] - pure_delay_exact((j + 1) as f64, 1.0)).abs())
            .collect();
        println!(
            "{n_steps:>6} {:>12.3e} {:>12.3e} {:>12.3e}",
            errs[0], errs[1], errs[2]
        );
    }

    // the [1, 2] terminal error equals h^2 times the sum of (gamma - 1/2)
    let n_steps = 32;
    let traj = rrk_solve(&spec.problem, n_steps, &TrialStreams::new(1, 0))?;
    let h = 1.0 / n_steps as f64;
    let predicted: f64 = traj
        .interval_draws(1)
        .unwrap()
        .iter()
        .map(|g| g - 0.5)
        .sum::<f64>()
        * h
        * h;
    let actual = traj.value(n_steps, 1)[0] - 3.5;
    println!("N = 32: predicted {predicted:.6e}, measured {actual:.6e}");
    Ok(())
}
