//! Closed-form bounds K_j on sup |x| per interval, their Lipschitz companions,
//! and a check of simulated trajectories against them.

use rrk_dde::analysis::{a_priori_bounds, bounds_for, check_trajectory_bound, theoretical_order};
use rrk_dde::problems;
use rrk_dde::{rrk_solve, TrialStreams};

fn main() -> rrk_dde::Result<()> {
    let b = a_priori_bounds(1.0, 1.0, 1.0, 3)?;
    for j in -1..=3isize {
        println!("K_{j:<2} = {:.6e}", b.k(j));
    }
    for (j, l) in b.lipschitz_seq.iter().enumerate() {
        println!("Lip_{j} = {l:.6e}");
    }
    println!("saturated: {}", b.saturated);

    let problem = problems::example2(0.5, 0.5, 1.0)?;
    let bounds = bounds_for(&problem).expect("example2 carries regularity")?;
    let traj = rrk_solve(&problem, 64, &TrialStreams::new(0, 0))?;
    for check in check_trajectory_bound(&traj, &bounds)?.intervals {
        println!(
            "j = {}: sup = {:.4} <= {:.4e} ({})",
            check.interval,
            check.sup,
            check.bound,
            if check.pass { "ok" } else { "violated" }
        );
    }

    for j in 0..=2 {
        println!(
            "order on interval {j}: {:.4}",
            theoretical_order(0.5, 0.5, j)?
        );
    }
    Ok(())
}
