//! Draws are a pure function of (seed, trial, interval, counter), so a
//! trajectory can be replayed from its recorded draws or regenerated in any
//! order.

use rrk_dde::{problems, rrk_solve, RandomStream, RecordedDraws, TrialStreams};

fn main() -> rrk_dde::Result<()> {
    let s = RandomStream::substream(42, 3, 1);
    let first: Vec<f64> = s.clone().take(4).collect();
    println!("seed 42, trial 3, interval 1: {first:?}");
    println!("draw 2 directly: {}", s.draw_at(2));

    let problem = problems::example2(0.5, 0.5, 1.0)?;
    let traj = rrk_solve(&problem, 16, &TrialStreams::new(42, 3))?;
    let replay = rrk_solve(
        &problem,
        16,
        &RecordedDraws::from_trajectory(&traj).unwrap(),
    )?;
    println!(
        "replay identical: {}",
        traj.to_csv_string() == replay.to_csv_string()
    );

    // nudge the last draw of the final interval: only the final value moves
    let mut draws = RecordedDraws::from_trajectory(&traj).unwrap();
    draws.draws_mut()[2][15] = 0.999;
    let nudged = rrk_solve(&problem, 16, &draws)?;
    println!(
        "x(3): {:.8} -> {:.8}; x(3 - h) unchanged: {}",
        traj.value(16, 2)[0],
        nudged.value(16, 2)[0],
        traj.value(15, 2) == nudged.value(15, 2)
    );
    Ok(())
}
