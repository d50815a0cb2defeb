//! One RRK trajectory of the Hölder test problem, printed at coarse nodes
//! and written as CSV.
//!
//!     cargo run --example solve_example2 -- [alpha] [gamma] [steps]

use rrk_dde::{problems, rrk_solve, TrialStreams};

fn main() -> rrk_dde::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(0.5, |s| s.parse().expect("alpha"));
    let gamma: f64 = args.next().map_or(0.5, |s| s.parse().expect("gamma"));
    let steps: usize = args.next().map_or(64, |s| s.parse().expect("steps"));

    let problem = problems::example2(alpha, gamma, 1.0)?;
    let traj = rrk_solve(&problem, steps, &TrialStreams::new(2024, 0))?;

    println!(
        "alpha = {alpha}, gamma = {gamma}, N = {steps}, f evals = {}",
        traj.f_evals()
    );
    for j in 0..=problem.n_intervals() as isize {
        for k in (0..=steps).step_by(steps / 4) {
            let t = traj.grid().node(k, j);
            println!("  t = {t:5.3}  x = {:.6}", traj.value(k, j)[0]);
        }
    }

    let path = std::env::temp_dir().join("rrk_example2.csv");
    traj.write_csv(std::fs::File::create(&path)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
