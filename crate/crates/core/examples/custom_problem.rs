//! A two-dimensional delayed oscillator with a rough time forcing, built from
//! closures, solved by both schemes.

use rrk_dde::{DdeProblem, Method, Regularity, TrialStreams};

fn main() -> rrk_dde::Result<()> {
    let problem = DdeProblem::new(
        |t, x, z, out| {
            let forcing = (t - 0.3).abs().powf(0.25);
            out[0] = x[1];
            out[1] = -x[0] - 0.5 * z[0] + forcing;
        },
        |t, out| {
            out[0] = t.cos();
            out[1] = -t.sin();
        },
        0.5,
        4,
        2,
    )?
    .with_regularity(Regularity {
        alpha: 1.0,
        gamma: 0.25,
        lipschitz_l: 1.5,
        bound_kbar: 2.0,
        growth_k: None,
        initial_sup: 1.0,
    })?;

    for method in [Method::Rrk, Method::Euler] {
        let traj = method.solve(&problem, 200, &TrialStreams::new(5, 0))?;
        let end = traj.value(200, problem.n_intervals() as isize);
        println!(
            "{:>5}: x({:.1}) = ({:.5}, {:.5}), f evals = {}",
            method.name(),
            problem.horizon(),
            end[0],
            end[1],
            traj.f_evals()
        );
    }
    Ok(())
}
