use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use proptest::prelude::*;
use rrk_dde::analysis::{bounds_for, check_trajectory_bound};
use rrk_dde::problems::{self, oracle_pure_delay};
use rrk_dde::{euler_solve, rrk_solve, DdeProblem, Method, RecordedDraws, TrialStreams};

fn counting_problem(n: usize) -> (DdeProblem, Arc<AtomicU64>, Arc<AtomicU64>) {
    let rhs_calls = Arc::new(AtomicU64::new(0));
    let init_calls = Arc::new(AtomicU64::new(0));
    let (r, i) = (rhs_calls.clone(), init_calls.clone());
    let problem = DdeProblem::scalar(
        move |t, x, z| {
            r.fetch_add(1, Ordering::Relaxed);
            t.sin() + 0.5 * x - z
        },
        move |t| {
            i.fetch_add(1, Ordering::Relaxed);
            t.cos()
        },
        0.75,
        n,
    )
    .unwrap();
    (problem, rhs_calls, init_calls)
}

#[test]
fn rhs_calls_match_the_reported_count() {
    for n in 0..4 {
        for n_steps in [1usize, 5, 32] {
            let (problem, rhs, _) = counting_problem(n);
            for method in [Method::Rrk, Method::Euler] {
                rhs.store(0, Ordering::Relaxed);
                let traj = method
                    .solve(&problem, n_steps, &TrialStreams::new(3, 1))
                    .unwrap();
                assert_eq!(traj.f_evals(), rhs.load(Ordering::Relaxed));
                assert_eq!(traj.f_evals(), method.expected_evals(n_steps, n));
            }
        }
    }
}

#[test]
fn junctions_are_copied_exactly() {
    let problem = problems::example2(0.3, 0.7, 1.0).unwrap();
    for seed in 0..5 {
        for method in [Method::Rrk, Method::Euler] {
            let traj = method
                .solve(&problem, 24, &TrialStreams::new(seed, 0))
                .unwrap();
            assert!(traj.junctions_consistent());
            for j in 1..=2isize {
                assert_eq!(
                    traj.value(0, j)[0].to_bits(),
                    traj.value(24, j - 1)[0].to_bits()
                );
            }
        }
    }
}

#[test]
fn each_interval_consumes_n_steps_draws_in_order() {
    let (problem, _, _) = counting_problem(2);
    let traj = rrk_solve(&problem, 10, &TrialStreams::new(8, 2)).unwrap();
    for j in 0..=2 {
        let expected: Vec<f64> = rrk_dde::RandomStream::substream(8, 2, j as u64)
            .take(10)
            .collect();
        assert_eq!(traj.interval_draws(j).unwrap(), &expected[..]);
    }
}

#[test]
fn recorded_draws_replay_bit_identically() {
    let problem = problems::example2(0.5, 0.5, 1.0).unwrap();
    for method in [Method::Rrk, Method::Euler] {
        let first = method
            .solve(&problem, 32, &TrialStreams::new(11, 4))
            .unwrap();
        let replay = RecordedDraws::from_trajectory(&first).unwrap();
        let second = method.solve(&problem, 32, &replay).unwrap();
        assert_eq!(first.to_csv_string(), second.to_csv_string());
    }
}

#[test]
fn short_stream_is_reported() {
    let (problem, _, _) = counting_problem(1);
    let draws = RecordedDraws::new(vec![vec![0.5; 8], vec![0.5; 3]]);
    let err = rrk_solve(&problem, 8, &draws).unwrap_err();
    assert!(
        matches!(err, rrk_dde::DdeError::StreamExhausted { .. }),
        "{err:?}"
    );
}

#[test]
fn trajectories_stay_below_a_priori_bounds() {
    let mut specs = vec![oracle_pure_delay(1.0, 2).unwrap().problem];
    for (a, g) in [(0.5, 0.5), (0.1, 0.1), (0.9, 0.2)] {
        specs.push(problems::example2(a, g, 1.0).unwrap());
    }
    for problem in &specs {
        let bounds = bounds_for(problem).unwrap().unwrap();
        for n_steps in [64usize, 256] {
            for seed in 0..4 {
                let traj = rrk_solve(problem, n_steps, &TrialStreams::new(seed, 0)).unwrap();
                assert!(check_trajectory_bound(&traj, &bounds).unwrap().all_pass());
                let traj = euler_solve(problem, n_steps, &TrialStreams::new(seed, 0)).unwrap();
                assert!(check_trajectory_bound(&traj, &bounds).unwrap().all_pass());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // changing a draw at step index kp of interval jp cannot move anything computed earlier
    #[test]
    fn solutions_are_adapted(
        seed in 0u64..1000,
        jp in 0usize..3,
        kp in 0usize..12,
        nudge in 0.01f64..0.99,
    ) {
        let problem = problems::example2(0.4, 0.6, 1.0).unwrap();
        let base = rrk_solve(&problem, 12, &TrialStreams::new(seed, 0)).unwrap();
        let mut draws = RecordedDraws::from_trajectory(&base).unwrap();
        draws.draws_mut()[jp][kp] = nudge;
        let other = rrk_solve(&problem, 12, &draws).unwrap();
        for j in 0..=jp {
            let last = if j == jp { kp } else { 12 };
            for k in 0..=last {
                prop_assert_eq!(
                    base.value(k, j as isize)[0].to_bits(),
                    other.value(k, j as isize)[0].to_bits()
                );
            }
        }
    }
}
