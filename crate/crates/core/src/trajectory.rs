use std::io::Write;

use serde::Serialize;

use crate::error::{DdeError, Result};
use crate::grid::UniformGrid;

/// `(t, j, k, y)` as read back from a trajectory CSV.
pub type CsvRecord = (f64, isize, usize, Vec<f64>);

/// Formats a float with 17 significant digits, enough for an exact round-trip.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Solver output: `y_k^j` for `k in 0..=N`, `j in -1..=n`.
///
/// Column `j = -1` holds the initial function sampled on `[-tau, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: UniformGrid,
    dim: usize,
    values: Vec<f64>,
    draws: Option<Vec<f64>>,
    f_evals: u64,
}

impl Trajectory {
    pub(crate) fn zeros(grid: UniformGrid, dim: usize) -> Self {
        let len = (grid.n_intervals() + 2) * (grid.n_steps() + 1) * dim;
        Self {
            grid,
            dim,
            values: vec![0.0; len],
            draws: None,
            f_evals: 0,
        }
    }

    /// Samples an exact solution on the grid, including the initial column.
    pub fn from_exact<F>(grid: UniformGrid, dim: usize, exact: F) -> Self
    where
        F: Fn(f64) -> Vec<f64>,
    {
        let mut traj = Self::zeros(grid, dim);
        for j in -1..=grid.n_intervals() as isize {
            for k in 0..=grid.n_steps() {
                let v = exact(grid.node(k, j));
                traj.value_mut(k, j).copy_from_slice(&v);
            }
        }
        traj
    }

    #[inline]
    fn offset(&self, k: usize, j: isize) -> usize {
        debug_assert!(j >= -1 && j <= self.grid.n_intervals() as isize);
        debug_assert!(k <= self.grid.n_steps());
        (((j + 1) as usize) * (self.grid.n_steps() + 1) + k) * self.dim
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f_evals(&self) -> u64 {
        self.f_evals
    }

    pub(crate) fn set_f_evals(&mut self, evals: u64) {
        self.f_evals = evals;
    }

    pub(crate) fn set_draws(&mut self, draws: Vec<f64>) {
        self.draws = Some(draws);
    }

    /// `y_k^j`.
    pub fn value(&self, k: usize, j: isize) -> &[f64] {
        let o = self.offset(k, j);
        &self.values[o..o + self.dim]
    }

    pub(crate) fn value_mut(&mut self, k: usize, j: isize) -> &mut [f64] {
        let o = self.offset(k, j);
        &mut self.values[o..o + self.dim]
    }

    /// Uniform draw `gamma_k^j` used for the step ending at node `k`
    /// (so `k in 1..=N`), when the solver recorded it.
    pub fn draw(&self, k: usize, j: usize) -> Option<f64> {
        let draws = self.draws.as_ref()?;
        if k == 0 || k > self.grid.n_steps() || j > self.grid.n_intervals() {
            return None;
        }
        draws.get(j * self.grid.n_steps() + k - 1).copied()
    }

    /// All recorded draws of interval `j`, in step order.
    pub fn interval_draws(&self, j: usize) -> Option<&[f64]> {
        let n = self.grid.n_steps();
        self.draws.as_ref().map(|d| &d[j * n..(j + 1) * n])
    }

    /// Largest Euclidean norm over the nodes of interval `j`.
    pub fn interval_sup(&self, j: isize) -> f64 {
        (0..=self.grid.n_steps())
            .map(|k| norm(self.value(k, j)))
            .fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// True when `y_0^j == y_N^{j-1}` bitwise for every `j >= 0`.
    pub fn junctions_consistent(&self) -> bool {
        let n = self.grid.n_steps();
        (0..=self.grid.n_intervals() as isize).all(|j| {
            self.value(0, j)
                .iter()
                .zip(self.value(n, j - 1))
                .all(|(a, b)| a.to_bits() == b.to_bits())
        })
    }

    /// Writes `t,j,k,y_0,...,y_{d-1}`, one row per `(j, k)` node.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header = String::from("t,j,k");
        for i in 0..self.dim {
            header.push_str(&format!(",y_{i}"));
        }
        writeln!(w, "{header}")?;
        for j in -1..=self.grid.n_intervals() as isize {
            for k in 0..=self.grid.n_steps() {
                let mut line = format!("{},{j},{k}", fmt17(self.grid.node(k, j)));
                for v in self.value(k, j) {
                    line.push(',');
                    line.push_str(&fmt17(*v));
                }
                writeln!(w, "{line}")?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    /// Parses the CSV layout written by [`Trajectory::write_csv`] back into
    /// `(t, j, k, y)` records.
    pub fn parse_csv(text: &str) -> Result<Vec<CsvRecord>> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| DdeError::Io("empty trajectory csv".into()))?;
        if !header.starts_with("t,j,k") {
            return Err(DdeError::Io(format!("unexpected header `{header}`")));
        }
        let bad = |l: &str| DdeError::Io(format!("malformed row `{l}`"));
        lines
            .map(|line| {
                let mut fields = line.split(',');
                let t = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(line))?;
                let j = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(line))?;
                let k = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(line))?;
                let y = fields
                    .map(|s| s.parse::<f64>().map_err(|_| bad(line)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((t, j, k, y))
            })
            .collect()
    }

    pub fn to_json(&self) -> TrajectoryJson {
        let mut nodes = Vec::new();
        for j in -1..=self.grid.n_intervals() as isize {
            for k in 0..=self.grid.n_steps() {
                nodes.push(NodeJson {
                    t: self.grid.node(k, j),
                    j,
                    k,
                    y: self.value(k, j).to_vec(),
                });
            }
        }
        TrajectoryJson {
            tau: self.grid.tau(),
            h: self.grid.h(),
            n_steps: self.grid.n_steps(),
            n_intervals: self.grid.n_intervals(),
            f_evals: self.f_evals,
            nodes,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NodeJson {
    pub t: f64,
    pub j: isize,
    pub k: usize,
    pub y: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryJson {
    pub tau: f64,
    pub h: f64,
    pub n_steps: usize,
    pub n_intervals: usize,
    pub f_evals: u64,
    pub nodes: Vec<NodeJson>,
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    if v.len() == 1 {
        v[0].abs()
    } else {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use proptest::prelude::*;

    #[test]
    fn exact_sampling_and_layout() {
        let g = build_grid(1.0, 4, 1).unwrap();
        let tr = Trajectory::from_exact(g, 2, |t| vec![t, -t]);
        assert_eq!(tr.value(2, 0), &[0.5, -0.5]);
        assert_eq!(tr.value(0, -1), &[-1.0, 1.0]);
        assert_eq!(tr.value(4, 1), &[2.0, -2.0]);
        assert!(tr.junctions_consistent());
        assert_eq!(tr.interval_sup(1), 2.0f64.sqrt() * 2.0);
        assert!(tr.draw(1, 0).is_none());
    }

    #[test]
    fn csv_header_and_row_count() {
        let g = build_grid(1.0, 8, 2).unwrap();
        let tr = Trajectory::from_exact(g, 1, |_| vec![1.0]);
        let csv = tr.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,j,k,y_0"));
        assert_eq!(lines.count(), 9 * 4);
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(vals in proptest::collection::vec(-1e300f64..1e300, 10)) {
            let g = build_grid(1.0, 4, 0).unwrap();
            let tr = Trajectory::from_exact(g, 1, |t| {
                let i = ((t + 1.0) * 4.0).round() as usize;
                vec![vals[i]]
            });
            let rows = Trajectory::parse_csv(&tr.to_csv_string()).unwrap();
            prop_assert_eq!(rows.len(), 10);
            for (t, j, k, y) in rows {
                prop_assert_eq!(t.to_bits(), g.node(k, j).to_bits());
                prop_assert_eq!(y[0].to_bits(), tr.value(k, j)[0].to_bits());
            }
        }
    }
}
