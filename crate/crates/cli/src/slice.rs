//! 2-D slice export: evaluate `φ` on a grid over two chosen axes (all
//! other coordinates fixed) at a list of times, one CSV per time.
//!
//! Output format: header `x1,x2,phi,grad_norm,converged`, rows in
//! row-major order (the first axis is the slow index). At `t = 0` the
//! initial data is evaluated directly, no solver involved, and
//! `grad_norm` is `NaN`. Optionally a companion `*_contours.csv` with
//! marching-squares segments at every multiple of a level step.
//!
//! Output is deterministic for a fixed job description: rows are
//! computed row-by-row (warm starts, when enabled, chain only within a
//! row) and written in grid order no matter how many workers ran.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hopf_core::problem::{HamiltonianSpec, InitialDataSpec};
use hopf_core::solver::{run_split_bregman_with_state, SolverConfig};

use crate::schema::ProblemFile;
use crate::{solve_point, CliError};

#[derive(Debug, Clone)]
pub struct SliceJob {
    pub axis_i: usize,
    pub axis_j: usize,
    /// Fixed coordinates; entries on the varying axes are ignored.
    pub base: Vec<f64>,
    pub range_i: (f64, f64),
    pub range_j: (f64, f64),
    pub samples_i: usize,
    pub samples_j: usize,
    pub times: Vec<f64>,
    /// Emit contour segments at every multiple of this step.
    pub contour_step: Option<f64>,
    /// Chain warm starts along each row (row-local, so output does not
    /// depend on the worker count).
    pub warm_start: bool,
    pub workers: usize,
}

impl SliceJob {
    pub fn validate(&self, dimension: usize) -> Result<(), CliError> {
        if self.axis_i == self.axis_j || self.axis_i >= dimension || self.axis_j >= dimension {
            return Err(CliError::Config(format!(
                "varying axes ({}, {}) must be distinct and below the dimension {dimension}",
                self.axis_i, self.axis_j
            )));
        }
        if self.base.len() != dimension {
            return Err(CliError::Config(format!(
                "fixed coordinates have length {}, dimension is {dimension}",
                self.base.len()
            )));
        }
        if self.samples_i < 2 || self.samples_j < 2 {
            return Err(CliError::Config("sample counts must be at least 2".into()));
        }
        for (lo, hi) in [self.range_i, self.range_j] {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(CliError::Config(format!("bad range [{lo}, {hi}]")));
            }
        }
        if self.times.is_empty() {
            return Err(CliError::Config("time list is empty".into()));
        }
        if let Some(step) = self.contour_step {
            if !(step > 0.0) {
                return Err(CliError::Config("contour step must be positive".into()));
            }
        }
        Ok(())
    }

    fn coords(range: (f64, f64), samples: usize, k: usize) -> f64 {
        range.0 + (range.1 - range.0) * k as f64 / (samples - 1) as f64
    }
}

struct Cell {
    phi: f64,
    grad_norm: f64,
    converged: bool,
}

fn solve_row(
    job: &SliceJob,
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
    cfg: &SolverConfig,
    t: f64,
    i: usize,
) -> Result<Vec<Cell>, CliError> {
    let xi = SliceJob::coords(job.range_i, job.samples_i, i);
    let mut x = job.base.clone();
    x[job.axis_i] = xi;
    let mut row = Vec::with_capacity(job.samples_j);
    let mut cfg_row = cfg.clone();
    for jj in 0..job.samples_j {
        x[job.axis_j] = SliceJob::coords(job.range_j, job.samples_j, jj);
        if t == 0.0 {
            row.push(Cell {
                phi: j.eval(&x)?,
                grad_norm: f64::NAN,
                converged: true,
            });
            continue;
        }
        if job.warm_start
            && !matches!(h, HamiltonianSpec::MinOf(_))
            && !matches!(j, InitialDataSpec::MinOf(_))
        {
            let (e, state) = run_split_bregman_with_state(&x, t, j, h, &cfg_row)?;
            cfg_row.warm_start = Some(state);
            row.push(Cell {
                phi: e.value,
                grad_norm: hopf_core::linalg::norm2(&e.gradient),
                converged: e.converged,
            });
        } else {
            let sol = solve_point(&x, t, h, j, &cfg_row)?;
            row.push(Cell {
                phi: sol.value,
                grad_norm: sol
                    .gradient
                    .as_deref()
                    .map(hopf_core::linalg::norm2)
                    .unwrap_or(f64::NAN),
                converged: sol.converged,
            });
        }
    }
    Ok(row)
}

fn solve_grid(
    job: &SliceJob,
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
    cfg: &SolverConfig,
    t: f64,
) -> Result<Vec<Vec<Cell>>, CliError> {
    let workers = job.workers.max(1).min(job.samples_i);
    if workers == 1 {
        return (0..job.samples_i)
            .map(|i| solve_row(job, h, j, cfg, t, i))
            .collect();
    }
    let mut grid: Vec<Option<Vec<Cell>>> = (0..job.samples_i).map(|_| None).collect();
    let mut first_err = None;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || -> Result<Vec<(usize, Vec<Cell>)>, CliError> {
                    let mut out = Vec::new();
                    let mut i = w;
                    while i < job.samples_i {
                        out.push((i, solve_row(job, h, j, cfg, t, i)?));
                        i += workers;
                    }
                    Ok(out)
                })
            })
            .collect();
        for handle in handles {
            match handle.join().expect("slice worker panicked") {
                Ok(rows) => {
                    for (i, row) in rows {
                        grid[i] = Some(row);
                    }
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
    });
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(grid.into_iter().map(|r| r.expect("row missing")).collect())
}

/// Trailing-zero-free time tag for filenames ("5", "0.5").
fn time_tag(t: f64) -> String {
    t.to_string().replace('-', "m")
}

pub fn run(problem: &ProblemFile, job: &SliceJob, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    job.validate(problem.dimension)?;
    let (h, j, cfg) = problem.build()?;
    fs::create_dir_all(out_dir)?;

    let mut written = Vec::new();
    for &t in &job.times {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(CliError::Config(format!("slice time must be ≥ 0, got {t}")));
        }
        let grid = solve_grid(job, &h, &j, &cfg, t)?;

        let path = out_dir.join(format!("slice_t{}.csv", time_tag(t)));
        let mut file = std::io::BufWriter::new(fs::File::create(&path)?);
        file.write_all(b"x1,x2,phi,grad_norm,converged\n")?;
        for (i, row) in grid.iter().enumerate() {
            let xi = SliceJob::coords(job.range_i, job.samples_i, i);
            for (jj, cell) in row.iter().enumerate() {
                let xj = SliceJob::coords(job.range_j, job.samples_j, jj);
                writeln!(
                    file,
                    "{},{},{},{},{}",
                    xi, xj, cell.phi, cell.grad_norm, cell.converged
                )?;
            }
        }
        file.flush()?;
        written.push(path);

        if let Some(step) = job.contour_step {
            let path = out_dir.join(format!("slice_t{}_contours.csv", time_tag(t)));
            let mut file = std::io::BufWriter::new(fs::File::create(&path)?);
            file.write_all(b"level,x1_start,x2_start,x1_end,x2_end\n")?;
            for seg in contour_segments(job, &grid, step) {
                writeln!(
                    file,
                    "{},{},{},{},{}",
                    seg.level, seg.a.0, seg.a.1, seg.b.0, seg.b.1
                )?;
            }
            file.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}

pub struct Segment {
    pub level: f64,
    pub a: (f64, f64),
    pub b: (f64, f64),
}

/// Marching squares over the solved grid at every multiple of `step`
/// inside the value range. Saddle cells are disambiguated by the cell
/// center average.
fn contour_segments(job: &SliceJob, grid: &[Vec<Cell>], step: f64) -> Vec<Segment> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in grid {
        for c in row {
            lo = lo.min(c.phi);
            hi = hi.max(c.phi);
        }
    }
    let mut segments = Vec::new();
    if !lo.is_finite() || !hi.is_finite() {
        return segments;
    }
    let k_lo = (lo / step).ceil() as i64;
    let k_hi = (hi / step).floor() as i64;
    for k in k_lo..=k_hi {
        let level = k as f64 * step;
        for i in 0..job.samples_i - 1 {
            for jj in 0..job.samples_j - 1 {
                let x0 = SliceJob::coords(job.range_i, job.samples_i, i);
                let x1 = SliceJob::coords(job.range_i, job.samples_i, i + 1);
                let y0 = SliceJob::coords(job.range_j, job.samples_j, jj);
                let y1 = SliceJob::coords(job.range_j, job.samples_j, jj + 1);
                // corner values: (i,j), (i+1,j), (i+1,j+1), (i,j+1)
                let v = [
                    grid[i][jj].phi,
                    grid[i + 1][jj].phi,
                    grid[i + 1][jj + 1].phi,
                    grid[i][jj + 1].phi,
                ];
                let corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
                let mut case = 0usize;
                for (bit, val) in v.iter().enumerate() {
                    if *val > level {
                        case |= 1 << bit;
                    }
                }
                if case == 0 || case == 15 {
                    continue;
                }
                // interpolated crossing on edge (a, b)
                let cross = |a: usize, b: usize| -> (f64, f64) {
                    let t = (level - v[a]) / (v[b] - v[a]);
                    (
                        corners[a].0 + t * (corners[b].0 - corners[a].0),
                        corners[a].1 + t * (corners[b].1 - corners[a].1),
                    )
                };
                // edges: 0 = bottom (0-1), 1 = right (1-2), 2 = top (3-2), 3 = left (0-3)
                let e0 = || cross(0, 1);
                let e1 = || cross(1, 2);
                let e2 = || cross(3, 2);
                let e3 = || cross(0, 3);
                let mut push = |a: (f64, f64), b: (f64, f64)| {
                    segments.push(Segment { level, a, b });
                };
                match case {
                    1 | 14 => push(e0(), e3()),
                    2 | 13 => push(e0(), e1()),
                    3 | 12 => push(e1(), e3()),
                    4 | 11 => push(e1(), e2()),
                    6 | 9 => push(e0(), e2()),
                    7 | 8 => push(e2(), e3()),
                    5 | 10 => {
                        let center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                        let flip = (center > level) == (case == 5);
                        if flip {
                            push(e0(), e1());
                            push(e2(), e3());
                        } else {
                            push(e0(), e3());
                            push(e1(), e2());
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    segments
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_grid(samples: usize) -> (SliceJob, Vec<Vec<Cell>>) {
        let job = SliceJob {
            axis_i: 0,
            axis_j: 1,
            base: vec![0.0, 0.0],
            range_i: (0.0, 1.0),
            range_j: (0.0, 1.0),
            samples_i: samples,
            samples_j: samples,
            times: vec![0.0],
            contour_step: None,
            warm_start: false,
            workers: 1,
        };
        let grid = (0..samples)
            .map(|i| {
                (0..samples)
                    .map(|_| Cell {
                        phi: i as f64 / (samples - 1) as f64,
                        grad_norm: 1.0,
                        converged: true,
                    })
                    .collect()
            })
            .collect();
        (job, grid)
    }

    #[test]
    fn contours_of_a_linear_ramp_are_vertical_lines() {
        // phi = x1: the 0.5 contour is the line x1 = 0.5
        let (job, grid) = ramp_grid(11);
        let segs = contour_segments(&job, &grid, 0.5);
        let at_half: Vec<&Segment> =
            segs.iter().filter(|s| (s.level - 0.5).abs() < 1e-12).collect();
        assert!(!at_half.is_empty());
        for s in at_half {
            assert!((s.a.0 - 0.5).abs() < 1e-12);
            assert!((s.b.0 - 0.5).abs() < 1e-12);
        }
    }
}
