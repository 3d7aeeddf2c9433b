//! Timing benchmark: mean seconds per evaluation over seeded random
//! queries, per dimension.
//!
//! Protocol: `(x, t)` drawn uniformly from `[−10,10]ⁿ × [0,10]` with a
//! ChaCha20 generator seeded from the `--seed` value (so runs are
//! reproducible bit-for-bit), evaluated with the configured stopping
//! rule. The full sample set is drawn up front from a single stream;
//! worker counts only partition it, they never change it. With more
//! than one worker the same workload is also timed single-threaded to
//! report the aggregate speedup.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha20Rng;

use hopf_core::problem::{HamiltonianSpec, InitialDataSpec};
use hopf_core::solver::SolverConfig;

use crate::schema::ProblemFile;
use crate::{solve_point, CliError};

#[derive(Debug, Clone)]
pub struct BenchJob {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub workers: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub samples: usize,
    /// Single-worker mean seconds per evaluation (the reference number).
    pub mean_seconds: f64,
    /// Fraction of evaluations whose stopping criteria were met.
    pub convergence_rate: f64,
    /// Single-worker evaluations per second.
    pub baseline_throughput: f64,
    /// Aggregate evaluations per second across all workers (only when
    /// workers > 1).
    pub parallel_throughput: Option<f64>,
    pub speedup: Option<f64>,
}

fn draw_samples(n: usize, samples: usize, seed: u64) -> Vec<(Vec<f64>, f64)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let t = rng.random_range(0.0..10.0);
            (x, t)
        })
        .collect()
}

fn run_chunk(
    chunk: &[(Vec<f64>, f64)],
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
    cfg: &SolverConfig,
) -> Result<usize, CliError> {
    let mut converged = 0;
    for (x, t) in chunk {
        if solve_point(x, *t, h, j, cfg)?.converged {
            converged += 1;
        }
    }
    Ok(converged)
}

pub fn run(problem: &ProblemFile, job: &BenchJob) -> Result<Vec<BenchRow>, CliError> {
    if job.samples == 0 {
        return Err(CliError::Config("sample count must be at least 1".into()));
    }
    let workers = job.workers.max(1);
    let mut rows = Vec::new();
    for &n in &job.dims {
        let (h, j, cfg) = problem.build_at(n)?;
        let samples = draw_samples(n, job.samples, job.seed);

        let start = Instant::now();
        let converged = run_chunk(&samples, &h, &j, &cfg)?;
        let single_elapsed = start.elapsed().as_secs_f64();
        let baseline_throughput = job.samples as f64 / single_elapsed;

        let (parallel_throughput, speedup) = if workers > 1 {
            let chunk_len = job.samples.div_ceil(workers);
            let start = Instant::now();
            let mut first_err = None;
            std::thread::scope(|scope| {
                let handles: Vec<_> = samples
                    .chunks(chunk_len)
                    .map(|chunk| {
                        let (h, j, cfg) = (&h, &j, &cfg);
                        scope.spawn(move || run_chunk(chunk, h, j, cfg))
                    })
                    .collect();
                for handle in handles {
                    if let Err(e) = handle.join().expect("bench worker panicked") {
                        first_err.get_or_insert(e);
                    }
                }
            });
            if let Some(e) = first_err {
                return Err(e);
            }
            let parallel_elapsed = start.elapsed().as_secs_f64();
            let throughput = job.samples as f64 / parallel_elapsed;
            (Some(throughput), Some(throughput / baseline_throughput))
        } else {
            (None, None)
        };

        rows.push(BenchRow {
            n,
            samples: job.samples,
            mean_seconds: single_elapsed / job.samples as f64,
            convergence_rate: converged as f64 / job.samples as f64,
            baseline_throughput,
            parallel_throughput,
            speedup,
        });
    }
    Ok(rows)
}

pub fn render_table(rows: &[BenchRow], workers: usize) -> String {
    let mut out = String::from("   n    mean s/call   conv%      eval/s");
    if workers > 1 {
        out += &format!("   eval/s x{workers}   speedup");
    }
    out.push('\n');
    for r in rows {
        out += &format!(
            "{:4}    {:.3e}    {:5.1}    {:.3e}",
            r.n,
            r.mean_seconds,
            100.0 * r.convergence_rate,
            r.baseline_throughput
        );
        if let (Some(tp), Some(sp)) = (r.parallel_throughput, r.speedup) {
            out += &format!("     {tp:.3e}     {sp:.2}x");
        }
        out.push('\n');
    }
    out
}

pub fn to_json(rows: &[BenchRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "n": r.n,
                    "samples": r.samples,
                    "mean_seconds": r.mean_seconds,
                    "convergence_rate": r.convergence_rate,
                    "baseline_throughput": r.baseline_throughput,
                    "parallel_throughput": r.parallel_throughput,
                    "speedup": r.speedup,
                })
            })
            .collect(),
    )
}
