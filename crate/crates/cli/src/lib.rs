//! Library half of the `hopf` command line: problem/shape file schema,
//! the four subcommand implementations, and the shared point solver.

pub mod bench;
pub mod eval;
pub mod project;
pub mod schema;
pub mod slice;

use thiserror::Error;

use hopf_core::problem::{HamiltonianSpec, InitialDataSpec};
use hopf_core::solver::{evaluate_any, Evaluation, SolverConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] hopf_core::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One solved query point. `t = 0` is answered by evaluating the
/// initial data directly (the Hopf formula needs `t > 0`), in which
/// case there is no solver gradient.
#[derive(Debug, Clone)]
pub struct PointSolution {
    pub value: f64,
    pub gradient: Option<Vec<f64>>,
    pub iters: usize,
    pub converged: bool,
}

pub fn solve_point(
    x: &[f64],
    t: f64,
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
    cfg: &SolverConfig,
) -> Result<PointSolution, CliError> {
    if t == 0.0 {
        return Ok(PointSolution {
            value: j.eval(x)?,
            gradient: None,
            iters: 0,
            converged: true,
        });
    }
    let Evaluation {
        value,
        gradient,
        iters,
        converged,
        ..
    } = evaluate_any(x, t, h, j, cfg)?;
    Ok(PointSolution {
        value,
        gradient: Some(gradient),
        iters,
        converged,
    })
}

/// Comma-separated reals ("2,0.5,0").
pub fn parse_vector(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Parse(format!("bad number {s:?}: {e}")))
        })
        .collect()
}
