//! Closest-point queries against a shape file.

use hopf_core::closest::{closest, ClosestPointResult};
use hopf_core::solver::SolverConfig;

use crate::schema::ShapeFile;
use crate::CliError;

/// Closest-point queries want a few more digits out of the inner solver
/// than the evaluation default, so the boundary residual stays well
/// under its 1e-6 budget.
pub fn default_projection_config() -> SolverConfig {
    SolverConfig::default().with_tol(1e-18).with_max_iters(100_000)
}

pub fn run(file: &ShapeFile, y: &[f64]) -> Result<ClosestPointResult, CliError> {
    let shape = file.shape.build()?;
    let cfg = file.solver.apply(default_projection_config());
    cfg.validate()?;
    Ok(closest(y, &shape, &cfg)?)
}

pub fn to_json(r: &ClosestPointResult) -> serde_json::Value {
    serde_json::json!({
        "distance": r.distance,
        "point": r.point,
        "gradient_at_root": r.gradient_at_root,
        "newton_iters": r.newton_iters,
        "branch": r.branch,
        "tie": r.tie,
    })
}

pub fn render_text(r: &ClosestPointResult) -> String {
    let mut out = format!(
        "distance      {}\npoint         {}\nnewton_iters  {}\n",
        r.distance,
        r.point
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(","),
        r.newton_iters
    );
    if let Some(b) = r.branch {
        out += &format!("branch        {b}\n");
    }
    if r.tie {
        out += "tie           true\n";
    }
    out
}
