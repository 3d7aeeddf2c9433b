//! Single-point evaluation: value, gradient, recovered control,
//! iteration count, convergence flag and wall time.

use std::time::Instant;

use hopf_core::solver::recover_control;

use crate::schema::ProblemFile;
use crate::{solve_point, CliError};

#[derive(Debug)]
pub struct EvalReport {
    pub value: f64,
    pub gradient: Option<Vec<f64>>,
    /// `∇H(∇ₓφ)` when `H` is differentiable there; `None` with a reason
    /// otherwise.
    pub control: Option<Vec<f64>>,
    pub control_note: Option<String>,
    pub iters: usize,
    pub converged: bool,
    pub wall_seconds: f64,
}

pub fn run(problem: &ProblemFile, x: &[f64], t: f64) -> Result<EvalReport, CliError> {
    if x.len() != problem.dimension {
        return Err(CliError::Config(format!(
            "query point has {} coordinates, problem dimension is {}",
            x.len(),
            problem.dimension
        )));
    }
    let (h, j, cfg) = problem.build()?;
    let start = Instant::now();
    let sol = solve_point(x, t, &h, &j, &cfg)?;
    let wall_seconds = start.elapsed().as_secs_f64();

    let (control, control_note) = match &sol.gradient {
        Some(g) => match recover_control(g, &h) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(format!("control not unique: {e}"))),
        },
        None => (None, Some("no gradient at t = 0".into())),
    };

    Ok(EvalReport {
        value: sol.value,
        gradient: sol.gradient,
        control,
        control_note,
        iters: sol.iters,
        converged: sol.converged,
        wall_seconds,
    })
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl EvalReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value,
            "gradient": self.gradient,
            "control": self.control,
            "control_note": self.control_note,
            "iters": self.iters,
            "converged": self.converged,
            "wall_seconds": self.wall_seconds,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("value      {}\n", self.value);
        if let Some(g) = &self.gradient {
            out += &format!("gradient   {}\n", join(g));
        }
        match (&self.control, &self.control_note) {
            (Some(c), _) => out += &format!("control    {}\n", join(c)),
            (None, Some(note)) => out += &format!("control    ({note})\n"),
            _ => {}
        }
        out += &format!(
            "iters      {}\nconverged  {}\nwall       {:.3e} s\n",
            self.iters, self.converged, self.wall_seconds
        );
        out
    }
}
