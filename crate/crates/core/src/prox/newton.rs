//! Damped Newton machinery for prox maps of smooth convex functions.

use super::ProxResult;
use crate::error::{Error, Result};
use crate::linalg::{self, solve_spd};

const RESIDUAL_TOL: f64 = 1e-10;
const STEP_TOL: f64 = 1e-12;
const MAX_ITERS: usize = 100;
const MAX_HALVINGS: usize = 30;

/// Twice-differentiable convex function with an explicit Hessian.
pub trait SmoothConvex {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Row-major `n × n` Hessian.
    fn hessian(&self, x: &[f64]) -> Vec<f64>;
}

/// Solve the SPD-ish Newton system `(M + boost·I) step = -rhs`, boosting
/// the diagonal when the plain factorization breaks down (the Hessians
/// here can be singular at the origin).
fn newton_step(m: &[f64], n: usize, rhs: &[f64]) -> Vec<f64> {
    let neg: Vec<f64> = rhs.iter().map(|v| -v).collect();
    let mut boost = 0.0;
    let scale = m
        .iter()
        .step_by(n + 1)
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    for _ in 0..8 {
        let mut sys = m.to_vec();
        if boost > 0.0 {
            for i in 0..n {
                sys[i * n + i] += boost;
            }
        }
        if let Some(step) = solve_spd(&sys, n, &neg) {
            return step;
        }
        boost = if boost == 0.0 { 1e-12 * scale } else { boost * 100.0 };
    }
    // Last resort: gradient direction.
    neg
}

/// Prox of `α f` for smooth convex `f`: solves the optimality condition
/// `α∇f(w) + w − z = 0` by damped Newton from `w₀ = z`, halving the step
/// whenever the residual norm would increase. Stops when the residual
/// ℓ2 norm falls to `1e-10` or the step to `1e-12`.
pub fn prox_smooth_newton<F: SmoothConvex + ?Sized>(
    f: &F,
    z: &[f64],
    alpha: f64,
) -> Result<ProxResult> {
    debug_assert!(alpha > 0.0);
    let n = z.len();
    let mut w = z.to_vec();
    let residual = |w: &[f64]| -> Vec<f64> {
        let mut r = f.gradient(w);
        for i in 0..n {
            r[i] = alpha * r[i] + w[i] - z[i];
        }
        r
    };

    let mut r = residual(&w);
    let mut rnorm = linalg::norm2(&r);
    for iter in 0..MAX_ITERS {
        if rnorm <= RESIDUAL_TOL {
            return Ok(ProxResult {
                point: w,
                multiplier: None,
                newton_iters: Some(iter),
            });
        }
        // Jacobian of the residual: αH(w) + I.
        let mut jac = f.hessian(&w);
        for v in jac.iter_mut() {
            *v *= alpha;
        }
        for i in 0..n {
            jac[i * n + i] += 1.0;
        }
        let step = newton_step(&jac, n, &r);

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = w.iter().zip(&step).map(|(wi, si)| wi + t * si).collect();
            let r_trial = residual(&trial);
            let rn_trial = linalg::norm2(&r_trial);
            if rn_trial < rnorm {
                let step_len = t * linalg::norm2(&step);
                w = trial;
                r = r_trial;
                rnorm = rn_trial;
                accepted = true;
                if step_len <= STEP_TOL {
                    return Ok(ProxResult {
                        point: w,
                        multiplier: None,
                        newton_iters: Some(iter + 1),
                    });
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // No direction made progress; either we are at the solution
            // up to roundoff or something is genuinely wrong.
            if rnorm <= 1e-8 {
                return Ok(ProxResult {
                    point: w,
                    multiplier: None,
                    newton_iters: Some(iter + 1),
                });
            }
            return Err(Error::NewtonDiverged {
                what: "smooth prox",
                iters: iter + 1,
            });
        }
    }
    if rnorm <= RESIDUAL_TOL {
        return Ok(ProxResult {
            point: w,
            multiplier: None,
            newton_iters: Some(MAX_ITERS),
        });
    }
    Err(Error::NewtonDiverged {
        what: "smooth prox",
        iters: MAX_ITERS,
    })
}

/// Solve `∇f(x) = v` for smooth strictly convex `f` by damped Newton;
/// used to evaluate `f*(v) = ⟨v, x̄⟩ − f(x̄)` when no closed form exists.
/// `start` seeds the iteration (callers usually have a good hint).
pub fn invert_gradient<F: SmoothConvex + ?Sized>(
    f: &F,
    v: &[f64],
    start: Option<&[f64]>,
) -> Result<Vec<f64>> {
    let n = v.len();
    let mut x = match start {
        Some(s) => s.to_vec(),
        None => v.to_vec(),
    };
    let residual = |x: &[f64]| -> Vec<f64> {
        let mut r = f.gradient(x);
        for i in 0..n {
            r[i] -= v[i];
        }
        r
    };
    let mut r = residual(&x);
    let mut rnorm = linalg::norm2(&r);
    let tol = 1e-11 * (1.0 + linalg::norm2(v));
    for _iter in 0..MAX_ITERS {
        if rnorm <= tol {
            return Ok(x);
        }
        let jac = f.hessian(&x);
        let step = newton_step(&jac, n, &r);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + t * si).collect();
            let r_trial = residual(&trial);
            let rn_trial = linalg::norm2(&r_trial);
            if rn_trial < rnorm {
                x = trial;
                r = r_trial;
                rnorm = rn_trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if rnorm <= 1e-7 * (1.0 + linalg::norm2(v)) {
        return Ok(x);
    }
    Err(Error::NewtonDiverged {
        what: "gradient inversion",
        iters: MAX_ITERS,
    })
}
