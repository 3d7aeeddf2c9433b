//! Exact and iterative proximal operators and convex projections.
//!
//! `prox_{α∂f}(z) = argmin_w { α f(w) + ½‖w − z‖₂² }`. These are the
//! computational kernels the split Bregman solver calls in its inner
//! steps; all of them are pure functions over immutable inputs.

mod breakpoints;
mod ellipsoid;
mod newton;

pub use breakpoints::{project_l1_ball, prox_half_l1_sq};
pub use ellipsoid::project_ellipsoid;
pub use newton::{invert_gradient, prox_smooth_newton, SmoothConvex};

use crate::error::{Error, Result};
use crate::linalg::{self, OrthogonalMatrix};
use crate::problem::SpectralMatrix;

/// Output of a prox or projection, with the Lagrange multiplier and the
/// inner Newton iteration count when the algorithm produces them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxResult {
    pub point: Vec<f64>,
    pub multiplier: Option<f64>,
    pub newton_iters: Option<usize>,
}

/// Componentwise soft thresholding: the prox of `α‖·‖₁`.
pub fn shrink1(z: &[f64], alpha: f64) -> Vec<f64> {
    debug_assert!(alpha >= 0.0);
    z.iter()
        .map(|&v| {
            if v > alpha {
                v - alpha
            } else if v < -alpha {
                v + alpha
            } else {
                0.0
            }
        })
        .collect()
}

/// Radial shrinkage: the prox of `α‖·‖₂`. Zero stays zero; the boundary
/// case `‖z‖₂ = α` collapses to zero with the `max(·, 0)` convention.
pub fn shrink2(z: &[f64], alpha: f64) -> Vec<f64> {
    debug_assert!(alpha >= 0.0);
    let n = linalg::norm2(z);
    if n == 0.0 {
        return vec![0.0; z.len()];
    }
    let scale = (n - alpha).max(0.0) / n;
    z.iter().map(|&v| v * scale).collect()
}

/// Componentwise outward stretch, the minimizer of
/// `½‖y − z‖₂² − α‖y‖₁` (nonconvex). Zero components stay at zero.
pub fn stretch1(z: &[f64], alpha: f64) -> Vec<f64> {
    debug_assert!(alpha >= 0.0);
    z.iter()
        .map(|&v| {
            if v > 0.0 {
                v + alpha
            } else if v < 0.0 {
                v - alpha
            } else {
                0.0
            }
        })
        .collect()
}

/// Radial outward stretch, the minimizer of `½‖y − z‖₂² − α‖y‖₂`.
/// At `z = 0` every unit direction is a minimizer, so the zero input is
/// rejected rather than an arbitrary direction chosen.
pub fn stretch2(z: &[f64], alpha: f64) -> Result<Vec<f64>> {
    debug_assert!(alpha >= 0.0);
    let n = linalg::norm2(z);
    if n == 0.0 {
        return Err(Error::Nondifferentiable(
            "outward radial stretch is multivalued at the origin".into(),
        ));
    }
    let scale = 1.0 + alpha / n;
    Ok(z.iter().map(|&v| v * scale).collect())
}

/// Prox of the quadratic `½⟨w, A w⟩` where `A = P diag(weights) Pᵀ`:
/// rotate, scale each component by `1/(1 + α wᵢ)`, rotate back.
/// `α = 0` is allowed as the identity limit.
pub fn prox_quadratic(
    z: &[f64],
    alpha: f64,
    weights: &[f64],
    factor: Option<&OrthogonalMatrix>,
) -> Vec<f64> {
    debug_assert!(alpha >= 0.0);
    debug_assert_eq!(z.len(), weights.len());
    let mut r = match factor {
        Some(p) => p.apply_transpose(z),
        None => z.to_vec(),
    };
    for (ri, w) in r.iter_mut().zip(weights) {
        *ri /= 1.0 + alpha * w;
    }
    match factor {
        Some(p) => p.apply(&r),
        None => r,
    }
}

/// Prox of `α‖·‖∞`: the input minus its projection on the ℓ1 ball of
/// radius `α` (the Wulff shape of the ∞-norm).
pub fn prox_linf(z: &[f64], alpha: f64) -> Vec<f64> {
    debug_assert!(alpha > 0.0);
    let proj = project_l1_ball(z, alpha);
    z.iter().zip(&proj.point).map(|(a, b)| a - b).collect()
}

/// Prox of `α‖·‖_A` with `‖x‖_A = √⟨x, Ax⟩`: the input minus its
/// projection on the scaled dual ellipsoid
/// `α·E_A = {y : ⟨y, A⁻¹y⟩ ≤ α²}`, whose semi-axes in the eigenbasis
/// are `α√wᵢ`.
pub fn prox_norm_a(z: &[f64], alpha: f64, a: &SpectralMatrix) -> Result<Vec<f64>> {
    debug_assert!(alpha > 0.0);
    if z.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: z.len(),
        });
    }
    let rotated = a.to_eigenbasis(z);
    let semi_axes: Vec<f64> = a.eigenvalues().iter().map(|w| alpha * w.sqrt()).collect();
    let proj = project_ellipsoid(&rotated, &semi_axes, None)?;
    let diff: Vec<f64> = rotated
        .iter()
        .zip(&proj.point)
        .map(|(a, b)| a - b)
        .collect();
    Ok(a.from_eigenbasis(&diff))
}

/// Prox of `(α/2)‖·‖∞²` via the Moreau identity from the prox of
/// `(·/2)‖·‖₁²`. Both functions are 2-homogeneous, so the identity's
/// argument scaling cancels and only the reciprocal coefficient
/// survives: `prox_{(α/2)∂‖·‖∞²}(z) = z − prox_{(1/(2α))∂‖·‖₁²}(z)`.
pub fn prox_half_linf_sq(z: &[f64], alpha: f64) -> Vec<f64> {
    debug_assert!(alpha > 0.0);
    let inner = prox_half_l1_sq(z, 1.0 / alpha);
    z.iter().zip(&inner.point).map(|(a, b)| a - b).collect()
}

/// Generic Moreau complement: derives `prox_{α∂f}` from an operator for
/// `prox_{(1/α)∂f*}` via
/// `prox_{α∂f}(z) = z − α · prox_{(1/α)∂f*}(z/α)`.
pub fn moreau_complement<F>(prox_conj_scaled: F, z: &[f64], alpha: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    debug_assert!(alpha > 0.0);
    let scaled: Vec<f64> = z.iter().map(|&v| v / alpha).collect();
    let inner = prox_conj_scaled(&scaled)?;
    Ok(z.iter().zip(&inner).map(|(a, b)| a - alpha * b).collect())
}
