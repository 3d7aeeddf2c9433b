//! Euclidean projection onto an ellipsoid by Newton iteration on the
//! Lagrange multiplier.

use super::ProxResult;
use crate::error::{Error, Result};
use crate::linalg::OrthogonalMatrix;

const MULTIPLIER_TOL: f64 = 1e-8;
const MAX_NEWTON: usize = 200;

/// Projection of `w` onto `{x : Σ ((Pᵀx)ᵢ/dᵢ)² ≤ 1}` with semi-axes
/// `dᵢ > 0` and optional rotation `P`.
///
/// Interior points are returned unchanged with multiplier 0. For an
/// exterior `w` the projection is `(Π w)ᵢ = dᵢ²wᵢ/(dᵢ² + μ̄)` in the
/// rotated frame, where `μ̄ > 0` solves `Σ dᵢ²wᵢ²/(dᵢ² + μ)² = 1`. That
/// residual is smooth, decreasing and convex on `μ ≥ 0`, so Newton from
/// `μ₀ = 0` climbs monotonically to the root; iterations stop when
/// `|μ_{k+1} − μ_k| ≤ 1e-8`. Divergence is an internal failure and must
/// not happen for valid inputs.
pub fn project_ellipsoid(
    w: &[f64],
    semi_axes: &[f64],
    factor: Option<&OrthogonalMatrix>,
) -> Result<ProxResult> {
    debug_assert_eq!(w.len(), semi_axes.len());
    debug_assert!(semi_axes.iter().all(|&d| d > 0.0));
    let r = match factor {
        Some(p) => p.apply_transpose(w),
        None => w.to_vec(),
    };
    let inside: f64 = r
        .iter()
        .zip(semi_axes)
        .map(|(ri, d)| (ri / d) * (ri / d))
        .sum();
    if inside <= 1.0 {
        return Ok(ProxResult {
            point: w.to_vec(),
            multiplier: Some(0.0),
            newton_iters: Some(0),
        });
    }

    let residual = |mu: f64| -> (f64, f64) {
        let mut f = -1.0;
        let mut df = 0.0;
        for (ri, d) in r.iter().zip(semi_axes) {
            let d2 = d * d;
            let denom = d2 + mu;
            let term = d2 * ri * ri / (denom * denom);
            f += term;
            df -= 2.0 * term / denom;
        }
        (f, df)
    };

    let mut mu = 0.0;
    let mut iters = 0;
    loop {
        let (f, df) = residual(mu);
        let next = (mu - f / df).max(0.0);
        iters += 1;
        let done = (next - mu).abs() <= MULTIPLIER_TOL;
        mu = next;
        if done {
            break;
        }
        if iters >= MAX_NEWTON {
            return Err(Error::NewtonDiverged {
                what: "ellipsoid projection multiplier",
                iters,
            });
        }
    }

    let local: Vec<f64> = r
        .iter()
        .zip(semi_axes)
        .map(|(ri, d)| d * d * ri / (d * d + mu))
        .collect();
    let point = match factor {
        Some(p) => p.apply(&local),
        None => local,
    };
    Ok(ProxResult {
        point,
        multiplier: Some(mu),
        newton_iters: Some(iters),
    })
}
