//! Multiplier equations solved exactly on sorted breakpoints.
//!
//! Both operators below reduce to a scalar equation in a piecewise
//! affine, strictly decreasing map built from `shrink₁`. The breakpoints
//! are the distinct magnitudes `|zᵢ|`; a binary search locates the
//! bracketing segment and one affine interpolation finishes the job, for
//! an overall `O(n log n)`.

use super::{shrink1, ProxResult};
use crate::linalg;

/// `‖shrink₁(z, μ)‖₁`
fn shrunk_norm1(z: &[f64], mu: f64) -> f64 {
    z.iter().map(|&v| (v.abs() - mu).max(0.0)).sum()
}

/// Distinct positive magnitudes `|zᵢ|`, ascending, with 0 prepended.
/// Equal magnitudes are deduplicated; ties are harmless because the
/// interpolation always happens on a strictly decreasing affine segment.
fn sorted_breakpoints(z: &[f64]) -> Vec<f64> {
    let mut b: Vec<f64> = z.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    b.sort_by(|a, c| a.partial_cmp(c).unwrap());
    b.dedup();
    let mut out = Vec::with_capacity(b.len() + 1);
    out.push(0.0);
    out.extend(b);
    out
}

/// Euclidean projection onto the ℓ1 ball `{w : ‖w‖₁ ≤ radius}`.
///
/// Interior inputs are returned unchanged with multiplier 0. Otherwise
/// the result is `shrink₁(z, μ̄)` where `μ̄ > 0` solves
/// `‖shrink₁(z, μ̄)‖₁ = radius`.
pub fn project_l1_ball(z: &[f64], radius: f64) -> ProxResult {
    debug_assert!(radius > 0.0);
    if linalg::norm1(z) <= radius {
        return ProxResult {
            point: z.to_vec(),
            multiplier: Some(0.0),
            newton_iters: None,
        };
    }
    let breaks = sorted_breakpoints(z);
    // h(μ) = ‖shrink₁(z,μ)‖₁ decreases from ‖z‖₁ > radius to 0, so a
    // bracketing segment [breaks[j], breaks[j+1]] with
    // h(breaks[j]) ≥ radius > h(breaks[j+1]) always exists.
    let mut lo = 0;
    let mut hi = breaks.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if shrunk_norm1(z, breaks[mid]) >= radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (h_lo, h_hi) = (shrunk_norm1(z, breaks[lo]), shrunk_norm1(z, breaks[hi]));
    let mu = breaks[lo] + (h_lo - radius) / (h_lo - h_hi) * (breaks[hi] - breaks[lo]);
    ProxResult {
        point: shrink1(z, mu),
        multiplier: Some(mu),
        newton_iters: None,
    }
}

/// Prox of `(α/2)‖·‖₁²`: equals `shrink₁(z, β̄)` where `β̄ ≥ 0` solves
/// `β̄ = α‖shrink₁(z, β̄)‖₁`.
pub fn prox_half_l1_sq(z: &[f64], alpha: f64) -> ProxResult {
    debug_assert!(alpha > 0.0);
    if z.iter().all(|&v| v == 0.0) {
        return ProxResult {
            point: vec![0.0; z.len()],
            multiplier: Some(0.0),
            newton_iters: None,
        };
    }
    // g(β) = α‖shrink₁(z,β)‖₁ − β is strictly decreasing with
    // g(0) = α‖z‖₁ > 0 and g(max|zᵢ|) = −max|zᵢ| < 0.
    let g = |beta: f64| alpha * shrunk_norm1(z, beta) - beta;
    let breaks = sorted_breakpoints(z);
    let mut lo = 0;
    let mut hi = breaks.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if g(breaks[mid]) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (g_lo, g_hi) = (g(breaks[lo]), g(breaks[hi]));
    let beta = breaks[lo] + g_lo / (g_lo - g_hi) * (breaks[hi] - breaks[lo]);
    ProxResult {
        point: shrink1(z, beta),
        multiplier: Some(beta),
        newton_iters: None,
    }
}
