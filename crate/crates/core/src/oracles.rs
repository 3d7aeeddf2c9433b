//! Closed-form reference solutions and a brute-force Hopf minimizer,
//! used as ground truth by every test suite.
//!
//! The inward-motion forms correspond to nonconvex Hamiltonians
//! (`−‖·‖₁`, `−‖·‖₂`); the solver never accepts those, so they exist
//! here purely as documented fixtures.

use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::{HamiltonianSpec, InitialDataSpec};
use crate::prox::shrink1;
use crate::solver::hopf_objective;

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "oracle evaluated outside its validity region: t = {t}"
        )));
    }
    Ok(())
}

/// Ellipsoid level set `J = ½(Σ xᵢ²/aᵢ² − 1)` expanding under
/// `H = ‖·‖₁`:
///
/// ```text
///   φ(x,t) = −½ + Σ_{|xᵢ| > t} ½((|xᵢ| − t)/aᵢ)²,
///   ∂φ/∂xᵢ = (1/aᵢ²)·shrink₁(x, t)ᵢ.
/// ```
///
/// Valid for all `x` and `t ≥ 0` (`t = 0` recovers `J`).
pub fn ellipsoid_l1(x: &[f64], t: f64, semi_axes: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_time(t)?;
    if x.len() != semi_axes.len() {
        return Err(Error::DimensionMismatch {
            expected: semi_axes.len(),
            actual: x.len(),
        });
    }
    let mut value = -0.5;
    for (xi, a) in x.iter().zip(semi_axes) {
        let excess = xi.abs() - t;
        if excess > 0.0 {
            value += 0.5 * (excess / a) * (excess / a);
        }
    }
    let gradient = shrink1(x, t)
        .into_iter()
        .zip(semi_axes)
        .map(|(s, a)| s / (a * a))
        .collect();
    Ok((value, gradient))
}

/// Unit sphere level set `J = ½(‖x‖₂² − 1)` expanding under `H = ‖·‖₂`:
/// `φ = ½(‖x‖₂ − t)² − ½` outside the front, `−½` inside. The zero
/// level set sits at `‖x‖₂ = t + 1`.
pub fn sphere_l2_outward(x: &[f64], t: f64) -> Result<f64> {
    check_time(t)?;
    let n = linalg::norm2(x);
    Ok(if n > t { 0.5 * (n - t) * (n - t) - 0.5 } else { -0.5 })
}

/// Inward-motion counterpart of [`ellipsoid_l1`] (`H = −‖·‖₁`):
/// `φ = −½ + ½Σ((|xᵢ| + t)/aᵢ)²`. The zero level set disappears once
/// `t ≥ maxᵢ aᵢ`.
pub fn ellipsoid_l1_inward(x: &[f64], t: f64, semi_axes: &[f64]) -> Result<f64> {
    check_time(t)?;
    if x.len() != semi_axes.len() {
        return Err(Error::DimensionMismatch {
            expected: semi_axes.len(),
            actual: x.len(),
        });
    }
    let mut value = -0.5;
    for (xi, a) in x.iter().zip(semi_axes) {
        let grown = xi.abs() + t;
        value += 0.5 * (grown / a) * (grown / a);
    }
    Ok(value)
}

/// Inward-motion counterpart of [`sphere_l2_outward`] (`H = −‖·‖₂`):
/// `φ = ½(‖x‖₂ + t)² − ½`, whose zero set is `‖x‖₂ = 1 − t` for
/// `t ≤ 1` and empty afterwards.
pub fn sphere_l2_inward(x: &[f64], t: f64) -> Result<f64> {
    check_time(t)?;
    let n = linalg::norm2(x);
    Ok(0.5 * (n + t) * (n + t) - 0.5)
}

type ValueFn = fn(&[f64], f64, &[f64]) -> Result<f64>;
type GradientFn = fn(&[f64], f64, &[f64]) -> Result<Vec<f64>>;

/// One named reference case: the problem pair it solves, its closed
/// forms, and where they are valid. The value and gradient callables
/// reject queries outside the validity region.
pub struct OracleCase {
    pub name: &'static str,
    pub initial: InitialDataSpec,
    /// `None` for the inward-motion fixtures, whose Hamiltonians are
    /// nonconvex and never enter the solver.
    pub hamiltonian: Option<HamiltonianSpec>,
    pub semi_axes: Vec<f64>,
    pub value: ValueFn,
    pub gradient: Option<GradientFn>,
    pub validity: &'static str,
}

/// The worked reference cases for a given set of semi-axes.
pub fn standard_cases(semi_axes: &[f64]) -> Vec<OracleCase> {
    let level = InitialDataSpec::EllipsoidLevel {
        semi_axes: semi_axes.to_vec(),
    };
    let isotropic = semi_axes.iter().all(|&a| a == 1.0);
    let mut cases = vec![
        OracleCase {
            name: "ellipsoid_l1",
            initial: level.clone(),
            hamiltonian: Some(HamiltonianSpec::L1),
            semi_axes: semi_axes.to_vec(),
            value: |x, t, a| ellipsoid_l1(x, t, a).map(|(v, _)| v),
            gradient: Some(|x, t, a| ellipsoid_l1(x, t, a).map(|(_, g)| g)),
            validity: "all x, t ≥ 0",
        },
        OracleCase {
            name: "ellipsoid_l1_inward",
            initial: level.clone(),
            hamiltonian: None,
            semi_axes: semi_axes.to_vec(),
            value: |x, t, a| ellipsoid_l1_inward(x, t, a),
            gradient: None,
            validity: "all x, t ≥ 0 (zero set gone once t ≥ max aᵢ)",
        },
    ];
    if isotropic {
        cases.push(OracleCase {
            name: "sphere_l2_outward",
            initial: level.clone(),
            hamiltonian: Some(HamiltonianSpec::L2),
            semi_axes: semi_axes.to_vec(),
            value: |x, t, _| sphere_l2_outward(x, t),
            gradient: None,
            validity: "all x, t ≥ 0",
        });
        cases.push(OracleCase {
            name: "sphere_l2_inward",
            initial: level,
            hamiltonian: None,
            semi_axes: semi_axes.to_vec(),
            value: |x, t, _| sphere_l2_inward(x, t),
            gradient: None,
            validity: "all x, t ≥ 0 (zero set gone once t > 1)",
        });
    }
    cases
}

/// Brute-force minimization output: the Hopf value (minus the grid
/// minimum) and the approximate minimizer.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub value: f64,
    pub minimizer: Vec<f64>,
}

/// Exhaustive minimization of the Hopf objective over a cubic grid of
/// half-width `grid_radius` and spacing `grid_step`, followed by two
/// refinement passes around the incumbent and a full-stencil compass
/// polish. Restricted to `n ≤ 3`.
///
/// The lattice is anchored at the origin (grid points are integer
/// multiples of the step) so that the `vᵢ = 0` kinks of ℓ1-type
/// Hamiltonians are sampled exactly; the polish stage descends along
/// all `3ⁿ − 1` signed directions with a halving step, which also
/// resolves the tie manifolds (`|vᵢ| = |vⱼ|`) of ℓ∞-type Hamiltonians
/// where axis-aligned grids stall at first-order accuracy.
///
/// A `MinOf` Hamiltonian is handled directly (its value is the member
/// minimum inside the objective); `MinOf` initial data is rejected, as
/// everywhere a conjugate is required.
pub fn brute_force_hopf(
    x: &[f64],
    t: f64,
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
    grid_radius: f64,
    grid_step: f64,
) -> Result<BruteForceResult> {
    if x.len() > 3 {
        return Err(Error::InvalidInput(format!(
            "brute force is restricted to n ≤ 3, got n = {}",
            x.len()
        )));
    }
    if !(grid_radius > 0.0) || !(grid_step > 0.0) || grid_step > grid_radius {
        return Err(Error::InvalidInput(
            "grid radius and step must be positive with step ≤ radius".into(),
        ));
    }
    let n = x.len();

    // Scan the origin-anchored lattice of spacing `step` inside the box
    // [center − radius, center + radius]ⁿ.
    let scan = |center: &[f64], radius: f64, step: f64| -> Result<(Vec<f64>, f64, bool)> {
        let lo: Vec<i64> = center
            .iter()
            .map(|c| ((c - radius) / step).ceil() as i64)
            .collect();
        let hi: Vec<i64> = center
            .iter()
            .map(|c| ((c + radius) / step).floor() as i64)
            .collect();
        let mut idx = lo.clone();
        let mut best = f64::INFINITY;
        let mut best_pt = center.to_vec();
        let mut best_edge = false;
        let mut v = vec![0.0; n];
        'outer: loop {
            let mut on_edge = false;
            for i in 0..n {
                v[i] = step * idx[i] as f64;
                on_edge |= idx[i] == lo[i] || idx[i] == hi[i];
            }
            let obj = hopf_objective(&v, x, t, h, j)?;
            if obj < best {
                best = obj;
                best_pt = v.clone();
                best_edge = on_edge;
            }
            for i in 0..n {
                idx[i] += 1;
                if idx[i] <= hi[i] {
                    continue 'outer;
                }
                idx[i] = lo[i];
            }
            break;
        }
        Ok((best_pt, best, best_edge))
    };

    let (mut center, mut best, on_edge) = scan(&vec![0.0; n], grid_radius, grid_step)?;
    if on_edge {
        return Err(Error::InvalidInput(
            "brute-force grid too coarse to bracket the minimizer (incumbent on boundary)"
                .into(),
        ));
    }
    let mut step = grid_step;
    for _ in 0..2 {
        let radius = 2.0 * step;
        step /= 10.0;
        let (c, b, _) = scan(&center, radius, step)?;
        center = c;
        best = b;
    }

    // Compass polish over every signed direction in {−1, 0, 1}ⁿ.
    let mut directions = Vec::new();
    let mut d = vec![-1i32; n];
    'dirs: loop {
        if d.iter().any(|&c| c != 0) {
            directions.push(d.clone());
        }
        for i in 0..n {
            d[i] += 1;
            if d[i] <= 1 {
                continue 'dirs;
            }
            d[i] = -1;
        }
        break;
    }
    let scale = 1.0 + linalg::norm2(&center);
    while step > 1e-9 * scale {
        let mut moved = true;
        while moved {
            moved = false;
            for dir in &directions {
                let probe: Vec<f64> = center
                    .iter()
                    .zip(dir)
                    .map(|(c, &s)| c + step * s as f64)
                    .collect();
                let obj = hopf_objective(&probe, x, t, h, j)?;
                if obj < best {
                    best = obj;
                    center = probe;
                    moved = true;
                }
            }
        }
        step *= 0.5;
    }

    Ok(BruteForceResult {
        value: -best,
        minimizer: center,
    })
}
