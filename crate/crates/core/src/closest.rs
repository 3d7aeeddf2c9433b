//! Euclidean closest-point and distance queries against compact convex
//! sets (and finite unions) via level-set evolution.
//!
//! The front of a shape `Ω` evolved under the eikonal equation
//! (`H = ‖·‖₂`, initial data a level function `L` of `Ω`) reaches a
//! point `y` at exactly its Euclidean distance `s̄` from `Ω`. Newton in
//! `s` finds the crossing time of `ψ(y, ·)`, using the exact identity
//! `∂ψ/∂t = −‖∇ₓψ‖₂`; the projection is then
//! `π_Ω(y) = y − s̄·∇ₓψ/‖∇ₓψ‖₂`.
//!
//! The initial data `L` is chosen per shape family so that one side of
//! the conjugate pair `(L, L*)` is twice differentiable with a usable
//! Hessian: quadratics are exact, `p ≥ 2` balls use the primal side,
//! `1 < p < 2` balls the dual side, quad-over-norm sets the primal side.

use crate::error::{Error, Result};
use crate::linalg::{self, OrthogonalMatrix};
use crate::problem::{local_frame, ConvexShape, HamiltonianSpec, SpectralMatrix};
use crate::prox::{invert_gradient, prox_smooth_newton, SmoothConvex};
use crate::solver::{run_split_bregman, ConjugateSide, Evaluation, ProxOutcome, SolverConfig};

/// Which side of the conjugate pair carries the smooth callable bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Primal,
    Dual,
}

/// `coeff·‖y‖_p^s + offset` with explicit gradient and Hessian.
#[derive(Debug, Clone)]
struct PowerOfNorm {
    p: f64,
    s: f64,
    coeff: f64,
    offset: f64,
}

impl PowerOfNorm {
    fn signed_powers(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = linalg::norm_p(x, self.p);
        let phi = x
            .iter()
            .map(|&v| v.abs().powf(self.p - 1.0) * v.signum())
            .collect();
        (n, phi)
    }
}

impl SmoothConvex for PowerOfNorm {
    fn value(&self, x: &[f64]) -> f64 {
        self.coeff * linalg::norm_p(x, self.p).powf(self.s) + self.offset
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let (n, phi) = self.signed_powers(x);
        if n == 0.0 {
            return vec![0.0; x.len()];
        }
        let scale = self.coeff * self.s * n.powf(self.s - self.p);
        phi.into_iter().map(|f| scale * f).collect()
    }

    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let dim = x.len();
        let (n, phi) = self.signed_powers(x);
        let mut h = vec![0.0; dim * dim];
        if n == 0.0 {
            return h;
        }
        let outer = self.coeff * self.s * (self.s - self.p) * n.powf(self.s - 2.0 * self.p);
        let diag = self.coeff * self.s * (self.p - 1.0) * n.powf(self.s - self.p);
        for i in 0..dim {
            for j in 0..dim {
                h[i * dim + j] = outer * phi[i] * phi[j];
            }
            h[i * dim + i] += diag * x[i].abs().powf(self.p - 2.0);
        }
        h
    }
}

/// Level function of the quad-over-norm set,
/// `L(x) = (1/2m)((⟨x,Ax⟩/‖x‖₂)^{2m} − 1)`.
#[derive(Debug, Clone)]
struct QuadOverNormLevel {
    spectral: SpectralMatrix,
    m: f64,
}

impl QuadOverNormLevel {
    fn gauge_and_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = linalg::norm2(x);
        let ax = self.spectral.apply(x);
        let q = linalg::dot(x, &ax);
        let g = q / n;
        let grad = x
            .iter()
            .zip(&ax)
            .map(|(&xi, &axi)| 2.0 * axi / n - q * xi / (n * n * n))
            .collect();
        (g, grad)
    }
}

impl SmoothConvex for QuadOverNormLevel {
    fn value(&self, x: &[f64]) -> f64 {
        let n = linalg::norm2(x);
        if n < 1e-12 {
            return -1.0 / (2.0 * self.m);
        }
        let g = self.spectral.quadratic_form(x) / n;
        (g.powf(2.0 * self.m) - 1.0) / (2.0 * self.m)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        if linalg::norm2(x) < 1e-12 {
            return vec![0.0; x.len()];
        }
        let (g, dg) = self.gauge_and_grad(x);
        let scale = g.powf(2.0 * self.m - 1.0);
        dg.into_iter().map(|v| scale * v).collect()
    }

    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let dim = x.len();
        let mut h = vec![0.0; dim * dim];
        let n = linalg::norm2(x);
        if n < 1e-12 {
            return h;
        }
        let (g, dg) = self.gauge_and_grad(x);
        let ax = self.spectral.apply(x);
        let q = linalg::dot(x, &ax);
        let n3 = n * n * n;
        let n5 = n3 * n * n;
        let c_outer = (2.0 * self.m - 1.0) * g.powf(2.0 * self.m - 2.0);
        let c_inner = g.powf(2.0 * self.m - 1.0);
        for i in 0..dim {
            for j in 0..dim {
                let hess_g = 2.0 * self.spectral.entry(i, j) / n
                    - 2.0 * (ax[i] * x[j] + x[i] * ax[j]) / n3
                    - if i == j { q / n3 } else { 0.0 }
                    + 3.0 * q * x[i] * x[j] / n5;
                h[i * dim + j] = c_outer * dg[i] * dg[j] + c_inner * hess_g;
            }
        }
        h
    }
}

#[derive(Debug, Clone)]
enum Family {
    /// Isotropic quadratic `L = ½((‖y‖₂/r)² − 1)`: closed prox and
    /// conjugate, any dimension.
    Ball { radius: f64 },
    /// Quadratic ellipsoid level `L = ½(Σ((Pᵀy)ᵢ/dᵢ)² − 1)`.
    Quadratic {
        semi_axes: Vec<f64>,
        factor: Option<OrthogonalMatrix>,
    },
    /// Smooth `L` for `p ≥ 2` balls; prox of `L*` comes through the
    /// Moreau identity, the conjugate value through the dual-norm
    /// closed form.
    PNormPrimal { smooth: PowerOfNorm, conj: PowerOfNorm },
    /// Smooth `L*` for `1 < p < 2` balls; both prox and conjugate value
    /// act directly on `L*`, while `L` keeps its own closed form.
    PNormDual { level: PowerOfNorm, smooth: PowerOfNorm },
    /// Smooth `L` for quad-over-norm sets; the conjugate value has no
    /// closed form and is recovered by inverting `∇L`.
    QuadOverNorm { smooth: QuadOverNormLevel },
}

/// Initial data for the eikonal evolution of one convex shape: the level
/// function `L`, its conjugate, and the smooth callable bundle the inner
/// Newton solves use.
#[derive(Debug, Clone)]
pub struct LevelSetData {
    family: Family,
    side: Side,
    exponent: f64,
    center: Option<Vec<f64>>,
}

impl LevelSetData {
    /// Build the level-set data with the per-family default exponent:
    /// quadratic (`m = 1`) for ellipsoids and `p = 2` balls, `m = 2` for
    /// `p > 2` balls and quad-over-norm sets, `m = 0.75` for
    /// `1 < p < 2` balls.
    pub fn for_shape(shape: &ConvexShape) -> Result<Self> {
        Self::build(shape, None)
    }

    /// Same, but with an explicit exponent `m` for the p-norm families
    /// (`m ≥ 1` primal, `½ < m ≤ 1` dual).
    pub fn with_exponent(shape: &ConvexShape, m: f64) -> Result<Self> {
        Self::build(shape, Some(m))
    }

    fn build(shape: &ConvexShape, m: Option<f64>) -> Result<Self> {
        shape.validate()?;
        let center = shape.center().map(|c| c.to_vec());
        match shape {
            ConvexShape::PNormBall { p, radius, .. } => {
                let p = *p;
                let r = *radius;
                if p >= 2.0 {
                    let m = m.unwrap_or(if p == 2.0 { 1.0 } else { 2.0 });
                    if !(m >= 1.0) {
                        return Err(Error::InvalidSpec(format!(
                            "primal-side exponent must satisfy m ≥ 1, got {m}"
                        )));
                    }
                    if p == 2.0 && m == 1.0 {
                        return Ok(Self {
                            family: Family::Ball { radius: r },
                            side: Side::Primal,
                            exponent: 1.0,
                            center,
                        });
                    }
                    let smooth = PowerOfNorm {
                        p,
                        s: 2.0 * m,
                        coeff: r.powf(-2.0 * m) / (2.0 * m),
                        offset: -1.0 / (2.0 * m),
                    };
                    let q = p / (p - 1.0);
                    let s_dual = 2.0 * m / (2.0 * m - 1.0);
                    let conj = PowerOfNorm {
                        p: q,
                        s: s_dual,
                        coeff: (2.0 * m - 1.0) / (2.0 * m) * r.powf(s_dual),
                        offset: 1.0 / (2.0 * m),
                    };
                    Ok(Self {
                        family: Family::PNormPrimal { smooth, conj },
                        side: Side::Primal,
                        exponent: m,
                        center,
                    })
                } else {
                    let m = m.unwrap_or(0.75);
                    if !(m > 0.5 && m <= 1.0) {
                        return Err(Error::InvalidSpec(format!(
                            "dual-side exponent must satisfy ½ < m ≤ 1, got {m}"
                        )));
                    }
                    let level = PowerOfNorm {
                        p,
                        s: 2.0 * m,
                        coeff: r.powf(-2.0 * m) / (2.0 * m),
                        offset: -1.0 / (2.0 * m),
                    };
                    let q = p / (p - 1.0);
                    let s_dual = 2.0 * m / (2.0 * m - 1.0);
                    let smooth = PowerOfNorm {
                        p: q,
                        s: s_dual,
                        coeff: (2.0 * m - 1.0) / (2.0 * m) * r.powf(s_dual),
                        offset: 1.0 / (2.0 * m),
                    };
                    Ok(Self {
                        family: Family::PNormDual { level, smooth },
                        side: Side::Dual,
                        exponent: m,
                        center,
                    })
                }
            }
            ConvexShape::Ellipsoid {
                semi_axes, factor, ..
            } => Ok(Self {
                family: Family::Quadratic {
                    semi_axes: semi_axes.clone(),
                    factor: factor.clone(),
                },
                side: Side::Primal,
                exponent: 1.0,
                center,
            }),
            ConvexShape::QuadOverNorm {
                spectral, exponent, ..
            } => {
                let m = m.unwrap_or(*exponent);
                if !(m >= 2.0) {
                    return Err(Error::InvalidSpec(format!(
                        "quad-over-norm exponent must satisfy m ≥ 2, got {m}"
                    )));
                }
                Ok(Self {
                    family: Family::QuadOverNorm {
                        smooth: QuadOverNormLevel {
                            spectral: spectral.clone(),
                            m,
                        },
                    },
                    side: Side::Primal,
                    exponent: m,
                    center,
                })
            }
            ConvexShape::UnionOf(_) => Err(Error::InvalidSpec(
                "level-set data is built per union member".into(),
            )),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn center(&self) -> Option<&[f64]> {
        self.center.as_deref()
    }

    /// Dimension pinned by the shape data, if any.
    pub fn dim(&self) -> Option<usize> {
        if let Some(c) = &self.center {
            return Some(c.len());
        }
        match &self.family {
            Family::Quadratic { semi_axes, .. } => Some(semi_axes.len()),
            Family::QuadOverNorm { smooth } => Some(smooth.spectral.dim()),
            _ => None,
        }
    }

    fn check_query(&self, y: &[f64]) -> Result<()> {
        if let Some(d) = self.dim() {
            if y.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: y.len(),
                });
            }
        }
        Ok(())
    }

    /// `L(y)` in the local frame: negative inside the shape, zero on its
    /// boundary, positive outside.
    pub fn level_value(&self, local: &[f64]) -> f64 {
        match &self.family {
            Family::Ball { radius } => {
                0.5 * (linalg::dot(local, local) / (radius * radius) - 1.0)
            }
            Family::Quadratic { semi_axes, factor } => {
                let r = match factor {
                    Some(p) => p.apply_transpose(local),
                    None => local.to_vec(),
                };
                0.5 * (r
                    .iter()
                    .zip(semi_axes)
                    .map(|(ri, d)| (ri / d) * (ri / d))
                    .sum::<f64>()
                    - 1.0)
            }
            Family::PNormPrimal { smooth, .. } => smooth.value(local),
            Family::PNormDual { level, .. } => level.value(local),
            Family::QuadOverNorm { smooth } => smooth.value(local),
        }
    }

    /// `∇L(y)` in the local frame (closed form, used only to seed the
    /// crossing-time search).
    pub fn level_gradient(&self, local: &[f64]) -> Vec<f64> {
        match &self.family {
            Family::Ball { radius } => {
                local.iter().map(|&v| v / (radius * radius)).collect()
            }
            Family::Quadratic { semi_axes, factor } => {
                let r = match factor {
                    Some(p) => p.apply_transpose(local),
                    None => local.to_vec(),
                };
                let scaled: Vec<f64> =
                    r.iter().zip(semi_axes).map(|(ri, d)| ri / (d * d)).collect();
                match factor {
                    Some(p) => p.apply(&scaled),
                    None => scaled,
                }
            }
            Family::PNormPrimal { smooth, .. } => smooth.gradient(local),
            Family::PNormDual { level, .. } => level.gradient(local),
            Family::QuadOverNorm { smooth } => smooth.gradient(local),
        }
    }
}

/// Moreau route for a smooth primal level function:
/// `prox_{α∂L*}(z) = z − α·prox_{(1/α)∂L}(z/α)`. The inner point `w`
/// satisfies `∇L(w) = z − αw`, i.e. it is the gradient-inverse of the
/// returned point, so it is handed back as the hint for conjugate
/// evaluations.
fn moreau_prox_from_primal<F: SmoothConvex + ?Sized>(
    smooth: &F,
    z: &[f64],
    alpha: f64,
) -> Result<ProxOutcome> {
    let scaled: Vec<f64> = z.iter().map(|&v| v / alpha).collect();
    let inner = prox_smooth_newton(smooth, &scaled, 1.0 / alpha)?;
    let point: Vec<f64> = z
        .iter()
        .zip(&inner.point)
        .map(|(zi, wi)| zi - alpha * wi)
        .collect();
    Ok(ProxOutcome {
        point,
        aux: Some(inner.point),
    })
}

impl ConjugateSide for LevelSetData {
    fn prox_conjugate(&self, z: &[f64], alpha: f64) -> Result<ProxOutcome> {
        match &self.family {
            Family::Ball { radius } => Ok(ProxOutcome::plain(
                z.iter()
                    .map(|&v| v / (1.0 + alpha * radius * radius))
                    .collect(),
            )),
            Family::Quadratic { semi_axes, factor } => {
                let weights: Vec<f64> = semi_axes.iter().map(|d| d * d).collect();
                Ok(ProxOutcome::plain(crate::prox::prox_quadratic(
                    z,
                    alpha,
                    &weights,
                    factor.as_ref(),
                )))
            }
            Family::PNormDual { smooth, .. } => Ok(ProxOutcome::plain(
                prox_smooth_newton(smooth, z, alpha)?.point,
            )),
            Family::PNormPrimal { smooth, .. } => moreau_prox_from_primal(smooth, z, alpha),
            Family::QuadOverNorm { smooth } => moreau_prox_from_primal(smooth, z, alpha),
        }
    }

    fn conjugate_value(&self, v: &[f64], hint: Option<&[f64]>) -> Result<f64> {
        match &self.family {
            Family::Ball { radius } => {
                Ok(0.5 * radius * radius * linalg::dot(v, v) + 0.5)
            }
            Family::Quadratic { semi_axes, factor } => {
                let r = match factor {
                    Some(p) => p.apply_transpose(v),
                    None => v.to_vec(),
                };
                Ok(0.5
                    * r.iter()
                        .zip(semi_axes)
                        .map(|(ri, d)| d * d * ri * ri)
                        .sum::<f64>()
                    + 0.5)
            }
            Family::PNormPrimal { conj, .. } => Ok(conj.value(v)),
            Family::PNormDual { smooth, .. } => Ok(smooth.value(v)),
            Family::QuadOverNorm { smooth } => {
                if v.iter().all(|&vi| vi == 0.0) {
                    // L*(0) = −inf L = 1/(2m)
                    return Ok(1.0 / (2.0 * smooth.m));
                }
                let x_bar = invert_gradient(smooth, v, hint)?;
                Ok(linalg::dot(v, &x_bar) - smooth.value(&x_bar))
            }
        }
    }
}

/// Closest-point query result.
#[derive(Debug, Clone)]
pub struct ClosestPointResult {
    /// Euclidean distance `s̄` from the query to the shape.
    pub distance: f64,
    /// The projection `π_Ω(y)` on the shape boundary.
    pub point: Vec<f64>,
    /// `∇ₓψ(y, s̄)` of the level-set solution at the crossing time.
    pub gradient_at_root: Vec<f64>,
    /// Crossing-time Newton iterations (outer root-finding steps).
    pub newton_iters: usize,
    /// Which union member produced the result, when relevant.
    pub branch: Option<usize>,
    /// Two or more members were equidistant within `1e-9` relative.
    pub tie: bool,
}

/// `ψ(y, s)` for the eikonal evolution of the given level-set data:
/// a split Bregman solve with `H = ‖·‖₂`, whose radial-shrink prox is
/// explicit, and the prox of `L*` on the other side.
pub fn eikonal_value(
    y: &[f64],
    s: f64,
    level: &LevelSetData,
    cfg: &SolverConfig,
) -> Result<Evaluation> {
    level.check_query(y)?;
    let local = local_frame(y, level.center());
    run_split_bregman(&local, s, level, &HamiltonianSpec::L2, cfg)
}

const BOUNDARY_TOL: f64 = 1e-6;
const CROSSING_TARGET: f64 = 1e-10;
const MAX_CROSSING_ITERS: usize = 100;
const MAX_BRACKET_GROWTH: usize = 60;

struct Crossing {
    time: f64,
    eval: Evaluation,
    iters: usize,
}

fn find_crossing(y: &[f64], level: &LevelSetData, cfg: &SolverConfig) -> Result<Crossing> {
    level.check_query(y)?;
    let local = local_frame(y, level.center());
    let l0 = level.level_value(&local);
    if l0 <= 0.0 {
        return Err(Error::InteriorQuery);
    }

    // First-order distance estimate, clipped to a sane range.
    let g0 = linalg::norm2(&level.level_gradient(&local));
    let circum = match &level.family {
        Family::Ball { radius } => *radius,
        Family::Quadratic { semi_axes, .. } => semi_axes.iter().cloned().fold(0.0, f64::max),
        Family::PNormPrimal { smooth, .. } => {
            // coeff = r^{-2m}/(2m): recover r
            let m = level.exponent;
            let r = (smooth.coeff * 2.0 * m).powf(-1.0 / (2.0 * m));
            r * (local.len() as f64).powf(0.5 - 1.0 / smooth.p)
        }
        Family::PNormDual { level: l, .. } => {
            let m = level.exponent;
            (l.coeff * 2.0 * m).powf(-1.0 / (2.0 * m))
        }
        Family::QuadOverNorm { smooth } => 1.0 / smooth.spectral.min_eigenvalue(),
    };
    let s0 = if g0 > 0.0 { l0 / g0 } else { 1.0 }
        .clamp(1e-3, linalg::norm2(&local) + circum);

    // Evaluations warm-start from the previous solve's terminal state;
    // the problems are convex, so this only saves iterations.
    let mut warm: Option<crate::solver::WarmStart> = None;
    let psi = |s: f64, warm: &mut Option<crate::solver::WarmStart>| -> Result<Evaluation> {
        let mut c = cfg.clone();
        c.warm_start = warm.clone();
        let (e, state) =
            crate::solver::run_split_bregman_with_state(&local, s, level, &HamiltonianSpec::L2, &c)?;
        *warm = Some(state);
        Ok(e)
    };

    // Bracket the crossing: ψ(y, ·) decreases in s, positive before the
    // front arrives and negative after. s = 0 is always a valid lower
    // endpoint (ψ → L(y) > 0 there), so only geometric growth toward a
    // negative value is ever needed.
    let mut lo = 0.0;
    let mut s_cur = s0;
    let mut e_cur = psi(s_cur, &mut warm)?;
    let mut grew = 0;
    while e_cur.value > 0.0 {
        lo = s_cur;
        if grew >= MAX_BRACKET_GROWTH {
            return Err(Error::BracketFailed(grew));
        }
        grew += 1;
        s_cur *= 2.0;
        e_cur = psi(s_cur, &mut warm)?;
    }
    let mut hi = s_cur;

    let mut best_s = s_cur;
    let mut best_e = e_cur;
    let mut iters = 0;
    while iters < MAX_CROSSING_ITERS {
        if best_e.value.abs() <= CROSSING_TARGET {
            break;
        }
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
        iters += 1;
        // Newton step with the exact time derivative ∂ψ/∂t = −‖∇ₓψ‖₂;
        // outside the bracket (or after a non-improving step) fall back
        // to bisection, which keeps |ψ| nonincreasing from then on.
        let gnorm = linalg::norm2(&best_e.gradient);
        let mut s_next = if gnorm > 0.0 {
            best_s + best_e.value / gnorm
        } else {
            0.5 * (lo + hi)
        };
        if !(s_next > lo && s_next < hi) {
            s_next = 0.5 * (lo + hi);
        }
        let mut e_next = psi(s_next, &mut warm)?;
        if e_next.value.abs() > best_e.value.abs() {
            if e_next.value > 0.0 {
                lo = lo.max(s_next);
            } else {
                hi = hi.min(s_next);
            }
            s_next = 0.5 * (lo + hi);
            e_next = psi(s_next, &mut warm)?;
        }
        if e_next.value > 0.0 {
            lo = lo.max(s_next);
        } else {
            hi = hi.min(s_next);
        }
        if e_next.value.abs() <= best_e.value.abs() {
            best_s = s_next;
            best_e = e_next;
        }
    }

    if best_e.value.abs() > BOUNDARY_TOL {
        return Err(Error::NewtonDiverged {
            what: "front-crossing time",
            iters,
        });
    }
    Ok(Crossing {
        time: best_s,
        eval: best_e,
        iters,
    })
}

/// Crossing time `s̄` with `|ψ(y, s̄)| ≤ 1e-6`: the Euclidean distance
/// from the strictly exterior query `y` to the shape described by
/// `level`.
pub fn find_boundary_time(y: &[f64], level: &LevelSetData, cfg: &SolverConfig) -> Result<f64> {
    Ok(find_crossing(y, level, cfg)?.time)
}

/// Closest point on a compact convex shape from a strictly exterior
/// query. Unions are delegated to [`closest_union`].
pub fn closest(y: &[f64], shape: &ConvexShape, cfg: &SolverConfig) -> Result<ClosestPointResult> {
    if let ConvexShape::UnionOf(members) = shape {
        return closest_union(y, members, cfg);
    }
    let level = LevelSetData::for_shape(shape)?;
    let crossing = find_crossing(y, &level, cfg)?;
    let grad = crossing.eval.gradient;
    let gnorm = linalg::norm2(&grad);
    let point = y
        .iter()
        .zip(&grad)
        .map(|(yi, gi)| yi - crossing.time * gi / gnorm)
        .collect();
    Ok(ClosestPointResult {
        distance: crossing.time,
        point,
        gradient_at_root: grad,
        newton_iters: crossing.iters,
        branch: None,
        tie: false,
    })
}

/// Closest point on a finite union of convex shapes: solve per member
/// and keep the smallest distance. The query must be exterior to every
/// member (distance semantics for points inside some members are not
/// defined here). Ties go to the lowest index and are flagged.
pub fn closest_union(
    y: &[f64],
    members: &[ConvexShape],
    cfg: &SolverConfig,
) -> Result<ClosestPointResult> {
    if members.is_empty() {
        return Err(Error::InvalidSpec("union of shapes is empty".into()));
    }
    for m in members {
        if m.boundary_excess(y)? <= 0.0 {
            return Err(Error::InteriorQuery);
        }
    }
    let results: Vec<ClosestPointResult> = members
        .iter()
        .map(|m| closest(y, m, cfg))
        .collect::<Result<_>>()?;
    let mut index = 0;
    for (i, r) in results.iter().enumerate() {
        if r.distance < results[index].distance {
            index = i;
        }
    }
    let best_distance = results[index].distance;
    let tie = results.iter().enumerate().any(|(i, r)| {
        i != index && (r.distance - best_distance).abs() <= 1e-9 * (1.0 + best_distance)
    });
    let mut out = results.into_iter().nth(index).unwrap();
    out.branch = Some(index);
    out.tie = tie;
    Ok(out)
}

/// `φ(y, t)` for `H = ‖·‖₁` with the shape's level function as initial
/// data: the sign classifies `y` against the Manhattan-distance-`t`
/// neighborhood of the shape. Union shapes take the member minimum
/// (their level function is the pointwise minimum).
pub fn distance_field_manhattan(
    y: &[f64],
    shape: &ConvexShape,
    t: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    if let ConvexShape::UnionOf(members) = shape {
        let mut best = f64::INFINITY;
        for m in members {
            best = best.min(distance_field_manhattan(y, m, t, cfg)?);
        }
        return Ok(best);
    }
    let level = LevelSetData::for_shape(shape)?;
    let local = local_frame(y, level.center());
    if t == 0.0 {
        return Ok(level.level_value(&local));
    }
    let e = run_split_bregman(&local, t, &level, &HamiltonianSpec::L1, cfg)?;
    Ok(e.value)
}
