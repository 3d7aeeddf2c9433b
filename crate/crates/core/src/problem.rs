//! Declarative descriptions of Hamiltonians, initial data and convex
//! shapes, with pointwise evaluation of `H`, `∇H`, `J` and the
//! Fenchel-Legendre conjugate `J*`.
//!
//! Every value here is immutable after construction and every operation
//! is pure, so specs can be shared freely across worker threads.

use crate::error::{Error, Result};
use crate::linalg::{self, OrthogonalMatrix};

/// Symmetric positive definite matrix stored by its spectral
/// decomposition `A = P diag(w) Pᵀ`.
///
/// Storing the decomposition rather than the raw matrix is deliberate:
/// the quadratic prox and the ellipsoid projection both consume the
/// eigenbasis directly. A raw matrix can be ingested once via
/// [`SpectralMatrix::from_dense`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    eigenvalues: Vec<f64>,
    factor: Option<OrthogonalMatrix>,
}

impl SpectralMatrix {
    /// Diagonal matrix: eigenbasis is the standard basis.
    pub fn diagonal(eigenvalues: Vec<f64>) -> Result<Self> {
        Self::new(eigenvalues, None)
    }

    pub fn new(eigenvalues: Vec<f64>, factor: Option<OrthogonalMatrix>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidSpec("spectral data is empty".into()));
        }
        if let Some(&bad) = eigenvalues.iter().find(|&&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "eigenvalue {bad} is not strictly positive"
            )));
        }
        if let Some(p) = &factor {
            if p.dim() != eigenvalues.len() {
                return Err(Error::DimensionMismatch {
                    expected: eigenvalues.len(),
                    actual: p.dim(),
                });
            }
        }
        let m = Self {
            eigenvalues,
            factor,
        };
        // The reconstruction P diag(w) Pᵀ must be symmetric; with a valid
        // orthogonal factor this only fails on pathological roundoff.
        let n = m.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let aij = m.entry(i, j);
                let aji = m.entry(j, i);
                if (aij - aji).abs() > 1e-10 {
                    return Err(Error::InvalidSpec(format!(
                        "reconstructed matrix is asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Ingest a raw dense symmetric matrix (row-major), performing the
    /// eigendecomposition once.
    pub fn from_dense(a: &[f64], n: usize) -> Result<Self> {
        let (w, p) = linalg::jacobi_eigh(a, n)?;
        Self::new(w, Some(p))
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn factor(&self) -> Option<&OrthogonalMatrix> {
        self.factor.as_ref()
    }

    /// Entry `A[i,j]` of the reconstructed matrix.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match &self.factor {
            None => {
                if i == j {
                    self.eigenvalues[i]
                } else {
                    0.0
                }
            }
            Some(p) => (0..self.dim())
                .map(|k| p.entry(i, k) * self.eigenvalues[k] * p.entry(j, k))
                .sum(),
        }
    }

    /// `Pᵀ x`
    pub fn to_eigenbasis(&self, x: &[f64]) -> Vec<f64> {
        match &self.factor {
            None => x.to_vec(),
            Some(p) => p.apply_transpose(x),
        }
    }

    /// `P y`
    pub fn from_eigenbasis(&self, y: &[f64]) -> Vec<f64> {
        match &self.factor {
            None => y.to_vec(),
            Some(p) => p.apply(y),
        }
    }

    /// `A x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.to_eigenbasis(x);
        for (yi, w) in y.iter_mut().zip(&self.eigenvalues) {
            *yi *= w;
        }
        self.from_eigenbasis(&y)
    }

    /// `⟨x, A x⟩`
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let y = self.to_eigenbasis(x);
        y.iter()
            .zip(&self.eigenvalues)
            .map(|(yi, w)| w * yi * yi)
            .sum()
    }

    /// `⟨x, A⁻¹ x⟩`
    pub fn inverse_quadratic_form(&self, x: &[f64]) -> f64 {
        let y = self.to_eigenbasis(x);
        y.iter()
            .zip(&self.eigenvalues)
            .map(|(yi, w)| yi * yi / w)
            .sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(0.0, f64::max)
    }
}

/// Convex, positively 1-homogeneous Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSpec {
    /// `H(p) = ‖p‖₁`
    L1,
    /// `H(p) = ‖p‖₂`
    L2,
    /// `H(p) = ‖p‖∞`
    Linf,
    /// `H(p) = √⟨p, A p⟩` for symmetric positive definite `A`.
    NormA(SpectralMatrix),
    /// Pointwise minimum of convex members. Not convex itself; the solver
    /// handles it by solving per member and taking the pointwise maximum
    /// of the solutions.
    MinOf(Vec<HamiltonianSpec>),
}

impl HamiltonianSpec {
    /// A `MinOf` list must be nonempty and must not nest.
    pub fn min_of(members: Vec<HamiltonianSpec>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidSpec("MinOf Hamiltonian list is empty".into()));
        }
        if members.iter().any(|m| matches!(m, HamiltonianSpec::MinOf(_))) {
            return Err(Error::InvalidSpec(
                "MinOf Hamiltonians cannot be nested".into(),
            ));
        }
        Ok(HamiltonianSpec::MinOf(members))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            HamiltonianSpec::MinOf(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidSpec("MinOf Hamiltonian list is empty".into()));
                }
                for m in members {
                    if matches!(m, HamiltonianSpec::MinOf(_)) {
                        return Err(Error::InvalidSpec(
                            "MinOf Hamiltonians cannot be nested".into(),
                        ));
                    }
                    m.validate()?;
                }
                check_consistent_dims(members.iter().map(|m| m.dim()))
            }
            _ => Ok(()),
        }
    }

    /// Dimension pinned by the spec, if any; the plain norms accept any
    /// dimension.
    pub fn dim(&self) -> Option<usize> {
        match self {
            HamiltonianSpec::NormA(a) => Some(a.dim()),
            HamiltonianSpec::MinOf(members) => members.iter().find_map(|m| m.dim()),
            _ => None,
        }
    }

    fn check_dim(&self, p: &[f64]) -> Result<()> {
        if let Some(n) = self.dim() {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: p.len(),
                });
            }
        }
        Ok(())
    }

    /// `H(p)`; for `MinOf` the minimum of the member values.
    pub fn eval(&self, p: &[f64]) -> Result<f64> {
        self.check_dim(p)?;
        Ok(match self {
            HamiltonianSpec::L1 => linalg::norm1(p),
            HamiltonianSpec::L2 => linalg::norm2(p),
            HamiltonianSpec::Linf => linalg::norm_inf(p),
            HamiltonianSpec::NormA(a) => a.quadratic_form(p).sqrt(),
            HamiltonianSpec::MinOf(members) => {
                let mut best = f64::INFINITY;
                for m in members {
                    best = best.min(m.eval(p)?);
                }
                best
            }
        })
    }

    /// `∇H(p)`. Satisfies the Euler identity `⟨p, ∇H(p)⟩ = H(p)`.
    ///
    /// Nondifferentiable points are rejected rather than given an
    /// arbitrary subgradient: a zero component for `L1`, a tie for
    /// `Linf`, the zero vector for any variant, a tied minimum for
    /// `MinOf`.
    pub fn grad(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(p)?;
        if p.iter().all(|&v| v == 0.0) {
            return Err(Error::ZeroGradient);
        }
        match self {
            HamiltonianSpec::L1 => {
                if let Some(i) = p.iter().position(|&v| v == 0.0) {
                    return Err(Error::Nondifferentiable(format!(
                        "‖·‖₁ has a zero component at index {i}"
                    )));
                }
                Ok(p.iter().map(|&v| v.signum()).collect())
            }
            HamiltonianSpec::L2 => {
                let n = linalg::norm2(p);
                Ok(p.iter().map(|&v| v / n).collect())
            }
            HamiltonianSpec::Linf => {
                let m = linalg::norm_inf(p);
                let hits: Vec<usize> = (0..p.len()).filter(|&i| p[i].abs() == m).collect();
                if hits.len() != 1 {
                    return Err(Error::Nondifferentiable(
                        "‖·‖∞ has a tied maximal component".into(),
                    ));
                }
                let mut g = vec![0.0; p.len()];
                g[hits[0]] = p[hits[0]].signum();
                Ok(g)
            }
            HamiltonianSpec::NormA(a) => {
                let h = a.quadratic_form(p).sqrt();
                let mut g = a.apply(p);
                for gi in g.iter_mut() {
                    *gi /= h;
                }
                Ok(g)
            }
            HamiltonianSpec::MinOf(members) => {
                let values: Vec<f64> = members
                    .iter()
                    .map(|m| m.eval(p))
                    .collect::<Result<_>>()?;
                let mut best = 0usize;
                for (i, &v) in values.iter().enumerate() {
                    if v < values[best] {
                        best = i;
                    }
                }
                if values.iter().enumerate().any(|(i, &v)| i != best && v == values[best]) {
                    return Err(Error::Nondifferentiable(
                        "minimum attained by more than one Hamiltonian".into(),
                    ));
                }
                members[best].grad(p)
            }
        }
    }
}

/// Sign of the linear shift in [`InitialDataSpec::ShiftedQuadratic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftSign {
    Plus,
    Minus,
}

impl ShiftSign {
    pub fn factor(self) -> f64 {
        match self {
            ShiftSign::Plus => 1.0,
            ShiftSign::Minus => -1.0,
        }
    }
}

/// Convex initial data `J` with a closed-form conjugate `J*`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDataSpec {
    /// `J = ½‖x‖₂²`, `J* = ½‖v‖₂²`
    HalfSqL2,
    /// `J = ½‖x‖₁²`, `J* = ½‖v‖∞²`
    HalfSqL1,
    /// `J = ½‖x‖∞²`, `J* = ½‖v‖₁²`
    HalfSqLinf,
    /// `J = ½⟨x, D⁻¹x⟩` with `D = diag(diag)`; `J* = ½⟨v, D v⟩`.
    DiagQuadratic { diag: Vec<f64> },
    /// Ellipsoid level function `J = ½(Σ xᵢ²/aᵢ² − 1)`;
    /// `J* = ½ Σ aᵢ²vᵢ² + ½`. The `+½` matters to the Hopf value even
    /// though prox maps never see it.
    EllipsoidLevel { semi_axes: Vec<f64> },
    /// `J = ½‖x‖₂² + σ⟨b, x⟩`; `J* = ½‖v − σb‖₂²`.
    ShiftedQuadratic { shift: Vec<f64>, sign: ShiftSign },
    /// Pointwise minimum of convex members (level function of a union);
    /// handled by the solver's min-plus combinator.
    MinOf(Vec<InitialDataSpec>),
}

impl InitialDataSpec {
    pub fn min_of(members: Vec<InitialDataSpec>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidSpec("MinOf initial-data list is empty".into()));
        }
        if members.iter().any(|m| matches!(m, InitialDataSpec::MinOf(_))) {
            return Err(Error::InvalidSpec(
                "MinOf initial data cannot be nested".into(),
            ));
        }
        Ok(InitialDataSpec::MinOf(members))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InitialDataSpec::DiagQuadratic { diag } => {
                if diag.is_empty() || diag.iter().any(|&d| !(d > 0.0)) {
                    return Err(Error::InvalidSpec(
                        "diagonal quadratic weights must be positive".into(),
                    ));
                }
                Ok(())
            }
            InitialDataSpec::EllipsoidLevel { semi_axes } => {
                if semi_axes.is_empty() || semi_axes.iter().any(|&a| !(a > 0.0)) {
                    return Err(Error::InvalidSpec(
                        "ellipsoid semi-axes must be positive".into(),
                    ));
                }
                Ok(())
            }
            InitialDataSpec::MinOf(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidSpec("MinOf initial-data list is empty".into()));
                }
                for m in members {
                    if matches!(m, InitialDataSpec::MinOf(_)) {
                        return Err(Error::InvalidSpec(
                            "MinOf initial data cannot be nested".into(),
                        ));
                    }
                    m.validate()?;
                }
                check_consistent_dims(members.iter().map(|m| m.dim()))
            }
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            InitialDataSpec::DiagQuadratic { diag } => Some(diag.len()),
            InitialDataSpec::EllipsoidLevel { semi_axes } => Some(semi_axes.len()),
            InitialDataSpec::ShiftedQuadratic { shift, .. } => Some(shift.len()),
            InitialDataSpec::MinOf(members) => members.iter().find_map(|m| m.dim()),
            _ => None,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if let Some(n) = self.dim() {
            if x.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: x.len(),
                });
            }
        }
        Ok(())
    }

    /// `J(x)`; `MinOf` takes the pointwise minimum.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            InitialDataSpec::HalfSqL2 => 0.5 * linalg::dot(x, x),
            InitialDataSpec::HalfSqL1 => {
                let n = linalg::norm1(x);
                0.5 * n * n
            }
            InitialDataSpec::HalfSqLinf => {
                let n = linalg::norm_inf(x);
                0.5 * n * n
            }
            InitialDataSpec::DiagQuadratic { diag } => {
                0.5 * x.iter().zip(diag).map(|(xi, d)| xi * xi / d).sum::<f64>()
            }
            InitialDataSpec::EllipsoidLevel { semi_axes } => {
                0.5 * (x
                    .iter()
                    .zip(semi_axes)
                    .map(|(xi, a)| (xi / a) * (xi / a))
                    .sum::<f64>()
                    - 1.0)
            }
            InitialDataSpec::ShiftedQuadratic { shift, sign } => {
                0.5 * linalg::dot(x, x) + sign.factor() * linalg::dot(shift, x)
            }
            InitialDataSpec::MinOf(members) => {
                let mut best = f64::INFINITY;
                for m in members {
                    best = best.min(m.eval(x)?);
                }
                best
            }
        })
    }

    /// Closed-form conjugate `J*(v)`. Rejected for `MinOf`: the solver
    /// combines per-member solutions instead of conjugating a minimum.
    pub fn conjugate(&self, v: &[f64]) -> Result<f64> {
        self.check_dim(v)?;
        Ok(match self {
            InitialDataSpec::HalfSqL2 => 0.5 * linalg::dot(v, v),
            InitialDataSpec::HalfSqL1 => {
                let n = linalg::norm_inf(v);
                0.5 * n * n
            }
            InitialDataSpec::HalfSqLinf => {
                let n = linalg::norm1(v);
                0.5 * n * n
            }
            InitialDataSpec::DiagQuadratic { diag } => {
                0.5 * v.iter().zip(diag).map(|(vi, d)| d * vi * vi).sum::<f64>()
            }
            InitialDataSpec::EllipsoidLevel { semi_axes } => {
                0.5 * v
                    .iter()
                    .zip(semi_axes)
                    .map(|(vi, a)| a * a * vi * vi)
                    .sum::<f64>()
                    + 0.5
            }
            InitialDataSpec::ShiftedQuadratic { shift, sign } => {
                let s = sign.factor();
                0.5 * v
                    .iter()
                    .zip(shift)
                    .map(|(vi, bi)| (vi - s * bi) * (vi - s * bi))
                    .sum::<f64>()
            }
            InitialDataSpec::MinOf(_) => {
                return Err(Error::MinOfUnsupported {
                    op: "eval_conjugate",
                })
            }
        })
    }
}

/// Compact convex set used by the closest-point engine, described as a
/// Wulff shape. Non-union shapes contain the origin of their local frame
/// in the interior; an optional `center` translates the local frame.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexShape {
    /// `{x : ‖x − c‖_p ≤ radius}` for `p ∈ (1, ∞)`.
    PNormBall {
        p: f64,
        radius: f64,
        center: Option<Vec<f64>>,
    },
    /// `{x : Σ ((Pᵀ(x − c))ᵢ/dᵢ)² ≤ 1}`.
    Ellipsoid {
        semi_axes: Vec<f64>,
        factor: Option<OrthogonalMatrix>,
        center: Option<Vec<f64>>,
    },
    /// `{x : ⟨x − c, A(x − c)⟩ ≤ ‖x − c‖₂}`; convex when the maximal
    /// eigenvalue of `A` is at most twice the minimal one. `exponent` is
    /// the smoothing power `m ≥ 2` of its level function.
    QuadOverNorm {
        spectral: SpectralMatrix,
        exponent: f64,
        center: Option<Vec<f64>>,
    },
    /// Finite union of the above; not convex, handled per member.
    UnionOf(Vec<ConvexShape>),
}

impl ConvexShape {
    pub fn validate(&self) -> Result<()> {
        if let (Some(c), Some(d)) = (self.center(), self.intrinsic_dim()) {
            if c.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: c.len(),
                });
            }
        }
        match self {
            ConvexShape::PNormBall { p, radius, .. } => {
                if !(*p > 1.0) || !p.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "p-norm ball requires p in (1, ∞), got {p}"
                    )));
                }
                if !(*radius > 0.0) {
                    return Err(Error::InvalidSpec("ball radius must be positive".into()));
                }
                Ok(())
            }
            ConvexShape::Ellipsoid { semi_axes, factor, .. } => {
                if semi_axes.is_empty() || semi_axes.iter().any(|&d| !(d > 0.0)) {
                    return Err(Error::InvalidSpec(
                        "ellipsoid semi-axes must be positive".into(),
                    ));
                }
                if let Some(p) = factor {
                    if p.dim() != semi_axes.len() {
                        return Err(Error::DimensionMismatch {
                            expected: semi_axes.len(),
                            actual: p.dim(),
                        });
                    }
                }
                Ok(())
            }
            ConvexShape::QuadOverNorm {
                spectral, exponent, ..
            } => {
                if !(*exponent >= 2.0) {
                    return Err(Error::InvalidSpec(
                        "quad-over-norm exponent must be at least 2".into(),
                    ));
                }
                if spectral.max_eigenvalue() > 2.0 * spectral.min_eigenvalue() {
                    return Err(Error::InvalidSpec(
                        "quad-over-norm set is convex only when the maximal eigenvalue \
                         is at most twice the minimal one"
                            .into(),
                    ));
                }
                Ok(())
            }
            ConvexShape::UnionOf(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidSpec("union of shapes is empty".into()));
                }
                for m in members {
                    if matches!(m, ConvexShape::UnionOf(_)) {
                        return Err(Error::InvalidSpec("unions of shapes cannot nest".into()));
                    }
                    m.validate()?;
                }
                check_consistent_dims(members.iter().map(|m| m.dim()))
            }
        }
    }

    pub fn center(&self) -> Option<&[f64]> {
        match self {
            ConvexShape::PNormBall { center, .. }
            | ConvexShape::Ellipsoid { center, .. }
            | ConvexShape::QuadOverNorm { center, .. } => center.as_deref(),
            ConvexShape::UnionOf(_) => None,
        }
    }

    /// Dimension pinned by the shape's own data (a p-norm ball without a
    /// center accepts any dimension).
    fn intrinsic_dim(&self) -> Option<usize> {
        match self {
            ConvexShape::PNormBall { .. } => None,
            ConvexShape::Ellipsoid { semi_axes, .. } => Some(semi_axes.len()),
            ConvexShape::QuadOverNorm { spectral, .. } => Some(spectral.dim()),
            ConvexShape::UnionOf(members) => members.iter().find_map(|m| m.intrinsic_dim()),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            ConvexShape::PNormBall { center, .. } => center.as_ref().map(|c| c.len()),
            ConvexShape::Ellipsoid { semi_axes, .. } => Some(semi_axes.len()),
            ConvexShape::QuadOverNorm { spectral, .. } => Some(spectral.dim()),
            ConvexShape::UnionOf(members) => members.iter().find_map(|m| m.dim()),
        }
    }

    /// Gauge of the shape minus one, in the local (centered) frame:
    /// negative inside, zero on the boundary, positive outside.
    /// Union shapes take the minimum over members (in global frame).
    pub fn boundary_excess(&self, y: &[f64]) -> Result<f64> {
        match self {
            ConvexShape::PNormBall { p, radius, center } => {
                let local = local_frame(y, center.as_deref());
                Ok(linalg::norm_p(&local, *p) / radius - 1.0)
            }
            ConvexShape::Ellipsoid {
                semi_axes,
                factor,
                center,
            } => {
                let local = local_frame(y, center.as_deref());
                let r = match factor {
                    Some(p) => p.apply_transpose(&local),
                    None => local,
                };
                let q: f64 = r
                    .iter()
                    .zip(semi_axes)
                    .map(|(ri, d)| (ri / d) * (ri / d))
                    .sum();
                Ok(q.sqrt() - 1.0)
            }
            ConvexShape::QuadOverNorm {
                spectral, center, ..
            } => {
                let local = local_frame(y, center.as_deref());
                let n = linalg::norm2(&local);
                if n == 0.0 {
                    return Ok(-1.0);
                }
                Ok(spectral.quadratic_form(&local) / n - 1.0)
            }
            ConvexShape::UnionOf(members) => {
                let mut best = f64::INFINITY;
                for m in members {
                    best = best.min(m.boundary_excess(y)?);
                }
                Ok(best)
            }
        }
    }

    /// Radius of a Euclidean ball (about the local center) that contains
    /// the shape. Used only to clip root-finding initializers.
    pub fn circumradius(&self) -> f64 {
        match self {
            ConvexShape::PNormBall { p, radius, .. } => {
                // For p ≥ 2 the extreme point is the diagonal corner; the
                // dimension is not always pinned, so bound it loosely by
                // treating the gauge comparison in the worst case we see
                // in practice (n up to a few dozen): ‖x‖₂ ≤ n^{1/2-1/p}‖x‖_p.
                if *p <= 2.0 {
                    *radius
                } else {
                    let n = self.dim().unwrap_or(64) as f64;
                    radius * n.powf(0.5 - 1.0 / p)
                }
            }
            ConvexShape::Ellipsoid { semi_axes, .. } => {
                semi_axes.iter().cloned().fold(0.0, f64::max)
            }
            ConvexShape::QuadOverNorm { spectral, .. } => 1.0 / spectral.min_eigenvalue(),
            ConvexShape::UnionOf(members) => members
                .iter()
                .map(|m| m.circumradius())
                .fold(0.0, f64::max),
        }
    }
}

pub(crate) fn local_frame(y: &[f64], center: Option<&[f64]>) -> Vec<f64> {
    match center {
        None => y.to_vec(),
        Some(c) => y.iter().zip(c).map(|(yi, ci)| yi - ci).collect(),
    }
}

/// Members of a list must agree on the dimension wherever they pin one.
fn check_consistent_dims(dims: impl Iterator<Item = Option<usize>>) -> Result<()> {
    let mut seen: Option<usize> = None;
    for dim in dims.flatten() {
        match seen {
            None => seen = Some(dim),
            Some(d) if d != dim => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: dim,
                })
            }
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h_norm_a(diag: Vec<f64>) -> HamiltonianSpec {
        HamiltonianSpec::NormA(SpectralMatrix::diagonal(diag).unwrap())
    }

    proptest! {
        #[test]
        fn positive_homogeneity(
            p in proptest::collection::vec(-10.0f64..10.0, 3),
            alpha in 0.01f64..100.0,
        ) {
            let specs = [
                HamiltonianSpec::L1,
                HamiltonianSpec::L2,
                HamiltonianSpec::Linf,
                h_norm_a(vec![1.0, 4.0, 2.5]),
                HamiltonianSpec::min_of(vec![HamiltonianSpec::L1, HamiltonianSpec::L2])
                    .unwrap(),
            ];
            for h in &specs {
                let scaled: Vec<f64> = p.iter().map(|v| alpha * v).collect();
                let lhs = h.eval(&scaled).unwrap();
                let rhs = alpha * h.eval(&p).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn eval_hamiltonian_examples() {
        assert_eq!(
            HamiltonianSpec::L1.eval(&[1.0, -2.0, 3.0]).unwrap(),
            6.0
        );
        assert_eq!(
            h_norm_a(vec![1.0, 1.0]).eval(&[3.0, 4.0]).unwrap(),
            5.0
        );
        let min = HamiltonianSpec::min_of(vec![HamiltonianSpec::L1, HamiltonianSpec::L2])
            .unwrap();
        assert_eq!(min.eval(&[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn grad_hamiltonian_examples() {
        assert_eq!(
            HamiltonianSpec::L2.grad(&[3.0, 4.0]).unwrap(),
            vec![0.6, 0.8]
        );
        assert_eq!(
            HamiltonianSpec::L1.grad(&[2.0, -3.0]).unwrap(),
            vec![1.0, -1.0]
        );
        // ∇√⟨p,Ap⟩ = Ap/√⟨p,Ap⟩; checked against central differences.
        let h = h_norm_a(vec![1.0, 4.0]);
        let p = [1.0, 0.0];
        let g = h.grad(&p).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-12 && g[1].abs() < 1e-12);
        let step = 1e-6;
        for i in 0..2 {
            let mut hi = p.to_vec();
            let mut lo = p.to_vec();
            hi[i] += step;
            lo[i] -= step;
            let fd = (h.eval(&hi).unwrap() - h.eval(&lo).unwrap()) / (2.0 * step);
            assert!((fd - g[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn grad_errors_are_distinct() {
        assert_eq!(
            HamiltonianSpec::L1.grad(&[0.0, 0.0]),
            Err(Error::ZeroGradient)
        );
        assert!(matches!(
            HamiltonianSpec::L1.grad(&[1.0, 0.0]),
            Err(Error::Nondifferentiable(_))
        ));
        assert!(matches!(
            HamiltonianSpec::Linf.grad(&[2.0, -2.0]),
            Err(Error::Nondifferentiable(_))
        ));
        let min = HamiltonianSpec::min_of(vec![HamiltonianSpec::L1, HamiltonianSpec::L2])
            .unwrap();
        // Both members equal on an axis.
        assert!(matches!(
            min.grad(&[1.0, 0.0]),
            Err(Error::Nondifferentiable(_))
        ));
    }

    #[test]
    fn euler_identity_on_smooth_points() {
        let specs = [
            HamiltonianSpec::L1,
            HamiltonianSpec::L2,
            HamiltonianSpec::Linf,
            h_norm_a(vec![1.0, 4.0, 2.5]),
        ];
        let p = [0.7, -1.3, 2.1];
        for h in &specs {
            let g = h.grad(&p).unwrap();
            let lhs = linalg::dot(&p, &g);
            assert!(
                (lhs - h.eval(&p).unwrap()).abs() < 1e-10,
                "Euler identity failed for {h:?}"
            );
        }
    }

    #[test]
    fn eval_initial_examples() {
        let ell = InitialDataSpec::EllipsoidLevel {
            semi_axes: vec![1.0, 1.0],
        };
        assert_eq!(ell.eval(&[1.0, 0.0]).unwrap(), 0.0);

        assert_eq!(
            InitialDataSpec::HalfSqL1.eval(&[1.0, -1.0]).unwrap(),
            2.0
        );

        let b = vec![1.0, 1.0, 1.0];
        let min = InitialDataSpec::min_of(vec![
            InitialDataSpec::ShiftedQuadratic {
                shift: b.clone(),
                sign: ShiftSign::Plus,
            },
            InitialDataSpec::ShiftedQuadratic {
                shift: b,
                sign: ShiftSign::Minus,
            },
        ])
        .unwrap();
        assert_eq!(min.eval(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn conjugate_examples() {
        let ell = InitialDataSpec::EllipsoidLevel {
            semi_axes: vec![1.0, 2.0],
        };
        assert_eq!(ell.conjugate(&[1.0, 1.0]).unwrap(), 3.0);

        assert_eq!(
            InitialDataSpec::HalfSqLinf.conjugate(&[3.0, 1.0]).unwrap(),
            8.0
        );
        assert_eq!(InitialDataSpec::HalfSqL2.conjugate(&[0.0, 0.0]).unwrap(), 0.0);

        let min = InitialDataSpec::min_of(vec![InitialDataSpec::HalfSqL2]).unwrap();
        assert_eq!(
            min.conjugate(&[1.0]),
            Err(Error::MinOfUnsupported {
                op: "eval_conjugate"
            })
        );
    }

    #[test]
    fn fenchel_young_with_equality_at_gradient() {
        // J(x) + J*(v) ≥ ⟨x,v⟩ always, with equality at v = ∇J(x).
        let cases: Vec<(InitialDataSpec, fn(&[f64]) -> Vec<f64>)> = vec![
            (InitialDataSpec::HalfSqL2, |x| x.to_vec()),
            (
                InitialDataSpec::DiagQuadratic {
                    diag: vec![1.0, 3.0, 0.5],
                },
                |x| vec![x[0] / 1.0, x[1] / 3.0, x[2] / 0.5],
            ),
            (
                InitialDataSpec::EllipsoidLevel {
                    semi_axes: vec![1.0, 2.0, 1.5],
                },
                |x| vec![x[0], x[1] / 4.0, x[2] / 2.25],
            ),
            (
                InitialDataSpec::ShiftedQuadratic {
                    shift: vec![1.0, -2.0, 0.5],
                    sign: ShiftSign::Plus,
                },
                |x| vec![x[0] + 1.0, x[1] - 2.0, x[2] + 0.5],
            ),
        ];
        let xs = [
            [0.3, -1.2, 2.0],
            [1.0, 1.0, 1.0],
            [-4.0, 0.1, 0.7],
        ];
        for (j, grad) in &cases {
            for x in &xs {
                let v = grad(x);
                let gap = j.eval(x).unwrap() + j.conjugate(&v).unwrap() - linalg::dot(x, &v);
                assert!(gap.abs() < 1e-8, "equality failed for {j:?}: gap {gap}");
                // and inequality at a perturbed v
                let mut v2 = v.clone();
                v2[0] += 0.37;
                let gap2 =
                    j.eval(x).unwrap() + j.conjugate(&v2).unwrap() - linalg::dot(x, &v2);
                assert!(gap2 >= -1e-12);
            }
        }
    }

    #[test]
    fn min_of_members_must_agree_on_dimension() {
        let bad = HamiltonianSpec::MinOf(vec![
            h_norm_a(vec![1.0, 2.0]),
            h_norm_a(vec![1.0, 2.0, 3.0]),
        ]);
        assert!(matches!(
            bad.validate(),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad = InitialDataSpec::MinOf(vec![
            InitialDataSpec::ShiftedQuadratic {
                shift: vec![1.0, 1.0],
                sign: ShiftSign::Plus,
            },
            InitialDataSpec::EllipsoidLevel {
                semi_axes: vec![1.0, 2.0, 1.0],
            },
        ]);
        assert!(matches!(
            bad.validate(),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spectral_matrix_rejects_bad_data() {
        assert!(SpectralMatrix::diagonal(vec![1.0, -2.0]).is_err());
        assert!(SpectralMatrix::diagonal(vec![]).is_err());
        // Non-orthogonal factor.
        let bad = OrthogonalMatrix::new(2, vec![1.0, 1.0, 0.0, 1.0]);
        assert!(bad.is_err());
    }

    #[test]
    fn spectral_matrix_from_dense_roundtrip() {
        let a = vec![2.0, 1.0, 1.0, 2.0];
        let m = SpectralMatrix::from_dense(&a, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.entry(i, j) - a[i * 2 + j]).abs() < 1e-10);
            }
        }
        assert!((m.quadratic_form(&[1.0, -1.0]) - 2.0).abs() < 1e-10);
        assert!((m.inverse_quadratic_form(&[1.0, -1.0]) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn shape_validation() {
        assert!(ConvexShape::PNormBall {
            p: 1.0,
            radius: 1.0,
            center: None
        }
        .validate()
        .is_err());

        let spectral = SpectralMatrix::diagonal(vec![1.0, 2.5]).unwrap();
        assert!(ConvexShape::QuadOverNorm {
            spectral,
            exponent: 2.0,
            center: None
        }
        .validate()
        .is_err());

        let ok = ConvexShape::QuadOverNorm {
            spectral: SpectralMatrix::diagonal(vec![1.0, 1.9]).unwrap(),
            exponent: 2.0,
            center: None,
        };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn boundary_excess_signs() {
        let ball = ConvexShape::PNormBall {
            p: 4.0,
            radius: 1.0,
            center: None,
        };
        assert!(ball.boundary_excess(&[0.2, 0.1]).unwrap() < 0.0);
        assert!(ball.boundary_excess(&[2.0, 0.0]).unwrap() > 0.0);
        assert!(ball.boundary_excess(&[1.0, 0.0]).unwrap().abs() < 1e-12);

        let shifted = ConvexShape::PNormBall {
            p: 2.0,
            radius: 1.0,
            center: Some(vec![3.0, 0.0]),
        };
        assert!(shifted.boundary_excess(&[3.0, 0.5]).unwrap() < 0.0);
        assert!(shifted.boundary_excess(&[0.0, 0.0]).unwrap() > 0.0);
    }
}
