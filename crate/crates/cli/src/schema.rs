//! JSON problem and shape files.
//!
//! A problem file pins the dimension, the Hamiltonian, the initial data
//! and optional solver overrides:
//!
//! ```json
//! {
//!   "dimension": 8,
//!   "hamiltonian": { "type": "l1" },
//!   "initial": { "type": "half_sq_l2" },
//!   "solver": { "lambda": 1.0, "tol": 1e-8, "max_iters": 10000 }
//! }
//! ```
//!
//! Hamiltonians: `l1`, `l2`, `linf`, `norm_a` (with either `preset`
//! `"d"`/`"a"`, a raw symmetric `matrix`, or explicit `eigenvalues` +
//! `orthogonal_factor`; optional `scale` multiplies the matrix), and
//! `min_of` with `members`. Initial data: `half_sq_l2`, `half_sq_l1`,
//! `half_sq_linf`, `diag_quadratic` (`weights` list or `preset: "d"`),
//! `ellipsoid_level` (`semi_axes` as a list or `{"cycle": [...]}`),
//! `shifted_quadratic` (`shift` list or `"ones"`, `sign` ±1), and
//! `min_of`.
//!
//! The named presets follow the benchmark matrices: `D` is diagonal
//! with `D_ii = 1 + (i−1)/(n−1)` and `A` has `A_ii = 2`, `A_ij = 1`
//! off the diagonal. Presets (and `"ones"`/`"cycle"` vectors) rescale
//! with the dimension, which is what lets the benchmark sweep `n`.

use serde::Deserialize;

use hopf_core::linalg::OrthogonalMatrix;
use hopf_core::problem::{
    ConvexShape, HamiltonianSpec, InitialDataSpec, ShiftSign, SpectralMatrix,
};
use hopf_core::solver::SolverConfig;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub hamiltonian: HamiltonianDef,
    pub initial: InitialDef,
    #[serde(default)]
    pub solver: SolverOverrides,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    pub lambda: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
}

impl SolverOverrides {
    pub fn apply(&self, mut cfg: SolverConfig) -> SolverConfig {
        if let Some(l) = self.lambda {
            cfg.lambda = l;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(m) = self.max_iters {
            cfg.max_iters = m;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixPreset {
    D,
    A,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianDef {
    L1,
    L2,
    Linf,
    NormA {
        #[serde(default)]
        preset: Option<MatrixPreset>,
        #[serde(default)]
        matrix: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        eigenvalues: Option<Vec<f64>>,
        #[serde(default)]
        orthogonal_factor: Option<Vec<Vec<f64>>>,
        /// Multiplies the matrix (e.g. 4/3 for the scaled-D variant).
        #[serde(default)]
        scale: Option<f64>,
    },
    MinOf {
        members: Vec<HamiltonianDef>,
    },
}

/// `D_ii = 1 + (i−1)/(n−1)` for `i = 1..n`.
pub fn preset_d_diagonal(n: usize) -> Result<Vec<f64>, CliError> {
    if n < 2 {
        return Err(CliError::Config(
            "preset D requires dimension at least 2".into(),
        ));
    }
    Ok((0..n)
        .map(|i| 1.0 + i as f64 / (n as f64 - 1.0))
        .collect())
}

/// `A = I + 1·1ᵀ` (2 on the diagonal, 1 off it) in spectral form: one
/// eigenvalue `n + 1` on the all-ones direction, `1` on its complement.
/// The orthogonal factor is the Householder reflection taking `e₁` to
/// the normalized ones vector.
pub fn preset_a_spectral(n: usize, scale: f64) -> Result<SpectralMatrix, CliError> {
    let mut eig = vec![scale; n];
    eig[0] = scale * (n as f64 + 1.0);
    if n == 1 {
        return Ok(SpectralMatrix::diagonal(vec![2.0 * scale])?);
    }
    let u = 1.0 / (n as f64).sqrt();
    let mut w = vec![-u; n];
    w[0] = 1.0 - u;
    let norm_sq: f64 = w.iter().map(|v| v * v).sum();
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] = -2.0 * w[i] * w[j] / norm_sq;
        }
        h[i * n + i] += 1.0;
    }
    let factor = OrthogonalMatrix::new(n, h)?;
    Ok(SpectralMatrix::new(eig, Some(factor))?)
}

fn flatten_matrix(rows: &[Vec<f64>], n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Config(format!(
            "{what} must be {n}x{n} to match the dimension"
        )));
    }
    Ok(rows.iter().flatten().copied().collect())
}

impl HamiltonianDef {
    pub fn build(&self, n: usize) -> Result<HamiltonianSpec, CliError> {
        match self {
            HamiltonianDef::L1 => Ok(HamiltonianSpec::L1),
            HamiltonianDef::L2 => Ok(HamiltonianSpec::L2),
            HamiltonianDef::Linf => Ok(HamiltonianSpec::Linf),
            HamiltonianDef::NormA {
                preset,
                matrix,
                eigenvalues,
                orthogonal_factor,
                scale,
            } => {
                let scale = scale.unwrap_or(1.0);
                if !(scale > 0.0) {
                    return Err(CliError::Config("norm_a scale must be positive".into()));
                }
                let spectral = match (preset, matrix, eigenvalues) {
                    (Some(MatrixPreset::D), None, None) => {
                        let diag: Vec<f64> = preset_d_diagonal(n)?
                            .into_iter()
                            .map(|d| scale * d)
                            .collect();
                        SpectralMatrix::diagonal(diag)?
                    }
                    (Some(MatrixPreset::A), None, None) => preset_a_spectral(n, scale)?,
                    (None, Some(rows), None) => {
                        let mut flat = flatten_matrix(rows, n, "hamiltonian matrix")?;
                        for v in flat.iter_mut() {
                            *v *= scale;
                        }
                        SpectralMatrix::from_dense(&flat, n)?
                    }
                    (None, None, Some(eig)) => {
                        if eig.len() != n {
                            return Err(CliError::Config(format!(
                                "eigenvalue list has length {}, dimension is {n}",
                                eig.len()
                            )));
                        }
                        let eig: Vec<f64> = eig.iter().map(|&w| scale * w).collect();
                        let factor = orthogonal_factor
                            .as_ref()
                            .map(|rows| {
                                flatten_matrix(rows, n, "orthogonal_factor")
                                    .and_then(|f| Ok(OrthogonalMatrix::new(n, f)?))
                            })
                            .transpose()?;
                        SpectralMatrix::new(eig, factor)?
                    }
                    _ => {
                        return Err(CliError::Config(
                            "norm_a needs exactly one of: preset, matrix, eigenvalues".into(),
                        ))
                    }
                };
                Ok(HamiltonianSpec::NormA(spectral))
            }
            HamiltonianDef::MinOf { members } => {
                let built: Vec<HamiltonianSpec> = members
                    .iter()
                    .map(|m| m.build(n))
                    .collect::<Result<_, _>>()?;
                Ok(HamiltonianSpec::min_of(built)?)
            }
        }
    }
}

/// Vector field that scales with the dimension: an explicit list or a
/// repeating cycle.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AxesDef {
    List(Vec<f64>),
    Cycle { cycle: Vec<f64> },
}

impl AxesDef {
    fn resolve(&self, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
        match self {
            AxesDef::List(v) => {
                if v.len() != n {
                    return Err(CliError::Config(format!(
                        "{what} has length {}, dimension is {n}",
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
            AxesDef::Cycle { cycle } => {
                if cycle.is_empty() {
                    return Err(CliError::Config(format!("{what} cycle is empty")));
                }
                Ok((0..n).map(|i| cycle[i % cycle.len()]).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ShiftDef {
    Named(String),
    List(Vec<f64>),
}

impl ShiftDef {
    fn resolve(&self, n: usize) -> Result<Vec<f64>, CliError> {
        match self {
            ShiftDef::Named(name) if name == "ones" => Ok(vec![1.0; n]),
            ShiftDef::Named(name) => Err(CliError::Config(format!(
                "unknown shift vector name {name:?} (only \"ones\" is defined)"
            ))),
            ShiftDef::List(v) => {
                if v.len() != n {
                    return Err(CliError::Config(format!(
                        "shift has length {}, dimension is {n}",
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialDef {
    HalfSqL2,
    HalfSqL1,
    HalfSqLinf,
    DiagQuadratic {
        #[serde(default)]
        preset: Option<MatrixPreset>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
    },
    EllipsoidLevel {
        semi_axes: AxesDef,
    },
    ShiftedQuadratic {
        shift: ShiftDef,
        sign: i8,
    },
    MinOf {
        members: Vec<InitialDef>,
    },
}

impl InitialDef {
    pub fn build(&self, n: usize) -> Result<InitialDataSpec, CliError> {
        match self {
            InitialDef::HalfSqL2 => Ok(InitialDataSpec::HalfSqL2),
            InitialDef::HalfSqL1 => Ok(InitialDataSpec::HalfSqL1),
            InitialDef::HalfSqLinf => Ok(InitialDataSpec::HalfSqLinf),
            InitialDef::DiagQuadratic { preset, weights } => {
                let diag = match (preset, weights) {
                    (Some(MatrixPreset::D), None) => preset_d_diagonal(n)?,
                    (None, Some(w)) => {
                        if w.len() != n {
                            return Err(CliError::Config(format!(
                                "diag_quadratic weights have length {}, dimension is {n}",
                                w.len()
                            )));
                        }
                        w.clone()
                    }
                    _ => {
                        return Err(CliError::Config(
                            "diag_quadratic needs exactly one of: preset \"d\", weights".into(),
                        ))
                    }
                };
                Ok(InitialDataSpec::DiagQuadratic { diag })
            }
            InitialDef::EllipsoidLevel { semi_axes } => Ok(InitialDataSpec::EllipsoidLevel {
                semi_axes: semi_axes.resolve(n, "semi_axes")?,
            }),
            InitialDef::ShiftedQuadratic { shift, sign } => {
                let sign = match sign {
                    1 => ShiftSign::Plus,
                    -1 => ShiftSign::Minus,
                    other => {
                        return Err(CliError::Config(format!(
                            "shifted_quadratic sign must be 1 or -1, got {other}"
                        )))
                    }
                };
                Ok(InitialDataSpec::ShiftedQuadratic {
                    shift: shift.resolve(n)?,
                    sign,
                })
            }
            InitialDef::MinOf { members } => {
                let built: Vec<InitialDataSpec> = members
                    .iter()
                    .map(|m| m.build(n))
                    .collect::<Result<_, _>>()?;
                Ok(InitialDataSpec::min_of(built)?)
            }
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ProblemFile = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("problem file: {e}")))?;
        if file.dimension == 0 {
            return Err(CliError::Config("dimension must be at least 1".into()));
        }
        Ok(file)
    }

    /// Build the specs at the file's own dimension.
    pub fn build(&self) -> Result<(HamiltonianSpec, InitialDataSpec, SolverConfig), CliError> {
        self.build_at(self.dimension)
    }

    /// Build the specs at a different dimension (benchmark sweeps);
    /// fails when the definitions carry explicit vectors of another
    /// length.
    pub fn build_at(
        &self,
        n: usize,
    ) -> Result<(HamiltonianSpec, InitialDataSpec, SolverConfig), CliError> {
        let h = self.hamiltonian.build(n)?;
        let j = self.initial.build(n)?;
        let cfg = self.solver.apply(SolverConfig::default());
        cfg.validate()?;
        Ok((h, j, cfg))
    }
}

// ---------------------------------------------------------------------
// shape files
// ---------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeFile {
    pub shape: ShapeDef,
    #[serde(default)]
    pub solver: SolverOverrides,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeDef {
    PNormBall {
        p: f64,
        radius: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    Ellipsoid {
        semi_axes: Vec<f64>,
        #[serde(default)]
        orthogonal_factor: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    QuadOverNorm {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        exponent: Option<f64>,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    Union {
        members: Vec<ShapeDef>,
    },
}

impl ShapeFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("shape file: {e}")))
    }
}

impl ShapeDef {
    pub fn build(&self) -> Result<ConvexShape, CliError> {
        let shape = match self {
            ShapeDef::PNormBall { p, radius, center } => ConvexShape::PNormBall {
                p: *p,
                radius: *radius,
                center: center.clone(),
            },
            ShapeDef::Ellipsoid {
                semi_axes,
                orthogonal_factor,
                center,
            } => {
                let n = semi_axes.len();
                let factor = orthogonal_factor
                    .as_ref()
                    .map(|rows| {
                        flatten_matrix(rows, n, "orthogonal_factor")
                            .and_then(|f| Ok(OrthogonalMatrix::new(n, f)?))
                    })
                    .transpose()?;
                ConvexShape::Ellipsoid {
                    semi_axes: semi_axes.clone(),
                    factor,
                    center: center.clone(),
                }
            }
            ShapeDef::QuadOverNorm {
                matrix,
                exponent,
                center,
            } => {
                let n = matrix.len();
                let flat = flatten_matrix(matrix, n, "quad_over_norm matrix")?;
                ConvexShape::QuadOverNorm {
                    spectral: SpectralMatrix::from_dense(&flat, n)?,
                    exponent: exponent.unwrap_or(2.0),
                    center: center.clone(),
                }
            }
            ShapeDef::Union { members } => {
                let built: Vec<ConvexShape> = members
                    .iter()
                    .map(|m| m.build())
                    .collect::<Result<_, _>>()?;
                ConvexShape::UnionOf(built)
            }
        };
        shape.validate()?;
        Ok(shape)
    }
}
