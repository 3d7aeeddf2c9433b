//! Split Bregman minimization of the Hopf objective
//! `J*(v) + tH(v) − ⟨x, v⟩`, yielding both `φ(x,t)` (minus the minimum)
//! and `∇ₓφ(x,t)` (the minimizer), plus min-plus/max-plus combinators
//! and optimal-control recovery.
//!
//! The three-step iteration is
//!
//! ```text
//!   v^{k+1} = prox_{(1/λ)∂J*}(dᵏ − bᵏ + x/λ)
//!   d^{k+1} = prox_{(t/λ)∂H}(v^{k+1} + bᵏ)
//!   b^{k+1} = bᵏ + v^{k+1} − d^{k+1}
//! ```
//!
//! (the `v` step is the argmin of `J*(v) − ⟨x,v⟩ + (λ/2)‖dᵏ − v − bᵏ‖²`
//! after completing the square). Iterations stop when the squared norms
//! of `vᵏ − vᵏ⁻¹`, `dᵏ − dᵏ⁻¹` and `dᵏ − vᵏ` are all below the
//! configured tolerance.

use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::{HamiltonianSpec, InitialDataSpec};
use crate::prox;

/// Split Bregman parameters. `tol` is compared against *squared*
/// residual norms.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub lambda: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub warm_start: Option<WarmStart>,
}

/// Explicit initial iterates; the default is `v⁰ = d⁰ = x`, `b⁰ = 0`.
#[derive(Debug, Clone)]
pub struct WarmStart {
    pub v: Vec<f64>,
    pub d: Vec<f64>,
    pub b: Vec<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            tol: 1e-8,
            max_iters: 10_000,
            warm_start: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(Error::InvalidSpec("lambda must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidSpec("tolerance must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidSpec("max_iters must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }
}

/// Result bundle of one Hopf evaluation.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// `φ(x, t)`
    pub value: f64,
    /// The minimizer `v̄` (the `d` iterate at termination), equal to
    /// `∇ₓφ(x,t)` when the minimizer is unique.
    pub gradient: Vec<f64>,
    pub iters: usize,
    /// All three stopping residuals fell below `tol`.
    pub converged: bool,
    /// Set by the min/max combinators: which branch won and whether the
    /// decision was a tie (within `1e-9` relative).
    pub branch: Option<BranchChoice>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchChoice {
    pub index: usize,
    pub tie: bool,
}

/// Prox output for the conjugate side; `aux` carries whatever the
/// implementation wants handed back to [`ConjugateSide::conjugate_value`]
/// as a hint (e.g. the primal point of a Moreau-derived prox).
pub struct ProxOutcome {
    pub point: Vec<f64>,
    pub aux: Option<Vec<f64>>,
}

impl ProxOutcome {
    pub fn plain(point: Vec<f64>) -> Self {
        Self { point, aux: None }
    }
}

/// The initial-data side of the iteration: a prox oracle for `J*` and a
/// way to evaluate `J*` itself.
pub trait ConjugateSide {
    /// `prox_{α ∂J*}(z)`
    fn prox_conjugate(&self, z: &[f64], alpha: f64) -> Result<ProxOutcome>;
    /// `J*(v)`; `hint` is the `aux` of the most recent prox call, when
    /// the caller kept one.
    fn conjugate_value(&self, v: &[f64], hint: Option<&[f64]>) -> Result<f64>;
}

/// The Hamiltonian side: a prox oracle for `H` and pointwise values.
pub trait HamiltonianSide {
    /// `prox_{α ∂H}(z)`
    fn prox(&self, z: &[f64], alpha: f64) -> Result<Vec<f64>>;
    fn eval(&self, v: &[f64]) -> Result<f64>;
}

impl ConjugateSide for InitialDataSpec {
    fn prox_conjugate(&self, z: &[f64], alpha: f64) -> Result<ProxOutcome> {
        Ok(ProxOutcome::plain(match self {
            InitialDataSpec::HalfSqL2 => z.iter().map(|&v| v / (1.0 + alpha)).collect(),
            InitialDataSpec::HalfSqL1 => prox::prox_half_linf_sq(z, alpha),
            InitialDataSpec::HalfSqLinf => prox::prox_half_l1_sq(z, alpha).point,
            InitialDataSpec::DiagQuadratic { diag } => {
                prox::prox_quadratic(z, alpha, diag, None)
            }
            InitialDataSpec::EllipsoidLevel { semi_axes } => z
                .iter()
                .zip(semi_axes)
                .map(|(&zi, a)| zi / (1.0 + alpha * a * a))
                .collect(),
            InitialDataSpec::ShiftedQuadratic { shift, sign } => {
                let s = sign.factor();
                z.iter()
                    .zip(shift)
                    .map(|(&zi, &bi)| (zi + alpha * s * bi) / (1.0 + alpha))
                    .collect()
            }
            InitialDataSpec::MinOf(_) => {
                return Err(Error::MinOfUnsupported { op: "evaluate" })
            }
        }))
    }

    fn conjugate_value(&self, v: &[f64], _hint: Option<&[f64]>) -> Result<f64> {
        self.conjugate(v)
    }
}

impl HamiltonianSide for HamiltonianSpec {
    fn prox(&self, z: &[f64], alpha: f64) -> Result<Vec<f64>> {
        match self {
            HamiltonianSpec::L1 => Ok(prox::shrink1(z, alpha)),
            HamiltonianSpec::L2 => Ok(prox::shrink2(z, alpha)),
            HamiltonianSpec::Linf => Ok(prox::prox_linf(z, alpha)),
            HamiltonianSpec::NormA(a) => prox::prox_norm_a(z, alpha, a),
            HamiltonianSpec::MinOf(_) => Err(Error::MinOfUnsupported { op: "evaluate" }),
        }
    }

    fn eval(&self, v: &[f64]) -> Result<f64> {
        HamiltonianSpec::eval(self, v)
    }
}

/// Run the split Bregman iteration for arbitrary side implementations.
///
/// Returns the evaluation with `gradient` set to the `d` iterate at
/// termination (it has passed through the prox of `H` and respects the
/// domain structure of `H`) and `value = −(J*(v̄) + tH(v̄) − ⟨x,v̄⟩)`
/// evaluated at that same point. Nonconvergence is reported through the
/// flag, not as an error.
pub fn run_split_bregman<J, H>(
    x: &[f64],
    t: f64,
    conj: &J,
    ham: &H,
    cfg: &SolverConfig,
) -> Result<Evaluation>
where
    J: ConjugateSide + ?Sized,
    H: HamiltonianSide + ?Sized,
{
    run_split_bregman_with_state(x, t, conj, ham, cfg).map(|(e, _)| e)
}

/// Same as [`run_split_bregman`], additionally returning the terminal
/// iterates so a caller sweeping nearby problems can chain warm starts
/// (the dual accumulator `b` is the part worth carrying).
pub fn run_split_bregman_with_state<J, H>(
    x: &[f64],
    t: f64,
    conj: &J,
    ham: &H,
    cfg: &SolverConfig,
) -> Result<(Evaluation, WarmStart)>
where
    J: ConjugateSide + ?Sized,
    H: HamiltonianSide + ?Sized,
{
    cfg.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "evaluation time must be positive and finite, got {t}"
        )));
    }
    let n = x.len();
    let (mut v, mut d, mut b) = match &cfg.warm_start {
        Some(w) => {
            if w.v.len() != n || w.d.len() != n || w.b.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: w.v.len(),
                });
            }
            (w.v.clone(), w.d.clone(), w.b.clone())
        }
        None => (x.to_vec(), x.to_vec(), vec![0.0; n]),
    };

    let lambda = cfg.lambda;
    let alpha_conj = 1.0 / lambda;
    let alpha_ham = t / lambda;

    let mut iters = 0;
    let mut converged = false;
    let mut last_aux: Option<Vec<f64>> = None;
    let mut z = vec![0.0; n];

    while iters < cfg.max_iters {
        iters += 1;

        for i in 0..n {
            z[i] = d[i] - b[i] + x[i] / lambda;
        }
        let outcome = conj.prox_conjugate(&z, alpha_conj)?;
        let v_next = outcome.point;
        last_aux = outcome.aux;

        for i in 0..n {
            z[i] = v_next[i] + b[i];
        }
        let d_next = ham.prox(&z, alpha_ham)?;

        for i in 0..n {
            b[i] += v_next[i] - d_next[i];
        }

        let dv = linalg::dist2_sq(&v_next, &v);
        let dd = linalg::dist2_sq(&d_next, &d);
        let gap = linalg::dist2_sq(&d_next, &v_next);
        v = v_next;
        d = d_next;
        if dv <= cfg.tol && dd <= cfg.tol && gap <= cfg.tol {
            converged = true;
            break;
        }
    }

    let conj_val = conj.conjugate_value(&d, last_aux.as_deref())?;
    let ham_val = ham.eval(&d)?;
    let value = -(conj_val + t * ham_val - linalg::dot(x, &d));
    let state = WarmStart {
        v,
        d: d.clone(),
        b,
    };
    let eval = Evaluation {
        value,
        gradient: d,
        iters,
        converged,
        branch: None,
    };
    Ok((eval, state))
}

fn check_entry(x: &[f64], h: &HamiltonianSpec, j: &InitialDataSpec) -> Result<()> {
    h.validate()?;
    j.validate()?;
    for dim in [h.dim(), j.dim()].into_iter().flatten() {
        if dim != x.len() {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: x.len(),
            });
        }
    }
    Ok(())
}

/// Evaluate `φ(x,t)` and its gradient for convex (non-`MinOf`) `H`, `J`.
pub fn evaluate(
    x: &[f64],
    t: f64,
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
    cfg: &SolverConfig,
) -> Result<Evaluation> {
    check_entry(x, h, j)?;
    if matches!(j, InitialDataSpec::MinOf(_)) || matches!(h, HamiltonianSpec::MinOf(_)) {
        return Err(Error::MinOfUnsupported { op: "evaluate" });
    }
    run_split_bregman(x, t, j, h, cfg)
}

const TIE_RELATIVE_TOL: f64 = 1e-9;

fn pick_branch(values: &[f64], take_max: bool) -> BranchChoice {
    let mut index = 0;
    for (i, &v) in values.iter().enumerate() {
        let better = if take_max {
            v > values[index]
        } else {
            v < values[index]
        };
        if better {
            index = i;
        }
    }
    let tol = TIE_RELATIVE_TOL * (1.0 + values[index].abs());
    let tie = values
        .iter()
        .enumerate()
        .any(|(i, &v)| i != index && (v - values[index]).abs() <= tol);
    BranchChoice { index, tie }
}

/// Min-plus combinator: for `J = min_i Jᵢ` (each `Jᵢ` convex), the
/// solution is the pointwise minimum of the per-member solutions. The
/// winning branch's gradient is returned; ties go to the lowest index
/// and are flagged.
pub fn evaluate_min_initial(
    x: &[f64],
    t: f64,
    h: &HamiltonianSpec,
    members: &[InitialDataSpec],
    cfg: &SolverConfig,
) -> Result<Evaluation> {
    if members.is_empty() {
        return Err(Error::InvalidSpec("initial-data member list is empty".into()));
    }
    let evals: Vec<Evaluation> = members
        .iter()
        .map(|j| evaluate(x, t, h, j, cfg))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = evals.iter().map(|e| e.value).collect();
    let choice = pick_branch(&values, false);
    let mut out = evals.into_iter().nth(choice.index).unwrap();
    out.branch = Some(choice);
    Ok(out)
}

/// Max-plus combinator: for `H = min_i Hᵢ` (each `Hᵢ` convex), the
/// solution is the pointwise maximum of the per-member solutions.
pub fn evaluate_min_hamiltonian(
    x: &[f64],
    t: f64,
    members: &[HamiltonianSpec],
    j: &InitialDataSpec,
    cfg: &SolverConfig,
) -> Result<Evaluation> {
    if members.is_empty() {
        return Err(Error::InvalidSpec("Hamiltonian member list is empty".into()));
    }
    let evals: Vec<Evaluation> = members
        .iter()
        .map(|h| evaluate(x, t, h, j, cfg))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = evals.iter().map(|e| e.value).collect();
    let choice = pick_branch(&values, true);
    let mut out = evals.into_iter().nth(choice.index).unwrap();
    out.branch = Some(choice);
    Ok(out)
}

/// Dispatch on the `MinOf` structure of both specs: plain `evaluate`
/// when neither is a minimum, the min-plus/max-plus combinators when one
/// is, and the max-over-min composition when both are.
pub fn evaluate_any(
    x: &[f64],
    t: f64,
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
    cfg: &SolverConfig,
) -> Result<Evaluation> {
    check_entry(x, h, j)?;
    match (h, j) {
        (HamiltonianSpec::MinOf(hs), InitialDataSpec::MinOf(js)) => {
            let evals: Vec<Evaluation> = hs
                .iter()
                .map(|hi| evaluate_min_initial(x, t, hi, js, cfg))
                .collect::<Result<_>>()?;
            let values: Vec<f64> = evals.iter().map(|e| e.value).collect();
            let choice = pick_branch(&values, true);
            let mut out = evals.into_iter().nth(choice.index).unwrap();
            out.branch = Some(choice);
            Ok(out)
        }
        (HamiltonianSpec::MinOf(hs), _) => evaluate_min_hamiltonian(x, t, hs, j, cfg),
        (_, InitialDataSpec::MinOf(js)) => evaluate_min_initial(x, t, h, js, cfg),
        _ => run_split_bregman(x, t, j, h, cfg),
    }
}

/// Optimal control at a point where `H` is differentiable:
/// `β = ∇H(∇ₓφ)`, satisfying `⟨∇ₓφ, β⟩ = H(∇ₓφ)`. Nondifferentiable
/// points surface as explicit nonunique-control errors.
pub fn recover_control(grad: &[f64], h: &HamiltonianSpec) -> Result<Vec<f64>> {
    h.grad(grad)
}

/// The Hopf objective `J*(v) + tH(v) − ⟨x, v⟩`, exposed for tests and
/// for the brute-force oracle. `MinOf` initial data has no usable
/// conjugate and is rejected; a `MinOf` Hamiltonian is fine (its value
/// is the member minimum).
pub fn hopf_objective(
    v: &[f64],
    x: &[f64],
    t: f64,
    h: &HamiltonianSpec,
    j: &InitialDataSpec,
) -> Result<f64> {
    Ok(j.conjugate(v)? + t * h.eval(v)? - linalg::dot(x, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ShiftSign;
    use rand::prelude::*;
    use rand_chacha::ChaCha20Rng;

    fn tight() -> SolverConfig {
        SolverConfig::default().with_tol(1e-22).with_max_iters(200_000)
    }

    #[test]
    fn sphere_case_closed_form() {
        // J = ½‖·‖₂², H = ‖·‖₂: φ = ½(‖x‖₂ − t)² for ‖x‖₂ > t, with
        // gradient shrink2(x, t).
        let mut x = vec![0.0; 8];
        x[0] = 3.0;
        x[1] = 4.0;
        let e = evaluate(
            &x,
            2.0,
            &HamiltonianSpec::L2,
            &InitialDataSpec::HalfSqL2,
            &tight(),
        )
        .unwrap();
        assert!(e.converged);
        assert!((e.value - 4.5).abs() < 1e-9, "value {}", e.value);
        let expect = crate::prox::shrink2(&x, 2.0);
        for (g, ex) in e.gradient.iter().zip(&expect) {
            assert!((g - ex).abs() < 1e-8);
        }
    }

    #[test]
    fn ellipsoid_l1_worked_example() {
        let mut x = vec![0.0; 8];
        x[0] = 2.0;
        x[1] = 0.5;
        let j = InitialDataSpec::EllipsoidLevel {
            semi_axes: vec![1.0; 8],
        };
        let e = evaluate(&x, 1.0, &HamiltonianSpec::L1, &j, &tight()).unwrap();
        assert!(e.converged);
        assert!(e.value.abs() < 1e-9, "value {}", e.value);
        assert!((e.gradient[0] - 1.0).abs() < 1e-8);
        for g in &e.gradient[1..] {
            assert!(g.abs() < 1e-8);
        }
    }

    #[test]
    fn stationary_initial_point() {
        let x = vec![0.0; 4];
        let e = evaluate(
            &x,
            1.0,
            &HamiltonianSpec::L1,
            &InitialDataSpec::HalfSqL2,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(e.converged);
        assert_eq!(e.iters, 1);
        assert_eq!(e.value, 0.0);
        assert!(e.gradient.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn rejects_min_of_and_bad_time() {
        let j = InitialDataSpec::min_of(vec![InitialDataSpec::HalfSqL2]).unwrap();
        assert!(matches!(
            evaluate(&[1.0], 1.0, &HamiltonianSpec::L1, &j, &SolverConfig::default()),
            Err(Error::MinOfUnsupported { .. })
        ));
        assert!(matches!(
            evaluate(
                &[1.0],
                0.0,
                &HamiltonianSpec::L1,
                &InitialDataSpec::HalfSqL2,
                &SolverConfig::default()
            ),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn nonconvergence_is_reported_not_raised() {
        let x = vec![5.0, -3.0, 2.0];
        let cfg = SolverConfig {
            tol: 1e-30,
            max_iters: 3,
            ..SolverConfig::default()
        };
        let e = evaluate(
            &x,
            1.0,
            &HamiltonianSpec::Linf,
            &InitialDataSpec::HalfSqL1,
            &cfg,
        )
        .unwrap();
        assert!(!e.converged);
        assert_eq!(e.iters, 3);
        assert!(e.value.is_finite());
    }

    #[test]
    fn min_initial_combinator() {
        let b = vec![1.0; 8];
        let plus = InitialDataSpec::ShiftedQuadratic {
            shift: b.clone(),
            sign: ShiftSign::Plus,
        };
        let minus = InitialDataSpec::ShiftedQuadratic {
            shift: b,
            sign: ShiftSign::Minus,
        };
        let x = vec![0.0; 8];
        let members = [plus.clone(), minus.clone()];
        let combined =
            evaluate_min_initial(&x, 1.0, &HamiltonianSpec::L1, &members, &tight()).unwrap();
        let e_plus = evaluate(&x, 1.0, &HamiltonianSpec::L1, &plus, &tight()).unwrap();
        let e_minus = evaluate(&x, 1.0, &HamiltonianSpec::L1, &minus, &tight()).unwrap();
        // exactness: the combined value IS the scalar minimum
        assert_eq!(combined.value, e_plus.value.min(e_minus.value));
        // symmetric branches at x = 0: equal values, tie flagged
        assert!((e_plus.value - e_minus.value).abs() < 1e-9);
        let choice = combined.branch.unwrap();
        assert_eq!(choice.index, 0);
        assert!(choice.tie);
        // for t below the shrink threshold the branch gradients differ
        let g_plus = evaluate(&x, 0.5, &HamiltonianSpec::L1, &members[0], &tight())
            .unwrap()
            .gradient;
        let g_minus = evaluate(&x, 0.5, &HamiltonianSpec::L1, &members[1], &tight())
            .unwrap()
            .gradient;
        assert!(crate::linalg::dist2_sq(&g_plus, &g_minus) > 0.1);

        // single-element list reduces to evaluate
        let single = evaluate_min_initial(&x, 1.0, &HamiltonianSpec::L1, &members[..1], &tight())
            .unwrap();
        assert_eq!(single.value, e_plus.value);

        // a branch dominated pointwise is never selected: the ellipsoid
        // level function is ½‖·‖₂² − ½, below HalfSqL2 everywhere
        let x2 = vec![0.3; 8];
        let dominated = evaluate_min_initial(
            &x2,
            1.0,
            &HamiltonianSpec::L1,
            &[
                InitialDataSpec::EllipsoidLevel {
                    semi_axes: vec![1.0; 8],
                },
                InitialDataSpec::HalfSqL2,
            ],
            &tight(),
        )
        .unwrap();
        assert_eq!(dominated.branch.unwrap().index, 0);
    }

    #[test]
    fn min_hamiltonian_combinator() {
        let x = vec![2.0, -1.0];
        let members = [
            HamiltonianSpec::L1,
            HamiltonianSpec::NormA(
                crate::problem::SpectralMatrix::diagonal(vec![2.0, 3.0]).unwrap(),
            ),
        ];
        let j = InitialDataSpec::HalfSqL2;
        let combined = evaluate_min_hamiltonian(&x, 1.0, &members, &j, &tight()).unwrap();
        let e0 = evaluate(&x, 1.0, &members[0], &j, &tight()).unwrap();
        let e1 = evaluate(&x, 1.0, &members[1], &j, &tight()).unwrap();
        assert_eq!(combined.value, e0.value.max(e1.value));

        // single-element list reduces to evaluate
        let single = evaluate_min_hamiltonian(&x, 1.0, &members[..1], &j, &tight()).unwrap();
        assert_eq!(single.value, e0.value);

        // idempotence
        let twice = evaluate_min_hamiltonian(
            &x,
            1.0,
            &[HamiltonianSpec::L2, HamiltonianSpec::L2],
            &j,
            &tight(),
        )
        .unwrap();
        let once = evaluate(&x, 1.0, &HamiltonianSpec::L2, &j, &tight()).unwrap();
        assert_eq!(twice.value, once.value);
        assert!(twice.branch.unwrap().tie);
    }

    #[test]
    fn evaluate_any_composes_both_minimum_structures() {
        let hs = vec![HamiltonianSpec::L1, HamiltonianSpec::L2];
        let js = vec![
            InitialDataSpec::HalfSqL2,
            InitialDataSpec::EllipsoidLevel {
                semi_axes: vec![1.0, 1.0],
            },
        ];
        let h = HamiltonianSpec::min_of(hs.clone()).unwrap();
        let j = InitialDataSpec::min_of(js.clone()).unwrap();
        let x = [2.0, -3.0];
        let t = 1.5;
        let combined = evaluate_any(&x, t, &h, &j, &tight()).unwrap();
        // max over Hamiltonian members of the min over initial data
        let expect = hs
            .iter()
            .map(|hi| {
                js.iter()
                    .map(|ji| evaluate(&x, t, hi, ji, &tight()).unwrap().value)
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(combined.value, expect);

        // plain specs route through the ordinary path
        let plain = evaluate_any(&x, t, &hs[0], &js[0], &tight()).unwrap();
        let direct = evaluate(&x, t, &hs[0], &js[0], &tight()).unwrap();
        assert_eq!(plain.value, direct.value);
    }

    #[test]
    fn hopf_objective_consistency() {
        let x = [1.5, -2.0, 0.3];
        let (h, j) = (HamiltonianSpec::L1, InitialDataSpec::HalfSqL2);
        assert_eq!(hopf_objective(&[0.0; 3], &x, 3.0, &h, &j).unwrap(), 0.0);

        let e = evaluate(&x, 3.0, &h, &j, &tight()).unwrap();
        let at_min = hopf_objective(&e.gradient, &x, 3.0, &h, &j).unwrap();
        assert!((at_min + e.value).abs() < 1e-12);

        // minimality against random probes
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-4.0..4.0)).collect();
            assert!(hopf_objective(&v, &x, 3.0, &h, &j).unwrap() >= at_min - 1e-8);
        }
    }

    #[test]
    fn control_recovery() {
        assert_eq!(
            recover_control(&[3.0, 4.0], &HamiltonianSpec::L2).unwrap(),
            vec![0.6, 0.8]
        );
        assert_eq!(
            recover_control(&[2.0, -3.0], &HamiltonianSpec::L1).unwrap(),
            vec![1.0, -1.0]
        );
        let a = crate::problem::SpectralMatrix::diagonal(vec![1.0, 4.0]).unwrap();
        let c = recover_control(&[0.0, 1.0], &HamiltonianSpec::NormA(a)).unwrap();
        assert!((c[0] - 0.0).abs() < 1e-12 && (c[1] - 2.0).abs() < 1e-12);
        // ⟨grad, control⟩ = H(grad)
        let h = HamiltonianSpec::L2;
        let g = [0.3, -0.9];
        let c = recover_control(&g, &h).unwrap();
        assert!((crate::linalg::dot(&g, &c) - h.eval(&g).unwrap()).abs() < 1e-10);
        assert!(recover_control(&[1.0, 0.0], &HamiltonianSpec::L1).is_err());
    }

    #[test]
    fn fronts_move_outward_in_time() {
        // level-set initial data: value at fixed exterior x is
        // nonincreasing in t for nonnegative H
        let j = InitialDataSpec::EllipsoidLevel {
            semi_axes: vec![1.0, 2.0],
        };
        for h in [HamiltonianSpec::L1, HamiltonianSpec::L2] {
            let x = [4.0, -3.0];
            let mut prev = f64::INFINITY;
            for t in [0.5, 1.0, 2.0, 4.0] {
                let e = evaluate(&x, t, &h, &j, &tight()).unwrap();
                assert!(e.value <= prev + 1e-10);
                prev = e.value;
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let h = HamiltonianSpec::Linf;
        let j = InitialDataSpec::HalfSqL2;
        for _ in 0..10 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-5.0..5.0)).collect();
            let t = rng.random_range(0.5..3.0);
            let e = evaluate(&x, t, &h, &j, &tight()).unwrap();
            for i in 0..4 {
                let mut hi = x.clone();
                let mut lo = x.clone();
                hi[i] += 1e-4;
                lo[i] -= 1e-4;
                let f_hi = evaluate(&hi, t, &h, &j, &tight()).unwrap().value;
                let f_lo = evaluate(&lo, t, &h, &j, &tight()).unwrap().value;
                let fd = (f_hi - f_lo) / 2e-4;
                assert!(
                    (fd - e.gradient[i]).abs() < 1e-3,
                    "fd {fd} vs grad {}",
                    e.gradient[i]
                );
            }
        }
    }

    #[test]
    fn warm_start_from_terminal_state_restarts_at_the_fixed_point() {
        let x = [3.0, -1.0, 0.4];
        let h = HamiltonianSpec::L1;
        let j = InitialDataSpec::HalfSqL2;
        let (cold, state) = run_split_bregman_with_state(&x, 1.5, &j, &h, &tight()).unwrap();
        let cfg = SolverConfig {
            warm_start: Some(state),
            ..tight()
        };
        let warm = evaluate(&x, 1.5, &h, &j, &cfg).unwrap();
        assert!((warm.value - cold.value).abs() < 1e-12);
        assert!(warm.iters <= 2, "warm restart took {} iterations", warm.iters);
    }
}
