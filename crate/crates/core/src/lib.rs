//! Grid-free evaluation of Hamilton-Jacobi initial value problems
//!
//! ```text
//!   ∂φ/∂t + H(∇ₓφ) = 0,   φ(·, 0) = J,
//! ```
//!
//! at arbitrary query points `(x, t)` via the Hopf formula
//! `φ(x,t) = −min_v { J*(v) + tH(v) − ⟨x,v⟩ }`, minimized with a split
//! Bregman iteration built on a library of exact proximal operators.
//! The same machinery answers Euclidean closest-point queries against
//! compact convex sets (and finite unions) through a level-set
//! formulation, and recovers optimal controls from the solution
//! gradient.
//!
//! No grids are involved anywhere: the cost per evaluation is a handful
//! of `O(n)`/`O(n log n)` prox calls per iteration, so the dimension can
//! be large. Everything is pure and `Send + Sync`; evaluations can be
//! fanned out across threads freely.

pub mod closest;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod problem;
pub mod prox;
pub mod solver;

pub use error::{Error, Result};
