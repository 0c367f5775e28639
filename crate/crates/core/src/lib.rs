//! Theta-metric spaces.
//!
//! A theta-metric replaces the `+` in the triangle inequality with a binary
//! operation `θ` on `[0, ∞)` (a *B-action*):
//!
//! ```text
//! d(x, y) <= θ(d(x, z), d(z, y))
//! ```
//!
//! The crate is organised in three layers:
//!
//! - [`actions`]: B-actions, a sampled axiom checker, image membership and the
//!   numeric inverse action `η` with `θ(η(r, s), s) = r`.
//! - [`spaces`]: finite theta-metric spaces, axiom validation, open balls and
//!   the topological witnesses built from `η` (openness, Hausdorff separation,
//!   uniformity base indices) plus finite-trace sequence analysis.
//! - [`fixedpoint`]: Banach iteration on oracle-defined spaces and the
//!   Caristi order `≺` with exhaustive minimal-element search on finite spaces.
//!
//! Every check is sampling- or enumeration-based. Reports carry concrete
//! numeric witnesses that replay through the same evaluators.

pub mod actions;
mod error;
pub mod fixedpoint;
pub mod fixtures;
mod sampler;
pub mod spaces;
pub mod tol;

pub use actions::{Action, ActionKind, ActionSpec, Compliance, InverseMode};
pub use error::{Error, Result};
pub use sampler::Sampler;
pub use spaces::{DistanceOracle, FiniteSpace};
