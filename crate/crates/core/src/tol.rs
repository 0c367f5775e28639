//! Numeric tolerances shared across the crate.

/// Residual tolerance for the inverse action, scaled by `max(1, r)`.
pub const ETA: f64 = 1e-12;
/// Bisection iteration cap for the inverse action and image probes.
pub const ETA_MAX_ITER: usize = 200;
/// Upper end of the doubling bracket used in existence mode (2^64).
pub const BRACKET_CAP: f64 = 18_446_744_073_709_551_616.0;
/// Diagonal search cap for image membership.
pub const IMAGE_SEARCH_CAP: f64 = 1e15;
/// Agreement required between a closed-form inverse and bisection.
pub const CLOSED_FORM: f64 = 1e-9;
/// Bound on `η(r, r)` for an action to count as regular.
pub const REGULAR: f64 = 1e-9;
/// Slack on the upper-bound property `θ(x, b) <= c ⇒ x <= η(c, b)`.
pub const INVERSE_BOUND: f64 = 1e-9;
/// Relative comparison slack for user-supplied tables.
pub const CMP: f64 = 1e-9;
/// Default fixed-point step tolerance.
pub const FIX: f64 = 1e-8;
/// Search cap for uniformity base indices.
pub const UNIFORMITY_CAP: u64 = 1_000_000_000;
/// Shrink factor applied to `d(x, y)` when picking a separation level.
pub const SEPARATION_SHRINK: f64 = 1e-6;

/// `lhs <= rhs` up to a relative slack `tol * max(1, |rhs|)`.
#[inline]
pub fn leq(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * rhs.abs().max(1.0)
}
