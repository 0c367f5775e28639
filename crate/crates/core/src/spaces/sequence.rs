//! Finite-trace sequence analysis.
//!
//! All statements are about the trace as given: "the tail from index `N`
//! stays within `ε`" for each `ε` in a schedule. Nothing here claims a limit.

use serde::Serialize;

use super::DistanceOracle;
use crate::actions::Action;
use crate::error::{Error, Result};

/// Least 1-based index `N` whose tail satisfies the bound, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsIndex {
    pub eps: f64,
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyReport {
    pub length: usize,
    pub table: Vec<EpsIndex>,
}

fn check_schedule(eps: &[f64]) -> Result<()> {
    if let Some(e) = eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::input(format!("epsilon schedule entries must be positive, got {e}")));
    }
    Ok(())
}

/// For each `ε`, the least `N` such that `d(x_n, x_m) < ε` for all
/// `m >= n >= N`. The tail must contain at least two terms, so `N` ranges
/// over `1..=len-1`.
pub fn is_cauchy<O: DistanceOracle>(oracle: &O, trace: &[O::Point], eps: &[f64]) -> Result<CauchyReport> {
    if trace.len() < 2 {
        return Err(Error::input("Cauchy analysis needs a trace of length >= 2"));
    }
    check_schedule(eps)?;
    let len = trace.len();
    // tail_max[n] = max over n <= i <= j < len of d(x_i, x_j)
    let mut tail_max = vec![0.0f64; len + 1];
    for n in (0..len).rev() {
        let row = (n..len).map(|m| oracle.dist(&trace[n], &trace[m])).fold(0.0, f64::max);
        tail_max[n] = tail_max[n + 1].max(row);
    }
    let table = eps
        .iter()
        .map(|&e| EpsIndex {
            eps: e,
            index: (0..len - 1).find(|&n| tail_max[n] < e).map(|n| n + 1),
        })
        .collect();
    Ok(CauchyReport { length: len, table })
}

/// For each `ε`, the least `N` with `values[n] < ε` for every `n >= N`.
fn eventual_index(values: &[f64], eps: &[f64]) -> Vec<EpsIndex> {
    let mut suffix_max = vec![0.0f64; values.len() + 1];
    for n in (0..values.len()).rev() {
        suffix_max[n] = suffix_max[n + 1].max(values[n]);
    }
    eps.iter()
        .map(|&e| EpsIndex {
            eps: e,
            index: (0..values.len()).find(|&n| suffix_max[n] < e).map(|n| n + 1),
        })
        .collect()
}

/// Whether `x` and `y` can both be limits of one trace at resolution `ε`:
/// if `d(x_n, x) < ε` and `d(x_n, y) < ε` then `d(x, y) <= θ(ε, ε)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessCheck {
    pub eps: f64,
    pub candidate_distance: f64,
    pub bound: f64,
    pub both_admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    /// `d(x_n, x)` for the first trace.
    pub distances_x: Vec<f64>,
    pub converges_x: Vec<EpsIndex>,
    pub converges_y: Vec<EpsIndex>,
    /// `|d(x_n, y_n) − d(x, y)|`, over the common prefix of both traces.
    pub distance_gap: Vec<f64>,
    pub distance_continuity: Vec<EpsIndex>,
    pub uniqueness: UniquenessCheck,
}

/// Convergence of each trace to its candidate limit, continuity of the
/// distance along the paired traces, and the uniqueness bound for `x`, `y`
/// as joint limits of the first trace at the finest scheduled `ε`.
pub fn check_limit_behavior<O: DistanceOracle>(
    oracle: &O,
    tr_x: &[O::Point],
    tr_y: &[O::Point],
    x: &O::Point,
    y: &O::Point,
    a: &Action,
    eps: &[f64],
) -> Result<LimitReport> {
    if tr_x.is_empty() || tr_y.is_empty() {
        return Err(Error::input("limit analysis needs nonempty traces"));
    }
    if eps.is_empty() {
        return Err(Error::input("limit analysis needs a nonempty epsilon schedule"));
    }
    check_schedule(eps)?;
    let distances_x: Vec<f64> = tr_x.iter().map(|p| oracle.dist(p, x)).collect();
    let distances_y: Vec<f64> = tr_y.iter().map(|p| oracle.dist(p, y)).collect();
    let dxy = oracle.dist(x, y);
    let distance_gap: Vec<f64> = tr_x
        .iter()
        .zip(tr_y)
        .map(|(p, q)| (oracle.dist(p, q) - dxy).abs())
        .collect();
    let finest = eps.iter().copied().fold(f64::INFINITY, f64::min);
    let bound = a.eval(finest, finest)?;
    Ok(LimitReport {
        converges_x: eventual_index(&distances_x, eps),
        converges_y: eventual_index(&distances_y, eps),
        distance_continuity: eventual_index(&distance_gap, eps),
        distances_x,
        distance_gap,
        uniqueness: UniquenessCheck {
            eps: finest,
            candidate_distance: dxy,
            bound,
            both_admissible: dxy <= bound,
        },
    })
}
