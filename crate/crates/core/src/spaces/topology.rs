//! Open balls and the constructive witnesses behind the induced topology.
//!
//! Every witness is verified by enumerating the finite space before it is
//! returned; a failed verification is an [`Error::Invariant`].

use serde::Serialize;

use super::FiniteSpace;
use crate::actions::{eta, image_contains, Action, InverseMode};
use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
    pub members: Vec<usize>,
    /// `false` when the radius lies outside the image of the action.
    pub radius_in_image: bool,
}

impl Ball {
    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn is_subset_of(&self, other: &Ball) -> bool {
        self.members.iter().all(|&p| other.contains(p))
    }
}

/// `{y : d(center, y) < r}`.
pub fn open_ball(sp: &FiniteSpace, a: &Action, center: usize, r: f64) -> Result<Ball> {
    sp.check_index(center)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::input(format!("ball radius must be positive and finite, got {r}")));
    }
    Ok(Ball {
        center,
        radius: r,
        members: ball_members(sp, center, r),
        radius_in_image: image_contains(a, r)?.contains,
    })
}

fn ball_members(sp: &FiniteSpace, center: usize, r: f64) -> Vec<usize> {
    (0..sp.len()).filter(|&y| sp.d(center, y) < r).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpennessWitness {
    pub center: usize,
    pub radius: f64,
    pub point: usize,
    /// `δ = η(r, d(center, point))`.
    pub delta: f64,
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
}

/// For `y ∈ B(center, r)` returns `δ` with `B(y, δ) ⊆ B(center, r)`.
pub fn openness_witness(
    sp: &FiniteSpace,
    a: &Action,
    center: usize,
    r: f64,
    y: usize,
    mode: InverseMode,
) -> Result<OpennessWitness> {
    let outer = open_ball(sp, a, center, r)?;
    sp.check_index(y)?;
    if !outer.contains(y) {
        return Err(Error::Precondition(format!(
            "point `{}` is not in the ball of radius {r} around `{}`",
            sp.label(y),
            sp.label(center)
        )));
    }
    let delta = eta(a, r, sp.d(center, y), mode)?;
    if delta <= 0.0 {
        return Err(Error::Invariant(format!(
            "action `{}`: inverse at ({r}, {}) is not positive",
            a.name(),
            sp.d(center, y)
        )));
    }
    let inner = ball_members(sp, y, delta);
    if let Some(&z) = inner.iter().find(|&&z| !outer.contains(z)) {
        return Err(Error::Invariant(format!(
            "action `{}`: `{}` lies in B(`{}`, {delta}) but not in B(`{}`, {r})",
            a.name(),
            sp.label(z),
            sp.label(y),
            sp.label(center)
        )));
    }
    Ok(OpennessWitness {
        center,
        radius: r,
        point: y,
        delta,
        inner,
        outer: outer.members,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationWitness {
    pub x: usize,
    pub y: usize,
    /// Level `α < d(x, y)` with `θ(r, s) = α`.
    pub alpha: f64,
    pub r: f64,
    pub s: f64,
    pub ball_x: Vec<usize>,
    pub ball_y: Vec<usize>,
}

/// Disjoint balls `B(x, r)` and `B(y, s)` around two distinct points.
pub fn separation_witness(sp: &FiniteSpace, a: &Action, x: usize, y: usize) -> Result<SeparationWitness> {
    sp.check_index(x)?;
    sp.check_index(y)?;
    if x == y {
        return Err(Error::Precondition("separation needs two distinct points".into()));
    }
    let d = sp.d(x, y);
    if d <= 0.0 {
        return Err(Error::Precondition(format!(
            "points `{}` and `{}` are at distance 0",
            sp.label(x),
            sp.label(y)
        )));
    }
    let shrink = 1.0 - tol::SEPARATION_SHRINK;
    let mut alpha = shrink * d;
    let probe = image_contains(a, alpha)?;
    if !probe.contains {
        match probe.supremum {
            Some(sup) if sup.is_finite() && sup > 0.0 => alpha = alpha.min(shrink * sup),
            _ => {}
        }
        if !image_contains(a, alpha)?.contains {
            return Err(Error::NotInImage {
                action: a.name().to_string(),
                value: alpha,
                supremum: probe.supremum,
            });
        }
    }
    let s = alpha / 2.0;
    let r = eta(a, alpha, s, InverseMode::Existence)?;
    let ball_x = ball_members(sp, x, r);
    let ball_y = ball_members(sp, y, s);
    if let Some(&z) = ball_x.iter().find(|z| ball_y.contains(z)) {
        return Err(Error::Invariant(format!(
            "action `{}`: `{}` lies in both B(`{}`, {r}) and B(`{}`, {s})",
            a.name(),
            sp.label(z),
            sp.label(x),
            sp.label(y)
        )));
    }
    Ok(SeparationWitness {
        x,
        y,
        alpha,
        r,
        s,
        ball_x,
        ball_y,
    })
}

/// Smallest `m > 2n` with `θ(1/m, 1/m) < 1/n`.
///
/// The diagonal is decreasing in `m`, so the search gallops upward from
/// `2n + 1` and then bisects.
pub fn uniformity_base_index(a: &Action, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::input("uniformity index needs n >= 1"));
    }
    let target = 1.0 / n as f64;
    let ok = |m: u64| {
        let h = 1.0 / m as f64;
        a.eval_unchecked(h, h) < target
    };
    let start = 2 * n + 1;
    if ok(start) {
        return Ok(start);
    }
    let (mut lo, mut hi) = (start, start);
    let mut step = 1u64;
    while !ok(hi) {
        lo = hi;
        if hi >= tol::UNIFORMITY_CAP {
            return Err(Error::Invariant(format!(
                "action `{}`: θ(1/m, 1/m) >= 1/{n} for all m up to {}; θ is not continuous at zero",
                a.name(),
                tol::UNIFORMITY_CAP
            )));
        }
        hi = (hi + step).min(tol::UNIFORMITY_CAP);
        step *= 2;
    }
    // ok(hi), !ok(lo)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `n` with `B(x, 1/n) ⊆ B(x, r)`, verified by enumeration.
pub fn local_base_index(sp: &FiniteSpace, a: &Action, x: usize, r: f64) -> Result<u64> {
    let outer = open_ball(sp, a, x, r)?;
    let mut n = (1.0 / r).ceil().max(1.0) as u64;
    loop {
        let inner = ball_members(sp, x, 1.0 / n as f64);
        if inner.iter().all(|&p| outer.contains(p)) {
            return Ok(n);
        }
        n += 1;
    }
}
