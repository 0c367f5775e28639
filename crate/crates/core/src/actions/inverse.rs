//! Image membership and the inverse action `η`.
//!
//! Both rely on strict monotonicity: `t ↦ θ(t, s)` and the diagonal
//! `t ↦ θ(t, t)` are increasing and continuous, so a bracket `[lo, hi]` with
//! `θ(lo) <= target <= θ(hi)` can be bisected without sign bookkeeping.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Action;
use crate::error::{Error, Result};
use crate::tol;

/// Where the inverse action looks for its root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseMode {
    /// `t ∈ [0, r]`.
    #[default]
    Strict,
    /// `t ∈ [0, ∞)`.
    Existence,
}

impl FromStr for InverseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(InverseMode::Strict),
            "existence" => Ok(InverseMode::Existence),
            other => Err(Error::input(format!("unknown inverse mode `{other}` (strict|existence)"))),
        }
    }
}

impl fmt::Display for InverseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InverseMode::Strict => "strict",
            InverseMode::Existence => "existence",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageProbe {
    pub contains: bool,
    /// `t` with `θ(t, t) = alpha` (up to bisection precision).
    pub witness: Option<f64>,
    /// Set when the diagonal was still growing at the search cap.
    pub approximate: bool,
    /// Attained or known supremum when `contains` is false.
    pub supremum: Option<f64>,
}

/// Tests `alpha ∈ Im(θ)` through the diagonal `t ↦ θ(t, t)`.
pub fn image_contains(a: &Action, alpha: f64) -> Result<ImageProbe> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::input(format!("image probe needs a finite alpha >= 0, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(ImageProbe {
            contains: true,
            witness: Some(0.0),
            approximate: false,
            supremum: None,
        });
    }
    if let Some(sup) = a.image_sup() {
        if alpha >= sup {
            return Ok(ImageProbe {
                contains: false,
                witness: None,
                approximate: false,
                supremum: Some(sup),
            });
        }
    }
    let diag = |t: f64| a.eval_unchecked(t, t);
    let mut hi = 1.0;
    loop {
        let v = diag(hi);
        if v >= alpha {
            break;
        }
        if hi >= tol::IMAGE_SEARCH_CAP {
            // doubling t must still move the value beyond rounding noise
            let growing = v > diag(hi / 2.0) * (1.0 + tol::CMP);
            return Ok(if growing {
                ImageProbe {
                    contains: true,
                    witness: Some(hi),
                    approximate: true,
                    supremum: None,
                }
            } else {
                ImageProbe {
                    contains: false,
                    witness: None,
                    approximate: false,
                    supremum: Some(v),
                }
            });
        }
        hi = (hi * 2.0).min(tol::IMAGE_SEARCH_CAP);
    }
    let witness = bisect_increasing(diag, alpha, 0.0, hi);
    Ok(ImageProbe {
        contains: true,
        witness: Some(witness),
        approximate: false,
        supremum: None,
    })
}

/// The inverse action: `t` with `θ(t, s) = r`.
///
/// Uses the closed form when the action has one, after cross-checking it
/// against [`eta_bisect`].
pub fn eta(a: &Action, r: f64, s: f64, mode: InverseMode) -> Result<f64> {
    let bisected = eta_bisect(a, r, s, mode)?;
    let Some(closed) = a.closed_inverse(r, s) else {
        return Ok(bisected);
    };
    let closed = closed.max(0.0);
    let scale = r.max(1.0);
    let agrees = (closed - bisected).abs() <= tol::CLOSED_FORM * scale;
    let solves = (a.eval_unchecked(closed, s) - r).abs() <= tol::ETA * scale;
    if !(agrees || solves) {
        return Err(Error::InverseMismatch {
            action: a.name().to_string(),
            r,
            s,
            closed,
            bisected,
        });
    }
    if mode == InverseMode::Strict && closed > r {
        // bisection found a root in [0, r]; the closed form overshot by rounding
        return Ok(bisected);
    }
    Ok(closed)
}

/// The inverse action computed purely by bisection on `t ↦ θ(t, s)`.
pub fn eta_bisect(a: &Action, r: f64, s: f64, mode: InverseMode) -> Result<f64> {
    for v in [r, s] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::input(format!(
                "inverse action takes finite nonnegative arguments, got ({r}, {s})"
            )));
        }
    }
    if s > r {
        return Err(Error::Domain { r, s });
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let probe = image_contains(a, r)?;
    if !probe.contains {
        return Err(Error::NotInImage {
            action: a.name().to_string(),
            value: r,
            supremum: probe.supremum,
        });
    }

    let g = |t: f64| a.eval_unchecked(t, s);
    let slack = tol::ETA * r.max(1.0);
    let at_zero = g(0.0);
    if at_zero == r {
        return Ok(0.0);
    }
    if at_zero > r {
        return Err(Error::NoRoot {
            action: a.name().to_string(),
            r,
            s,
        });
    }

    let hi = match mode {
        InverseMode::Strict => {
            let v = g(r);
            if v < r - slack {
                return Err(Error::StrictRange {
                    action: a.name().to_string(),
                    r,
                    s,
                });
            }
            if v <= r {
                return Ok(r);
            }
            r
        }
        InverseMode::Existence => {
            let mut hi = r.max(1.0);
            while g(hi) < r {
                if hi >= tol::BRACKET_CAP {
                    return Err(Error::NoRoot {
                        action: a.name().to_string(),
                        r,
                        s,
                    });
                }
                hi = (hi * 2.0).min(tol::BRACKET_CAP);
            }
            hi
        }
    };

    let t = bisect_increasing(g, r, 0.0, hi);
    let residual = (g(t) - r).abs();
    if residual > slack {
        return Err(Error::NotConverged {
            action: a.name().to_string(),
            r,
            s,
            residual,
        });
    }
    Ok(t)
}

/// Bisection for an increasing `g` with `g(lo) <= target <= g(hi)`.
///
/// Runs until the bracket collapses to adjacent floats (or the iteration cap)
/// and returns whichever end has the smaller residual.
fn bisect_increasing(g: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    if g(hi) == target {
        return hi;
    }
    for _ in 0..tol::ETA_MAX_ITER {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == target {
            return mid;
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (g(lo) - target).abs() <= (g(hi) - target).abs() {
        lo
    } else {
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn subtraction_for_plain_sum() {
        assert_eq!(eta(&Action::sum(), 10.0, 4.0, InverseMode::Strict).unwrap(), 6.0);
        assert!(close(eta_bisect(&Action::sum(), 10.0, 4.0, InverseMode::Strict).unwrap(), 6.0, 1e-12));
    }

    #[test]
    fn euclidean_root() {
        let a = Action::root_sum_power(2.0).unwrap();
        assert!(close(eta(&a, 5.0, 4.0, InverseMode::Strict).unwrap(), 3.0, 1e-12));
        assert!(close(eta_bisect(&a, 5.0, 4.0, InverseMode::Strict).unwrap(), 3.0, 1e-11));
    }

    #[test]
    fn sum_plus_prod_closed_form_and_bisection() {
        let a = Action::sum_plus_prod();
        // oracle: (r - s) / (1 + s)
        let oracle = (20.0 - 6.0) / (1.0 + 6.0);
        assert_eq!(oracle, 2.0);
        assert!(close(eta(&a, 20.0, 6.0, InverseMode::Strict).unwrap(), 2.0, 1e-12));
        assert!(close(eta_bisect(&a, 20.0, 6.0, InverseMode::Strict).unwrap(), 2.0, 1e-12));
    }

    #[test]
    fn strict_range_violation_for_quarter_sum() {
        let a = Action::k_sum(0.25).unwrap();
        let err = eta(&a, 1.0, 0.1, InverseMode::Strict).unwrap_err();
        assert!(matches!(err, Error::StrictRange { ref action, .. } if action == a.name()));
        let t = eta(&a, 1.0, 0.1, InverseMode::Existence).unwrap();
        assert!(close(t, 3.9, 1e-12));
        assert!(close(eta_bisect(&a, 1.0, 0.1, InverseMode::Existence).unwrap(), 3.9, 1e-11));
    }

    #[test]
    fn domain_and_image_errors() {
        let a = Action::sum();
        assert_eq!(eta(&a, 1.0, 2.0, InverseMode::Strict).unwrap_err(), Error::Domain { r: 1.0, s: 2.0 });
        let p = Action::prod_over_one_plus_prod();
        assert!(matches!(eta(&p, 1.2, 0.5, InverseMode::Existence), Err(Error::NotInImage { .. })));
        // θ(t, 0) = 0 never reaches r > 0
        assert!(matches!(eta(&p, 0.5, 0.0, InverseMode::Existence), Err(Error::NoRoot { .. })));
        assert_eq!(eta(&a, 0.0, 0.0, InverseMode::Strict).unwrap(), 0.0);
    }

    #[test]
    fn image_of_saturating_product() {
        let p = Action::prod_over_one_plus_prod();
        let half = image_contains(&p, 0.5).unwrap();
        assert!(half.contains);
        assert_eq!(half.witness, Some(1.0));
        let big = image_contains(&p, 1.2).unwrap();
        assert!(!big.contains);
        assert_eq!(big.supremum, Some(1.0));
        assert!(!image_contains(&p, 1.0).unwrap().contains);
        let q = image_contains(&p, 0.3).unwrap();
        let t = q.witness.unwrap();
        assert!(close(p.eval(t, t).unwrap(), 0.3, 1e-15));
    }

    #[test]
    fn image_probe_for_unknown_supremum() {
        let bounded = crate::actions::action_from_generator("sat", |t| t / (1.0 + t), 0.5, None).unwrap();
        assert!(image_contains(&bounded, 0.4).unwrap().contains);
        let out = image_contains(&bounded, 0.6).unwrap();
        assert!(!out.contains);
        assert!(close(out.supremum.unwrap(), 0.5, 1e-12));
        assert!(image_contains(&Action::sum(), 0.0).unwrap().contains);
    }

    #[test]
    fn regular_inverse_at_diagonal() {
        for a in [Action::sum(), Action::sum_plus_sqrt_prod(), Action::sum_times_one_plus_prod()] {
            assert_eq!(eta(&a, 7.5, 7.5, InverseMode::Strict).unwrap(), 0.0, "{}", a.name());
        }
        let half = Action::k_sum(0.5).unwrap();
        assert!(close(eta(&half, 7.5, 7.5, InverseMode::Strict).unwrap(), 7.5, 1e-12));
    }

    #[test]
    fn mode_parses() {
        assert_eq!("strict".parse::<InverseMode>().unwrap(), InverseMode::Strict);
        assert_eq!("existence".parse::<InverseMode>().unwrap(), InverseMode::Existence);
        assert!("loose".parse::<InverseMode>().is_err());
    }
}
