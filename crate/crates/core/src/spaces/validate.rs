use serde::Serialize;

use super::FiniteSpace;
use crate::actions::Action;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `d(x, y) = 0` iff `x = y`.
    Identity,
    Symmetry,
    /// `d(x, y) <= θ(d(x, z), d(z, y))`, or `+` for plain metrics.
    Triangle,
}

/// One violated axiom instance. For triangle violations `lhs = d(i, j)` and
/// `rhs = θ(d(i, k), d(k, j))`; for identity/symmetry `k` is absent and
/// `lhs`/`rhs` hold `d(i, j)` and the expected value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricViolation {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub labels: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    /// Action name, or `"plain"` for the ordinary triangle inequality.
    pub action: String,
    pub points: usize,
    pub tolerance: f64,
    pub identity_holds: bool,
    pub symmetry_holds: bool,
    pub triangle_holds: bool,
    /// Triangle violations grouped by unordered endpoint pair and midpoint.
    pub triangle_families: usize,
    pub violations: Vec<MetricViolation>,
}

impl MetricReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn triangle_violations(&self) -> impl Iterator<Item = &MetricViolation> {
        self.violations.iter().filter(|v| v.kind == ViolationKind::Triangle)
    }
}

/// Checks identity, symmetry and the relaxed triangle inequality over all
/// ordered triples, including those whose midpoint is an endpoint.
pub fn validate_theta_metric(sp: &FiniteSpace, a: &Action) -> MetricReport {
    validate_theta_metric_with_tol(sp, a, tol::CMP)
}

pub fn validate_theta_metric_with_tol(sp: &FiniteSpace, a: &Action, tolerance: f64) -> MetricReport {
    validate_with(sp, a.name(), tolerance, |x, y| a.eval_unchecked(x, y))
}

/// Ordinary triangle inequality `d(i, j) <= d(i, k) + d(k, j)`.
pub fn validate_plain_metric(sp: &FiniteSpace) -> MetricReport {
    validate_with(sp, "plain", tol::CMP, |x, y| x + y)
}

fn validate_with(sp: &FiniteSpace, name: &str, tolerance: f64, combine: impl Fn(f64, f64) -> f64) -> MetricReport {
    let n = sp.len();
    let labels = |idx: &[usize]| idx.iter().map(|&i| sp.label(i).to_string()).collect::<Vec<_>>();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in 0..n {
            let d = sp.d(i, j);
            if (i == j) != (d == 0.0) {
                violations.push(MetricViolation {
                    kind: ViolationKind::Identity,
                    i,
                    j,
                    k: None,
                    labels: labels(&[i, j]),
                    lhs: d,
                    rhs: if i == j { 0.0 } else { f64::MIN_POSITIVE },
                });
            }
            if i < j && d != sp.d(j, i) {
                violations.push(MetricViolation {
                    kind: ViolationKind::Symmetry,
                    i,
                    j,
                    k: None,
                    labels: labels(&[i, j]),
                    lhs: d,
                    rhs: sp.d(j, i),
                });
            }
        }
    }

    let mut families = std::collections::BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = sp.d(i, j);
            for k in 0..n {
                let rhs = combine(sp.d(i, k), sp.d(k, j));
                if !tol::leq(lhs, rhs, tolerance) {
                    families.insert((i.min(j), i.max(j), k));
                    violations.push(MetricViolation {
                        kind: ViolationKind::Triangle,
                        i,
                        j,
                        k: Some(k),
                        labels: labels(&[i, j, k]),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }

    violations.sort_by(|a, b| {
        (a.i, a.j, a.k.map_or(0, |k| k + 1), a.kind).cmp(&(b.i, b.j, b.k.map_or(0, |k| k + 1), b.kind))
    });
    let holds = |kind| !violations.iter().any(|v: &MetricViolation| v.kind == kind);
    MetricReport {
        action: name.to_string(),
        points: n,
        tolerance,
        identity_holds: holds(ViolationKind::Identity),
        symmetry_holds: holds(ViolationKind::Symmetry),
        triangle_holds: holds(ViolationKind::Triangle),
        triangle_families: families.len(),
        violations,
    }
}
