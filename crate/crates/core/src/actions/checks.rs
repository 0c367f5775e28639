//! Sampled axiom checks for actions and their inverses.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{eta, eta_bisect, Action, Compliance, InverseMode};
use crate::error::Result;
use crate::sampler::Sampler;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `θ(0, 0) = 0` and `θ(s, t) = θ(t, s)`.
    ZeroAndSymmetry,
    /// `θ(s, t) < θ(u, v)` whenever one coordinate grows strictly and the
    /// other does not shrink.
    StrictMonotonicity,
    /// `θ(t, s) = r` solvable with `t ∈ [0, r]`.
    SolvabilityStrict,
    /// `θ(t, s) = r` solvable with `t >= 0`.
    SolvabilityExistence,
    /// `θ(s, 0) <= s`.
    BoundedByArgument,
    /// `η(0, 0) = 0`.
    InverseAtZero,
    /// `θ(η(r, s), s) = r`.
    InverseConsistency,
    /// `η(r, r) = 0`.
    Regularity,
    /// `θ(x, b) <= c ⇒ x <= η(c, b)`.
    InverseUpperBound,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConditionStatus {
    pub checked: usize,
    pub violations: usize,
}

impl ConditionStatus {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// A concrete counterexample. `inputs` and `values` depend on the condition:
///
/// | condition | inputs | values |
/// |---|---|---|
/// | zero/symmetry | `[s, t]` | `[θ(s,t), θ(t,s)]` |
/// | monotonicity | `[s, t, u, v]` | `[θ(s,t), θ(u,v)]` |
/// | solvability | `[r, s]` | `[θ(0,s), θ(r,s)]` |
/// | bounded | `[s]` | `[θ(s,0)]` |
/// | inverse consistency | `[r, s]` | `[η, θ(η,s)]` |
/// | regularity | `[r]` | `[η(r,r)]` |
/// | upper bound | `[x, b, c]` | `[θ(x,b), η(c,b)]` |
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub condition: Condition,
    pub inputs: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    fn new(condition: Condition, inputs: Vec<f64>, values: Vec<f64>) -> Self {
        Self {
            condition,
            inputs,
            values,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Re-evaluates the witness; `true` if it is still a violation.
    pub fn replays(&self, a: &Action) -> bool {
        let th = |s: f64, t: f64| a.eval_unchecked(s, t);
        let x = &self.inputs;
        match self.condition {
            Condition::ZeroAndSymmetry => {
                if x[0] == 0.0 && x[1] == 0.0 {
                    th(0.0, 0.0) != 0.0
                } else {
                    th(x[0], x[1]).to_bits() != th(x[1], x[0]).to_bits()
                }
            }
            Condition::StrictMonotonicity => th(x[0], x[1]) >= th(x[2], x[3]),
            Condition::SolvabilityStrict => eta_bisect(a, x[0], x[1], InverseMode::Strict).is_err(),
            Condition::SolvabilityExistence => eta_bisect(a, x[0], x[1], InverseMode::Existence).is_err(),
            Condition::BoundedByArgument => th(x[0], 0.0) > x[0],
            Condition::InverseAtZero => eta(a, 0.0, 0.0, InverseMode::Strict) != Ok(0.0),
            Condition::InverseConsistency => match eta(a, x[0], x[1], InverseMode::Existence) {
                Ok(t) => (th(t, x[1]) - x[0]).abs() > tol::ETA * x[0].max(1.0),
                Err(_) => true,
            },
            Condition::Regularity => match eta(a, x[0], x[0], InverseMode::Existence) {
                Ok(t) => t > tol::REGULAR,
                Err(_) => true,
            },
            Condition::InverseUpperBound => {
                th(x[0], x[1]) <= x[2]
                    && match eta(a, x[2], x[1], InverseMode::Existence) {
                        Ok(e) => x[0] > e + tol::INVERSE_BOUND,
                        Err(_) => true,
                    }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub action: String,
    pub sampler: Sampler,
    pub conditions: BTreeMap<Condition, ConditionStatus>,
    pub violations: Vec<Witness>,
}

impl AxiomReport {
    fn new(a: &Action, sp: &Sampler) -> Self {
        Self {
            action: a.name().to_string(),
            sampler: *sp,
            conditions: BTreeMap::new(),
            violations: Vec::new(),
        }
    }

    fn record(&mut self, condition: Condition, violation: Option<Witness>) {
        let st = self.conditions.entry(condition).or_default();
        st.checked += 1;
        if let Some(w) = violation {
            st.violations += 1;
            self.violations.push(w);
        }
    }

    pub fn status(&self, condition: Condition) -> ConditionStatus {
        self.conditions.get(&condition).copied().unwrap_or_default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Whether the defining conditions hold with solvability read in the
    /// existence sense.
    pub fn compliant_existence(&self) -> bool {
        [
            Condition::ZeroAndSymmetry,
            Condition::StrictMonotonicity,
            Condition::SolvabilityExistence,
            Condition::BoundedByArgument,
        ]
        .iter()
        .all(|c| self.status(*c).holds())
    }

    pub fn merge(&mut self, other: AxiomReport) {
        for (c, st) in other.conditions {
            let e = self.conditions.entry(c).or_default();
            e.checked += st.checked;
            e.violations += st.violations;
        }
        self.violations.extend(other.violations);
    }
}

// Per-condition RNG streams.
const STREAM_SYMMETRY: u64 = 1;
const STREAM_MONOTONE: u64 = 2;
const STREAM_SOLVE: u64 = 3;
const STREAM_BOUND: u64 = 4;
const STREAM_INVERSE: u64 = 5;
const STREAM_REGULAR: u64 = 6;
const STREAM_UPPER: u64 = 7;

/// Samples an image value `θ(a, b)` with `a, b` uniform on `[0, cap]`.
fn sample_image_value(a: &Action, rng: &mut impl Rng, cap: f64) -> f64 {
    a.eval_unchecked(rng.gen_range(0.0..=cap), rng.gen_range(0.0..=cap))
}

/// Samples `s ∈ (0, r]`.
fn sample_below(rng: &mut impl Rng, r: f64) -> f64 {
    r * (1.0 - rng.gen::<f64>())
}

/// Checks the defining conditions of a B-action on a seeded sample.
///
/// Solvability is evaluated twice: with the root restricted to `[0, r]` and
/// with only `t >= 0` required. Strict monotonicity uses exact comparison,
/// so ties are violations.
pub fn check_action_axioms(a: &Action, sp: &Sampler) -> Result<AxiomReport> {
    sp.validate()?;
    let mut rep = AxiomReport::new(a, sp);
    let th = |s: f64, t: f64| a.eval_unchecked(s, t);
    let grid = sp.grid();
    let cap = sp.domain_cap;

    // zero and symmetry
    let z = th(0.0, 0.0);
    rep.record(
        Condition::ZeroAndSymmetry,
        (z != 0.0).then(|| Witness::new(Condition::ZeroAndSymmetry, vec![0.0, 0.0], vec![z, z])),
    );
    let mut rng = sp.rng(STREAM_SYMMETRY);
    let random_pairs = (0..sp.random_points).map(|_| (rng.gen_range(0.0..=cap), rng.gen_range(0.0..=cap)));
    let grid_pairs = grid.iter().flat_map(|&s| grid.iter().map(move |&t| (s, t)));
    for (s, t) in grid_pairs.chain(random_pairs) {
        let (l, r) = (th(s, t), th(t, s));
        rep.record(
            Condition::ZeroAndSymmetry,
            (l.to_bits() != r.to_bits()).then(|| Witness::new(Condition::ZeroAndSymmetry, vec![s, t], vec![l, r])),
        );
    }

    // strict monotonicity: consecutive grid steps in the first argument
    // (symmetry covers the second), then random comparable pairs
    for &t in &grid {
        for w in grid.windows(2) {
            let (lo, hi) = (th(w[0], t), th(w[1], t));
            rep.record(
                Condition::StrictMonotonicity,
                (lo >= hi).then(|| Witness::new(Condition::StrictMonotonicity, vec![w[0], t, w[1], t], vec![lo, hi])),
            );
        }
    }
    let mut rng = sp.rng(STREAM_MONOTONE);
    for _ in 0..sp.random_points {
        let s = rng.gen_range(0.0..=cap);
        let t = rng.gen_range(0.0..=cap);
        let u = s + rng.gen_range(1e-3..=1.0) * cap;
        let v = if rng.gen_bool(0.5) { t } else { t + rng.gen_range(0.0..=1.0) * cap };
        let (lo, hi) = (th(s, t), th(u, v));
        rep.record(
            Condition::StrictMonotonicity,
            (lo >= hi).then(|| Witness::new(Condition::StrictMonotonicity, vec![s, t, u, v], vec![lo, hi])),
        );
    }

    // solvability, both readings
    let mut rng = sp.rng(STREAM_SOLVE);
    let grid_rs = grid
        .iter()
        .flat_map(|&x| grid.iter().map(move |&y| (x, y)))
        .map(|(x, y)| th(x, y))
        .filter(|r| *r > 0.0)
        .map(|r| (r, r))
        .collect::<Vec<_>>();
    let random_rs = (0..sp.random_points)
        .map(|_| {
            let r = sample_image_value(a, &mut rng, cap);
            (r, sample_below(&mut rng, r))
        })
        .filter(|(r, _)| *r > 0.0)
        .collect::<Vec<_>>();
    for (r, s) in grid_rs.into_iter().chain(random_rs) {
        let values = vec![th(0.0, s), th(r, s)];
        for (cond, mode) in [
            (Condition::SolvabilityStrict, InverseMode::Strict),
            (Condition::SolvabilityExistence, InverseMode::Existence),
        ] {
            let res = eta_bisect(a, r, s, mode);
            rep.record(
                cond,
                res.err()
                    .map(|e| Witness::new(cond, vec![r, s], values.clone()).with_note(e.to_string())),
            );
        }
    }

    // bounded by argument
    let mut rng = sp.rng(STREAM_BOUND);
    let random_s = (0..sp.random_points).map(|_| rng.gen_range(0.0..=cap));
    for s in grid.iter().copied().chain(random_s).filter(|s| *s > 0.0) {
        let v = th(s, 0.0);
        rep.record(
            Condition::BoundedByArgument,
            (v > s).then(|| Witness::new(Condition::BoundedByArgument, vec![s], vec![v])),
        );
    }

    Ok(rep)
}

/// Checks the inverse action on a seeded sample and records the regularity
/// and strict-range flags on `a`.
///
/// Inverse consistency, regularity and the upper-bound property use the
/// existence reading of `η`; the strict-range flag records whether every
/// sampled pair also had its root in `[0, r]`.
pub fn check_eta_properties(a: &mut Action, sp: &Sampler) -> Result<AxiomReport> {
    sp.validate()?;
    let mut rep = AxiomReport::new(a, sp);
    let cap = sp.domain_cap;
    let th = |s: f64, t: f64| a.eval_unchecked(s, t);

    let z = eta(a, 0.0, 0.0, InverseMode::Strict);
    rep.record(
        Condition::InverseAtZero,
        (z != Ok(0.0)).then(|| Witness::new(Condition::InverseAtZero, vec![0.0, 0.0], vec![z.unwrap_or(f64::NAN)])),
    );

    let mut strict_ok = true;
    let mut rng = sp.rng(STREAM_INVERSE);
    for _ in 0..sp.random_points {
        let r = sample_image_value(a, &mut rng, cap);
        if r == 0.0 {
            continue;
        }
        let s = sample_below(&mut rng, r);
        strict_ok &= eta(a, r, s, InverseMode::Strict).is_ok();
        let w = match eta(a, r, s, InverseMode::Existence) {
            Ok(t) => {
                let back = th(t, s);
                ((back - r).abs() > tol::ETA * r.max(1.0))
                    .then(|| Witness::new(Condition::InverseConsistency, vec![r, s], vec![t, back]))
            }
            Err(e) => Some(
                Witness::new(Condition::InverseConsistency, vec![r, s], vec![f64::NAN, f64::NAN])
                    .with_note(e.to_string()),
            ),
        };
        rep.record(Condition::InverseConsistency, w);
    }

    let mut rng = sp.rng(STREAM_REGULAR);
    let regular_samples = sp.random_points.clamp(1, 1_000);
    for _ in 0..regular_samples {
        let r = sample_image_value(a, &mut rng, cap);
        if r == 0.0 {
            continue;
        }
        let w = match eta(a, r, r, InverseMode::Existence) {
            Ok(t) => (t > tol::REGULAR).then(|| Witness::new(Condition::Regularity, vec![r], vec![t])),
            Err(e) => Some(Witness::new(Condition::Regularity, vec![r], vec![f64::NAN]).with_note(e.to_string())),
        };
        rep.record(Condition::Regularity, w);
    }

    let mut rng = sp.rng(STREAM_UPPER);
    for _ in 0..sp.random_points {
        let c = sample_image_value(a, &mut rng, cap);
        if c == 0.0 {
            continue;
        }
        let b = c * rng.gen::<f64>();
        let w = match eta(a, c, b, InverseMode::Existence) {
            Ok(e) => {
                let x = rng.gen_range(0.0..=2.0 * e.max(c));
                let lhs = th(x, b);
                (lhs <= c && x > e + tol::INVERSE_BOUND)
                    .then(|| Witness::new(Condition::InverseUpperBound, vec![x, b, c], vec![lhs, e]))
            }
            Err(err) => {
                // η undefined: the bound fails whenever some x has θ(x, b) <= c
                let x = rng.gen_range(0.0..=2.0 * c);
                let lhs = th(x, b);
                (lhs <= c).then(|| {
                    Witness::new(Condition::InverseUpperBound, vec![x, b, c], vec![lhs, f64::NAN])
                        .with_note(err.to_string())
                })
            }
        };
        rep.record(Condition::InverseUpperBound, w);
    }

    let regular = Compliance::from_bool(rep.status(Condition::Regularity).holds());
    a.set_flags(regular, Compliance::from_bool(strict_ok));
    Ok(rep)
}

/// Runs both checks on every catalog action and returns them with their
/// compliance flags set, alongside the merged reports.
pub fn measured_catalog(sp: &Sampler) -> Result<Vec<(Action, AxiomReport)>> {
    super::catalog()
        .into_iter()
        .map(|mut a| {
            let mut rep = check_action_axioms(&a, sp)?;
            rep.merge(check_eta_properties(&mut a, sp)?);
            Ok((a, rep))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::catalog;

    fn quick() -> Sampler {
        Sampler {
            random_points: 500,
            ..Sampler::default()
        }
    }

    #[test]
    fn plain_sum_passes_everything() {
        let mut a = Action::sum();
        let rep = check_action_axioms(&a, &quick()).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations.first());
        let rep = check_eta_properties(&mut a, &quick()).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations.first());
        assert_eq!(a.regular(), Compliance::Holds);
        assert_eq!(a.strict_range(), Compliance::Holds);
    }

    #[test]
    fn saturating_product_ties_on_zero_line() {
        let a = Action::prod_over_one_plus_prod();
        let rep = check_action_axioms(&a, &quick()).unwrap();
        assert!(!rep.status(Condition::StrictMonotonicity).holds());
        let zero_line = rep.violations.iter().any(|w| {
            w.condition == Condition::StrictMonotonicity
                && w.inputs == vec![3.0, 0.0, 4.0, 0.0]
                && w.values == vec![0.0, 0.0]
        });
        assert!(zero_line);
        assert!(rep.violations.iter().all(|w| w.replays(&a)));
    }

    #[test]
    fn quarter_sum_fails_strict_solvability_only() {
        let a = Action::k_sum(0.25).unwrap();
        let rep = check_action_axioms(&a, &quick()).unwrap();
        assert!(!rep.status(Condition::SolvabilityStrict).holds());
        assert!(rep.status(Condition::SolvabilityExistence).holds());
        assert!(rep.compliant_existence());
        for w in &rep.violations {
            assert_eq!(w.condition, Condition::SolvabilityStrict);
            assert!(w.replays(&a));
        }
    }

    #[test]
    fn regular_flags_match_closed_forms() {
        let expected_regular = [
            "sum",
            "k_sum_prod(k=1)",
            "root_sum_power(n=2)",
            "root_sum_power(n=3)",
            "sum_plus_prod",
            "sum_plus_sqrt_prod",
            "sum_times_one_plus_prod",
        ];
        for mut a in catalog() {
            check_eta_properties(&mut a, &quick()).unwrap();
            let want = Compliance::from_bool(expected_regular.contains(&a.name()));
            assert_eq!(a.regular(), want, "{}", a.name());
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = Action::k_sum(0.25).unwrap();
        let r1 = serde_json::to_string(&check_action_axioms(&a, &quick()).unwrap()).unwrap();
        let r2 = serde_json::to_string(&check_action_axioms(&a, &quick()).unwrap()).unwrap();
        assert_eq!(r1, r2);
    }
}
