//! The Caristi order `x ≺ y ⇔ γ(d(x, y)) <= ψ(x, y)` on finite spaces.
//!
//! `ψ` is a potential on pairs satisfying `ψ(x, x) = 0` and the chain
//! inequality `θ(ψ(x, y), ψ(y, z)) <= ψ(x, z)`; `γ` is a nondecreasing,
//! θ-subadditive scaling vanishing only at 0. Under a regular action the
//! order is a partial order, and on a finite space every minimal element of
//! it is a fixed point of any map with `γ(d(x, Tx)) <= ψ(Tx, x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{MultiMap, TableMap};
use crate::actions::{eta, image_contains, signed_root, Action, ActionKind, Compliance, InverseMode};
use crate::error::{Error, Result};
use crate::sampler::Sampler;
use crate::spaces::FiniteSpace;
use crate::tol;

/// The scaling map `γ`.
#[derive(Clone)]
pub enum Gamma {
    Identity,
    /// `t / (1 + t)`
    Rational,
    /// Piecewise-linear through `(t, γ(t))` knots, extended past the last
    /// knot with the final slope.
    Table(Vec<(f64, f64)>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Identity => f.write_str("Identity"),
            Gamma::Rational => f.write_str("Rational"),
            Gamma::Table(k) => f.debug_tuple("Table").field(k).finish(),
            Gamma::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Gamma {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Gamma::Custom(Arc::new(f))
    }

    pub fn table(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::input("gamma table needs at least one knot"));
        }
        if knots.iter().any(|(t, g)| !t.is_finite() || !g.is_finite() || *t < 0.0) {
            return Err(Error::input("gamma table knots must be finite with t >= 0"));
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::input("gamma table has duplicate abscissae"));
        }
        Ok(Gamma::Table(knots))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Gamma::Identity => t,
            Gamma::Rational => t / (1.0 + t),
            Gamma::Custom(f) => f(t),
            Gamma::Table(k) => {
                let lerp = |a: (f64, f64), b: (f64, f64)| a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0);
                if k.len() == 1 {
                    return k[0].1;
                }
                match k.iter().position(|p| p.0 >= t) {
                    Some(0) => lerp(k[0], k[1]),
                    Some(i) => lerp(k[i - 1], k[i]),
                    None => lerp(k[k.len() - 2], k[k.len() - 1]),
                }
            }
        }
    }
}

/// The pair potential `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Psi {
    Table(Vec<Vec<f64>>),
    /// `e^{φ(y) − φ(x)}` off the diagonal, `0` on it.
    ExpPhi(Vec<f64>),
    /// `(φ(y) − φ(x))^{1/(2n+1)}`, sign preserving.
    OddRootPhi { n: u32, phi: Vec<f64> },
}

impl Psi {
    pub fn eval(&self, x: usize, y: usize) -> f64 {
        match self {
            Psi::Table(m) => m[x][y],
            Psi::ExpPhi(phi) => {
                if x == y {
                    0.0
                } else {
                    (phi[y] - phi[x]).exp()
                }
            }
            Psi::OddRootPhi { n, phi } => signed_root(phi[y] - phi[x], (2 * n + 1) as f64),
        }
    }

    fn is_tabulated(&self) -> bool {
        matches!(self, Psi::Table(_))
    }

    fn size(&self) -> usize {
        match self {
            Psi::Table(m) => m.len(),
            Psi::ExpPhi(phi) | Psi::OddRootPhi { phi, .. } => phi.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiForm {
    Exp,
    OddRoot(u32),
}

/// Derives `ψ` from a scalar potential `φ`.
///
/// The exponential form pairs with `ts/(1+ts)` and the odd-root form with
/// `(t^{2n+1} + s^{2n+1})^{1/(2n+1)}`; any other pairing returns a warning
/// alongside the potential.
pub fn psi_from_phi(phi: &[f64], form: PsiForm, a: &Action) -> (Psi, Option<String>) {
    let matches = match (form, a.kind()) {
        (PsiForm::Exp, ActionKind::ProdOverOnePlusProd) => true,
        (PsiForm::OddRoot(n), ActionKind::RootSumPower { n: p }) => *p == (2 * n + 1) as f64,
        (PsiForm::OddRoot(0), ActionKind::KSum { k }) => *k == 1.0,
        _ => false,
    };
    let warning = (!matches).then(|| format!("potential form {form:?} is not paired with action `{}`", a.name()));
    let psi = match form {
        PsiForm::Exp => Psi::ExpPhi(phi.to_vec()),
        PsiForm::OddRoot(n) => Psi::OddRootPhi { n, phi: phi.to_vec() },
    };
    (psi, warning)
}

#[derive(Debug, Clone)]
pub struct CaristiData {
    pub gamma: Gamma,
    pub psi: Psi,
    pub phi: Option<Vec<f64>>,
}

/// Caristi JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaristiSpec {
    pub gamma: GammaSpec,
    pub psi: PsiSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaSpec {
    /// `identity`, `rational` or `custom_table`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiSpec {
    /// `table`, `exp_phi` or `odd_root_phi`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<f64>>>,
}

impl CaristiData {
    pub fn new(gamma: Gamma, psi: Psi) -> Self {
        Self { gamma, psi, phi: None }
    }

    /// `ψ(x, y) = φ(y) − φ(x)` with `γ = id`.
    pub fn difference(phi: &[f64]) -> Self {
        Self {
            gamma: Gamma::Identity,
            psi: Psi::OddRootPhi { n: 0, phi: phi.to_vec() },
            phi: Some(phi.to_vec()),
        }
    }

    pub fn from_spec(spec: &CaristiSpec, sp: &FiniteSpace) -> Result<Self> {
        let gamma = match spec.gamma.kind.as_str() {
            "identity" => Gamma::Identity,
            "rational" => Gamma::Rational,
            "custom_table" => Gamma::table(
                spec.gamma
                    .points
                    .clone()
                    .ok_or_else(|| Error::input("custom_table gamma needs `points`"))?,
            )?,
            other => return Err(Error::input(format!("unknown gamma kind `{other}`"))),
        };
        let phi = match &spec.psi.phi {
            Some(map) => {
                let mut phi = vec![f64::NAN; sp.len()];
                for (label, v) in map {
                    phi[sp.index_of(label)?] = *v;
                }
                if let Some(i) = phi.iter().position(|v| !v.is_finite()) {
                    return Err(Error::input(format!("phi has no finite value for `{}`", sp.label(i))));
                }
                Some(phi)
            }
            None => None,
        };
        let need_phi = || phi.clone().ok_or_else(|| Error::input(format!("psi kind `{}` needs `phi`", spec.psi.kind)));
        let psi = match spec.psi.kind.as_str() {
            "table" => {
                let values = spec
                    .psi
                    .values
                    .clone()
                    .ok_or_else(|| Error::input("table psi needs `values`"))?;
                if values.len() != sp.len() || values.iter().any(|r| r.len() != sp.len()) {
                    return Err(Error::input("psi table must be square with one row per point"));
                }
                Psi::Table(values)
            }
            "exp_phi" => Psi::ExpPhi(need_phi()?),
            "odd_root_phi" => Psi::OddRootPhi {
                n: spec.psi.n.unwrap_or(0),
                phi: need_phi()?,
            },
            other => return Err(Error::input(format!("unknown psi kind `{other}`"))),
        };
        Ok(Self { gamma, psi, phi })
    }

    /// JSON form; `None` for a custom closure scaling.
    pub fn to_spec(&self, sp: &FiniteSpace) -> Option<CaristiSpec> {
        let gamma = match &self.gamma {
            Gamma::Identity => GammaSpec {
                kind: "identity".into(),
                points: None,
            },
            Gamma::Rational => GammaSpec {
                kind: "rational".into(),
                points: None,
            },
            Gamma::Table(k) => GammaSpec {
                kind: "custom_table".into(),
                points: Some(k.clone()),
            },
            Gamma::Custom(_) => return None,
        };
        let by_label = |phi: &[f64]| Some(phi.iter().enumerate().map(|(i, v)| (sp.label(i).to_string(), *v)).collect());
        let psi = match &self.psi {
            Psi::Table(m) => PsiSpec {
                kind: "table".into(),
                phi: None,
                n: None,
                values: Some(m.clone()),
            },
            Psi::ExpPhi(phi) => PsiSpec {
                kind: "exp_phi".into(),
                phi: by_label(phi),
                n: None,
                values: None,
            },
            Psi::OddRootPhi { n, phi } => PsiSpec {
                kind: "odd_root_phi".into(),
                phi: by_label(phi),
                n: Some(*n),
                values: None,
            },
        };
        Some(CaristiSpec { gamma, psi })
    }

    fn check_size(&self, sp: &FiniteSpace) -> Result<()> {
        if self.psi.size() != sp.len() {
            return Err(Error::input(format!(
                "potential covers {} points, space has {}",
                self.psi.size(),
                sp.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiCondition {
    BoundedBelow,
    VanishingDiagonal,
    Chain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiViolation {
    pub condition: PsiCondition,
    pub points: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiReport {
    /// Anchor point whose row `ψ(x̂, ·)` is bounded below, with its minimum.
    pub anchor: Option<usize>,
    pub anchor_min: Option<f64>,
    pub semicontinuity: &'static str,
    pub triples_checked: usize,
    /// Triples with a negative argument the action cannot evaluate.
    pub triples_out_of_domain: usize,
    pub violations: Vec<PsiViolation>,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of the potential on a finite space.
///
/// Signed `ψ` values are accepted; the chain inequality is evaluated through
/// the action's odd extension where one exists and counted as out of domain
/// otherwise.
pub fn check_psi(sp: &FiniteSpace, a: &Action, cd: &CaristiData) -> Result<PsiReport> {
    cd.check_size(sp)?;
    let n = sp.len();
    let psi = |x, y| cd.psi.eval(x, y);
    let mut violations = Vec::new();

    let anchor = (0..n).find(|&x| (0..n).all(|y| psi(x, y).is_finite()));
    let anchor_min = anchor.map(|x| (0..n).map(|y| psi(x, y)).fold(f64::INFINITY, f64::min));
    if anchor.is_none() {
        violations.push(PsiViolation {
            condition: PsiCondition::BoundedBelow,
            points: vec![],
            lhs: f64::NAN,
            rhs: f64::NAN,
        });
    }

    for x in 0..n {
        let v = psi(x, x);
        let ok = if cd.psi.is_tabulated() { v == 0.0 } else { v.abs() <= tol::CMP };
        if !ok {
            violations.push(PsiViolation {
                condition: PsiCondition::VanishingDiagonal,
                points: vec![x],
                lhs: v,
                rhs: 0.0,
            });
        }
    }

    let mut checked = 0;
    let mut out_of_domain = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let rhs = psi(x, z);
                match a.eval_signed(psi(x, y), psi(y, z)) {
                    Some(lhs) => {
                        checked += 1;
                        if !tol::leq(lhs, rhs, tol::CMP) {
                            violations.push(PsiViolation {
                                condition: PsiCondition::Chain,
                                points: vec![x, y, z],
                                lhs,
                                rhs,
                            });
                        }
                    }
                    None => out_of_domain += 1,
                }
            }
        }
    }

    Ok(PsiReport {
        anchor,
        anchor_min,
        semicontinuity: "vacuous on a finite space",
        triples_checked: checked,
        triples_out_of_domain: out_of_domain,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaCondition {
    ZeroAtZero,
    Nondecreasing,
    PositiveAwayFromZero,
    Subadditive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaViolation {
    pub condition: GammaCondition,
    pub inputs: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub pairs_checked: usize,
    pub violations: Vec<GammaViolation>,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const STREAM_GAMMA: u64 = 11;

/// Sampled check that `γ(0) = 0`, `γ` is nondecreasing and positive on
/// `(0, cap]`, and `γ(θ(x, y)) <= θ(γ(x), γ(y))`.
pub fn check_gamma(cd: &CaristiData, a: &Action, sp: &Sampler) -> Result<GammaReport> {
    sp.validate()?;
    let g = |t: f64| cd.gamma.eval(t);
    let mut violations = Vec::new();
    let g0 = g(0.0);
    if g0 != 0.0 {
        violations.push(GammaViolation {
            condition: GammaCondition::ZeroAtZero,
            inputs: vec![0.0],
            values: vec![g0],
        });
    }
    let grid = sp.grid();
    for w in grid.windows(2) {
        let (lo, hi) = (g(w[0]), g(w[1]));
        if hi < lo {
            violations.push(GammaViolation {
                condition: GammaCondition::Nondecreasing,
                inputs: vec![w[0], w[1]],
                values: vec![lo, hi],
            });
        }
    }
    let mut rng = sp.rng(STREAM_GAMMA);
    let cap = sp.domain_cap;
    let random: Vec<(f64, f64)> = (0..sp.random_points)
        .map(|_| (rng.gen_range(0.0..=cap), rng.gen_range(0.0..=cap)))
        .collect();
    for t in grid.iter().copied().chain(random.iter().map(|p| p.0)).filter(|t| *t > 0.0) {
        let v = g(t);
        if v.is_nan() || v <= 0.0 {
            violations.push(GammaViolation {
                condition: GammaCondition::PositiveAwayFromZero,
                inputs: vec![t],
                values: vec![v],
            });
        }
    }
    let grid_pairs = grid.iter().flat_map(|&x| grid.iter().map(move |&y| (x, y)));
    let mut pairs_checked = 0;
    for (x, y) in grid_pairs.chain(random) {
        pairs_checked += 1;
        let lhs = g(a.eval_unchecked(x, y));
        let rhs = a.eval_unchecked(g(x), g(y));
        if !tol::leq(lhs, rhs, tol::CMP) {
            violations.push(GammaViolation {
                condition: GammaCondition::Subadditive,
                inputs: vec![x, y],
                values: vec![lhs, rhs],
            });
        }
    }
    Ok(GammaReport {
        pairs_checked,
        violations,
    })
}

/// Boolean relation matrix; `holds(x, y)` means `x ≺ y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    matrix: Vec<Vec<bool>>,
}

impl Relation {
    pub fn from_matrix(matrix: Vec<Vec<bool>>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::input("relation matrix must be square"));
        }
        Ok(Self { matrix })
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    #[inline]
    pub fn holds(&self, x: usize, y: usize) -> bool {
        self.matrix[x][y]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.matrix
    }

    /// Exhaustive reflexivity, antisymmetry and transitivity check.
    pub fn verify_partial_order(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            if !self.holds(x, x) {
                return Err(Error::Invariant(format!("order is not reflexive at point #{x}")));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && self.holds(x, y) && self.holds(y, x) {
                    return Err(Error::Invariant(format!(
                        "order is not antisymmetric: #{x} and #{y} precede each other"
                    )));
                }
                if !self.holds(x, y) {
                    continue;
                }
                for z in 0..n {
                    if self.holds(y, z) && !self.holds(x, z) {
                        return Err(Error::Invariant(format!(
                            "order is not transitive: #{x} ≺ #{y} ≺ #{z} but not #{x} ≺ #{z}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Every `x` with no `y ≠ x` satisfying `y ≺ x`, in index order.
pub fn minimal_elements(rel: &Relation) -> Vec<usize> {
    let n = rel.len();
    (0..n)
        .filter(|&x| !(0..n).any(|y| y != x && rel.holds(y, x)))
        .collect()
}

fn require_regular(sp: &FiniteSpace, a: &Action, cd: &CaristiData) -> Result<()> {
    match a.regular() {
        Compliance::Holds => return Ok(()),
        Compliance::Fails => {
            return Err(Error::Precondition(format!("action `{}` is not regular", a.name())));
        }
        Compliance::Unknown => {}
    }
    // probe η(r, r) at the values the order actually compares
    let n = sp.len();
    let mut probes: Vec<f64> = vec![1.0];
    for x in 0..n {
        for y in 0..n {
            probes.push(sp.d(x, y));
            probes.push(cd.psi.eval(x, y));
        }
    }
    for r in probes.into_iter().filter(|r| r.is_finite() && *r > 0.0) {
        if !image_contains(a, r)?.contains {
            continue;
        }
        let t = eta(a, r, r, InverseMode::Existence)?;
        if t > tol::REGULAR {
            return Err(Error::Precondition(format!(
                "action `{}` is not regular: η({r}, {r}) = {t}",
                a.name()
            )));
        }
    }
    Ok(())
}

/// Builds the order `x ≺ y ⇔ γ(d(x, y)) <= ψ(x, y)` and verifies it is a
/// partial order.
///
/// Requires a regular action and a potential and scaling that pass
/// [`check_psi`] and [`check_gamma`] (the latter on the default sampler).
pub fn caristi_order(sp: &FiniteSpace, a: &Action, cd: &CaristiData) -> Result<Relation> {
    cd.check_size(sp)?;
    require_regular(sp, a, cd)?;
    let psi_rep = check_psi(sp, a, cd)?;
    if let Some(v) = psi_rep.violations.first() {
        return Err(Error::Precondition(format!(
            "potential fails {:?} at points {:?}: {} vs {}",
            v.condition, v.points, v.lhs, v.rhs
        )));
    }
    let gamma_rep = check_gamma(cd, a, &Sampler::default())?;
    if let Some(v) = gamma_rep.violations.first() {
        return Err(Error::Precondition(format!(
            "scaling fails {:?} at {:?}: {:?}",
            v.condition, v.inputs, v.values
        )));
    }
    let n = sp.len();
    let matrix = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| tol::leq(cd.gamma.eval(sp.d(x, y)), cd.psi.eval(x, y), tol::CMP))
                .collect()
        })
        .collect();
    let rel = Relation { matrix };
    rel.verify_partial_order()?;
    Ok(rel)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaristiOutcome {
    /// The lexicographically smallest minimal element (by label).
    pub point: usize,
    pub minimal: Vec<usize>,
    pub hypothesis_checked: usize,
    pub relation: Relation,
}

fn pick_minimal(sp: &FiniteSpace, minimal: &[usize]) -> Result<usize> {
    minimal
        .iter()
        .copied()
        .min_by(|&a, &b| sp.label(a).cmp(sp.label(b)))
        .ok_or_else(|| Error::Invariant("order has no minimal element".into()))
}

/// One instance of the hypothesis `γ(d(x, y)) <= ψ(y, x)` for `y ∈ T(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub x: usize,
    pub image: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the hypothesis on every `(x, y)` with `y ∈ T(x)`.
pub fn hypothesis_checks(sp: &FiniteSpace, cd: &CaristiData, t: &MultiMap) -> Result<Vec<HypothesisCheck>> {
    cd.check_size(sp)?;
    if t.len() != sp.len() {
        return Err(Error::input("map size differs from space size"));
    }
    let mut out = Vec::new();
    for x in 0..sp.len() {
        for &y in t.apply(x) {
            let (lhs, rhs) = (cd.gamma.eval(sp.d(x, y)), cd.psi.eval(y, x));
            out.push(HypothesisCheck {
                x,
                image: y,
                lhs,
                rhs,
                holds: tol::leq(lhs, rhs, tol::CMP),
            });
        }
    }
    Ok(out)
}

fn require_hypothesis(sp: &FiniteSpace, cd: &CaristiData, t: &MultiMap) -> Result<usize> {
    let checks = hypothesis_checks(sp, cd, t)?;
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(Error::Precondition(format!(
            "hypothesis fails at (`{}`, `{}`): γ(d(x, Tx)) = {} > ψ(Tx, x) = {}",
            sp.label(c.x),
            sp.label(c.image),
            c.lhs,
            c.rhs
        )));
    }
    Ok(checks.len())
}

/// Fixed point of `T` under `γ(d(x, Tx)) <= ψ(Tx, x)` for every `x`.
///
/// The hypothesis is checked exhaustively before the order is built.
pub fn caristi_fixed_point(sp: &FiniteSpace, a: &Action, cd: &CaristiData, t: &TableMap) -> Result<CaristiOutcome> {
    let hypothesis_checked = require_hypothesis(sp, cd, &MultiMap::from(t))?;
    let relation = caristi_order(sp, a, cd)?;
    let minimal = minimal_elements(&relation);
    for &m in &minimal {
        if t.apply(m) != m {
            return Err(Error::Invariant(format!(
                "minimal element `{}` is not fixed: T maps it to `{}`",
                sp.label(m),
                sp.label(t.apply(m))
            )));
        }
    }
    Ok(CaristiOutcome {
        point: pick_minimal(sp, &minimal)?,
        minimal,
        hypothesis_checked,
        relation,
    })
}

/// Endpoint `x̄` with `T(x̄) = {x̄}` under `γ(d(x, y)) <= ψ(y, x)` for every
/// `y ∈ T(x)`.
pub fn endpoint(sp: &FiniteSpace, a: &Action, cd: &CaristiData, t: &MultiMap) -> Result<CaristiOutcome> {
    let hypothesis_checked = require_hypothesis(sp, cd, t)?;
    let relation = caristi_order(sp, a, cd)?;
    let minimal = minimal_elements(&relation);
    for &m in &minimal {
        if t.apply(m) != [m] {
            return Err(Error::Invariant(format!("minimal element `{}` is not an endpoint", sp.label(m))));
        }
    }
    Ok(CaristiOutcome {
        point: pick_minimal(sp, &minimal)?,
        minimal,
        hypothesis_checked,
        relation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiBoundReport {
    pub triples_checked: usize,
    /// `(x, y, z, ψ(x, y), η(ψ(x, z), ψ(y, z)))`
    pub violations: Vec<(usize, usize, usize, f64, f64)>,
}

/// `ψ(x, y) <= η(ψ(x, z), ψ(y, z))` on every ordered triple where
/// `0 <= ψ(y, z) <= ψ(x, z)` and `ψ(x, z)` lies in the image.
pub fn psi_inverse_bound(sp: &FiniteSpace, a: &Action, cd: &CaristiData) -> Result<PsiBoundReport> {
    cd.check_size(sp)?;
    let n = sp.len();
    let mut checked = 0;
    let mut violations = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (c, b) = (cd.psi.eval(x, z), cd.psi.eval(y, z));
                if !(0.0 <= b && b <= c) || !image_contains(a, c)?.contains {
                    continue;
                }
                checked += 1;
                let lhs = cd.psi.eval(x, y);
                match eta(a, c, b, InverseMode::Existence) {
                    Ok(e) if lhs <= e + tol::INVERSE_BOUND => {}
                    Ok(e) => violations.push((x, y, z, lhs, e)),
                    Err(_) => violations.push((x, y, z, lhs, f64::NAN)),
                }
            }
        }
    }
    Ok(PsiBoundReport {
        triples_checked: checked,
        violations,
    })
}
