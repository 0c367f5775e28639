//! B-actions: the binary operations that replace `+` in the triangle inequality.
//!
//! An [`Action`] is an immutable evaluator `θ: [0, ∞)² → [0, ∞)` plus two
//! compliance flags that are filled in by [`check_eta_properties`]. The
//! built-in catalog covers the classic families (`k(t+s)`, `t+s+ts`,
//! `(tⁿ+sⁿ)^{1/n}`, ...); [`action_from_generator`] builds `λ·f(t+s)` from a
//! user-supplied generator.

mod checks;
mod generator;
mod inverse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use checks::{
    check_action_axioms, check_eta_properties, measured_catalog, AxiomReport, Condition, ConditionStatus, Witness,
};
pub use generator::{action_from_generator, GeneratorFn};
pub use inverse::{eta, eta_bisect, image_contains, ImageProbe, InverseMode};

/// Tri-state compliance flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compliance {
    Holds,
    Fails,
    #[default]
    Unknown,
}

impl Compliance {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Compliance::Holds
        } else {
            Compliance::Fails
        }
    }
}

/// Generator-backed action `λ·f(t + s)`.
#[derive(Clone)]
pub struct Generator {
    pub(crate) label: String,
    pub(crate) f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub(crate) lambda: f64,
    /// Supremum of `f` on `[0, ∞)` when known.
    pub(crate) f_sup: Option<f64>,
    pub(crate) spec: Option<GeneratorFn>,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("label", &self.label)
            .field("lambda", &self.lambda)
            .field("f_sup", &self.f_sup)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum ActionKind {
    /// `k(t + s)`, `k ∈ (0, 1]`
    KSum { k: f64 },
    /// `k(t + s + ts)`, `k ∈ (0, 1]`
    KSumProd { k: f64 },
    /// `ts / (1 + ts)`
    ProdOverOnePlusProd,
    /// `(tⁿ + sⁿ)^{1/n}`, `n >= 1`
    RootSumPower { n: f64 },
    /// `t + s + ts`
    SumPlusProd,
    /// `t + s + √(ts)`
    SumPlusSqrtProd,
    /// `(t + s)(1 + ts)`
    SumTimesOnePlusProd,
    Generator(Generator),
}

impl ActionKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ActionKind::KSum { .. } => "k_sum",
            ActionKind::KSumProd { .. } => "k_sum_prod",
            ActionKind::ProdOverOnePlusProd => "prod_over_one_plus_prod",
            ActionKind::RootSumPower { .. } => "root_sum_power",
            ActionKind::SumPlusProd => "sum_plus_prod",
            ActionKind::SumPlusSqrtProd => "sum_plus_sqrt_prod",
            ActionKind::SumTimesOnePlusProd => "sum_times_one_plus_prod",
            ActionKind::Generator(_) => "generator",
        }
    }
}

/// A named B-action.
#[derive(Debug, Clone)]
pub struct Action {
    name: String,
    kind: ActionKind,
    regular: Compliance,
    strict_range: Compliance,
}

impl Action {
    fn build(name: Option<String>, kind: ActionKind) -> Result<Self> {
        match &kind {
            ActionKind::KSum { k } | ActionKind::KSumProd { k } if !(k.is_finite() && *k > 0.0 && *k <= 1.0) => {
                return Err(Error::input(format!("k must lie in (0, 1], got {k}")));
            }
            ActionKind::RootSumPower { n } if !(n.is_finite() && *n >= 1.0) => {
                return Err(Error::input(format!("n must be a finite real >= 1, got {n}")));
            }
            _ => {}
        }
        let name = name.unwrap_or_else(|| default_name(&kind));
        Ok(Self {
            name,
            kind,
            regular: Compliance::Unknown,
            strict_range: Compliance::Unknown,
        })
    }

    pub fn k_sum(k: f64) -> Result<Self> {
        Self::build(None, ActionKind::KSum { k })
    }

    /// Plain addition, `t + s`.
    pub fn sum() -> Self {
        Self::build(Some("sum".into()), ActionKind::KSum { k: 1.0 }).expect("k = 1 is valid")
    }

    pub fn k_sum_prod(k: f64) -> Result<Self> {
        Self::build(None, ActionKind::KSumProd { k })
    }

    pub fn prod_over_one_plus_prod() -> Self {
        Self::build(None, ActionKind::ProdOverOnePlusProd).expect("parameter free")
    }

    pub fn root_sum_power(n: f64) -> Result<Self> {
        Self::build(None, ActionKind::RootSumPower { n })
    }

    pub fn sum_plus_prod() -> Self {
        Self::build(None, ActionKind::SumPlusProd).expect("parameter free")
    }

    pub fn sum_plus_sqrt_prod() -> Self {
        Self::build(None, ActionKind::SumPlusSqrtProd).expect("parameter free")
    }

    pub fn sum_times_one_plus_prod() -> Self {
        Self::build(None, ActionKind::SumTimesOnePlusProd).expect("parameter free")
    }

    pub(crate) fn from_generator(g: Generator) -> Self {
        let name = format!("generator({}, lambda={})", g.label, g.lambda);
        Self {
            name,
            kind: ActionKind::Generator(g),
            regular: Compliance::Unknown,
            strict_range: Compliance::Unknown,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    pub fn regular(&self) -> Compliance {
        self.regular
    }

    pub fn strict_range(&self) -> Compliance {
        self.strict_range
    }

    pub(crate) fn set_flags(&mut self, regular: Compliance, strict_range: Compliance) {
        self.regular = regular;
        self.strict_range = strict_range;
    }

    /// `θ(s, t)`, rejecting negative or non-finite arguments.
    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        for v in [s, t] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::input(format!(
                    "action `{}` takes finite nonnegative arguments, got ({s}, {t})",
                    self.name
                )));
            }
        }
        Ok(self.eval_unchecked(s, t))
    }

    /// `θ(s, t)` without argument validation.
    ///
    /// Arguments are ordered `(min, max)` before evaluation, so the result is
    /// bitwise symmetric.
    pub fn eval_unchecked(&self, s: f64, t: f64) -> f64 {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        match &self.kind {
            ActionKind::KSum { k } => k * (lo + hi),
            ActionKind::KSumProd { k } => k * (lo + hi + lo * hi),
            ActionKind::ProdOverOnePlusProd => {
                let p = lo * hi;
                if p.is_infinite() {
                    1.0
                } else {
                    p / (1.0 + p)
                }
            }
            ActionKind::RootSumPower { n } => scaled_power_sum(lo, hi, *n),
            ActionKind::SumPlusProd => lo + hi + lo * hi,
            ActionKind::SumPlusSqrtProd => lo + hi + (lo * hi).sqrt(),
            ActionKind::SumTimesOnePlusProd => (lo + hi) * (1.0 + lo * hi),
            ActionKind::Generator(g) => g.lambda * (g.f)(lo + hi),
        }
    }

    /// Extension of `θ` to signed arguments, for families with a natural odd
    /// extension (`k(t+s)` and odd-integer power sums). `None` elsewhere when
    /// either argument is negative.
    pub fn eval_signed(&self, s: f64, t: f64) -> Option<f64> {
        if s >= 0.0 && t >= 0.0 {
            return Some(self.eval_unchecked(s, t));
        }
        match &self.kind {
            ActionKind::KSum { k } => Some(k * (s + t)),
            ActionKind::RootSumPower { n } if is_odd_integer(*n) => {
                let n = *n;
                let signed_pow = |v: f64| v.signum() * v.abs().powf(n);
                Some(signed_root(signed_pow(s) + signed_pow(t), n))
            }
            _ => None,
        }
    }

    /// Closed-form inverse `t` with `θ(t, s) = r`, where one is known.
    ///
    /// No range check is made; callers compare against bisection.
    pub fn closed_inverse(&self, r: f64, s: f64) -> Option<f64> {
        let t = match &self.kind {
            ActionKind::KSum { k } => r / k - s,
            ActionKind::KSumProd { k } => (r / k - s) / (1.0 + s),
            ActionKind::ProdOverOnePlusProd => {
                if s > 0.0 && r < 1.0 {
                    r / ((1.0 - r) * s)
                } else {
                    return None;
                }
            }
            ActionKind::RootSumPower { n } => {
                if r == 0.0 {
                    0.0
                } else {
                    r * (1.0 - (s / r).powf(*n)).max(0.0).powf(1.0 / n)
                }
            }
            ActionKind::SumPlusProd => (r - s) / (1.0 + s),
            ActionKind::SumPlusSqrtProd => {
                // √t solves u² + √s·u + (s − r) = 0; rationalised root.
                let u = 2.0 * (r - s) / ((4.0 * r - 3.0 * s).sqrt() + s.sqrt());
                if u.is_nan() {
                    return None;
                }
                u * u
            }
            ActionKind::SumTimesOnePlusProd => {
                // s·t² + (1 + s²)·t + (s − r) = 0; rationalised root.
                let b = 1.0 + s * s;
                2.0 * (r - s) / (b + (b * b + 4.0 * s * (r - s)).sqrt())
            }
            ActionKind::Generator(_) => return None,
        };
        t.is_finite().then_some(t)
    }

    /// Known supremum of the image. `Some(∞)` for unbounded images, `None`
    /// when the supremum is not known in closed form.
    pub fn image_sup(&self) -> Option<f64> {
        match &self.kind {
            ActionKind::ProdOverOnePlusProd => Some(1.0),
            ActionKind::Generator(g) => g.f_sup.map(|v| g.lambda * v),
            _ => Some(f64::INFINITY),
        }
    }

    /// Serializable description, as accepted by [`Action::from_spec`].
    pub fn to_spec(&self) -> ActionSpec {
        let mut params = BTreeMap::new();
        match &self.kind {
            ActionKind::KSum { k } | ActionKind::KSumProd { k } => {
                params.insert("k".to_string(), Value::from(*k));
            }
            ActionKind::RootSumPower { n } => {
                params.insert("n".to_string(), Value::from(*n));
            }
            ActionKind::Generator(g) => {
                params.insert("lambda".to_string(), Value::from(g.lambda));
                match &g.spec {
                    Some(spec) => spec.write_params(&mut params),
                    None => {
                        params.insert("f".to_string(), Value::from(g.label.clone()));
                    }
                }
            }
            _ => {}
        }
        ActionSpec {
            name: Some(self.name.clone()),
            kind: self.kind.tag().to_string(),
            params,
        }
    }

    pub fn from_spec(spec: &ActionSpec) -> Result<Self> {
        let num = |key: &str| -> Result<f64> {
            spec.params
                .get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::input(format!("action kind `{}` needs numeric param `{key}`", spec.kind)))
        };
        let num_or = |key: &str, default: f64| -> Result<f64> {
            match spec.params.get(key) {
                None => Ok(default),
                Some(_) => num(key),
            }
        };
        let action = match spec.kind.as_str() {
            "sum" => Self::sum(),
            "k_sum" => Self::build(None, ActionKind::KSum { k: num_or("k", 1.0)? })?,
            "k_sum_prod" => Self::build(None, ActionKind::KSumProd { k: num_or("k", 1.0)? })?,
            "prod_over_one_plus_prod" => Self::prod_over_one_plus_prod(),
            "root_sum_power" => Self::build(None, ActionKind::RootSumPower { n: num("n")? })?,
            "sum_plus_prod" => Self::sum_plus_prod(),
            "sum_plus_sqrt_prod" => Self::sum_plus_sqrt_prod(),
            "sum_times_one_plus_prod" => Self::sum_times_one_plus_prod(),
            "generator" => {
                let f = GeneratorFn::from_params(&spec.params)?;
                f.into_action(num("lambda")?)?
            }
            other => return Err(Error::input(format!("unknown action kind `{other}`"))),
        };
        Ok(match &spec.name {
            Some(n) => action.with_name(n.clone()),
            None => action,
        })
    }
}

/// Action JSON: `{"name": ..., "kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

/// The built-in families with their default parameters, plus the `k < 1`
/// variants that exercise the solvability and regularity checks.
pub fn catalog() -> Vec<Action> {
    vec![
        Action::sum(),
        Action::k_sum(0.5).unwrap(),
        Action::k_sum(0.25).unwrap(),
        Action::k_sum_prod(1.0).unwrap(),
        Action::k_sum_prod(0.5).unwrap(),
        Action::prod_over_one_plus_prod(),
        Action::root_sum_power(2.0).unwrap(),
        Action::root_sum_power(3.0).unwrap(),
        Action::sum_plus_prod(),
        Action::sum_plus_sqrt_prod(),
        Action::sum_times_one_plus_prod(),
    ]
}

fn default_name(kind: &ActionKind) -> String {
    match kind {
        ActionKind::KSum { k } => format!("k_sum(k={k})"),
        ActionKind::KSumProd { k } => format!("k_sum_prod(k={k})"),
        ActionKind::RootSumPower { n } => format!("root_sum_power(n={n})"),
        other => other.tag().to_string(),
    }
}

/// `(loⁿ + hiⁿ)^{1/n}` computed as `hi·(1 + (lo/hi)ⁿ)^{1/n}` to avoid overflow.
fn scaled_power_sum(lo: f64, hi: f64, n: f64) -> f64 {
    if hi == 0.0 {
        return 0.0;
    }
    if lo == 0.0 {
        return hi;
    }
    hi * (1.0 + (lo / hi).powf(n)).powf(1.0 / n)
}

fn is_odd_integer(n: f64) -> bool {
    n.fract() == 0.0 && (n as i64) % 2 == 1
}

/// Real `n`-th root preserving sign (`n` odd).
pub(crate) fn signed_root(v: f64, n: f64) -> f64 {
    if n == 3.0 {
        v.cbrt()
    } else {
        v.signum() * v.abs().powf(1.0 / n)
    }
}
