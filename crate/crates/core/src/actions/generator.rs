use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use super::{Action, Generator};
use crate::error::{Error, Result};

/// Named generators available from JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorFn {
    /// `f(t) = c·t`, `c ∈ (0, 1)`
    Linear { c: f64 },
    /// `f(t) = t / (1 + t)`
    Saturating,
    /// `f(t) = ln(1 + t)`
    Log1p,
}

impl GeneratorFn {
    pub(crate) fn from_params(params: &BTreeMap<String, Value>) -> Result<Self> {
        let name = params
            .get("f")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::input("generator action needs string param `f`"))?;
        match name {
            "linear" => {
                let c = params
                    .get("c")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::input("linear generator needs numeric param `c`"))?;
                Ok(GeneratorFn::Linear { c })
            }
            "saturating" => Ok(GeneratorFn::Saturating),
            "log1p" => Ok(GeneratorFn::Log1p),
            other => Err(Error::input(format!("unknown generator `{other}`"))),
        }
    }

    pub(crate) fn write_params(&self, params: &mut BTreeMap<String, Value>) {
        match self {
            GeneratorFn::Linear { c } => {
                params.insert("f".into(), Value::from("linear"));
                params.insert("c".into(), Value::from(*c));
            }
            GeneratorFn::Saturating => {
                params.insert("f".into(), Value::from("saturating"));
            }
            GeneratorFn::Log1p => {
                params.insert("f".into(), Value::from("log1p"));
            }
        }
    }

    pub fn into_action(self, lambda: f64) -> Result<Action> {
        let (label, sup): (String, Option<f64>) = match self {
            GeneratorFn::Linear { c } => (format!("linear(c={c})"), Some(f64::INFINITY)),
            GeneratorFn::Saturating => ("saturating".into(), Some(1.0)),
            GeneratorFn::Log1p => ("log1p".into(), Some(f64::INFINITY)),
        };
        let f: Arc<dyn Fn(f64) -> f64 + Send + Sync> = match self {
            GeneratorFn::Linear { c } => Arc::new(move |t| c * t),
            GeneratorFn::Saturating => Arc::new(|t: f64| t / (1.0 + t)),
            GeneratorFn::Log1p => Arc::new(f64::ln_1p),
        };
        let mut action = build(label, f, lambda, sup)?;
        if let super::ActionKind::Generator(g) = &mut action.kind {
            g.spec = Some(self);
        }
        Ok(action)
    }
}

/// Builds `θ(t, s) = λ·f(t + s)` from a generator `f`.
///
/// `f` must vanish at zero, be strictly increasing and satisfy `f(t) < t`
/// for `t > 0`; these are checked on a geometric grid over `[1e-6, 1e6]`.
/// `λ` must lie in `(0, 1]`: `λ = 0` gives the zero map, which is not
/// strictly monotone.
pub fn action_from_generator<F>(label: &str, f: F, lambda: f64, f_sup: Option<f64>) -> Result<Action>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    build(label.to_string(), Arc::new(f), lambda, f_sup)
}

fn build(
    label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    lambda: f64,
    f_sup: Option<f64>,
) -> Result<Action> {
    if lambda == 0.0 {
        return Err(Error::input(
            "lambda = 0 yields the constant zero map, which is not strictly monotone",
        ));
    }
    if !(lambda.is_finite() && lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::input(format!("lambda must lie in (0, 1], got {lambda}")));
    }
    let f0 = f(0.0);
    if f0 != 0.0 {
        return Err(Error::input(format!("generator `{label}`: f(0) = {f0}, expected 0")));
    }
    let mut prev = (0.0, 0.0);
    for i in 0..=240 {
        let t = 10f64.powf(-6.0 + 12.0 * i as f64 / 240.0);
        let v = f(t);
        if !v.is_finite() || v >= t {
            return Err(Error::input(format!(
                "generator `{label}`: f({t}) = {v} is not below its argument"
            )));
        }
        if v <= prev.1 {
            return Err(Error::input(format!(
                "generator `{label}`: not strictly increasing, f({}) = {} >= f({t}) = {v}",
                prev.0, prev.1
            )));
        }
        prev = (t, v);
    }
    Ok(Action::from_generator(Generator {
        label,
        f,
        lambda,
        f_sup,
        spec: None,
    }))
}
