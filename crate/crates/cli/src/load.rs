//! Fail-fast input resolution: everything a command touches is read,
//! parsed and cross-checked here, before any computation runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use theta_metric::fixedpoint::{CaristiData, CaristiSpec, MapSpec, MultiMap, MultiMapSpec, TableMap};
use theta_metric::fixtures::{self, Fixture};
use theta_metric::spaces::SpaceSpec;
use theta_metric::{tol, Action, ActionSpec, FiniteSpace, Sampler};

use crate::{Command, JobSpec};

pub(crate) struct Loaded {
    pub config: Value,
    pub action: Option<Action>,
    pub space: Option<FiniteSpace>,
    pub map: Option<TableMap>,
    pub multimap: Option<MultiMap>,
    pub caristi: Option<CaristiData>,
    pub sampler: Sampler,
    pub tol: Option<f64>,
    /// Point arguments resolved to indices, keyed by flag name.
    pub points: BTreeMap<&'static str, usize>,
}

enum Source<'a> {
    Builtin(&'a str),
    File(&'a Path),
}

fn source(raw: &str) -> Source<'_> {
    match raw.strip_prefix("builtin:") {
        Some(rest) => Source::Builtin(rest),
        None => Source::File(Path::new(raw)),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {what} file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {what} file {}", path.display()))
}

fn fixture(name: &str) -> Result<Fixture> {
    fixtures::bundled(name)
        .ok_or_else(|| anyhow!("unknown fixture `{name}` (available: {})", fixtures::names().join(", ")))
}

/// `kind[:key=value,...]`; values that parse as numbers become numbers.
fn parse_builtin_action(spec: &str) -> Result<ActionSpec> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    ensure!(!kind.is_empty(), "empty builtin action kind");
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("action parameter `{kv}` is not key=value"))?;
        let value = match v.parse::<f64>() {
            Ok(x) => json!(x),
            Err(_) => json!(v),
        };
        params.insert(k.to_string(), value);
    }
    Ok(ActionSpec {
        name: None,
        kind: kind.to_string(),
        params,
    })
}

fn load_action(raw: &str) -> Result<Action> {
    let spec = match source(raw) {
        Source::Builtin(s) => parse_builtin_action(s)?,
        Source::File(p) => read_json(p, "action")?,
    };
    Action::from_spec(&spec).with_context(|| format!("invalid action `{raw}`"))
}

fn resolve_point(sp: &FiniteSpace, label: &str, flag: &str) -> Result<usize> {
    sp.index_of(label).with_context(|| format!("--{flag}: no point labelled `{label}`"))
}

fn finite_nonneg(v: f64, flag: &str) -> Result<()> {
    ensure!(v.is_finite() && v >= 0.0, "--{flag} must be finite and >= 0, got {v}");
    Ok(())
}

pub(crate) fn load(job: &JobSpec) -> Result<Loaded> {
    let inp = &job.inputs;
    let cmd = &job.command;
    let needs_space = matches!(
        cmd,
        Command::ValidateSpace { .. }
            | Command::Ball { .. }
            | Command::Separate { .. }
            | Command::Banach { .. }
            | Command::Caristi
            | Command::Endpoint
    );
    let needs_action = match cmd {
        Command::ValidateSpace { plain } => !plain,
        Command::Banach { .. } | Command::Fixtures { .. } => false,
        _ => true,
    };

    let space_fixture = match inp.space.as_deref().map(source) {
        Some(Source::Builtin(name)) => Some(fixture(name)?),
        _ => None,
    };
    let space = match inp.space.as_deref().map(source) {
        None if needs_space => bail!("`{}` needs --space", cmd.name()),
        None => None,
        Some(Source::Builtin(_)) => space_fixture.as_ref().map(|f| f.space.clone()),
        Some(Source::File(p)) => {
            let spec: SpaceSpec = read_json(p, "space")?;
            Some(FiniteSpace::from_spec(&spec).with_context(|| format!("invalid space in {}", p.display()))?)
        }
    };

    let action = match &inp.action {
        Some(raw) => Some(load_action(raw)?),
        None => match &space_fixture {
            Some(f) if needs_action => Some(f.action.clone()),
            _ if needs_action => bail!("`{}` needs --action", cmd.name()),
            _ => None,
        },
    };

    let mut map = None;
    let mut multimap = None;
    let mut caristi = None;
    let mut points = BTreeMap::new();
    let sampler = match cmd {
        Command::CheckAction { grid, samples, cap } => Sampler {
            seed: inp.seed,
            grid_points: *grid,
            random_points: *samples,
            domain_cap: *cap,
        },
        _ => Sampler::with_seed(inp.seed),
    };
    sampler.validate().context("invalid sampling options")?;
    let mut tolerance = None;

    match cmd {
        Command::CheckAction { .. } | Command::Fixtures { .. } => {}
        Command::Eta { r, s } => {
            finite_nonneg(*r, "r")?;
            finite_nonneg(*s, "s")?;
            ensure!(s <= r, "the inverse action needs s <= r, got r = {r}, s = {s}");
        }
        Command::ValidateSpace { .. } => {
            let t = inp.tol.unwrap_or(tol::CMP);
            finite_nonneg(t, "tol")?;
            tolerance = Some(t);
        }
        Command::Ball { center, radius } => {
            let sp = space.as_ref().expect("space checked above");
            points.insert("center", resolve_point(sp, center, "center")?);
            finite_nonneg(*radius, "radius")?;
        }
        Command::Separate { x, y } => {
            let sp = space.as_ref().expect("space checked above");
            if let (Some(x), Some(y)) = (x, y) {
                let (i, j) = (resolve_point(sp, x, "x")?, resolve_point(sp, y, "y")?);
                ensure!(i != j, "--x and --y must name distinct points");
                points.insert("x", i);
                points.insert("y", j);
            }
        }
        Command::UniformityBase { n, n_max } => {
            ensure!(*n >= 1, "--n must be at least 1");
            if let Some(m) = n_max {
                ensure!(*m >= 1, "--n-max must be at least 1");
            }
        }
        Command::Banach { start, max_iter } => {
            let sp = space.as_ref().expect("space checked above");
            ensure!(*max_iter >= 1, "--max-iter must be at least 1");
            let t = inp.tol.unwrap_or(tol::FIX);
            ensure!(t.is_finite() && t > 0.0, "--tol must be positive, got {t}");
            tolerance = Some(t);
            map = Some(load_map(inp.map.as_deref(), &space_fixture, sp)?);
            let start = match start {
                Some(l) => resolve_point(sp, l, "start")?,
                None => 0,
            };
            points.insert("start", start);
        }
        Command::Caristi | Command::Endpoint => {
            let sp = space.as_ref().expect("space checked above");
            caristi = Some(load_caristi(inp.caristi.as_deref(), &space_fixture, sp)?);
            if matches!(cmd, Command::Caristi) {
                map = Some(load_map(inp.map.as_deref(), &space_fixture, sp)?);
            } else {
                multimap = Some(load_multimap(inp.map.as_deref(), &space_fixture, sp)?);
            }
        }
    }
    if let Command::Fixtures { name: Some(n) } = cmd {
        fixture(n)?;
    }

    let config = json!({
        "args": cmd,
        "action": action.as_ref().map(Action::to_spec),
        "action_source": inp.action.clone().or_else(|| action.as_ref().and(inp.space.clone())),
        "space_source": inp.space,
        "points": space.as_ref().map(|s| s.labels().to_vec()),
        "map_source": (map.is_some() || multimap.is_some()).then(|| inp.map.clone().or_else(|| inp.space.clone())),
        "caristi_source": caristi.is_some().then(|| inp.caristi.clone().or_else(|| inp.space.clone())),
        "seed": inp.seed,
        "sampler": sampler,
        "tol": tolerance,
        "mode": inp.mode,
    });

    Ok(Loaded {
        config,
        action,
        space,
        map,
        multimap,
        caristi,
        sampler,
        tol: tolerance,
        points,
    })
}

fn fallback<'a>(raw: Option<&'a str>, fx: &'a Option<Fixture>, flag: &str) -> Result<Source<'a>> {
    match (raw, fx) {
        (Some(r), _) => Ok(source(r)),
        (None, Some(f)) => Ok(Source::Builtin(f.name)),
        (None, None) => bail!("missing --{flag}"),
    }
}

fn load_map(raw: Option<&str>, fx: &Option<Fixture>, sp: &FiniteSpace) -> Result<TableMap> {
    match fallback(raw, fx, "map")? {
        Source::Builtin(name) => {
            let f = fixture(name)?;
            ensure!(f.space == *sp, "fixture `{name}` map belongs to a different space");
            f.map.ok_or_else(|| anyhow!("fixture `{name}` has no map"))
        }
        Source::File(p) => {
            let spec: MapSpec = read_json(p, "map")?;
            TableMap::from_spec(&spec, sp).with_context(|| format!("invalid map in {}", p.display()))
        }
    }
}

fn load_multimap(raw: Option<&str>, fx: &Option<Fixture>, sp: &FiniteSpace) -> Result<MultiMap> {
    match fallback(raw, fx, "map")? {
        Source::Builtin(name) => {
            let f = fixture(name)?;
            ensure!(f.space == *sp, "fixture `{name}` multimap belongs to a different space");
            f.multimap.ok_or_else(|| anyhow!("fixture `{name}` has no multimap"))
        }
        Source::File(p) => {
            let spec: MultiMapSpec = read_json(p, "multimap")?;
            MultiMap::from_spec(&spec, sp).with_context(|| format!("invalid multimap in {}", p.display()))
        }
    }
}

fn load_caristi(raw: Option<&str>, fx: &Option<Fixture>, sp: &FiniteSpace) -> Result<CaristiData> {
    match fallback(raw, fx, "caristi")? {
        Source::Builtin(name) => {
            let f = fixture(name)?;
            ensure!(f.space == *sp, "fixture `{name}` potential belongs to a different space");
            f.caristi.ok_or_else(|| anyhow!("fixture `{name}` has no Caristi data"))
        }
        Source::File(p) => {
            let spec: CaristiSpec = read_json(p, "caristi")?;
            CaristiData::from_spec(&spec, sp).with_context(|| format!("invalid Caristi data in {}", p.display()))
        }
    }
}
