use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use theta_metric::actions::{
    check_action_axioms, check_eta_properties, eta, eta_bisect, image_contains, Condition,
};
use theta_metric::fixedpoint::{
    banach_solve, caristi_fixed_point, check_gamma, check_psi, endpoint, estimate_contraction_exhaustive,
    fixed_points_exhaustive, hypothesis_checks, psi_inverse_bound, BanachOptions, CaristiData, CaristiOutcome,
    MultiMap,
};
use theta_metric::fixtures;
use theta_metric::spaces::{
    open_ball, openness_witness, separation_witness, uniformity_base_index, validate_plain_metric,
    validate_theta_metric_with_tol,
};
use theta_metric::{Action, Compliance, FiniteSpace, InverseMode, Result, Sampler};

use crate::load::Loaded;
use crate::{Command, JobSpec};

/// Witnesses kept per condition; the counts are always complete.
const WITNESS_CAP: usize = 20;

pub(crate) struct Outcome {
    pub passed: bool,
    pub result: Value,
    pub violations: Vec<Value>,
    pub error: Option<String>,
}

impl Outcome {
    fn new(result: Value, violations: Vec<Value>) -> Self {
        Self {
            passed: violations.is_empty(),
            result,
            violations,
            error: None,
        }
    }

    fn failed(e: theta_metric::Error) -> Self {
        Self {
            passed: false,
            result: Value::Null,
            violations: vec![json!({ "error": e.to_string() })],
            error: Some(e.to_string()),
        }
    }
}

fn val<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn labels(sp: &FiniteSpace, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| sp.label(i).to_string()).collect()
}

pub(crate) fn execute(job: &JobSpec, l: &Loaded) -> Outcome {
    let mode = job.inputs.mode;
    let action = || l.action.as_ref().expect("action loaded");
    let space = || l.space.as_ref().expect("space loaded");
    let res = match &job.command {
        Command::CheckAction { .. } => check_action(action(), &l.sampler),
        Command::Eta { r, s } => Ok(inverse(action(), *r, *s, mode)),
        Command::ValidateSpace { plain } => Ok(validate(space(), l.action.as_ref(), *plain, l.tol.expect("tol set"))),
        Command::Ball { radius, .. } => ball(space(), action(), l.points["center"], *radius, mode),
        Command::Separate { .. } => Ok(separate(space(), action(), l.points.get("x").zip(l.points.get("y")))),
        Command::UniformityBase { n, n_max } => Ok(uniformity(action(), *n, *n_max)),
        Command::Banach { max_iter, .. } => banach(space(), l, *max_iter),
        Command::Caristi => {
            let map = l.map.as_ref().expect("map loaded");
            caristi(space(), action(), l, &MultiMap::from(map), |sp, a, cd| {
                caristi_fixed_point(sp, a, cd, map)
            })
        }
        Command::Endpoint => {
            let mm = l.multimap.as_ref().expect("multimap loaded");
            caristi(space(), action(), l, mm, |sp, a, cd| endpoint(sp, a, cd, mm))
        }
        Command::Fixtures { name } => Ok(list_fixtures(name.as_deref())),
    };
    res.unwrap_or_else(Outcome::failed)
}

fn check_action(a: &Action, sampler: &Sampler) -> Result<Outcome> {
    let mut a = a.clone();
    let mut rep = check_action_axioms(&a, sampler)?;
    rep.merge(check_eta_properties(&mut a, sampler)?);
    let conditions: BTreeMap<Condition, Value> = rep
        .conditions
        .iter()
        .map(|(c, st)| (*c, json!({ "checked": st.checked, "violations": st.violations, "holds": st.holds() })))
        .collect();
    let strict = [
        Condition::ZeroAndSymmetry,
        Condition::StrictMonotonicity,
        Condition::SolvabilityStrict,
        Condition::BoundedByArgument,
    ]
    .iter()
    .all(|c| rep.status(*c).holds());
    let mut kept: BTreeMap<Condition, usize> = BTreeMap::new();
    let violations = rep
        .violations
        .iter()
        .filter(|w| {
            let n = kept.entry(w.condition).or_default();
            *n += 1;
            *n <= WITNESS_CAP
        })
        .map(|w| {
            let mut v = val(w);
            v["replays"] = json!(w.replays(&a));
            v
        })
        .collect();
    let result = json!({
        "action": a.name(),
        "conditions": conditions,
        "compliant_strict": strict,
        "compliant_existence": rep.compliant_existence(),
        "regular": a.regular(),
        "strict_range": a.strict_range(),
        "witnesses_per_condition_cap": WITNESS_CAP,
    });
    Ok(Outcome::new(result, violations))
}

fn inverse(a: &Action, r: f64, s: f64, mode: InverseMode) -> Outcome {
    let probe = image_contains(a, r);
    let mut result = json!({
        "r": r,
        "s": s,
        "mode": mode,
        "image": probe.as_ref().ok(),
        "closed_form": a.closed_inverse(r, s),
    });
    match eta(a, r, s, mode) {
        Ok(t) => {
            let back = a.eval_unchecked(t, s);
            result["t"] = json!(t);
            result["theta_at_t"] = json!(back);
            result["residual"] = json!(back - r);
            result["bisection"] = json!(eta_bisect(a, r, s, mode).ok());
            Outcome::new(result, vec![])
        }
        Err(e) => {
            result["t"] = Value::Null;
            Outcome {
                passed: false,
                result,
                violations: vec![json!({ "error": e.to_string() })],
                error: Some(e.to_string()),
            }
        }
    }
}

fn validate(sp: &FiniteSpace, a: Option<&Action>, plain: bool, tol: f64) -> Outcome {
    let rep = match a {
        Some(a) if !plain => validate_theta_metric_with_tol(sp, a, tol),
        _ => validate_plain_metric(sp),
    };
    let violations = rep.violations.iter().map(val).collect();
    let mut result = val(&rep);
    result["passed"] = json!(rep.passed());
    if let Some(o) = result.as_object_mut() {
        o.remove("violations");
    }
    Outcome::new(result, violations)
}

fn ball(sp: &FiniteSpace, a: &Action, center: usize, r: f64, mode: InverseMode) -> Result<Outcome> {
    let b = open_ball(sp, a, center, r)?;
    let mut witnesses = Vec::new();
    let mut violations = Vec::new();
    for &y in &b.members {
        match openness_witness(sp, a, center, r, y, mode) {
            Ok(w) => witnesses.push(json!({
                "point": sp.label(y),
                "delta": w.delta,
                "inner": labels(sp, &w.inner),
            })),
            Err(e) => violations.push(json!({ "point": sp.label(y), "error": e.to_string() })),
        }
    }
    let mut result = json!({
        "center": sp.label(center),
        "radius": r,
        "radius_in_image": b.radius_in_image,
        "members": labels(sp, &b.members),
        "openness": witnesses,
    });
    if !b.radius_in_image {
        result["warning"] = json!("radius lies outside the image of the action");
    }
    Ok(Outcome::new(result, violations))
}

fn separate(sp: &FiniteSpace, a: &Action, pair: Option<(&usize, &usize)>) -> Outcome {
    let pairs: Vec<(usize, usize)> = match pair {
        Some((&x, &y)) => vec![(x, y)],
        None => (0..sp.len()).flat_map(|x| (x + 1..sp.len()).map(move |y| (x, y))).collect(),
    };
    let mut witnesses = Vec::new();
    let mut violations = Vec::new();
    for (x, y) in pairs {
        match separation_witness(sp, a, x, y) {
            Ok(w) => witnesses.push(json!({
                "x": sp.label(x),
                "y": sp.label(y),
                "alpha": w.alpha,
                "r": w.r,
                "s": w.s,
                "ball_x": labels(sp, &w.ball_x),
                "ball_y": labels(sp, &w.ball_y),
            })),
            Err(e) => violations.push(json!({ "x": sp.label(x), "y": sp.label(y), "error": e.to_string() })),
        }
    }
    Outcome::new(json!({ "pairs": witnesses }), violations)
}

fn uniformity(a: &Action, n: u64, n_max: Option<u64>) -> Outcome {
    let range = match n_max {
        Some(m) => 1..=m,
        None => n..=n,
    };
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in range {
        match uniformity_base_index(a, n) {
            Ok(m) => {
                let h = 1.0 / m as f64;
                let value = a.eval_unchecked(h, h);
                let verified = m > 2 * n && value < 1.0 / n as f64;
                let row = json!({ "n": n, "m": m, "theta_diag": value, "verified": verified });
                if !verified {
                    violations.push(row.clone());
                }
                rows.push(row);
            }
            Err(e) => violations.push(json!({ "n": n, "error": e.to_string() })),
        }
    }
    Outcome::new(json!({ "action": a.name(), "indices": rows }), violations)
}

fn banach(sp: &FiniteSpace, l: &Loaded, max_iter: usize) -> Result<Outcome> {
    let map = l.map.as_ref().expect("map loaded");
    let alpha = estimate_contraction_exhaustive(sp, map).ok();
    let opts = BanachOptions {
        tol_fix: l.tol.expect("tol set"),
        max_iter,
        alpha: alpha.filter(|a| *a < 1.0),
    };
    let tr = banach_solve(sp, |&i| map.apply(i), l.points["start"], &opts)?;
    let fixed = fixed_points_exhaustive(sp, map);
    let mut violations = Vec::new();
    if !tr.converged() {
        violations.push(json!({ "status": tr.status, "iterations": tr.iterations() }));
    }
    for &n in &tr.decay_violations {
        violations.push(json!({ "decay_step": n, "step": tr.step_dists[n], "previous": tr.step_dists[n - 1] }));
    }
    let unique = fixed.len() == 1 && tr.result.is_some_and(|r| fixed == [r]);
    if opts.alpha.is_some() && tr.converged() && !unique {
        violations.push(json!({ "fixed_points": labels(sp, &fixed), "error": "contraction with several fixed points" }));
    }
    let result = json!({
        "contraction_estimate": alpha,
        "status": tr.status,
        "iterations": tr.iterations(),
        "iterates": labels(sp, &tr.iterates),
        "step_dists": tr.step_dists,
        "result": tr.result.map(|r| sp.label(r).to_string()),
        "residual": tr.residual,
        "fixed_points": labels(sp, &fixed),
        "unique": unique,
    });
    Ok(Outcome::new(result, violations))
}

fn caristi(
    sp: &FiniteSpace,
    a: &Action,
    l: &Loaded,
    t: &MultiMap,
    solve: impl Fn(&FiniteSpace, &Action, &CaristiData) -> Result<CaristiOutcome>,
) -> Result<Outcome> {
    let cd = l.caristi.as_ref().expect("caristi loaded");
    let psi = check_psi(sp, a, cd)?;
    let gamma = check_gamma(cd, a, &l.sampler)?;
    let hyp = hypothesis_checks(sp, cd, t)?;
    let bound = psi_inverse_bound(sp, a, cd)?;

    let mut violations: Vec<Value> = psi.violations.iter().map(|v| json!({ "psi": v })).collect();
    violations.extend(gamma.violations.iter().take(WITNESS_CAP).map(|v| json!({ "gamma": v })));
    violations.extend(hyp.iter().filter(|h| !h.holds).map(|h| {
        json!({ "hypothesis": { "x": sp.label(h.x), "image": sp.label(h.image), "lhs": h.lhs, "rhs": h.rhs } })
    }));
    violations.extend(bound.violations.iter().map(|&(x, y, z, lhs, eta)| {
        json!({ "inverse_bound": { "points": labels(sp, &[x, y, z]), "psi": lhs, "eta": eta } })
    }));

    let mut result = json!({
        "psi": {
            "anchor": psi.anchor.map(|i| sp.label(i).to_string()),
            "anchor_min": psi.anchor_min,
            "semicontinuity": psi.semicontinuity,
            "triples_checked": psi.triples_checked,
            "triples_out_of_domain": psi.triples_out_of_domain,
            "passed": psi.passed(),
        },
        "gamma": { "pairs_checked": gamma.pairs_checked, "violations": gamma.violations.len(), "passed": gamma.passed() },
        "hypothesis": hyp.iter().map(|h| json!({
            "x": sp.label(h.x), "image": sp.label(h.image), "lhs": h.lhs, "rhs": h.rhs, "holds": h.holds,
        })).collect::<Vec<_>>(),
        "inverse_bound": { "triples_checked": bound.triples_checked, "violations": bound.violations.len() },
        "regular": a.regular(),
    });

    match solve(sp, a, cd) {
        Ok(out) => {
            let rel = &out.relation;
            let order: Vec<[&str; 2]> = (0..sp.len())
                .flat_map(|x| (0..sp.len()).map(move |y| (x, y)))
                .filter(|&(x, y)| x != y && rel.holds(x, y))
                .map(|(x, y)| [sp.label(x), sp.label(y)])
                .collect();
            let image = t.apply(out.point);
            result["order"] = json!(order);
            result["partial_order_verified"] = json!(true);
            result["minimal"] = json!(labels(sp, &out.minimal));
            result["point"] = json!(sp.label(out.point));
            result["image_of_point"] = json!(labels(sp, image));
            result["fixed"] = json!(image == [out.point]);
        }
        Err(e) => violations.push(json!({ "error": e.to_string() })),
    }
    // the regularity probe may have been skipped by an earlier failure
    if a.regular() == Compliance::Fails {
        result["warning"] = json!("action is flagged non-regular");
    }
    Ok(Outcome::new(result, violations))
}

fn list_fixtures(name: Option<&str>) -> Outcome {
    let describe = |f: &fixtures::Fixture| {
        json!({
            "name": f.name,
            "points": f.space.labels(),
            "action": f.action.to_spec(),
            "has_map": f.map.is_some(),
            "has_multimap": f.multimap.is_some(),
            "has_caristi": f.caristi.is_some(),
        })
    };
    let result = match name.and_then(fixtures::bundled) {
        Some(f) => json!({
            "name": f.name,
            "space": f.space.to_spec(),
            "action": f.action.to_spec(),
            "map": f.map.as_ref().map(|m| m.to_spec(&f.space)),
            "multimap": f.multimap.as_ref().map(|m| m.to_spec(&f.space)),
            "caristi": f.caristi.as_ref().and_then(|c| c.to_spec(&f.space)),
        }),
        None => json!({ "fixtures": fixtures::all().iter().map(describe).collect::<Vec<_>>() }),
    };
    Outcome::new(result, vec![])
}
