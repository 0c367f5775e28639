//! Acceptance suite. Each test checks one criterion and prints a single
//! `PASS`/`FAIL` line; run with `--nocapture` to see them.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use theta_metric::actions::{catalog, check_action_axioms, eta, eta_bisect, image_contains, measured_catalog, Condition};
use theta_metric::fixedpoint::{
    banach_solve, caristi_fixed_point, caristi_order, check_psi, endpoint, fixed_points_exhaustive,
    hypothesis_checks, minimal_elements, BanachOptions, MultiMap,
};
use theta_metric::spaces::{
    open_ball, openness_witness, real_line, separation_witness, uniformity_base_index, validate_theta_metric,
};
use theta_metric::{fixtures, Action, Compliance, FiniteSpace, InverseMode, Sampler};

const SEED: u64 = 20_240_917;

fn verdict(id: u32, title: &str, ok: bool, detail: String) {
    println!("{} [{id:>2}] {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} ({title}) failed: {detail}");
}

fn thetam(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_thetam"))
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn thetam_json(args: &[&str]) -> (i32, Value) {
    let (code, s) = thetam(args);
    (code, serde_json::from_str(&s).expect("JSON report"))
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[test]
fn c01_worked_fixtures_reproduce() {
    let t0 = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    let (code, rep) = thetam_json(&[
        "validate-space", "--space", "builtin:three-point", "--action", "builtin:sum_plus_prod", "--tol", "0",
    ]);
    ok &= code == 0 && rep["result"]["passed"] == true;
    notes.push(format!("three-point/s+t+st exit {code}"));

    let (code, rep) = thetam_json(&[
        "validate-space", "--space", "builtin:three-point", "--action", "builtin:k_sum:k=1", "--tol", "0",
    ]);
    let fams = rep["result"]["triangle_families"].as_u64();
    let vs = rep["violations"].as_array().cloned().unwrap_or_default();
    let ten_over_eight = !vs.is_empty()
        && vs.iter().all(|v| v["lhs"].as_f64() == Some(10.0) && v["rhs"].as_f64() == Some(8.0) && v["labels"][2] == "x");
    ok &= code == 1 && fams == Some(1) && ten_over_eight;
    notes.push(format!("three-point/s+t exit {code}, families {fams:?}, 10>8 {ten_over_eight}"));

    let (code, rep) = thetam_json(&["validate-space", "--space", "builtin:plain-triangle", "--plain", "--tol", "0"]);
    ok &= code == 0 && rep["result"]["passed"] == true;
    notes.push(format!("plain-triangle/plain exit {code}"));

    let (code, rep) = thetam_json(&[
        "validate-space", "--space", "builtin:plain-triangle", "--action", "builtin:k_sum:k=0.5", "--tol", "0",
    ]);
    let two_over_one = rep["violations"]
        .as_array()
        .is_some_and(|vs| vs.iter().any(|v| v["lhs"].as_f64() == Some(2.0) && v["rhs"].as_f64() == Some(1.0)));
    ok &= code == 1 && two_over_one;
    notes.push(format!("plain-triangle/(s+t)/2 exit {code}, 2>1 {two_over_one}"));

    let el = t0.elapsed();
    ok &= el < Duration::from_secs(1);
    verdict(1, "worked fixtures", ok, format!("{} ({:.0} ms)", notes.join("; "), ms(el)));
}

/// Independent closed forms.
fn closed_sum(r: f64, s: f64) -> f64 {
    r - s
}

fn closed_root(r: f64, s: f64, n: i32) -> f64 {
    (r.powi(n) - s.powi(n)).max(0.0).powf(1.0 / n as f64)
}

#[test]
fn c02_inverse_matches_closed_forms() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pairs: Vec<(f64, f64)> = (0..10_000)
        .map(|_| {
            let r = rng.gen_range(0.0..=1e3);
            (r, rng.gen_range(0.0..=r))
        })
        .collect();
    type ClosedForm = Box<dyn Fn(f64, f64) -> f64>;
    let cases: Vec<(Action, ClosedForm)> = vec![
        (Action::sum(), Box::new(closed_sum)),
        (Action::root_sum_power(1.0).unwrap(), Box::new(|r, s| closed_root(r, s, 1))),
        (Action::root_sum_power(2.0).unwrap(), Box::new(|r, s| closed_root(r, s, 2))),
        (Action::root_sum_power(3.0).unwrap(), Box::new(|r, s| closed_root(r, s, 3))),
        (Action::root_sum_power(5.0).unwrap(), Box::new(|r, s| closed_root(r, s, 5))),
    ];
    let mut worst = Vec::new();
    let mut ok = true;
    for (a, closed) in &cases {
        let mut max_err = 0.0f64;
        for &(r, s) in &pairs {
            let err = match eta_bisect(a, r, s, InverseMode::Strict) {
                Ok(t) => (t - closed(r, s)).abs(),
                Err(_) => f64::INFINITY,
            };
            max_err = max_err.max(err);
        }
        ok &= max_err <= 1e-9;
        worst.push(format!("{} {:.1e}", a.name(), max_err));
    }
    let el = t0.elapsed();
    ok &= el < Duration::from_secs(5);
    verdict(2, "inverse vs closed forms", ok, format!("max |Δ| {} ({:.0} ms)", worst.join(", "), ms(el)));
}

#[test]
fn c03_regular_actions_vanish_on_the_diagonal() {
    let measured = measured_catalog(&Sampler::with_seed(SEED)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut ok = true;
    let mut regular = Vec::new();
    let mut flagged = Vec::new();
    for (a, _) in &measured {
        match a.regular() {
            Compliance::Holds => {
                let mut worst = 0.0f64;
                let mut tested = 0;
                while tested < 1_000 {
                    let r = rng.gen_range(1e-6..=1e3);
                    if !image_contains(a, r).unwrap().contains {
                        continue;
                    }
                    tested += 1;
                    worst = worst.max(eta(a, r, r, InverseMode::Existence).unwrap_or(f64::INFINITY));
                }
                ok &= worst <= 1e-9;
                regular.push(format!("{} {:.0e}", a.name(), worst));
            }
            Compliance::Fails => {
                // the flag must be backed by an actual counterexample
                let backed = (1..=10).any(|i| {
                    let r = i as f64 * 0.1;
                    image_contains(a, r).unwrap().contains
                        && eta(a, r, r, InverseMode::Existence).map_or(true, |t| t > 1e-9)
                });
                ok &= backed;
                flagged.push(a.name().to_string());
            }
            Compliance::Unknown => {
                ok = false;
                flagged.push(format!("{} UNMEASURED", a.name()));
            }
        }
    }
    verdict(
        3,
        "regularity",
        ok,
        format!("regular [{}]; flagged non-regular [{}]", regular.join(", "), flagged.join(", ")),
    );
}

#[test]
fn c04_sublevel_bound_holds() {
    let measured = measured_catalog(&Sampler::with_seed(SEED)).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (a, rep) in &measured {
        if !rep.compliant_existence() {
            notes.push(format!("{} skipped (not compliant)", a.name()));
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
        let (mut tested, mut bad, mut draws) = (0, 0, 0);
        while tested < 10_000 && draws < 1_000_000 {
            draws += 1;
            let x = rng.gen_range(0.0..=100.0);
            let b = rng.gen_range(0.0..=100.0);
            let c = a.eval(x, b).unwrap() + rng.gen_range(0.0..=10.0);
            if b > c || !image_contains(a, c).unwrap().contains {
                continue;
            }
            tested += 1;
            match eta(a, c, b, InverseMode::Existence) {
                Ok(e) if x <= e + 1e-9 => {}
                _ => bad += 1,
            }
        }
        ok &= tested == 10_000 && bad == 0;
        notes.push(format!("{} {bad}/{tested}", a.name()));
    }
    verdict(4, "sublevel bound by inverse", ok, notes.join(", "));
}

#[test]
fn c05_checker_catches_known_defects() {
    let sp = Sampler::with_seed(SEED);
    let prod = Action::prod_over_one_plus_prod();
    let rep = check_action_axioms(&prod, &sp).unwrap();
    let mono: Vec<_> = rep.violations.iter().filter(|w| w.condition == Condition::StrictMonotonicity).collect();
    let zero_line = mono.iter().any(|w| w.inputs[1] == 0.0 && w.inputs[3] == 0.0);
    let prod_ok = !mono.is_empty() && zero_line && mono.iter().all(|w| w.replays(&prod));

    let quarter = Action::k_sum(0.25).unwrap();
    let rep = check_action_axioms(&quarter, &sp).unwrap();
    let strict: Vec<_> = rep.violations.iter().filter(|w| w.condition == Condition::SolvabilityStrict).collect();
    let quarter_ok = !strict.is_empty()
        && strict.iter().all(|w| w.replays(&quarter))
        && rep.status(Condition::SolvabilityExistence).holds();
    verdict(
        5,
        "checker sensitivity",
        prod_ok && quarter_ok,
        format!(
            "st/(1+st): {} monotonicity witnesses, zero-line tie {zero_line}; k=1/4: {} strict-range witnesses",
            mono.len(),
            strict.len()
        ),
    );
}

fn enum_ball(sp: &FiniteSpace, c: usize, r: f64) -> Vec<usize> {
    (0..sp.len()).filter(|&z| sp.d(c, z) < r).collect()
}

#[test]
fn c06_topology_witnesses() {
    let t0 = Instant::now();
    let mut ok = true;
    let (mut openness, mut separations, mut used) = (0, 0, Vec::new());
    for f in fixtures::all() {
        let (sp, a) = (&f.space, &f.action);
        if !validate_theta_metric(sp, a).passed() {
            continue;
        }
        used.push(f.name);
        let mut radii: Vec<f64> = sp.matrix().iter().flatten().copied().filter(|d| *d > 0.0).collect();
        let extra: Vec<f64> = radii.iter().map(|d| d * 1.5).collect();
        radii.extend(extra);
        radii.extend([0.25, 1.0, 50.0]);
        for c in 0..sp.len() {
            for &r in &radii {
                let outer = enum_ball(sp, c, r);
                ok &= open_ball(sp, a, c, r).unwrap().members == outer;
                for &y in &outer {
                    match openness_witness(sp, a, c, r, y, InverseMode::Existence) {
                        Ok(w) => ok &= w.delta > 0.0 && enum_ball(sp, y, w.delta).iter().all(|z| outer.contains(z)),
                        Err(_) => ok = false,
                    }
                    openness += 1;
                }
            }
            for y in (0..sp.len()).filter(|&y| y != c) {
                match separation_witness(sp, a, c, y) {
                    Ok(w) => {
                        let (bx, by) = (enum_ball(sp, c, w.r), enum_ball(sp, y, w.s));
                        ok &= bx.iter().all(|z| !by.contains(z));
                    }
                    Err(_) => ok = false,
                }
                separations += 1;
            }
        }
    }
    let el = t0.elapsed();
    ok &= el < Duration::from_secs(1);
    verdict(
        6,
        "topology witnesses",
        ok,
        format!("{openness} openness, {separations} separation checks on {used:?} ({:.0} ms)", ms(el)),
    );
}

#[test]
fn c07_uniformity_indices() {
    let sum = uniformity_base_index(&Action::sum(), 1).unwrap();
    let spp = uniformity_base_index(&Action::sum_plus_prod(), 2).unwrap();
    let mut ok = sum == 3 && spp == 5;
    let mut checked = 0;
    for a in catalog() {
        for n in 1..=100u64 {
            let m = uniformity_base_index(&a, n).unwrap();
            let h = 1.0 / m as f64;
            ok &= m > 2 * n && a.eval(h, h).unwrap() < 1.0 / n as f64;
            checked += 1;
        }
    }
    verdict(7, "uniformity base", ok, format!("sum n=1 -> {sum}, s+t+st n=2 -> {spp}, {checked} (action, n) verified"));
}

#[test]
fn c08_banach_solver() {
    let opts = BanachOptions {
        tol_fix: 1e-8,
        max_iter: 1_000,
        alpha: Some(0.5),
    };
    let tr = banach_solve(&real_line(), |x| vec![x[0] / 2.0], vec![1.0], &opts).unwrap();
    let x = tr.result.as_ref().map(|p| p[0]);
    let decay = tr.step_dists.windows(2).all(|w| w[1] <= 0.5 * w[0] + 1e-12);
    let mut ok = tr.converged() && tr.iterations() <= 30 && x.is_some_and(|x| x.abs() <= 1e-8) && decay;

    let f = fixtures::bundled("contraction-5pt").unwrap();
    let map = f.map.as_ref().unwrap();
    let tr5 = banach_solve(&f.space, |&i| map.apply(i), f.space.len() - 1, &BanachOptions::default()).unwrap();
    let fixed = fixed_points_exhaustive(&f.space, map);
    let unique = tr5.result.is_some_and(|r| fixed == [r]);
    ok &= tr5.converged() && unique;
    verdict(
        8,
        "Banach solver",
        ok,
        format!(
            "x/2: {} iterations, x* = {:.2e}, decay {decay}; 5-point: fixed points {:?}, returned {:?}",
            tr.iterations(),
            x.unwrap_or(f64::NAN),
            fixed.iter().map(|&i| f.space.label(i)).collect::<Vec<_>>(),
            tr5.result.map(|i| f.space.label(i)),
        ),
    );
}

#[test]
fn c09_caristi_pipeline() {
    let f = fixtures::bundled("caristi-chain").unwrap();
    let (sp, a) = (&f.space, &f.action);
    let cd = f.caristi.as_ref().unwrap();
    let map = f.map.as_ref().unwrap();
    let p2 = sp.index_of("p2").unwrap();

    let hyp = hypothesis_checks(sp, cd, &MultiMap::from(map)).unwrap();
    let hyp_ok = hyp.len() == sp.len() && hyp.iter().all(|h| h.holds);
    let order = caristi_order(sp, a, cd).unwrap();
    let order_ok = order.verify_partial_order().is_ok();
    let minimal = minimal_elements(&order);
    let fp = caristi_fixed_point(sp, a, cd, map).unwrap();
    let ep = endpoint(sp, a, cd, f.multimap.as_ref().unwrap()).unwrap();
    let (code, cli) = thetam_json(&["caristi", "--space", "builtin:caristi-chain"]);
    let (code_e, cli_e) = thetam_json(&["endpoint", "--space", "builtin:caristi-chain"]);
    let ok = hyp_ok
        && check_psi(sp, a, cd).unwrap().passed()
        && order_ok
        && minimal == [p2]
        && fp.point == p2
        && map.apply(p2) == p2
        && ep.point == p2
        && code == 0
        && cli["result"]["point"] == "p2"
        && code_e == 0
        && cli_e["result"]["point"] == "p2";
    verdict(
        9,
        "Caristi pipeline",
        ok,
        format!(
            "hypothesis {}/{} hold, partial order {order_ok}, minimal {:?}, fixed point {}, endpoint {}",
            hyp.iter().filter(|h| h.holds).count(),
            hyp.len(),
            minimal.iter().map(|&i| sp.label(i)).collect::<Vec<_>>(),
            sp.label(fp.point),
            sp.label(ep.point)
        ),
    );
}

#[test]
fn c10_potential_inverse_bound() {
    let mut ok = true;
    let mut notes = Vec::new();
    for f in fixtures::all() {
        let Some(cd) = &f.caristi else { continue };
        let (sp, a) = (&f.space, &f.action);
        let n = sp.len();
        let (mut tested, mut bad) = (0, 0);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (c, b) = (cd.psi.eval(x, z), cd.psi.eval(y, z));
                    if !(0.0 <= b && b <= c) || !image_contains(a, c).unwrap().contains {
                        continue;
                    }
                    tested += 1;
                    match eta(a, c, b, InverseMode::Existence) {
                        Ok(e) if cd.psi.eval(x, y) <= e + 1e-9 => {}
                        _ => bad += 1,
                    }
                }
            }
        }
        ok &= tested > 0 && bad == 0;
        notes.push(format!("{} {bad}/{tested}", f.name));
    }
    verdict(10, "potential bounded by inverse", ok, notes.join(", "));
}

#[test]
fn c11_reports_are_deterministic() {
    let runs: [&[&str]; 8] = [
        &["validate-space", "--space", "builtin:three-point", "--action", "builtin:k_sum:k=1"],
        &["check-action", "--action", "builtin:prod_over_one_plus_prod", "--samples", "2000"],
        &["eta", "--action", "builtin:root_sum_power:n=3", "--r", "7", "--s", "2"],
        &["ball", "--space", "builtin:three-point", "--center", "x", "--radius", "7"],
        &["separate", "--space", "builtin:plain-triangle"],
        &["uniformity-base", "--action", "builtin:sum_plus_sqrt_prod", "--n-max", "20"],
        &["banach", "--space", "builtin:contraction-5pt", "--start", "q4"],
        &["endpoint", "--space", "builtin:caristi-chain"],
    ];
    let strip = |s: &str| s[..s.rfind("\"timing_ms\"").expect("timing field")].to_string();
    let mut same = 0;
    for args in runs {
        let (_, a) = thetam(args);
        let (_, b) = thetam(args);
        if strip(&a) == strip(&b) {
            same += 1;
        }
    }
    verdict(11, "deterministic reports", same == runs.len(), format!("{same}/{} byte-identical", runs.len()));
}
