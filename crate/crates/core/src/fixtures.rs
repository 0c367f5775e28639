//! Named built-in fixtures, usable without external files.

use crate::actions::Action;
use crate::fixedpoint::{CaristiData, Gamma, MultiMap, Psi, TableMap};
use crate::spaces::FiniteSpace;

/// A finite space with the action it is meant to be read under, and
/// optionally a map, a multimap and Caristi data on it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub space: FiniteSpace,
    pub action: Action,
    pub map: Option<TableMap>,
    pub multimap: Option<MultiMap>,
    pub caristi: Option<CaristiData>,
}

const NAMES: [&str; 5] = [
    "three-point",
    "plain-triangle",
    "caristi-chain",
    "cube-root-chain",
    "contraction-5pt",
];

pub fn names() -> &'static [&'static str] {
    &NAMES
}

pub fn bundled(name: &str) -> Option<Fixture> {
    Some(match name {
        "three-point" => bare("three-point", three_point(), Action::sum_plus_prod()),
        "plain-triangle" => bare("plain-triangle", plain_triangle(), Action::sum()),
        "caristi-chain" => caristi_chain(),
        "cube-root-chain" => cube_root_chain(),
        "contraction-5pt" => contraction_five_point(),
        _ => return None,
    })
}

pub fn all() -> Vec<Fixture> {
    NAMES.iter().filter_map(|n| bundled(n)).collect()
}

fn bare(name: &'static str, space: FiniteSpace, action: Action) -> Fixture {
    Fixture {
        name,
        space,
        action,
        map: None,
        multimap: None,
        caristi: None,
    }
}

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// `d(x, y) = 2`, `d(x, z) = 6`, `d(y, z) = 10`: a θ-metric under
/// `s + t + st` but not under `s + t`.
pub fn three_point() -> FiniteSpace {
    FiniteSpace::new(
        labels(&["x", "y", "z"]),
        vec![vec![0.0, 2.0, 6.0], vec![2.0, 0.0, 10.0], vec![6.0, 10.0, 0.0]],
    )
    .expect("valid matrix")
}

/// `d(1, 2) = d(1, 3) = 1`, `d(2, 3) = 2`: a metric that fails `(s + t)/2`.
pub fn plain_triangle() -> FiniteSpace {
    FiniteSpace::new(
        labels(&["1", "2", "3"]),
        vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 2.0], vec![1.0, 2.0, 0.0]],
    )
    .expect("valid matrix")
}

/// Three points on a line with `φ(p_i) = 2(2 − i)` and the shift toward `p2`.
pub fn caristi_chain() -> Fixture {
    let space = FiniteSpace::from_line(&["p0", "p1", "p2"], &[0.0, 1.0, 2.0]).expect("valid line");
    let map = TableMap::new(vec![1, 2, 2], &space).expect("valid map");
    let multimap = MultiMap::new(vec![vec![1, 2], vec![2], vec![2]], &space).expect("valid multimap");
    Fixture {
        name: "caristi-chain",
        action: Action::sum(),
        map: Some(map),
        multimap: Some(multimap),
        caristi: Some(CaristiData::difference(&[4.0, 2.0, 0.0])),
        space,
    }
}

/// Three points under `(s³ + t³)^{1/3}` with `ψ = ∛(φ(y) − φ(x))`.
pub fn cube_root_chain() -> Fixture {
    let space = FiniteSpace::new(
        labels(&["p0", "p1", "p2"]),
        vec![vec![0.0, 1.0, 1.25], vec![1.0, 0.0, 1.0], vec![1.25, 1.0, 0.0]],
    )
    .expect("valid matrix");
    let map = TableMap::new(vec![1, 2, 2], &space).expect("valid map");
    let phi = vec![16.0, 8.0, 0.0];
    let mut caristi = CaristiData::new(
        Gamma::Identity,
        Psi::OddRootPhi {
            n: 1,
            phi: phi.clone(),
        },
    );
    caristi.phi = Some(phi);
    Fixture {
        name: "cube-root-chain",
        action: Action::root_sum_power(3.0).expect("n >= 1"),
        multimap: Some(MultiMap::from(&map)),
        map: Some(map),
        caristi: Some(caristi),
        space,
    }
}

/// `q_i` at `2^i − 1` with `q_i ↦ q_{i−1}` and `q0` fixed; contraction 1/2.
pub fn contraction_five_point() -> Fixture {
    let space =
        FiniteSpace::from_line(&["q0", "q1", "q2", "q3", "q4"], &[0.0, 1.0, 3.0, 7.0, 15.0]).expect("valid line");
    let map = TableMap::new(vec![0, 0, 1, 2, 3], &space).expect("valid map");
    Fixture {
        name: "contraction-5pt",
        action: Action::sum(),
        map: Some(map),
        multimap: None,
        caristi: None,
        space,
    }
}
