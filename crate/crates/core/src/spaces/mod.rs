//! Finite theta-metric spaces and the topology they induce.

mod sequence;
mod topology;
mod validate;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use sequence::{check_limit_behavior, is_cauchy, CauchyReport, EpsIndex, LimitReport, UniquenessCheck};
pub use topology::{
    local_base_index, open_ball, openness_witness, separation_witness, uniformity_base_index, Ball, OpennessWitness,
    SeparationWitness,
};
pub use validate::{validate_plain_metric, validate_theta_metric, validate_theta_metric_with_tol, MetricReport, MetricViolation, ViolationKind};

/// A distance oracle over some point type.
///
/// Finite spaces use point indices; functional spaces use coordinate
/// vectors and compute distances on demand.
pub trait DistanceOracle {
    type Point: Clone;

    fn dist(&self, x: &Self::Point, y: &Self::Point) -> f64;
}

/// A labeled finite point set with a nonnegative distance matrix.
///
/// Construction checks shape, finiteness and sign only; identity and
/// symmetry are axioms reported by [`validate_theta_metric`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

/// Space JSON: `{"points": [...], "distances": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub points: Vec<String>,
    pub distances: Vec<Vec<f64>>,
}

impl FiniteSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::input("space has no points"));
        }
        if dist.len() != n {
            return Err(Error::input(format!("distance matrix has {} rows for {n} points", dist.len())));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("distance row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::input(format!("distance [{i}][{j}] = {d} is not a finite nonnegative number")));
                }
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate point label `{l}`")));
            }
        }
        Ok(Self { labels, dist, index })
    }

    pub fn from_spec(spec: &SpaceSpec) -> Result<Self> {
        Self::new(spec.points.clone(), spec.distances.clone())
    }

    pub fn to_spec(&self) -> SpaceSpec {
        SpaceSpec {
            points: self.labels.clone(),
            distances: self.dist.clone(),
        }
    }

    /// Points on the real line with `d(x, y) = |x − y|`.
    pub fn from_line(labels: &[&str], coords: &[f64]) -> Result<Self> {
        if labels.len() != coords.len() {
            return Err(Error::input("label and coordinate counts differ"));
        }
        let dist = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        Self::new(labels.iter().map(|s| s.to_string()).collect(), dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn check_index(&self, i: usize) -> Result<usize> {
        if i < self.len() {
            Ok(i)
        } else {
            Err(Error::UnknownPoint(format!("#{i}")))
        }
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }
}

impl DistanceOracle for FiniteSpace {
    type Point = usize;

    fn dist(&self, x: &usize, y: &usize) -> f64 {
        self.dist[*x][*y]
    }
}

/// Functional space over fixed-length real vectors with a user-supplied
/// distance.
pub struct FnSpace<F> {
    dim: usize,
    dist: F,
}

impl<F> FnSpace<F>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    pub fn new(dim: usize, dist: F) -> Self {
        Self { dim, dist }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl<F> DistanceOracle for FnSpace<F>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    type Point = Vec<f64>;

    fn dist(&self, x: &Vec<f64>, y: &Vec<f64>) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        (self.dist)(x, y)
    }
}

type Metric = fn(&[f64], &[f64]) -> f64;

/// The real line with `d(x, y) = |x − y|`.
pub fn real_line() -> FnSpace<Metric> {
    fn abs_diff(x: &[f64], y: &[f64]) -> f64 {
        (x[0] - y[0]).abs()
    }
    FnSpace::new(1, abs_diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_errors() {
        let l = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert!(FiniteSpace::new(vec![], vec![]).is_err());
        assert!(FiniteSpace::new(l(&["a", "b"]), vec![vec![0.0, 1.0]]).is_err());
        assert!(FiniteSpace::new(l(&["a", "b"]), vec![vec![0.0, 1.0], vec![1.0]]).is_err());
        assert!(FiniteSpace::new(l(&["a", "b"]), vec![vec![0.0, -1.0], vec![1.0, 0.0]]).is_err());
        assert!(FiniteSpace::new(l(&["a", "b"]), vec![vec![0.0, f64::NAN], vec![1.0, 0.0]]).is_err());
        assert!(FiniteSpace::new(l(&["a", "a"]), vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn lookup_and_json() {
        let sp = FiniteSpace::from_line(&["a", "b", "c"], &[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(sp.index_of("c").unwrap(), 2);
        assert_eq!(sp.index_of("q").unwrap_err(), Error::UnknownPoint("q".into()));
        assert_eq!(sp.d(0, 2), 3.0);
        let json = serde_json::to_string(&sp.to_spec()).unwrap();
        assert_eq!(json, r#"{"points":["a","b","c"],"distances":[[0.0,1.0,3.0],[1.0,0.0,2.0],[3.0,2.0,0.0]]}"#);
        let back = FiniteSpace::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, sp);
    }

    #[test]
    fn real_line_oracle() {
        let line = real_line();
        assert_eq!(line.dist(&vec![1.5], &vec![-2.0]), 3.5);
    }
}
