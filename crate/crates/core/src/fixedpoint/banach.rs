use serde::Serialize;

use super::TableMap;
use crate::error::{Error, Result};
use crate::spaces::{DistanceOracle, FiniteSpace};
use crate::tol;

/// Slack on the step-decay check `step[n] <= α·step[n-1]`.
const DECAY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BanachOptions {
    pub tol_fix: f64,
    pub max_iter: usize,
    /// Contraction bound to audit the step decay against, if known.
    pub alpha: Option<f64>,
}

impl Default for BanachOptions {
    fn default() -> Self {
        Self {
            tol_fix: tol::FIX,
            max_iter: 1_000,
            alpha: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveTrace<P> {
    pub iterates: Vec<P>,
    /// `d(x_n, x_{n+1})`.
    pub step_dists: Vec<f64>,
    pub status: SolveStatus,
    pub result: Option<P>,
    /// `d(x*, f(x*))` for the returned point.
    pub residual: Option<f64>,
    /// Indices `n` where `step[n] > α·step[n-1] + slack`.
    pub decay_violations: Vec<usize>,
}

impl<P> SolveTrace<P> {
    pub fn iterations(&self) -> usize {
        self.step_dists.len()
    }

    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

/// `max d(fx, fy) / d(x, y)` over the sampled pairs.
pub fn estimate_contraction<O, F>(oracle: &O, f: F, pairs: &[(O::Point, O::Point)]) -> Result<f64>
where
    O: DistanceOracle,
    F: Fn(&O::Point) -> O::Point,
{
    if pairs.is_empty() {
        return Err(Error::input("contraction estimate needs at least one pair"));
    }
    let mut alpha = 0.0f64;
    for (x, y) in pairs {
        let d = oracle.dist(x, y);
        if d <= 0.0 {
            return Err(Error::input("contraction sample contains a pair at distance 0"));
        }
        alpha = alpha.max(oracle.dist(&f(x), &f(y)) / d);
    }
    Ok(alpha)
}

/// Exhaustive contraction estimate over all distinct pairs of a finite space.
pub fn estimate_contraction_exhaustive(sp: &FiniteSpace, map: &TableMap) -> Result<f64> {
    let pairs: Vec<(usize, usize)> = (0..sp.len())
        .flat_map(|i| (i + 1..sp.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| sp.d(i, j) > 0.0)
        .collect();
    estimate_contraction(sp, |&i| map.apply(i), &pairs)
}

/// Every point with `d(x, f(x)) = 0`.
pub fn fixed_points_exhaustive(sp: &FiniteSpace, map: &TableMap) -> Vec<usize> {
    (0..sp.len()).filter(|&i| sp.d(i, map.apply(i)) == 0.0).collect()
}

/// Picard iteration `x_{n+1} = f(x_n)`.
///
/// Stops at the first step with `d(x_n, x_{n+1}) <= tol_fix` whose endpoint
/// also satisfies `d(x_{n+1}, f(x_{n+1})) <= tol_fix`, and returns
/// `x_{n+1}`. A non-finite distance ends the run as diverged.
pub fn banach_solve<O, F>(oracle: &O, f: F, x0: O::Point, opts: &BanachOptions) -> Result<SolveTrace<O::Point>>
where
    O: DistanceOracle,
    F: Fn(&O::Point) -> O::Point,
{
    if !(opts.tol_fix.is_finite() && opts.tol_fix > 0.0) {
        return Err(Error::input(format!("tol_fix must be positive, got {}", opts.tol_fix)));
    }
    if opts.max_iter == 0 {
        return Err(Error::input("max_iter must be at least 1"));
    }
    let mut iterates = vec![x0.clone()];
    let mut step_dists = Vec::new();
    let mut status = SolveStatus::MaxIter;
    let mut result = None;
    let mut residual = None;
    let mut cur = x0;

    for _ in 0..opts.max_iter {
        let next = f(&cur);
        let d = oracle.dist(&cur, &next);
        if !d.is_finite() {
            status = SolveStatus::Diverged;
            break;
        }
        iterates.push(next.clone());
        step_dists.push(d);
        if d <= opts.tol_fix {
            let res = oracle.dist(&next, &f(&next));
            if res <= opts.tol_fix {
                status = SolveStatus::Converged;
                residual = Some(res);
                result = Some(next);
                break;
            }
        }
        cur = next;
    }

    let decay_violations = match opts.alpha {
        Some(alpha) => step_dists
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] > alpha * w[0] + DECAY_SLACK)
            .map(|(n, _)| n + 1)
            .collect(),
        None => Vec::new(),
    };

    Ok(SolveTrace {
        iterates,
        step_dists,
        status,
        result,
        residual,
        decay_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::real_line;

    #[test]
    fn halving_contracts_by_half() {
        let line = real_line();
        let pairs: Vec<_> = [(1.0, 2.0), (-3.0, 5.0), (0.1, 0.2)]
            .iter()
            .map(|&(a, b)| (vec![a], vec![b]))
            .collect();
        assert_eq!(estimate_contraction(&line, |x| vec![x[0] / 2.0], &pairs).unwrap(), 0.5);
        assert_eq!(estimate_contraction(&line, |x| x.clone(), &pairs).unwrap(), 1.0);
        assert_eq!(estimate_contraction(&line, |_| vec![3.0], &pairs).unwrap(), 0.0);
        assert!(estimate_contraction(&line, |x| x.clone(), &[]).is_err());
        assert!(estimate_contraction(&line, |x| x.clone(), &[(vec![1.0], vec![1.0])]).is_err());
    }

    #[test]
    fn halving_converges_to_zero() {
        let line = real_line();
        let opts = BanachOptions {
            tol_fix: 1e-8,
            max_iter: 100,
            alpha: Some(0.5),
        };
        let tr = banach_solve(&line, |x| vec![x[0] / 2.0], vec![1.0], &opts).unwrap();
        assert!(tr.converged());
        assert!(tr.iterations() <= 30);
        assert!(tr.result.as_ref().unwrap()[0].abs() <= 1e-8);
        assert!(tr.decay_violations.is_empty());
        assert_eq!(tr.step_dists.len(), tr.iterates.len() - 1);
    }

    #[test]
    fn constant_map_lands_immediately() {
        let line = real_line();
        let tr = banach_solve(&line, |_| vec![4.0], vec![-7.0], &BanachOptions::default()).unwrap();
        assert!(tr.converged());
        assert_eq!(tr.iterates[1], vec![4.0]);
        assert_eq!(tr.result, Some(vec![4.0]));
        assert_eq!(tr.residual, Some(0.0));
    }

    #[test]
    fn two_cycle_exhausts_iterations() {
        let sp = FiniteSpace::from_line(&["a", "b", "c"], &[0.0, 1.0, 5.0]).unwrap();
        let map = TableMap::new(vec![1, 0, 0], &sp).unwrap();
        let opts = BanachOptions {
            tol_fix: 0.5,
            max_iter: 25,
            alpha: None,
        };
        let tr = banach_solve(&sp, |&i| map.apply(i), 2, &opts).unwrap();
        assert_eq!(tr.status, SolveStatus::MaxIter);
        assert_eq!(tr.iterations(), 25);
        assert!(tr.result.is_none());
        assert!(fixed_points_exhaustive(&sp, &map).is_empty());
    }

    #[test]
    fn blow_up_is_divergence() {
        let line = real_line();
        let tr = banach_solve(&line, |x| vec![x[0] * 1e200], vec![1e200], &BanachOptions::default()).unwrap();
        assert_eq!(tr.status, SolveStatus::Diverged);
    }

    #[test]
    fn rejects_bad_options() {
        let line = real_line();
        let mut opts = BanachOptions {
            tol_fix: 0.0,
            ..BanachOptions::default()
        };
        assert!(banach_solve(&line, |x| x.clone(), vec![0.0], &opts).is_err());
        opts.tol_fix = 1e-8;
        opts.max_iter = 0;
        assert!(banach_solve(&line, |x| x.clone(), vec![0.0], &opts).is_err());
    }
}
