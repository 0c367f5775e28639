//! Fixed points in theta-metric spaces.
//!
//! [`banach_solve`] iterates a map on any [`DistanceOracle`](crate::DistanceOracle).
//! The Caristi machinery ([`caristi_order`], [`minimal_elements`],
//! [`caristi_fixed_point`], [`endpoint`]) works on finite spaces only, where
//! minimal elements of the order are found by exhaustive scan.

mod banach;
mod caristi;
mod maps;

pub use banach::{
    banach_solve, estimate_contraction, estimate_contraction_exhaustive, fixed_points_exhaustive, BanachOptions,
    SolveStatus, SolveTrace,
};
pub use caristi::{
    caristi_fixed_point, caristi_order, check_gamma, check_psi, endpoint, hypothesis_checks, minimal_elements, psi_from_phi,
    psi_inverse_bound, CaristiData, CaristiOutcome, CaristiSpec, Gamma, GammaReport, GammaSpec, GammaViolation,
    HypothesisCheck, Psi, PsiBoundReport, PsiForm, PsiReport, PsiSpec, PsiViolation, Relation,
};
pub use maps::{MapSpec, MultiMap, MultiMapSpec, TableMap};
