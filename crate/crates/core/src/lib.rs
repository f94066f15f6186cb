//! Bohr-type radii for the harmonic class `R_H⁰(γ, δ, λ)`.
//!
//! Every radius is the unique zero on `(0, 1)` of an increasing function
//! `k(r)` assembled from the coefficient bound `c_m`. Series are summed with
//! explicit tail bounds so that each reported radius carries an error budget.

pub mod class;
pub mod error;
pub mod functionals;
pub mod polylog;
pub mod rootfind;
pub mod series;
pub mod sharpness;
pub mod suite;

pub use class::ClassParams;
pub use error::{Error, Result};
pub use functionals::{
    endpoint_signs, evaluate, evaluate_closed_form, BohrFunctional, ClosedForm, EndpointSigns,
    Evaluator, Sign,
};
pub use polylog::{li, li_constants, PolylogOrder};
pub use rootfind::{find_closed_form_root, find_radius, RootResult, DEFAULT_FTOL, DEFAULT_XTOL};
pub use series::{
    sum_series, CoefficientRule, ExponentRule, SeriesSpec, SeriesSum, SignRule, DEFAULT_TOL,
    TOL_FLOOR,
};
pub use sharpness::{
    bohr_sum_at, class_membership_check, verify_sharpness, ExtremalFunction, SharpnessReport,
    Verdict,
};
pub use suite::{run_suite, Status, SuiteRow};
