//! Bisection for the unique zero of an increasing radius functional.
//!
//! Every evaluation carries a tail bound. A midpoint whose value does not
//! clear its bound is re-evaluated at tighter tolerance before the bracket
//! is updated, so truncation noise never decides a sign.

use serde::{Deserialize, Serialize};

use crate::class::ClassParams;
use crate::error::{check_tol, Error, Result};
use crate::functionals::{
    endpoint_signs_with, evaluate_closed_form, BohrFunctional, ClosedForm, Evaluator,
};
use crate::series::{SeriesSum, TOL_FLOOR};

pub const DEFAULT_XTOL: f64 = 1e-10;
pub const DEFAULT_FTOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1000;

/// Upper end of the closed-form bracket.
const CLOSED_FORM_UPPER: f64 = 1.0 - 1e-9;

/// A located radius together with its certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub radius: f64,
    /// Functional value at `radius`.
    pub residual: f64,
    /// Width of the final sign-change bracket `[lower, upper]`.
    pub bracket_width: f64,
    pub lower: f64,
    pub upper: f64,
    pub evaluations: usize,
    /// Tail bound of the evaluation that produced `residual`.
    pub tail_at_root: f64,
}

impl RootResult {
    pub fn steps_bound(xtol: f64) -> usize {
        (1.0 / xtol).log2().ceil() as usize + 2
    }
}

enum Side {
    Below,
    Above,
    /// Indistinguishable from zero at the tolerance floor.
    Zero(SeriesSum),
}

fn check_xtol(xtol: f64) -> Result<()> {
    check_tol(xtol)
}

fn check_ftol(ftol: f64) -> Result<()> {
    check_tol(ftol)?;
    if ftol < TOL_FLOOR {
        return Err(Error::InvalidArgument(format!(
            "ftol {ftol:e} below the working floor {TOL_FLOOR:e}"
        )));
    }
    Ok(())
}

/// Side of the root at `r`, tightening the series tolerance on ambiguity.
fn classify(ev: &Evaluator, r: f64, ftol: f64, evaluations: &mut usize) -> Result<Side> {
    let mut tol = ftol;
    loop {
        let v = ev.at(r, tol)?;
        *evaluations += 1;
        if v.value > v.tail_bound {
            return Ok(Side::Above);
        }
        if v.value < -v.tail_bound {
            return Ok(Side::Below);
        }
        if tol <= TOL_FLOOR {
            return Ok(Side::Zero(v));
        }
        tol = (tol / 1000.0).max(TOL_FLOOR);
    }
}

/// Unique zero of `f` at `params` in `(0, 1−ε)`.
pub fn find_radius(
    f: BohrFunctional,
    params: ClassParams,
    xtol: f64,
    ftol: f64,
) -> Result<RootResult> {
    let ev = Evaluator::new(f, params)?;
    find_radius_with(&ev, xtol, ftol)
}

/// As [`find_radius`], reusing a prepared evaluator.
pub fn find_radius_with(ev: &Evaluator, xtol: f64, ftol: f64) -> Result<RootResult> {
    check_xtol(xtol)?;
    check_ftol(ftol)?;
    let ends = endpoint_signs_with(ev)?;
    let mut evaluations = 2;
    let (mut lo, mut hi) = (0.0, ends.upper_r);
    let mut iterations = 0;
    while hi - lo > xtol {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence(MAX_ITERATIONS));
        }
        let mid = 0.5 * (lo + hi);
        match classify(ev, mid, ftol, &mut evaluations)? {
            Side::Below => lo = mid,
            Side::Above => hi = mid,
            Side::Zero(v) => {
                return Ok(RootResult {
                    radius: mid,
                    residual: v.value,
                    bracket_width: 0.0,
                    lower: mid,
                    upper: mid,
                    evaluations,
                    tail_at_root: v.tail_bound,
                })
            }
        }
    }
    let radius = 0.5 * (lo + hi);
    let at = ev.at(radius, ftol)?;
    evaluations += 1;
    Ok(RootResult {
        radius,
        residual: at.value,
        bracket_width: hi - lo,
        lower: lo,
        upper: hi,
        evaluations,
        tail_at_root: at.tail_bound,
    })
}

/// Zero of a printed closed-form equation on `(0, 1)`.
pub fn find_closed_form_root(cf: ClosedForm, xtol: f64) -> Result<RootResult> {
    check_xtol(xtol)?;
    let k0 = evaluate_closed_form(cf, 0.0)?;
    let k1 = evaluate_closed_form(cf, CLOSED_FORM_UPPER)?;
    if !(k0 < 0.0 && k1 > 0.0) {
        return Err(Error::ClosedFormInconsistent(format!(
            "{}: values {k0} at 0 and {k1} at {CLOSED_FORM_UPPER}",
            cf.name()
        )));
    }
    let mut evaluations = 2;
    let (mut lo, mut hi) = (0.0, CLOSED_FORM_UPPER);
    let mut iterations = 0;
    while hi - lo > xtol {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence(MAX_ITERATIONS));
        }
        let mid = 0.5 * (lo + hi);
        let v = evaluate_closed_form(cf, mid)?;
        evaluations += 1;
        if v < 0.0 {
            lo = mid;
        } else if v > 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    let residual = evaluate_closed_form(cf, radius)?;
    Ok(RootResult {
        radius,
        residual,
        bracket_width: hi - lo,
        lower: lo,
        upper: hi,
        evaluations: evaluations + 1,
        tail_at_root: 0.0,
    })
}
