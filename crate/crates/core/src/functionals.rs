//! Radius equations `k(r) = 0` for every Bohr-type inequality on the class.
//!
//! Each [`BohrFunctional`] is evaluated from the coefficient bound `c_m`
//! through the series engine; this is the authoritative path. The printed
//! closed forms of the special-parameter corollaries live in [`ClosedForm`]
//! and are kept only to compare against the series path.
//!
//! Common pieces, with `d` the distance lower bound:
//!
//! ```text
//! H(r)  = r + Σ_{m≥2} c_m r^m
//! ImprovedBohr{p}        r + Σ_{m≥2} c_m r^m + Σ_{m≥2} c_m^p r^{pm} − d
//! SquaredCoef            r + Σ_{m≥2} c_m r^{2m} − d
//! SelfPlusCoef           r + 2 Σ_{m≥2} c_m r^m − d
//! AnalyticSplit          2r + 2 Σ_{m≥2} c_m r^m − d
//! CoAnalyticSplit        r + Σ_{m≥2} c_m r^m − d
//! Rogosinski{n,N}        r^n + Σ_{m≥2} c_m r^{nm} + Σ_{m≥N} c_m r^m − d
//! RogosinskiSquared{N}   H(r)² + Σ_{m≥N} c_m r^m − d
//! Refined{n,N,μ,β}       H(r)^n + Σ_{m≥N} c_m r^m
//!                          + μ sgn(t) (Σ_{m=1}^{t} c_m²) r^N/(1−r)
//!                          + β/(1−r) Σ_{m≥t+1} c_m² r^{2m} − d,   t = ⌊(N−1)/2⌋
//! ```

use std::f64::consts::{LN_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::class::ClassParams;
use crate::error::{check_tol, Error, Result};
use crate::polylog::{li, PolylogOrder};
use crate::series::{
    sum_series, CoefficientRule, ExponentRule, SeriesSpec, SeriesSum, SignRule, TOL_FLOOR,
};

/// Tolerance used for the distance lower bound inside evaluators.
const DISTANCE_TOL: f64 = 1e-14;

/// Upper bracket offsets `1 − ε`.
pub const EPSILON_REGULAR: f64 = 1e-9;
pub const EPSILON_DIVERGENT: f64 = 1e-6;

/// Which radius equation is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum BohrFunctional {
    ImprovedBohr {
        p: f64,
    },
    SquaredCoef,
    SelfPlusCoef,
    AnalyticSplit,
    CoAnalyticSplit,
    Rogosinski {
        n: u32,
        tail_start: u32,
    },
    RogosinskiSquared {
        tail_start: u32,
    },
    Refined {
        n: u32,
        tail_start: u32,
        mu: f64,
        beta: f64,
    },
}

impl BohrFunctional {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match *self {
            Self::ImprovedBohr { p } if !(p.is_finite() && p >= 1.0) => {
                bad(format!("improved Bohr power p must be ≥ 1, got {p}"))
            }
            Self::Rogosinski { n, tail_start } if n < 1 || tail_start < 2 => bad(format!(
                "Rogosinski needs n ≥ 1 and N ≥ 2, got n={n}, N={tail_start}"
            )),
            Self::RogosinskiSquared { tail_start } if tail_start < 2 => {
                bad(format!("squared Rogosinski needs N ≥ 2, got {tail_start}"))
            }
            Self::Refined {
                n,
                tail_start,
                mu,
                beta,
            } => {
                if n < 1 || tail_start < 1 {
                    bad(format!(
                        "refined sum needs n ≥ 1 and N ≥ 1, got n={n}, N={tail_start}"
                    ))
                } else if !(mu.is_finite() && mu > 0.0 && beta.is_finite() && beta > 0.0) {
                    bad(format!("refined sum needs μ, β > 0, got μ={mu}, β={beta}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// `t = ⌊(N−1)/2⌋` for the refined sum.
    pub fn split_index(&self) -> Option<u32> {
        match self {
            Self::Refined { tail_start, .. } => Some((tail_start - 1) / 2),
            _ => None,
        }
    }

    /// `ε` such that the bracket is `[0, 1−ε]`.
    pub fn upper_epsilon(&self) -> f64 {
        match self {
            Self::Refined { .. } => EPSILON_DIVERGENT,
            _ => EPSILON_REGULAR,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::ImprovedBohr { .. } => "improved",
            Self::SquaredCoef => "squared",
            Self::SelfPlusCoef => "self-plus",
            Self::AnalyticSplit => "analytic-split",
            Self::CoAnalyticSplit => "co-analytic-split",
            Self::Rogosinski { .. } => "rogosinski",
            Self::RogosinskiSquared { .. } => "rogosinski-squared",
            Self::Refined { .. } => "refined",
        }
    }
}

impl fmt::Display for BohrFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ImprovedBohr { p } => write!(f, "improved(p={p})"),
            Self::Rogosinski { n, tail_start } => write!(f, "rogosinski(n={n},N={tail_start})"),
            Self::RogosinskiSquared { tail_start } => {
                write!(f, "rogosinski-squared(N={tail_start})")
            }
            Self::Refined {
                n,
                tail_start,
                mu,
                beta,
            } => {
                write!(f, "refined(n={n},N={tail_start},mu={mu},beta={beta})")
            }
            other => f.write_str(other.kind()),
        }
    }
}

/// Sign of a functional value, decided only when it clears the tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    /// `|value|` did not clear the tail bound even at the tolerance floor.
    Indeterminate,
    Positive,
}

/// A functional bound to parameters, with the distance bound precomputed.
#[derive(Debug, Clone)]
pub struct Evaluator {
    functional: BohrFunctional,
    params: ClassParams,
    distance: SeriesSum,
}

impl Evaluator {
    pub fn new(functional: BohrFunctional, params: ClassParams) -> Result<Self> {
        functional.validate()?;
        let distance = params.distance_lower_bound(DISTANCE_TOL)?;
        Ok(Self {
            functional,
            params,
            distance,
        })
    }

    pub fn functional(&self) -> BohrFunctional {
        self.functional
    }

    pub fn params(&self) -> &ClassParams {
        &self.params
    }

    pub fn distance(&self) -> SeriesSum {
        self.distance
    }

    fn positive(
        &self,
        coefficient: CoefficientRule,
        exponent: ExponentRule,
        start: u64,
        r: f64,
        tol: f64,
    ) -> Result<SeriesSum> {
        let spec = SeriesSpec::new(coefficient, exponent, start, SignRule::Positive, r)?;
        sum_series(&spec, &self.params, tol)
    }

    /// `H(r) = r + Σ_{m≥2} c_m r^m`.
    fn growth(&self, r: f64, tol: f64) -> Result<SeriesSum> {
        Ok(self
            .positive(CoefficientRule::Bound, ExponentRule::Linear, 2, r, tol)?
            .offset(r))
    }

    /// `H(r)^n` with the propagated bound kept below `tol`.
    fn growth_power(&self, r: f64, n: u32, tol: f64) -> Result<SeriesSum> {
        let mut inner = tol / n as f64;
        for _ in 0..8 {
            let h = self.growth(r, inner.max(f64::MIN_POSITIVE))?;
            let powered = h.powi(n);
            if powered.tail_bound <= tol {
                return Ok(powered);
            }
            inner *= 0.5 * tol / powered.tail_bound;
        }
        Err(Error::Truncation {
            value: self.growth(r, inner)?.powi(n).value,
            tail_bound: f64::INFINITY,
            terms: 0,
            tol,
        })
    }

    /// `k(r)` with combined tail bound `≤ tol`.
    pub fn at(&self, r: f64, tol: f64) -> Result<SeriesSum> {
        check_tol(tol)?;
        if tol < TOL_FLOOR {
            return Err(Error::InvalidArgument(format!(
                "tolerance {tol:e} below the working floor {TOL_FLOOR:e}"
            )));
        }
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidArgument(format!(
                "radius must lie in [0,1), got {r}"
            )));
        }
        use CoefficientRule::*;
        use ExponentRule::*;

        let budget = tol - self.distance.tail_bound;
        let head = match self.functional {
            BohrFunctional::ImprovedBohr { p } => {
                let linear = self.positive(Bound, Linear, 2, r, budget / 2.0)?;
                let powered = self.positive(Power(p), Real(p), 2, r, budget / 2.0)?;
                (linear + powered).offset(r)
            }
            BohrFunctional::SquaredCoef => self.positive(Bound, Double, 2, r, budget)?.offset(r),
            BohrFunctional::SelfPlusCoef => self
                .positive(Bound, Linear, 2, r, budget / 2.0)?
                .scale(2.0)
                .offset(r),
            BohrFunctional::AnalyticSplit => self
                .positive(Bound, Linear, 2, r, budget / 2.0)?
                .scale(2.0)
                .offset(2.0 * r),
            BohrFunctional::CoAnalyticSplit => {
                self.positive(Bound, Linear, 2, r, budget)?.offset(r)
            }
            BohrFunctional::Rogosinski { n, tail_start } => {
                let composed = self.positive(Bound, Multiple(n), 2, r, budget / 2.0)?;
                let tail = self.positive(Bound, Linear, tail_start as u64, r, budget / 2.0)?;
                (composed + tail).offset(r.powi(n as i32))
            }
            BohrFunctional::RogosinskiSquared { tail_start } => {
                let squared = self.growth_power(r, 2, budget / 2.0)?;
                let tail = self.positive(Bound, Linear, tail_start as u64, r, budget / 2.0)?;
                squared + tail
            }
            BohrFunctional::Refined {
                n,
                tail_start,
                mu,
                beta,
            } => {
                let t = (tail_start - 1) / 2;
                let share = budget / 3.0;
                let powered = self.growth_power(r, n, share)?;
                let tail = self.positive(Bound, Linear, tail_start as u64, r, share)?;
                let inv = 1.0 / (1.0 - r);
                let head_squares: f64 = (1..=t as u64).map(|m| self.params.coef(m).powi(2)).sum();
                let f_term = if t > 0 {
                    mu * head_squares * r.powi(tail_start as i32) * inv
                } else {
                    0.0
                };
                let g_inner =
                    self.positive(Squared, Double, t as u64 + 1, r, share / (beta * inv))?;
                (powered + tail + g_inner.scale(beta * inv)).offset(f_term)
            }
        };
        Ok(head + self.distance.scale(-1.0))
    }

    /// Sign of `k(r)`, tightening the series tolerance until the value clears
    /// its tail bound or the floor is reached.
    pub fn certified_sign(&self, r: f64) -> Result<(Sign, SeriesSum)> {
        let mut last = None;
        for tol in [1e-3, 1e-6, 1e-9, 1e-12, TOL_FLOOR] {
            let v = match self.at(r, tol) {
                Ok(v) => v,
                Err(e @ Error::Truncation { .. }) => match last {
                    Some(_) => return Err(e),
                    None => continue,
                },
                Err(e) => return Err(e),
            };
            if v.value.abs() > v.tail_bound {
                let s = if v.value > 0.0 {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                return Ok((s, v));
            }
            last = Some(v);
        }
        match last {
            Some(v) => Ok((Sign::Indeterminate, v)),
            None => Err(Error::Truncation {
                value: f64::NAN,
                tail_bound: f64::INFINITY,
                terms: 0,
                tol: TOL_FLOOR,
            }),
        }
    }
}

/// `k(r)` for `f` at `params`.
pub fn evaluate(f: BohrFunctional, params: ClassParams, r: f64, tol: f64) -> Result<SeriesSum> {
    Evaluator::new(f, params)?.at(r, tol)
}

/// Certified values of `k` at both bracket ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointSigns {
    pub at_zero: SeriesSum,
    pub upper_r: f64,
    pub near_one: SeriesSum,
}

/// Certifies `k(0) < 0 < k(1−ε)`.
pub fn endpoint_signs(f: BohrFunctional, params: ClassParams) -> Result<EndpointSigns> {
    let ev = Evaluator::new(f, params)?;
    endpoint_signs_with(&ev)
}

pub(crate) fn endpoint_signs_with(ev: &Evaluator) -> Result<EndpointSigns> {
    let (s0, at_zero) = ev.certified_sign(0.0)?;
    if s0 != Sign::Negative {
        return Err(Error::Bracket(format!(
            "{} at {:?}: k(0) = {} is not certified negative",
            ev.functional, ev.params, at_zero.value
        )));
    }
    let upper_r = 1.0 - ev.functional.upper_epsilon();
    let (s1, near_one) = ev.certified_sign(upper_r)?;
    if s1 != Sign::Positive {
        return Err(Error::Bracket(format!(
            "{} at {:?}: k({upper_r}) = {} is not certified positive; the radius is at least 1−ε",
            ev.functional, ev.params, near_one.value
        )));
    }
    Ok(EndpointSigns {
        at_zero,
        upper_r,
        near_one,
    })
}

/// The printed polylogarithm equations of the special-parameter results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedForm {
    /// `−r² + Li₂(r) + Li₄(r²) − π²/12` at (1, 1, 1/2).
    CorP2Half,
    /// `−r − 4r² + 2Li₂(r) + 4Li₄(r²) − (π²/6 − 1)` at (1, 1, 0).
    CorP2Zero,
    /// `r − 2r² + (1 − 2/r²) log(1−r²) + 2Li₂(r²) − 4 − π²/6 + 4 log 2` at (1/2, 1, 1/4).
    ThmSquared,
    /// `−3r + 8Li₂(r) + (8 − 8/r) log(1−r) − 11 − (π²/3 − 8 log 2)` at (1/2, 1, 0).
    CorSelf,
    /// `−r + 4Li₂(r) − 4 + (4 − 4/r) log(1−r) − (3 + π²/3 − 8 log 2)` at (1/2, 1, 0).
    CorCoAnalytic,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 5] = [
        Self::CorP2Half,
        Self::CorP2Zero,
        Self::ThmSquared,
        Self::CorSelf,
        Self::CorCoAnalytic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::CorP2Half => "cor-p2-half",
            Self::CorP2Zero => "cor-p2-zero",
            Self::ThmSquared => "thm-squared",
            Self::CorSelf => "cor-self",
            Self::CorCoAnalytic => "cor-co-analytic",
        }
    }

    pub fn params(&self) -> ClassParams {
        let (g, d, l) = match self {
            Self::CorP2Half => (1.0, 1.0, 0.5),
            Self::CorP2Zero => (1.0, 1.0, 0.0),
            Self::ThmSquared => (0.5, 1.0, 0.25),
            Self::CorSelf | Self::CorCoAnalytic => (0.5, 1.0, 0.0),
        };
        ClassParams::new(g, d, l).expect("fixed admissible parameters")
    }

    /// The radius printed next to the equation.
    pub fn printed_root(&self) -> f64 {
        match self {
            Self::CorP2Half => 0.652442,
            Self::CorP2Zero => 0.480812,
            Self::ThmSquared => 0.676479,
            Self::CorSelf => 0.521468,
            Self::CorCoAnalytic => 0.594279,
        }
    }

    /// The printed right-hand constant moved to the left side.
    pub fn printed_constant(&self) -> f64 {
        let pi2 = PI * PI;
        match self {
            Self::CorP2Half => pi2 / 12.0,
            Self::CorP2Zero => pi2 / 6.0 - 1.0,
            Self::ThmSquared => 4.0 + pi2 / 6.0 - 4.0 * LN_2,
            Self::CorSelf => 11.0 + pi2 / 3.0 - 8.0 * LN_2,
            Self::CorCoAnalytic => 4.0 + 3.0 + pi2 / 3.0 - 8.0 * LN_2,
        }
    }

    /// The series functional the printed equation is meant to represent.
    pub fn series_counterpart(&self) -> BohrFunctional {
        match self {
            Self::CorP2Half | Self::CorP2Zero => BohrFunctional::ImprovedBohr { p: 2.0 },
            Self::ThmSquared => BohrFunctional::SquaredCoef,
            Self::CorSelf => BohrFunctional::SelfPlusCoef,
            Self::CorCoAnalytic => BohrFunctional::CoAnalyticSplit,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|cf| cf.name() == name)
    }
}

fn li_value(n: u8, x: f64) -> Result<f64> {
    Ok(li(PolylogOrder::new(n)?, x, 1e-15)?.value)
}

/// `(c − c/x) log(1−x)`, which tends to `c` as `x → 0`.
fn log_ratio(c: f64, x: f64) -> f64 {
    if x == 0.0 {
        c
    } else {
        (c - c / x) * (-x).ln_1p()
    }
}

/// Left side minus right side of the printed equation at `r`.
///
/// At `r = 0` the removable singularities are replaced by their limits.
pub fn evaluate_closed_form(cf: ClosedForm, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "closed forms need r in [0,1), got {r}"
        )));
    }
    let rr = r * r;
    let lhs = match cf {
        ClosedForm::CorP2Half => -rr + li_value(2, r)? + li_value(4, rr)?,
        ClosedForm::CorP2Zero => -r - 4.0 * rr + 2.0 * li_value(2, r)? + 4.0 * li_value(4, rr)?,
        ClosedForm::ThmSquared => {
            let log_term = if r == 0.0 {
                2.0
            } else {
                (1.0 - 2.0 / rr) * (-rr).ln_1p()
            };
            r - 2.0 * rr + log_term + 2.0 * li_value(2, rr)?
        }
        ClosedForm::CorSelf => -3.0 * r + 8.0 * li_value(2, r)? + log_ratio(8.0, r),
        ClosedForm::CorCoAnalytic => -r + 4.0 * li_value(2, r)? + log_ratio(4.0, r),
    };
    Ok(lhs - cf.printed_constant())
}
