//! Parameters of the class R_H⁰(γ,δ,λ) and the coefficient estimates that
//! every radius computation is built from.
//!
//! A member `f = h + conj(g)` has `h(z) = z + Σ_{m≥2} a_m z^m` and
//! `g(z) = Σ_{m≥2} b_m z^m`. The sharp estimate
//!
//! ```text
//! |a_m| + |b_m| ≤ c_m = 4(γ−λ) / (m² [2γ + (δ−γ)(m−1)])
//! ```
//!
//! drives all majorant sums, and `|b_m| ≤ c_m / 2` bounds the co-analytic part.

use serde::{Deserialize, Serialize};

use crate::error::{check_tol, Error, Result};
use crate::series::{sum_series, CoefficientRule, ExponentRule, SeriesSpec, SeriesSum, SignRule};

/// The admissible triple `0 ≤ λ < γ ≤ δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    gamma: f64,
    delta: f64,
    lambda: f64,
}

impl ClassParams {
    pub fn new(gamma: f64, delta: f64, lambda: f64) -> Result<Self> {
        if !(gamma.is_finite() && delta.is_finite() && lambda.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite parameters (γ={gamma}, δ={delta}, λ={lambda})"
            )));
        }
        if !(0.0 <= lambda && lambda < gamma && gamma <= delta) {
            return Err(Error::InvalidParams(format!(
                "need 0 ≤ λ < γ ≤ δ, got γ={gamma}, δ={delta}, λ={lambda}"
            )));
        }
        Ok(Self {
            gamma,
            delta,
            lambda,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `2γ + (δ−γ)(m−1)`, positive for every `m ≥ 1` under the class constraint.
    pub(crate) fn denominator_factor(&self, m: u64) -> f64 {
        let d = 2.0 * self.gamma + (self.delta - self.gamma) * (m as f64 - 1.0);
        debug_assert!(d > 0.0);
        d
    }

    /// Numerator `4(γ−λ)` of the coefficient bound.
    pub(crate) fn numerator(&self) -> f64 {
        4.0 * (self.gamma - self.lambda)
    }

    /// Unchecked `c_m`; callers guarantee `m ≥ 1`.
    pub(crate) fn coef(&self, m: u64) -> f64 {
        let mf = m as f64;
        self.numerator() / (mf * mf * self.denominator_factor(m))
    }

    /// The bound `c_m` on `|a_m| + |b_m|`.
    ///
    /// Defined for `m ≥ 1`; at `m = 1` the formula gives `2(γ−λ)/γ`, which is
    /// what the refined Bohr sums use for their first squared term.
    pub fn coef_bound(&self, m: u64) -> Result<f64> {
        if m < 1 {
            return Err(Error::InvalidArgument(
                "coefficient index must be ≥ 1".into(),
            ));
        }
        Ok(self.coef(m))
    }

    /// The bound `c_m / 2` on `|b_m|`, for `m ≥ 2`.
    pub fn co_analytic_bound(&self, m: u64) -> Result<f64> {
        if m < 2 {
            return Err(Error::InvalidArgument(
                "co-analytic coefficient index must be ≥ 2".into(),
            ));
        }
        Ok(self.coef(m) / 2.0)
    }

    /// Lower bound `1 + Σ_{m≥2} (−1)^{m−1} c_m` on the distance from `f(0)` to
    /// the boundary of `f(𝔻)`.
    pub fn distance_lower_bound(&self, tol: f64) -> Result<SeriesSum> {
        check_tol(tol)?;
        let spec = SeriesSpec::new(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Alternating,
            1.0,
        )?;
        Ok(sum_series(&spec, self, tol)?.offset(1.0))
    }

    /// Growth envelope `r + Σ (−1)^{m−1} c_m r^m ≤ |f(z)| ≤ r + Σ c_m r^m`
    /// on `|z| = r`.
    pub fn growth_bounds(&self, r: f64, tol: f64) -> Result<(SeriesSum, SeriesSum)> {
        check_tol(tol)?;
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidArgument(format!(
                "radius must lie in [0,1), got {r}"
            )));
        }
        let lower = SeriesSpec::new(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Alternating,
            r,
        )?;
        let upper = SeriesSpec::new(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Positive,
            r,
        )?;
        Ok((
            sum_series(&lower, self, tol)?.offset(r),
            sum_series(&upper, self, tol)?.offset(r),
        ))
    }
}
