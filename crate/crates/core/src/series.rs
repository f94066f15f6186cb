//! Error-bounded summation of the weighted coefficient series
//! `Σ_{m≥s} ± κ(c_m) q^{e·m}` used by every radius equation.
//!
//! All sums are table driven: a [`SeriesSpec`] names the coefficient rule,
//! the exponent map, the start index, the sign pattern and the argument `q`.
//! The returned [`SeriesSum`] carries a bound on the omitted remainder.
//!
//! Remainder bounds:
//!
//! * constant sign: the smaller of the geometric bound
//!   `t_{M+1} / (1 − q^e)` and the integral bound obtained from
//!   `c_m ≤ 4(γ−λ) / (m² L_{M+1})` for `m > M`;
//! * alternating: the Euler transform of the remainder. Every term sequence
//!   used here is completely monotone in `m`, so the transformed remainder after
//!   `K` levels is bounded by `|Δ^K t_{M+1}| / 2^K`. `K = 0` is the classical
//!   first-omitted-term bound.

use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::class::ClassParams;
use crate::error::{check_tol, Error, Result};

/// Default absolute tolerance for series evaluation.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default cap on the number of terms a single sum may use.
pub const DEFAULT_MAX_TERMS: u64 = 1_000_000;

/// Below this, rounding in binary64 dominates truncation and tail bounds stop
/// being meaningful.
pub const TOL_FLOOR: f64 = 1e-13;

// Look-ahead depth of the Euler remainder estimate.
const EULER_DEPTH: usize = 40;

/// A numeric value with a rigorous bound on the truncation remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    /// The infinite sum lies in `[value − tail_bound, value + tail_bound]`.
    pub tail_bound: f64,
    pub terms_used: u64,
}

impl SeriesSum {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            tail_bound: 0.0,
            terms_used: 1,
        }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.tail_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn offset(self, c: f64) -> Self {
        Self {
            value: self.value + c,
            ..self
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            value: self.value * k,
            tail_bound: self.tail_bound * k.abs(),
            ..self
        }
    }

    /// `self^n` with the remainder bound propagated through the monomial.
    pub fn powi(self, n: u32) -> Self {
        let v = self.value;
        let hi = v.abs() + self.tail_bound;
        let spread = hi.powi(n as i32) - v.abs().powi(n as i32);
        Self {
            value: v.powi(n as i32),
            tail_bound: spread.max(0.0),
            terms_used: self.terms_used,
        }
    }
}

impl Add for SeriesSum {
    type Output = SeriesSum;

    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            tail_bound: self.tail_bound + rhs.tail_bound,
            terms_used: self.terms_used + rhs.terms_used,
        }
    }
}

/// Which function of `c_m` multiplies the power of `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoefficientRule {
    /// `c_m`
    Bound,
    /// `c_m / 2`, the co-analytic estimate; needs start ≥ 2.
    CoAnalytic,
    /// `c_m^p` for real `p ≥ 1`.
    Power(f64),
    /// `c_m²`
    Squared,
}

impl CoefficientRule {
    fn exponent(&self) -> f64 {
        match self {
            Self::Bound | Self::CoAnalytic => 1.0,
            Self::Power(p) => *p,
            Self::Squared => 2.0,
        }
    }

    fn prefactor(&self) -> f64 {
        match self {
            Self::CoAnalytic => 0.5,
            _ => 1.0,
        }
    }

    fn apply(&self, c: f64) -> f64 {
        match self {
            Self::Bound => c,
            Self::CoAnalytic => 0.5 * c,
            Self::Power(p) => c.powf(*p),
            Self::Squared => c * c,
        }
    }
}

/// The map `m ↦ e·m` giving the power of `q` in term `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExponentRule {
    /// `m`
    Linear,
    /// `n·m` for integer `n ≥ 1`
    Multiple(u32),
    /// `p·m` for real `p ≥ 1`
    Real(f64),
    /// `2m`
    Double,
}

impl ExponentRule {
    pub fn factor(&self) -> f64 {
        match self {
            Self::Linear => 1.0,
            Self::Multiple(n) => *n as f64,
            Self::Real(p) => *p,
            Self::Double => 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignRule {
    Positive,
    /// `(−1)^{m−1}`
    Alternating,
}

/// Description of one coefficient series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    coefficient: CoefficientRule,
    exponent: ExponentRule,
    start: u64,
    sign: SignRule,
    q: f64,
}

impl SeriesSpec {
    /// Validates the spec. `q` must lie in `[0,1)`; `q = 1` is accepted for
    /// alternating sums only, where the series still converges.
    pub fn new(
        coefficient: CoefficientRule,
        exponent: ExponentRule,
        start: u64,
        sign: SignRule,
        q: f64,
    ) -> Result<Self> {
        if start < 1 {
            return Err(Error::InvalidArgument(
                "series start index must be ≥ 1".into(),
            ));
        }
        if coefficient == CoefficientRule::CoAnalytic && start < 2 {
            return Err(Error::InvalidArgument(
                "co-analytic coefficients start at m = 2".into(),
            ));
        }
        if let CoefficientRule::Power(p) = coefficient {
            if !(p.is_finite() && p >= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "coefficient power must be ≥ 1, got {p}"
                )));
            }
        }
        match exponent {
            ExponentRule::Multiple(0) => {
                return Err(Error::InvalidArgument(
                    "exponent multiple must be ≥ 1".into(),
                ))
            }
            ExponentRule::Real(p) if !(p.is_finite() && p >= 1.0) => {
                return Err(Error::InvalidArgument(format!(
                    "exponent factor must be ≥ 1, got {p}"
                )))
            }
            _ => {}
        }
        let q_ok = match sign {
            SignRule::Positive => (0.0..1.0).contains(&q),
            SignRule::Alternating => (0.0..=1.0).contains(&q),
        };
        if !q_ok {
            return Err(Error::InvalidArgument(format!(
                "series argument q={q} outside the convergent range"
            )));
        }
        Ok(Self {
            coefficient,
            exponent,
            start,
            sign,
            q,
        })
    }

    pub fn coefficient(&self) -> CoefficientRule {
        self.coefficient
    }

    pub fn exponent(&self) -> ExponentRule {
        self.exponent
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn sign(&self) -> SignRule {
        self.sign
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Magnitude of term `m`, i.e. `κ(c_m) q^{e·m}` without the sign.
    pub fn magnitude(&self, params: &ClassParams, m: u64) -> f64 {
        let power = if self.q == 0.0 {
            0.0
        } else if self.q == 1.0 {
            1.0
        } else {
            (self.exponent.factor() * m as f64 * self.q.ln()).exp()
        };
        if power == 0.0 {
            return 0.0;
        }
        self.coefficient.apply(params.coef(m)) * power
    }

    fn signed(&self, m: u64, magnitude: f64) -> f64 {
        match self.sign {
            SignRule::Alternating if m.is_multiple_of(2) => -magnitude,
            _ => magnitude,
        }
    }

    /// Bound on `Σ_{m>last} magnitude(m)` for constant-sign specs.
    fn positive_tail(&self, params: &ClassParams, last: u64) -> f64 {
        let next = last + 1;
        let t_next = self.magnitude(params, next);
        if t_next == 0.0 {
            return 0.0;
        }
        let ratio = self.q.powf(self.exponent.factor());
        let geometric = t_next / (1.0 - ratio);

        // For m ≥ next: κ(c_m) ≤ s (A / L_next)^k m^{−2k}, and
        // Σ_{m>last} m^{−2k} ≤ last^{1−2k} / (2k − 1).
        let k = self.coefficient.exponent();
        let base = params.numerator() / params.denominator_factor(next);
        let last_f = last as f64;
        let integral = self.coefficient.prefactor() * base.powf(k) * last_f.powf(1.0 - 2.0 * k)
            / (2.0 * k - 1.0)
            * (self.exponent.factor() * next as f64 * self.q.ln()).exp();
        geometric.min(integral)
    }
}

/// Euler-transform estimate of `Σ_{j≥0} (−1)^j a_j` for a completely
/// monotone look-ahead window `a`. Returns `(estimate, bound)`.
fn euler_remainder(window: &[f64]) -> (f64, f64) {
    let a0 = window[0];
    let mut diffs = window.to_vec();
    let mut estimate = 0.0;
    let mut best = (0.0, a0);
    let mut weight = 0.5;
    let mut sign = 1.0;
    for k in 0..window.len() - 1 {
        estimate += sign * diffs[0] * weight;
        for i in 0..diffs.len() - 1 - k {
            diffs[i] = diffs[i + 1] - diffs[i];
        }
        // Rounding in the k-th difference is at most ~2^k ε a0 before scaling.
        let bound = diffs[0].abs() * weight + (k + 2) as f64 * f64::EPSILON * a0;
        if bound < best.1 {
            best = (estimate, bound);
        }
        weight *= 0.5;
        sign = -sign;
    }
    best
}

/// Sums `spec` to absolute tolerance `tol` with the default term cap.
pub fn sum_series(spec: &SeriesSpec, params: &ClassParams, tol: f64) -> Result<SeriesSum> {
    sum_series_capped(spec, params, tol, DEFAULT_MAX_TERMS)
}

/// Sums `spec` to absolute tolerance `tol`, failing with
/// [`Error::Truncation`] rather than silently returning an under-resolved
/// value once `max_terms` terms have been used.
pub fn sum_series_capped(
    spec: &SeriesSpec,
    params: &ClassParams,
    tol: f64,
    max_terms: u64,
) -> Result<SeriesSum> {
    check_tol(tol)?;
    if max_terms == 0 {
        return Err(Error::InvalidArgument("term cap must be positive".into()));
    }
    match spec.sign {
        SignRule::Positive => sum_positive(spec, params, tol, max_terms),
        SignRule::Alternating => sum_alternating(spec, params, tol, max_terms),
    }
}

fn sum_positive(
    spec: &SeriesSpec,
    params: &ClassParams,
    tol: f64,
    max_terms: u64,
) -> Result<SeriesSum> {
    let mut value = 0.0;
    let mut m = spec.start;
    let mut used = 0;
    loop {
        let t = spec.magnitude(params, m);
        value += t;
        used += 1;
        let tail = spec.positive_tail(params, m);
        if tail <= tol {
            return Ok(SeriesSum {
                value,
                tail_bound: tail,
                terms_used: used,
            });
        }
        if used >= max_terms {
            return Err(Error::Truncation {
                value,
                tail_bound: tail,
                terms: used,
                tol,
            });
        }
        m += 1;
    }
}

fn sum_alternating(
    spec: &SeriesSpec,
    params: &ClassParams,
    tol: f64,
    max_terms: u64,
) -> Result<SeriesSum> {
    let mut value = 0.0;
    let mut m = spec.start;
    let mut used: u64 = 0;
    let mut checkpoint: u64 = 8;
    loop {
        let t = spec.magnitude(params, m);
        value += spec.signed(m, t);
        used += 1;

        let next = spec.magnitude(params, m + 1);
        if next <= tol {
            return Ok(SeriesSum {
                value,
                tail_bound: next,
                terms_used: used,
            });
        }

        if used == checkpoint {
            checkpoint *= 2;
            let window: Vec<f64> = (1..=EULER_DEPTH as u64 + 1)
                .map(|j| spec.magnitude(params, m + j))
                .collect();
            let (estimate, bound) = euler_remainder(&window);
            if bound <= tol {
                // Remainder Σ_{j≥0} (−1)^{m+j} a_j carries sign (−1)^m.
                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                return Ok(SeriesSum {
                    value: value + sign * estimate,
                    tail_bound: bound,
                    terms_used: used + window.len() as u64,
                });
            }
        }

        if used >= max_terms {
            return Err(Error::Truncation {
                value,
                tail_bound: next,
                terms: used,
                tol,
            });
        }
        m += 1;
    }
}

/// Plain partial sum over `start ≤ m ≤ last`, no adaptivity and no tail
/// handling. Returns 0 when `last < start`.
pub fn brute_force_sum(spec: &SeriesSpec, params: &ClassParams, last: u64) -> f64 {
    let mut s = 0.0;
    for m in spec.start..=last {
        let mf = m as f64;
        let c = params.numerator()
            / (mf * mf * (2.0 * params.gamma() + (params.delta() - params.gamma()) * (mf - 1.0)));
        let coef = match spec.coefficient {
            CoefficientRule::Bound => c,
            CoefficientRule::CoAnalytic => c / 2.0,
            CoefficientRule::Power(p) => c.powf(p),
            CoefficientRule::Squared => c * c,
        };
        let term = coef * spec.q.powf(spec.exponent.factor() * mf);
        s += match spec.sign {
            SignRule::Alternating if m % 2 == 0 => -term,
            _ => term,
        };
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{LN_2, PI};

    fn params(g: f64, d: f64, l: f64) -> ClassParams {
        ClassParams::new(g, d, l).unwrap()
    }

    fn spec(c: CoefficientRule, e: ExponentRule, s: u64, sign: SignRule, q: f64) -> SeriesSpec {
        SeriesSpec::new(c, e, s, sign, q).unwrap()
    }

    #[test]
    fn zero_argument_kills_every_term() {
        let sp = spec(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Positive,
            0.0,
        );
        let s = sum_series(&sp, &params(1.0, 1.0, 0.5), 1e-12).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.tail_bound, 0.0);
        assert!(s.terms_used >= 1);
    }

    #[test]
    fn dilogarithm_minus_linear_term() {
        // c_m = 1/m² at (1,1,1/2)
        let r = 0.6;
        let sp = spec(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Positive,
            r,
        );
        let s = sum_series(&sp, &params(1.0, 1.0, 0.5), 1e-13).unwrap();
        let li2: f64 = (1..=400).map(|m| r.powi(m) / (m * m) as f64).sum();
        assert!((s.value - (li2 - r)).abs() < 1e-12);
    }

    #[test]
    fn alternating_limit_at_one() {
        let sp = spec(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Alternating,
            1.0,
        );
        let s = sum_series(&sp, &params(0.5, 1.0, 0.0), 1e-12).unwrap();
        let expected = 2.0 + PI * PI / 3.0 - 8.0 * LN_2;
        assert!((s.value - expected).abs() < 1e-12, "{s:?}");
        assert!(s.tail_bound <= 1e-12);
        // Euler acceleration keeps this far below the term cap.
        assert!(s.terms_used < 1000);
    }

    #[test]
    fn brute_force_reproduces_distance_constant() {
        let sp = spec(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Alternating,
            1.0,
        );
        let d = 1.0 + brute_force_sum(&sp, &params(1.0, 1.0, 0.5), 100_000);
        assert!((d - PI * PI / 12.0).abs() < 1e-9);
        // empty range
        assert_eq!(brute_force_sum(&sp, &params(1.0, 1.0, 0.5), 1), 0.0);
    }

    #[test]
    fn brute_force_parity_at_half() {
        let p = params(0.5, 1.0, 0.0);
        let sp = spec(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Positive,
            0.5,
        );
        let s = sum_series(&sp, &p, 1e-14).unwrap();
        let b = brute_force_sum(&sp, &p, 1000);
        assert!((s.value - b).abs() < 1e-12);
    }

    #[test]
    fn truncation_failure_is_explicit() {
        let sp = spec(
            CoefficientRule::Bound,
            ExponentRule::Linear,
            2,
            SignRule::Positive,
            0.999,
        );
        let err = sum_series_capped(&sp, &params(1.0, 1.0, 0.0), 1e-12, 50).unwrap_err();
        match err {
            Error::Truncation {
                terms,
                value,
                tail_bound,
                ..
            } => {
                assert_eq!(terms, 50);
                assert!(value > 0.0 && tail_bound > 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        use CoefficientRule::*;
        use ExponentRule::*;
        assert!(SeriesSpec::new(Bound, Linear, 0, SignRule::Positive, 0.5).is_err());
        assert!(SeriesSpec::new(Bound, Linear, 2, SignRule::Positive, 1.0).is_err());
        assert!(SeriesSpec::new(Bound, Linear, 2, SignRule::Alternating, 1.0).is_ok());
        assert!(SeriesSpec::new(Bound, Linear, 2, SignRule::Positive, -0.1).is_err());
        assert!(SeriesSpec::new(Power(0.5), Linear, 2, SignRule::Positive, 0.5).is_err());
        assert!(SeriesSpec::new(Bound, Multiple(0), 2, SignRule::Positive, 0.5).is_err());
        assert!(SeriesSpec::new(Bound, Real(0.9), 2, SignRule::Positive, 0.5).is_err());
        assert!(SeriesSpec::new(CoAnalytic, Linear, 1, SignRule::Positive, 0.5).is_err());
        let sp = SeriesSpec::new(Bound, Linear, 2, SignRule::Positive, 0.5).unwrap();
        assert!(sum_series(&sp, &params(1.0, 1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn euler_remainder_on_known_series() {
        // Σ_{j≥0} (−1)^j / (j+1)² = π²/12
        let window: Vec<f64> = (1..=41).map(|j| 1.0 / (j * j) as f64).collect();
        let (est, bound) = euler_remainder(&window);
        assert!((est - PI * PI / 12.0).abs() <= bound);
        assert!(bound < 1e-10);
    }

    fn arb_params() -> impl Strategy<Value = ClassParams> {
        (0.05f64..2.0, 0.0f64..1.0, 0.0f64..0.95)
            .prop_map(|(g, extra, frac)| ClassParams::new(g, g + extra * 3.0, frac * g).unwrap())
    }

    fn arb_spec() -> impl Strategy<Value = SeriesSpec> {
        let coef = prop_oneof![
            Just(CoefficientRule::Bound),
            Just(CoefficientRule::CoAnalytic),
            Just(CoefficientRule::Squared),
            (1.0f64..4.0).prop_map(CoefficientRule::Power),
        ];
        let exp = prop_oneof![
            Just(ExponentRule::Linear),
            Just(ExponentRule::Double),
            (1u32..4).prop_map(ExponentRule::Multiple),
            (1.0f64..4.0).prop_map(ExponentRule::Real),
        ];
        let sign = prop_oneof![Just(SignRule::Positive), Just(SignRule::Alternating)];
        (coef, exp, 2u64..6, sign, 0.0f64..0.95)
            .prop_map(|(c, e, s, sg, q)| SeriesSpec::new(c, e, s, sg, q).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tighter_tolerance_stays_inside_previous_interval(p in arb_params(), sp in arb_spec()) {
            let loose = sum_series(&sp, &p, 1e-6).unwrap();
            let tight = sum_series(&sp, &p, 1e-12).unwrap();
            prop_assert!(loose.tail_bound <= 1e-6 && tight.tail_bound <= 1e-12);
            prop_assert!((tight.value - loose.value).abs() <= loose.tail_bound + tight.tail_bound + 1e-15);
        }

        #[test]
        fn constant_sign_sums_grow_with_q(p in arb_params(), q0 in 0.0f64..0.9, dq in 0.001f64..0.09) {
            let a = spec(CoefficientRule::Bound, ExponentRule::Linear, 2, SignRule::Positive, q0);
            let b = spec(CoefficientRule::Bound, ExponentRule::Linear, 2, SignRule::Positive, q0 + dq);
            let sa = sum_series(&a, &p, 1e-12).unwrap();
            let sb = sum_series(&b, &p, 1e-12).unwrap();
            prop_assert!(sa.value <= sb.value + sa.tail_bound + sb.tail_bound);
        }
    }
}
