//! Extremal witnesses, sharpness verdicts and a class-membership spot-check.
//!
//! Sharpness is checked at the coefficient level: the witness coefficients
//! are substituted into the left side of each Bohr inequality and the result
//! is compared with the distance lower bound at the computed radius.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::ClassParams;
use crate::error::{check_tol, Error, Result};
use crate::functionals::BohrFunctional;
use crate::rootfind::RootResult;
use crate::series::{sum_series, CoefficientRule, ExponentRule, SeriesSpec, SeriesSum, SignRule};

/// Absolute slack granted on top of ten times the combined tail bounds.
pub const SHARPNESS_ABS_TOL: f64 = 1e-8;
/// Relative offset of the probes on either side of the radius.
pub const MARGIN_OFFSET: f64 = 1e-3;

const DISTANCE_TOL: f64 = 1e-14;

/// `Half` uses `2(γ−λ)/(m²[…])`, `Full` uses `4(γ−λ)/(m²[…])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scale {
    Half,
    Full,
}

impl Scale {
    pub fn factor(&self) -> f64 {
        match self {
            Scale::Half => 0.5,
            Scale::Full => 1.0,
        }
    }
}

/// `z^m` versus `(−1)^{m−1} z^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignPattern {
    Plus,
    Alternating,
}

/// Whether the tail sits in `h` or, conjugated, in `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    Analytic,
    CoAnalytic,
}

/// `f = z + Σ_{m≥2} ε_m s c_m z^m` (analytic) or `z + conj(Σ_{m≥2} ε_m s c_m z^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFunction {
    pub params: ClassParams,
    pub scale: Scale,
    pub sign_pattern: SignPattern,
    pub part: Part,
}

impl ExtremalFunction {
    /// The witness used for the radius of `f`.
    pub fn witness_for(f: BohrFunctional, params: ClassParams) -> Self {
        let (scale, sign_pattern, part) = match f {
            BohrFunctional::ImprovedBohr { .. } => {
                (Scale::Full, SignPattern::Alternating, Part::Analytic)
            }
            BohrFunctional::CoAnalyticSplit => (Scale::Half, SignPattern::Plus, Part::CoAnalytic),
            _ => (Scale::Full, SignPattern::Plus, Part::Analytic),
        };
        Self {
            params,
            scale,
            sign_pattern,
            part,
        }
    }

    /// The same witness with the other scale.
    pub fn with_scale(self, scale: Scale) -> Self {
        Self { scale, ..self }
    }

    /// `|a_m| + |b_m|` for `m ≥ 2`.
    pub fn magnitude(&self, m: u64) -> f64 {
        self.scale.factor() * self.params.coef(m)
    }

    fn sign(&self, m: u64) -> f64 {
        match self.sign_pattern {
            SignPattern::Alternating if m.is_multiple_of(2) => -1.0,
            _ => 1.0,
        }
    }

    /// `(a_1, …, a_M)` and `(b_1, …, b_M)`.
    pub fn coefficients(&self, truncation: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut h = vec![Complex64::new(0.0, 0.0); truncation];
        let mut g = h.clone();
        if truncation > 0 {
            h[0] = Complex64::new(1.0, 0.0);
        }
        for m in 2..=truncation as u64 {
            let c = Complex64::new(self.sign(m) * self.magnitude(m), 0.0);
            match self.part {
                Part::Analytic => h[m as usize - 1] = c,
                Part::CoAnalytic => g[m as usize - 1] = c,
            }
        }
        (h, g)
    }
}

fn positive(
    params: &ClassParams,
    coefficient: CoefficientRule,
    exponent: ExponentRule,
    start: u64,
    r: f64,
    tol: f64,
) -> Result<SeriesSum> {
    let spec = SeriesSpec::new(coefficient, exponent, start, SignRule::Positive, r)?;
    sum_series(&spec, params, tol)
}

/// `|f(σ rⁿ)|` with `σ = −1` for the alternating pattern.
///
/// On that ray every term `ε_m (σ rⁿ)^m` has the sign of `σ`, so the modulus
/// is `rⁿ + s Σ_{m≥2} c_m r^{nm}`.
fn modulus_on_ray(ext: &ExtremalFunction, r: f64, n: u32, tol: f64) -> Result<SeriesSum> {
    let s = ext.scale.factor();
    let rest = positive(
        &ext.params,
        CoefficientRule::Bound,
        ExponentRule::Multiple(n),
        2,
        r,
        tol / s,
    )?;
    Ok(rest.scale(s).offset(r.powi(n as i32)))
}

/// `Σ_{m≥start} (|a_m|+|b_m|) r^m`.
fn linear_tail(ext: &ExtremalFunction, start: u64, r: f64, tol: f64) -> Result<SeriesSum> {
    let s = ext.scale.factor();
    Ok(positive(
        &ext.params,
        CoefficientRule::Bound,
        ExponentRule::Linear,
        start,
        r,
        tol / s,
    )?
    .scale(s))
}

/// `|f|^n` with the tail bound of the power kept below `tol`.
fn modulus_power(ext: &ExtremalFunction, r: f64, n: u32, tol: f64) -> Result<SeriesSum> {
    let mut inner = tol / n as f64;
    for _ in 0..8 {
        let v = modulus_on_ray(ext, r, 1, inner)?.powi(n);
        if v.tail_bound <= tol {
            return Ok(v);
        }
        inner *= 0.5 * tol / v.tail_bound;
    }
    Err(Error::Truncation {
        value: f64::NAN,
        tail_bound: f64::INFINITY,
        terms: 0,
        tol,
    })
}

/// Left side of the Bohr inequality for `f` with the witness coefficients.
///
/// The refined sum uses the bound value `c_1` for the first squared term, as
/// the general refined estimate does; see [`first_coefficient_deviation`].
pub fn bohr_sum_at(
    f: BohrFunctional,
    ext: &ExtremalFunction,
    r: f64,
    tol: f64,
) -> Result<SeriesSum> {
    refined_aware_sum(f, ext, r, tol, None)
}

fn refined_aware_sum(
    f: BohrFunctional,
    ext: &ExtremalFunction,
    r: f64,
    tol: f64,
    first_override: Option<f64>,
) -> Result<SeriesSum> {
    check_tol(tol)?;
    f.validate()?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "radius must lie in [0,1), got {r}"
        )));
    }
    let params = &ext.params;
    let s = ext.scale.factor();
    let share = tol / 3.0;
    let sum = match f {
        BohrFunctional::ImprovedBohr { p } => {
            let linear = linear_tail(ext, 2, r, share)?;
            let sp = s.powf(p);
            let powered = positive(
                params,
                CoefficientRule::Power(p),
                ExponentRule::Real(p),
                2,
                r,
                share / sp,
            )?
            .scale(sp);
            (linear + powered).offset(r)
        }
        BohrFunctional::SquaredCoef => {
            let s2 = s * s;
            positive(
                params,
                CoefficientRule::Squared,
                ExponentRule::Double,
                2,
                r,
                share / s2,
            )?
            .scale(s2)
            .offset(r)
        }
        BohrFunctional::SelfPlusCoef => {
            modulus_on_ray(ext, r, 1, share)? + linear_tail(ext, 2, r, share)?
        }
        BohrFunctional::AnalyticSplit | BohrFunctional::CoAnalyticSplit => {
            // |z| + |h(z)| + Σ|a_m| r^m, or |z| + |g(z)| + Σ|b_m| r^m with g = O(z²)
            let lead = match ext.part {
                Part::Analytic => 2.0 * r,
                Part::CoAnalytic => r,
            };
            (linear_tail(ext, 2, r, share)? + linear_tail(ext, 2, r, share)?).offset(lead)
        }
        BohrFunctional::Rogosinski { n, tail_start } => {
            modulus_on_ray(ext, r, n, share)? + linear_tail(ext, tail_start as u64, r, share)?
        }
        BohrFunctional::RogosinskiSquared { tail_start } => {
            modulus_power(ext, r, 2, share)? + linear_tail(ext, tail_start as u64, r, share)?
        }
        BohrFunctional::Refined {
            n,
            tail_start,
            mu,
            beta,
        } => {
            let t = (tail_start - 1) as u64 / 2;
            let first = first_override.unwrap_or(s * params.coef(1));
            let w = |m: u64| if m == 1 { first } else { s * params.coef(m) };
            let inv = 1.0 / (1.0 - r);
            let share = tol / 4.0;
            let powered = modulus_power(ext, r, n, share)?;
            let mut tail = if tail_start == 1 {
                linear_tail(ext, 2, r, share)?.offset(first * r)
            } else {
                linear_tail(ext, tail_start as u64, r, share)?
            };
            if t > 0 {
                let head: f64 = (1..=t).map(|m| w(m) * w(m)).sum();
                tail = tail.offset(mu * head * r.powi(tail_start as i32) * inv);
            }
            let g_start = t + 1;
            let s2 = s * s;
            let g_rest = positive(
                params,
                CoefficientRule::Squared,
                ExponentRule::Double,
                g_start.max(2),
                r,
                share / (s2 * beta * inv),
            )?
            .scale(s2);
            let g_all = if g_start == 1 {
                g_rest.offset(first * first * r * r)
            } else {
                g_rest
            };
            powered + tail + g_all.scale(beta * inv)
        }
    };
    Ok(sum)
}

/// Literal refined sum minus the same sum with the exact first coefficient 1.
/// `None` for other functionals.
pub fn first_coefficient_deviation(
    f: BohrFunctional,
    ext: &ExtremalFunction,
    r: f64,
    tol: f64,
) -> Result<Option<f64>> {
    if !matches!(f, BohrFunctional::Refined { .. }) {
        return Ok(None);
    }
    let literal = refined_aware_sum(f, ext, r, tol, None)?;
    let exact = refined_aware_sum(f, ext, r, tol, Some(1.0))?;
    Ok(Some(literal.value - exact.value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    SharpConfirmed,
    GapDetected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub functional: BohrFunctional,
    pub witness: ExtremalFunction,
    pub radius: f64,
    pub bohr_sum: SeriesSum,
    pub distance: SeriesSum,
    /// `|bohr_sum − distance|` at the radius.
    pub gap: f64,
    /// Tail bounds of `bohr_sum`, `distance` and the root evaluation.
    pub combined_tails: f64,
    pub tolerance: f64,
    /// `bohr_sum − distance` at `radius·(1 − 10⁻³)`.
    pub margin_below: f64,
    /// `bohr_sum − distance` at `radius·(1 + 10⁻³)`, when that point is inside the disk.
    pub margin_above: Option<f64>,
    /// The same sum with the other witness scale.
    pub other_scale_sum: f64,
    pub first_coefficient_deviation: Option<f64>,
    pub verdict: Verdict,
}

/// Compares the witness sum with the distance bound at `root.radius`.
pub fn verify_sharpness(
    f: BohrFunctional,
    params: ClassParams,
    root: &RootResult,
    tol: f64,
) -> Result<SharpnessReport> {
    let ext = ExtremalFunction::witness_for(f, params);
    let distance = params.distance_lower_bound(DISTANCE_TOL)?;
    let r = root.radius;
    let bohr_sum = bohr_sum_at(f, &ext, r, tol)?;
    let gap = (bohr_sum.value - distance.value).abs();
    let combined_tails = bohr_sum.tail_bound + distance.tail_bound + root.tail_at_root;
    let tolerance = SHARPNESS_ABS_TOL + 10.0 * combined_tails;

    let below = bohr_sum_at(f, &ext, r * (1.0 - MARGIN_OFFSET), tol)?;
    let margin_below = below.value - distance.value;
    let up = r * (1.0 + MARGIN_OFFSET);
    let margin_above = if up < 1.0 {
        Some(bohr_sum_at(f, &ext, up, tol)?.value - distance.value)
    } else {
        None
    };
    let other = match ext.scale {
        Scale::Full => ext.with_scale(Scale::Half),
        Scale::Half => ext.with_scale(Scale::Full),
    };
    let other_scale_sum = bohr_sum_at(f, &other, r, tol)?.value;
    let first_coefficient_deviation = first_coefficient_deviation(f, &ext, r, tol)?;

    let straddles = margin_below < 0.0 && margin_above.is_none_or(|m| m > 0.0);
    let verdict = if gap <= tolerance && straddles {
        Verdict::SharpConfirmed
    } else {
        Verdict::GapDetected
    };
    Ok(SharpnessReport {
        functional: f,
        witness: ext,
        radius: r,
        bohr_sum,
        distance,
        gap,
        combined_tails,
        tolerance,
        margin_below,
        margin_above,
        other_scale_sum,
        first_coefficient_deviation,
        verdict,
    })
}

/// `24` angles times radii `0.1, …, 0.9, 0.99`.
pub fn default_grid() -> Vec<Complex64> {
    let radii = (1..=9).map(|i| i as f64 / 10.0).chain([0.99]);
    radii
        .flat_map(|rho| {
            (0..24).map(move |k| {
                Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / 24.0)
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSlack {
    pub re: f64,
    pub im: f64,
    pub slack: f64,
    /// Geometric estimate of the omitted coefficient tail.
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub points: usize,
    pub truncation: usize,
    pub min_slack: GridSlack,
    /// Points where the slack is below minus its tail estimate.
    pub violations: Vec<GridSlack>,
    /// Points where `|slack|` does not clear its tail estimate.
    pub inconclusive: Vec<GridSlack>,
    /// Always `false`: a finite grid can only falsify membership.
    pub certifies_membership: bool,
}

/// `γ u′ + δ z u″ + ((δ−γ)/2) z² u‴` for `u = Σ_{m≥1} u_m z^m`, with the
/// size of its last term.
fn differential_expression(
    coeffs: &[Complex64],
    params: &ClassParams,
    z: Complex64,
) -> (Complex64, f64) {
    let (g, d) = (params.gamma(), params.delta());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    let mut last = 0.0;
    for (i, &a) in coeffs.iter().enumerate() {
        let m = (i + 1) as f64;
        let weight = g * m + d * m * (m - 1.0) + 0.5 * (d - g) * m * (m - 1.0) * (m - 2.0);
        let term = a * weight * power;
        acc += term;
        last = term.norm();
        power *= z;
    }
    (acc, last)
}

/// Evaluates `Re Φ_h(z) − λ − |Φ_g(z)|` on `grid`.
///
/// `h_coeffs[0]` and `g_coeffs[0]` are the coefficients of `z`.
pub fn class_membership_check(
    h_coeffs: &[Complex64],
    g_coeffs: &[Complex64],
    params: ClassParams,
    grid: &[Complex64],
) -> Result<MembershipReport> {
    let truncation = h_coeffs.len().max(g_coeffs.len());
    if truncation < 3 {
        return Err(Error::InvalidArgument(format!(
            "coefficient sequences need at least 3 terms, got {truncation}"
        )));
    }
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    if let Some(z) = grid.iter().find(|z| z.norm().is_nan() || z.norm() > 0.99) {
        return Err(Error::InvalidArgument(format!(
            "grid point {z} lies outside |z| ≤ 0.99"
        )));
    }
    let slacks: Vec<GridSlack> = grid
        .par_iter()
        .map(|&z| {
            let (ph, lh) = differential_expression(h_coeffs, &params, z);
            let (pg, lg) = differential_expression(g_coeffs, &params, z);
            let rho = z.norm();
            GridSlack {
                re: z.re,
                im: z.im,
                slack: ph.re - params.lambda() - pg.norm(),
                tail_estimate: (lh + lg) * rho / (1.0 - rho),
            }
        })
        .collect();
    let min_slack = *slacks
        .iter()
        .min_by(|a, b| a.slack.total_cmp(&b.slack))
        .expect("non-empty grid");
    let violations = slacks
        .iter()
        .filter(|s| s.slack < -s.tail_estimate)
        .copied()
        .collect();
    let inconclusive = slacks
        .iter()
        .filter(|s| s.slack.abs() <= s.tail_estimate)
        .copied()
        .collect();
    Ok(MembershipReport {
        points: grid.len(),
        truncation,
        min_slack,
        violations,
        inconclusive,
        certifies_membership: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootfind::{find_radius, DEFAULT_FTOL, DEFAULT_XTOL};
    use std::f64::consts::PI;

    fn p(g: f64, d: f64, l: f64) -> ClassParams {
        ClassParams::new(g, d, l).unwrap()
    }

    const IMPROVED2: BohrFunctional = BohrFunctional::ImprovedBohr { p: 2.0 };

    #[test]
    fn full_witness_reaches_distance_at_printed_root() {
        let ext = ExtremalFunction::witness_for(IMPROVED2, p(1.0, 1.0, 0.5));
        let v = bohr_sum_at(IMPROVED2, &ext, 0.652442, 1e-12).unwrap();
        assert!((v.value - PI * PI / 12.0).abs() < 1e-3);
    }

    #[test]
    fn half_witness_oracle() {
        let ext =
            ExtremalFunction::witness_for(IMPROVED2, p(1.0, 1.0, 0.5)).with_scale(Scale::Half);
        let r: f64 = 0.652442;
        // c_m = 1/m²: r + Σ r^m/(2m²) + Σ r^{2m}/(4m⁴)
        let oracle: f64 = r
            + (2..5000)
                .map(|m| {
                    let m = m as f64;
                    r.powf(m) / (2.0 * m * m) + r.powf(2.0 * m) / (4.0 * m.powi(4))
                })
                .sum::<f64>();
        let v = bohr_sum_at(IMPROVED2, &ext, r, 1e-12).unwrap();
        assert!((v.value - oracle).abs() < 1e-11);
        assert!(v.value < PI * PI / 12.0);
    }

    #[test]
    fn sums_vanish_at_zero() {
        let params = p(0.5, 1.0, 0.0);
        for f in [
            IMPROVED2,
            BohrFunctional::SelfPlusCoef,
            BohrFunctional::Rogosinski {
                n: 2,
                tail_start: 3,
            },
        ] {
            let ext = ExtremalFunction::witness_for(f, params);
            assert_eq!(bohr_sum_at(f, &ext, 0.0, 1e-12).unwrap().value, 0.0);
        }
    }

    #[test]
    fn half_never_exceeds_full() {
        let params = p(1.0, 1.0, 0.0);
        for f in [
            IMPROVED2,
            BohrFunctional::AnalyticSplit,
            BohrFunctional::RogosinskiSquared { tail_start: 3 },
        ] {
            let full = ExtremalFunction::witness_for(f, params).with_scale(Scale::Full);
            let half = full.with_scale(Scale::Half);
            for i in 0..10 {
                let r = i as f64 / 10.0;
                let a = bohr_sum_at(f, &half, r, 1e-12).unwrap().value;
                let b = bohr_sum_at(f, &full, r, 1e-12).unwrap().value;
                assert!(a <= b);
            }
        }
    }

    #[test]
    fn corollary_radii_are_sharp() {
        for (f, params) in [
            (IMPROVED2, p(1.0, 1.0, 0.5)),
            (BohrFunctional::SelfPlusCoef, p(0.5, 1.0, 0.0)),
        ] {
            let root = find_radius(f, params, 1e-12, DEFAULT_FTOL).unwrap();
            let rep = verify_sharpness(f, params, &root, 1e-12).unwrap();
            assert_eq!(rep.verdict, Verdict::SharpConfirmed, "{rep:?}");
        }
    }

    #[test]
    fn squared_witness_shows_gap_at_printed_root() {
        let f = BohrFunctional::SquaredCoef;
        let params = p(0.5, 1.0, 0.25);
        let mut root = find_radius(f, params, DEFAULT_XTOL, DEFAULT_FTOL).unwrap();
        root.radius = 0.676479;
        let rep = verify_sharpness(f, params, &root, 1e-12).unwrap();
        assert_eq!(rep.verdict, Verdict::GapDetected);
    }

    #[test]
    fn refined_first_coefficient_deviation() {
        let f = BohrFunctional::Refined {
            n: 1,
            tail_start: 1,
            mu: 1.0,
            beta: 1.0,
        };
        let ext = ExtremalFunction::witness_for(f, p(1.0, 1.0, 0.0));
        let d = first_coefficient_deviation(f, &ext, 0.3, 1e-12)
            .unwrap()
            .unwrap();
        // c_1 = 2: (2 − 1) r + (4 − 1) r²/(1−r)
        let expected = 0.3 + 3.0 * 0.09 / 0.7;
        assert!((d - expected).abs() < 1e-12);
        let ext = ExtremalFunction::witness_for(f, p(1.0, 1.0, 0.5));
        let d = first_coefficient_deviation(f, &ext, 0.3, 1e-12)
            .unwrap()
            .unwrap();
        assert!(d.abs() < 1e-15);
        assert_eq!(
            first_coefficient_deviation(IMPROVED2, &ext, 0.3, 1e-12).unwrap(),
            None
        );
    }

    #[test]
    fn membership_of_identity_has_constant_slack() {
        let params = p(1.0, 1.0, 0.5);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let rep = class_membership_check(
            &[one, zero, zero],
            &[zero, zero, zero],
            params,
            &default_grid(),
        )
        .unwrap();
        assert_eq!(rep.points, 240);
        assert!((rep.min_slack.slack - 0.5).abs() < 1e-15);
        assert!(rep.violations.is_empty() && !rep.certifies_membership);
    }

    #[test]
    fn half_witness_has_no_violation() {
        let params = p(1.0, 1.0, 0.5);
        let ext = ExtremalFunction::witness_for(IMPROVED2, params).with_scale(Scale::Half);
        let (h, g) = ext.coefficients(100);
        let grid: Vec<_> = default_grid()
            .into_iter()
            .filter(|z| z.norm() <= 0.9 + 1e-12)
            .collect();
        let rep = class_membership_check(&h, &g, params, &grid).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep.min_slack.slack > 0.0);
    }

    #[test]
    fn membership_rejects_outside_points() {
        let params = p(1.0, 1.0, 0.5);
        let c = vec![Complex64::new(1.0, 0.0); 3];
        assert!(class_membership_check(&c, &c, params, &[Complex64::new(0.995, 0.0)]).is_err());
        assert!(class_membership_check(&c[..2], &c[..2], params, &default_grid()).is_err());
    }
}
