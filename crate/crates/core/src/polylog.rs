//! Real polylogarithms `Li_n(x) = Σ_{m≥1} x^m / m^n` for `n ∈ {1,2,3,4}` and
//! `x ∈ [−1, 1]`, each returned with a truncation bound.
//!
//! * `0 ≤ x ≤ 0.99`: direct series, tail `x^{M+1} / ((M+1)^n (1−x))`.
//! * `0.99 < x ≤ 1`, `n = 2`: reflection
//!   `Li₂(x) = π²/6 − ln x · ln(1−x) − Li₂(1−x)`.
//! * `0.99 < x ≤ 1`, `n ∈ {3,4}`: expansion about `x = 1` in `μ = ln x`,
//!   `Li_n(e^μ) = μ^{n−1}/(n−1)! (H_{n−1} − ln(−μ)) + Σ_{k≠n−1} ζ(n−k) μ^k / k!`.
//! * `x < 0`: duplication `Li_n(x) = 2^{1−n} Li_n(x²) − Li_n(−x)`.
//! * `n = 1`: `−ln(1−x)` exactly.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{check_tol, Error, Result};
use crate::series::SeriesSum;

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

const DIRECT_LIMIT: f64 = 0.99;
const MAX_DIRECT_TERMS: u64 = 100_000;

// B_2, B_4, ..., B_20
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Polylogarithm order, restricted to `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolylogOrder(u8);

impl PolylogOrder {
    pub fn new(n: u8) -> Result<Self> {
        if (1..=4).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::InvalidArgument(format!(
                "polylog order must be 1..=4, got {n}"
            )))
        }
    }

    pub fn get(&self) -> u8 {
        self.0
    }
}

/// ζ(n) for n = 2, 3, 4.
fn zeta(n: u8) -> f64 {
    match n {
        2 => PI * PI / 6.0,
        3 => ZETA_3,
        4 => PI.powi(4) / 90.0,
        _ => unreachable!("zeta only tabulated for 2..=4"),
    }
}

/// `Li_n(x)` to absolute tolerance `tol`.
pub fn li(order: PolylogOrder, x: f64, tol: f64) -> Result<SeriesSum> {
    check_tol(tol)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "polylog argument {x} outside [-1,1]"
        )));
    }
    let n = order.get();
    if n == 1 {
        if x == 1.0 {
            return Err(Error::InvalidArgument("Li₁(1) diverges".into()));
        }
        return Ok(SeriesSum::exact(-(-x).ln_1p()));
    }
    if x < 0.0 {
        let scale = 2f64.powi(1 - n as i32);
        let square = li_nonneg(n, x * x, tol / (2.0 * scale))?;
        let mirror = li_nonneg(n, -x, tol / 2.0)?;
        return Ok(square.scale(scale) + mirror.scale(-1.0));
    }
    li_nonneg(n, x, tol)
}

fn li_nonneg(n: u8, x: f64, tol: f64) -> Result<SeriesSum> {
    debug_assert!((0.0..=1.0).contains(&x) && n >= 2);
    if x <= DIRECT_LIMIT {
        return direct(n, x, tol);
    }
    if n == 2 {
        if x == 1.0 {
            return Ok(SeriesSum::exact(zeta(2)));
        }
        let rest = direct(2, 1.0 - x, tol)?;
        let value = zeta(2) - x.ln() * (-x).ln_1p() - rest.value;
        return Ok(SeriesSum { value, ..rest });
    }
    near_one(n, x, tol)
}

fn direct(n: u8, x: f64, tol: f64) -> Result<SeriesSum> {
    if x == 0.0 {
        return Ok(SeriesSum::exact(0.0));
    }
    let mut sum = 0.0;
    let mut power = 1.0;
    for m in 1..=MAX_DIRECT_TERMS {
        power *= x;
        sum += power / (m as f64).powi(n as i32);
        let next = m + 1;
        let tail = power * x / ((next as f64).powi(n as i32) * (1.0 - x));
        if tail <= tol {
            return Ok(SeriesSum {
                value: sum,
                tail_bound: tail,
                terms_used: m,
            });
        }
    }
    Err(Error::Truncation {
        value: sum,
        tail_bound: power * x / (1.0 - x),
        terms: MAX_DIRECT_TERMS,
        tol,
    })
}

/// Expansion in `μ = ln x` for `n ∈ {3,4}`, valid for `|μ| < 2π`.
fn near_one(n: u8, x: f64, tol: f64) -> Result<SeriesSum> {
    if x == 1.0 {
        return Ok(SeriesSum::exact(zeta(n)));
    }
    let mu = x.ln();
    let ni = n as i32;
    let mut value = 0.0;
    let mut factorial = 1.0;
    let mut mu_pow = 1.0;
    // k = 0 ..= n: ζ(n−k) with n−k ≥ 0, the k = n−1 slot is logarithmic.
    let harmonic: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
    for k in 0..=ni {
        if k > 0 {
            factorial *= k as f64;
            mu_pow *= mu;
        }
        let coefficient = match ni - k {
            1 => harmonic - (-mu).ln(),
            0 => -0.5,
            s => zeta(s as u8),
        };
        value += coefficient * mu_pow / factorial;
    }
    // k = n−1+2j carries ζ(1−2j) = −B_{2j}/(2j); the remainder from j = j0 on is
    // at most 2ζ(2)|μ|^{n−1} ρ^{2 j0} / (1 − ρ²) with ρ = |μ|/(2π).
    let rho = mu.abs() / (2.0 * PI);
    let lead = 2.0 * zeta(2) * mu.abs().powi(ni - 1);
    let mut terms = (ni + 1) as u64;
    for (idx, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = idx as i32 + 1;
        let bound = lead * rho.powi(2 * j) / (1.0 - rho * rho);
        if bound <= tol {
            return Ok(SeriesSum {
                value,
                tail_bound: bound,
                terms_used: terms,
            });
        }
        let k = ni - 1 + 2 * j;
        let zeta_neg = -b / (2 * j) as f64;
        let k_fact: f64 = (1..=k).map(|i| i as f64).product();
        value += zeta_neg * mu.powi(k) / k_fact;
        terms += 1;
    }
    let j = BERNOULLI_EVEN.len() as i32 + 1;
    let bound = lead * rho.powi(2 * j) / (1.0 - rho * rho);
    if bound <= tol {
        Ok(SeriesSum {
            value,
            tail_bound: bound,
            terms_used: terms,
        })
    } else {
        Err(Error::Truncation {
            value,
            tail_bound: bound,
            terms,
            tol,
        })
    }
}

/// Named constants that appear in the closed-form radius equations.
pub fn li_constants() -> BTreeMap<&'static str, f64> {
    let pi2 = PI * PI;
    BTreeMap::from([
        ("pi^2/12", pi2 / 12.0),
        ("pi^2/6", pi2 / 6.0),
        ("pi^2/3", pi2 / 3.0),
        ("pi^4/90", pi2 * pi2 / 90.0),
        ("log 2", LN_2),
        ("pi^2/6 - 1", pi2 / 6.0 - 1.0),
        ("3 + pi^2/3 - 8 log 2", 3.0 + pi2 / 3.0 - 8.0 * LN_2),
    ])
}
