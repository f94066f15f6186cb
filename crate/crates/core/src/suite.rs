//! Regression table of every printed constant.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::ClassParams;
use crate::error::Result;
use crate::functionals::{BohrFunctional, ClosedForm};
use crate::rootfind::{find_closed_form_root, find_radius, DEFAULT_FTOL, DEFAULT_XTOL};

/// Comparison tolerance for six-digit printed radii.
pub const PRINTED_TOL: f64 = 1e-3;
/// Comparison tolerance for the distance constants.
pub const CONSTANT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub name: String,
    pub computed: f64,
    pub paper: f64,
    pub diff: f64,
    pub tol: f64,
    pub status: Status,
    pub expected_flag: bool,
    pub note: Option<String>,
}

impl SuiteRow {
    pub fn unexpected(&self) -> bool {
        self.status == Status::Flag && !self.expected_flag
    }
}

#[derive(Debug, Clone, Copy)]
enum Quantity {
    Radius(BohrFunctional, (f64, f64, f64)),
    ClosedFormRoot(ClosedForm),
    Distance((f64, f64, f64)),
    /// `c_1²` from the general refined theorem at the given parameters.
    RefinedFirstSquare((f64, f64, f64)),
    /// `c_1` as used by the `N = 1` refined corollary.
    RefinedFirstCoefficient((f64, f64, f64)),
}

struct RowSpec {
    name: String,
    quantity: Quantity,
    paper: f64,
    tol: f64,
    expected_flag: bool,
    note: Option<&'static str>,
}

fn params((g, d, l): (f64, f64, f64)) -> Result<ClassParams> {
    ClassParams::new(g, d, l)
}

impl Quantity {
    fn compute(self) -> Result<f64> {
        Ok(match self {
            Quantity::Radius(f, p) => {
                find_radius(f, params(p)?, DEFAULT_XTOL, DEFAULT_FTOL)?.radius
            }
            Quantity::ClosedFormRoot(cf) => find_closed_form_root(cf, DEFAULT_XTOL)?.radius,
            Quantity::Distance(p) => params(p)?.distance_lower_bound(1e-13)?.value,
            Quantity::RefinedFirstSquare(p) => params(p)?.coef_bound(1)?.powi(2),
            Quantity::RefinedFirstCoefficient(p) => params(p)?.coef_bound(1)?,
        })
    }
}

const P_SEQ_HALF: [f64; 7] = [
    0.652442, 0.659277, 0.659997, 0.660074, 0.660083, 0.660083, 0.660084,
];
const P_SEQ_ZERO: [f64; 7] = [
    0.480812, 0.487911, 0.488711, 0.488874, 0.488886, 0.488888, 0.488888,
];
const TABLE_ONE: [(f64, f64); 4] = [
    (0.1260, 0.9962),
    (0.1255, 0.9981),
    (0.1254, 0.9984),
    (0.1253, 0.9988),
];

fn row_specs() -> Vec<RowSpec> {
    let improved2 = BohrFunctional::ImprovedBohr { p: 2.0 };
    let printed = |name: &str, quantity, paper| RowSpec {
        name: name.to_string(),
        quantity,
        paper,
        tol: PRINTED_TOL,
        expected_flag: false,
        note: None,
    };
    let mut rows = vec![
        printed(
            "r2(1,1,1/2)",
            Quantity::Radius(improved2, (1.0, 1.0, 0.5)),
            0.652442,
        ),
        printed(
            "r2(1,1,0)",
            Quantity::Radius(improved2, (1.0, 1.0, 0.0)),
            0.480812,
        ),
        printed(
            "R2 self-plus (1/2,1,0)",
            Quantity::Radius(BohrFunctional::SelfPlusCoef, (0.5, 1.0, 0.0)),
            0.521468,
        ),
        printed(
            "Rg* co-analytic (1/2,1,0)",
            Quantity::Radius(BohrFunctional::CoAnalyticSplit, (0.5, 1.0, 0.0)),
            0.594279,
        ),
        printed(
            "r3 printed equation (1/2,1,1/4)",
            Quantity::ClosedFormRoot(ClosedForm::ThmSquared),
            0.676479,
        ),
        RowSpec {
            name: "r3 series root (1/2,1,1/4)".into(),
            quantity: Quantity::Radius(BohrFunctional::SquaredCoef, (0.5, 1.0, 0.25)),
            paper: 0.676479,
            tol: PRINTED_TOL,
            expected_flag: true,
            note: Some("printed equation does not match the squared-coefficient series"),
        },
    ];
    for (lambda, seq) in [(0.5, P_SEQ_HALF), (0.0, P_SEQ_ZERO)] {
        for (i, &paper) in seq.iter().enumerate() {
            let p = (i + 2) as f64;
            let label = if lambda == 0.5 { "1/2" } else { "0" };
            let mut row = printed(
                &format!("r{}(1,1,{label})", i + 2),
                Quantity::Radius(BohrFunctional::ImprovedBohr { p }, (1.0, 1.0, lambda)),
                paper,
            );
            if lambda == 0.0 && i == 2 {
                row.note = Some(
                    "printed 0.488711 breaks the increasing sequence; computed value is 0.48877",
                );
            }
            rows.push(row);
        }
    }
    for (gamma, paper) in TABLE_ONE {
        rows.push(printed(
            &format!("table r2({gamma:.4},0.5,0.125)"),
            Quantity::Radius(improved2, (gamma, 0.5, 0.125)),
            paper,
        ));
    }
    for (name, p, paper) in [
        ("d_low(1,1,1/2) = pi^2/12", (1.0, 1.0, 0.5), PI * PI / 12.0),
        (
            "d_low(1,1,0) = pi^2/6 - 1",
            (1.0, 1.0, 0.0),
            PI * PI / 6.0 - 1.0,
        ),
        (
            "d_low(1/2,1,0) = 3 + pi^2/3 - 8 log 2",
            (0.5, 1.0, 0.0),
            3.0 + PI * PI / 3.0 - 8.0 * LN_2,
        ),
    ] {
        rows.push(RowSpec {
            name: name.into(),
            quantity: Quantity::Distance(p),
            paper,
            tol: CONSTANT_TOL,
            expected_flag: false,
            note: None,
        });
    }
    rows.push(RowSpec {
        name: "refined N=3 F-term constant (1,1,0)".into(),
        quantity: Quantity::RefinedFirstSquare((1.0, 1.0, 0.0)),
        paper: 8.0,
        tol: PRINTED_TOL,
        expected_flag: true,
        note: Some("corollary prints 8(γ−λ)²/γ; the general theorem at m=1 gives 4(γ−λ)²/γ²"),
    });
    rows.push(RowSpec {
        name: "refined N=1 first coefficient (1,1,0)".into(),
        quantity: Quantity::RefinedFirstCoefficient((1.0, 1.0, 0.0)),
        paper: 1.0,
        tol: PRINTED_TOL,
        expected_flag: true,
        note: Some("N=1 equation uses the bound 2(γ−λ)/γ where the exact first coefficient is 1"),
    });
    rows
}

/// Computes every row in parallel; the output order is fixed.
pub fn run_suite() -> Vec<SuiteRow> {
    row_specs()
        .into_par_iter()
        .map(|spec| {
            let (computed, err) = match spec.quantity.compute() {
                Ok(v) => (v, None),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            let diff = (computed - spec.paper).abs();
            let status = if diff <= spec.tol {
                Status::Pass
            } else {
                Status::Flag
            };
            SuiteRow {
                name: spec.name,
                computed,
                paper: spec.paper,
                diff,
                tol: spec.tol,
                status,
                expected_flag: spec.expected_flag,
                note: err.or(spec.note.map(str::to_string)),
            }
        })
        .collect()
}
