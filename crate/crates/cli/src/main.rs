//! `bohr`: radii, regression suite and functional scans from the command line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bohr_core::functionals::{evaluate_closed_form, BohrFunctional, ClosedForm, Evaluator};
use bohr_core::rootfind::{find_radius_with, RootResult};
use bohr_core::sharpness::{verify_sharpness, SharpnessReport};
use bohr_core::suite::{run_suite, SuiteRow};
use bohr_core::{ClassParams, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "bohr",
    version,
    about = "Bohr-type radii for the harmonic class R_H^0(gamma, delta, lambda)"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Locate the radius of one inequality.
    Radius(RadiusArgs),
    /// Recompute every printed constant and compare.
    Suite,
    /// Tabulate k(r) on a grid.
    Scan(ScanArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Improved,
    Squared,
    SelfPlus,
    AnalyticSplit,
    CoAnalyticSplit,
    Rogosinski,
    RogosinskiSquared,
    Refined,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ClosedFormArg {
    CorP2Half,
    CorP2Zero,
    ThmSquared,
    CorSelf,
    CorCoAnalytic,
}

impl From<ClosedFormArg> for ClosedForm {
    fn from(c: ClosedFormArg) -> Self {
        match c {
            ClosedFormArg::CorP2Half => ClosedForm::CorP2Half,
            ClosedFormArg::CorP2Zero => ClosedForm::CorP2Zero,
            ClosedFormArg::ThmSquared => ClosedForm::ThmSquared,
            ClosedFormArg::CorSelf => ClosedForm::CorSelf,
            ClosedFormArg::CorCoAnalytic => ClosedForm::CorCoAnalytic,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct ClassArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    lambda: f64,
}

#[derive(Args, Debug, Clone)]
struct VariantArgs {
    /// Power in the improved Bohr sum.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Exponent of |f| in the Rogosinski and refined sums.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// First index of the coefficient tail.
    #[arg(long = "N", default_value_t = 2)]
    big_n: u32,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Args, Debug)]
struct RadiusArgs {
    #[arg(long, value_enum)]
    variant: Variant,
    #[command(flatten)]
    variant_args: VariantArgs,
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, default_value_t = bohr_core::DEFAULT_XTOL)]
    xtol: f64,
    #[arg(long, default_value_t = bohr_core::DEFAULT_FTOL)]
    ftol: f64,
    /// Series tolerance for the sharpness check.
    #[arg(long, env = "BOHR_TOL", default_value_t = bohr_core::DEFAULT_TOL)]
    tol: f64,
    /// Also verify sharpness against the extremal witness.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "closed_form",
        required_unless_present = "closed_form"
    )]
    variant: Option<Variant>,
    /// Scan a printed closed-form equation instead of a series functional.
    #[arg(long, value_enum)]
    closed_form: Option<ClosedFormArg>,
    #[command(flatten)]
    variant_args: VariantArgs,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 0.9)]
    to: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, env = "BOHR_TOL", default_value_t = bohr_core::DEFAULT_TOL)]
    tol: f64,
}

enum Failure {
    Core(Error),
    Io(io::Error),
    UnexpectedFlag(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Core(Error::InvalidParams(_) | Error::InvalidArgument(_)) => 2,
            Failure::Core(Error::Bracket(_) | Error::ClosedFormInconsistent(_)) => 3,
            Failure::Core(Error::Truncation { .. } | Error::NoConvergence(_)) => 4,
            Failure::UnexpectedFlag(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => format!("i/o error: {e}"),
            Failure::UnexpectedFlag(n) => format!("{n} unexpected FLAG row(s)"),
        }
    }
}

fn functional(variant: Variant, a: &VariantArgs) -> BohrFunctional {
    match variant {
        Variant::Improved => BohrFunctional::ImprovedBohr { p: a.p },
        Variant::Squared => BohrFunctional::SquaredCoef,
        Variant::SelfPlus => BohrFunctional::SelfPlusCoef,
        Variant::AnalyticSplit => BohrFunctional::AnalyticSplit,
        Variant::CoAnalyticSplit => BohrFunctional::CoAnalyticSplit,
        Variant::Rogosinski => BohrFunctional::Rogosinski {
            n: a.n,
            tail_start: a.big_n,
        },
        Variant::RogosinskiSquared => BohrFunctional::RogosinskiSquared {
            tail_start: a.big_n,
        },
        Variant::Refined => BohrFunctional::Refined {
            n: a.n,
            tail_start: a.big_n,
            mu: a.mu,
            beta: a.beta,
        },
    }
}

/// 15 significant digits, locale-free.
fn num(x: f64) -> String {
    format!("{x:.14e}")
}

#[derive(Serialize)]
struct ParamsOut {
    gamma: f64,
    delta: f64,
    lambda: f64,
}

impl From<&ClassParams> for ParamsOut {
    fn from(p: &ClassParams) -> Self {
        Self {
            gamma: p.gamma(),
            delta: p.delta(),
            lambda: p.lambda(),
        }
    }
}

#[derive(Serialize)]
struct RadiusOut {
    functional: BohrFunctional,
    params: ParamsOut,
    xtol: f64,
    ftol: f64,
    root: RootResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    sharpness: Option<SharpnessReport>,
}

fn cmd_radius(a: &RadiusArgs, format: Format) -> Result<Vec<u8>, Failure> {
    let params = ClassParams::new(a.class.gamma, a.class.delta, a.class.lambda)?;
    let f = functional(a.variant, &a.variant_args);
    let ev = Evaluator::new(f, params)?;
    let root = find_radius_with(&ev, a.xtol, a.ftol)?;
    let sharpness = if a.verify {
        Some(verify_sharpness(f, params, &root, a.tol)?)
    } else {
        None
    };
    let out = RadiusOut {
        functional: f,
        params: (&params).into(),
        xtol: a.xtol,
        ftol: a.ftol,
        root,
        sharpness,
    };
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &out)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            writeln!(buf, "# functional: {f}")?;
            writeln!(
                buf,
                "# gamma={} delta={} lambda={}",
                params.gamma(),
                params.delta(),
                params.lambda()
            )?;
            writeln!(buf, "# xtol={:e} ftol={:e}", a.xtol, a.ftol)?;
            let mut w = csv::Writer::from_writer(&mut buf);
            let mut header = vec![
                "radius",
                "residual",
                "bracket_width",
                "evaluations",
                "tail_at_root",
            ];
            let mut record = vec![
                num(root.radius),
                num(root.residual),
                num(root.bracket_width),
                root.evaluations.to_string(),
                num(root.tail_at_root),
            ];
            if let Some(s) = &out.sharpness {
                header.extend(["verdict", "gap"]);
                record.extend([format!("{:?}", s.verdict), num(s.gap)]);
            }
            w.write_record(&header)?;
            w.write_record(&record)?;
            w.flush()?;
        }
        Format::Plain => {
            writeln!(buf, "functional     {f}")?;
            writeln!(
                buf,
                "params         gamma={} delta={} lambda={}",
                params.gamma(),
                params.delta(),
                params.lambda()
            )?;
            writeln!(buf, "radius         {:.12}", root.radius)?;
            writeln!(buf, "residual       {:e}", root.residual)?;
            writeln!(
                buf,
                "bracket        [{:.12}, {:.12}] width {:e}",
                root.lower, root.upper, root.bracket_width
            )?;
            writeln!(buf, "tail at root   {:e}", root.tail_at_root)?;
            writeln!(buf, "evaluations    {}", root.evaluations)?;
            if let Some(s) = &out.sharpness {
                writeln!(
                    buf,
                    "sharpness      {:?} (gap {:e}, allowed {:e})",
                    s.verdict, s.gap, s.tolerance
                )?;
                writeln!(
                    buf,
                    "margins        below {:e}, above {}",
                    s.margin_below,
                    s.margin_above
                        .map_or("n/a".to_string(), |m| format!("{m:e}"))
                )?;
                if let Some(d) = s.first_coefficient_deviation {
                    writeln!(buf, "c_1 vs a_1=1   {d:e}")?;
                }
            }
        }
    }
    Ok(buf)
}

fn cmd_suite(format: Format) -> Result<(Vec<u8>, usize), Failure> {
    let rows: Vec<SuiteRow> = run_suite();
    let unexpected = rows.iter().filter(|r| r.unexpected()).count();
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &rows)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record([
                "name",
                "computed",
                "paper",
                "diff",
                "tol",
                "status",
                "expected_flag",
                "note",
            ])?;
            for r in &rows {
                w.write_record([
                    r.name.clone(),
                    num(r.computed),
                    num(r.paper),
                    num(r.diff),
                    format!("{:e}", r.tol),
                    format!("{:?}", r.status).to_uppercase(),
                    r.expected_flag.to_string(),
                    r.note.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        Format::Plain => {
            writeln!(
                buf,
                "{:<40} {:>14} {:>14} {:>10} {:>6}",
                "row", "computed", "paper", "diff", "status"
            )?;
            for r in &rows {
                let status = format!("{:?}", r.status).to_uppercase();
                let mark = if r.expected_flag { " (expected)" } else { "" };
                writeln!(
                    buf,
                    "{:<40} {:>14.9} {:>14.9} {:>10.2e} {:>6}{mark}",
                    r.name, r.computed, r.paper, r.diff, status
                )?;
                if let Some(note) = &r.note {
                    writeln!(buf, "    {note}")?;
                }
            }
            writeln!(buf, "{} rows, {} unexpected FLAG", rows.len(), unexpected)?;
        }
    }
    Ok((buf, unexpected))
}

#[derive(Serialize)]
struct ScanRow {
    r: f64,
    value: f64,
    tail_bound: f64,
}

#[derive(Serialize)]
struct ScanOut {
    source: String,
    params: ParamsOut,
    tol: f64,
    rows: Vec<ScanRow>,
}

fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Error> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "grid step must be positive, got {step}"
        )));
    }
    if !(from >= 0.0 && to < 1.0 && from <= to) {
        return Err(Error::InvalidArgument(format!(
            "need 0 ≤ from ≤ to < 1, got [{from}, {to}]"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

fn cmd_scan(a: &ScanArgs, format: Format) -> Result<Vec<u8>, Failure> {
    let rs = grid(a.from, a.to, a.step)?;
    let (source, params, rows) = match (a.variant, a.closed_form) {
        (_, Some(cf)) => {
            let cf = ClosedForm::from(cf);
            let rows = rs
                .iter()
                .map(|&r| {
                    Ok(ScanRow {
                        r,
                        value: evaluate_closed_form(cf, r)?,
                        tail_bound: 0.0,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            (format!("closed form {}", cf.name()), cf.params(), rows)
        }
        (Some(v), None) => {
            let missing = || {
                Error::InvalidArgument(
                    "--gamma, --delta and --lambda are required with --variant".into(),
                )
            };
            let params = ClassParams::new(
                a.gamma.ok_or_else(missing)?,
                a.delta.ok_or_else(missing)?,
                a.lambda.ok_or_else(missing)?,
            )?;
            let f = functional(v, &a.variant_args);
            let ev = Evaluator::new(f, params)?;
            let rows = rs
                .iter()
                .map(|&r| {
                    let s = ev.at(r, a.tol)?;
                    Ok(ScanRow {
                        r,
                        value: s.value,
                        tail_bound: s.tail_bound,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            (f.to_string(), params, rows)
        }
        (None, None) => unreachable!("clap requires one of --variant, --closed-form"),
    };
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            let out = ScanOut {
                source,
                params: (&params).into(),
                tol: a.tol,
                rows,
            };
            serde_json::to_writer_pretty(&mut buf, &out)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            writeln!(buf, "# source: {source}")?;
            writeln!(
                buf,
                "# gamma={} delta={} lambda={}",
                params.gamma(),
                params.delta(),
                params.lambda()
            )?;
            writeln!(buf, "# tol={:e}", a.tol)?;
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(["r", "value", "tail_bound"])?;
            for row in &rows {
                w.write_record([num(row.r), num(row.value), num(row.tail_bound)])?;
            }
            w.flush()?;
        }
        Format::Plain => {
            writeln!(
                buf,
                "{source}  gamma={} delta={} lambda={}",
                params.gamma(),
                params.delta(),
                params.lambda()
            )?;
            for row in &rows {
                writeln!(
                    buf,
                    "{:>8.4} {:>22} {:>10.2e}",
                    row.r,
                    num(row.value),
                    row.tail_bound
                )?;
            }
        }
    }
    Ok(buf)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (buf, unexpected) = match &cli.command {
        Command::Radius(a) => (cmd_radius(a, cli.format)?, 0),
        Command::Suite => cmd_suite(cli.format)?,
        Command::Scan(a) => (cmd_scan(a, cli.format)?, 0),
    };
    match &cli.out {
        Some(path) => fs::write(path, &buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    if unexpected > 0 {
        return Err(Failure::UnexpectedFlag(unexpected));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bohr: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
