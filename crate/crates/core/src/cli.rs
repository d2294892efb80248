//! Command-line front end: figure data, single-point localization reports,
//! angle optimization, thresholds and scheme comparisons.
//!
//! Every command produces a [`Report`], a flat table rendered as CSV, JSON or
//! aligned text with fixed-point numbers, so repeated runs are byte-identical.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::channels::DecoherenceParams;
use crate::distribute::{compare_scan, Axis, ComparisonPoint, ScanGrid, ThirdAxis, DEFAULT_THETA_PRIME, MIN_RATIO_D};
use crate::error::{Error, Result};
use crate::localize::{
    amp_coefficients, amp_probability, depolarized_ghz, depolarized_lambda, depolarized_probability, measure_qubit3,
    Outcome,
};
use crate::measures::{amp_reports_numeric, entanglement_report, fef_closed_amp, n_average, negativity_closed_amp};
use crate::optimize::{optimize_theta, sudden_death_threshold, Objective, ThresholdOutcome, DEFAULT_RESOLUTION};
use crate::states::MeasurementBasis;

pub const THREADS_ENV: &str = "NOISE_LOCALIZE_THREADS";
pub const FIGURES: [u32; 6] = [2, 3, 4, 5, 7, 8];
pub const DEFAULT_GRID_POINTS: usize = 201;
pub const DEFAULT_PRECISION: usize = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "noise-localize",
    version,
    about = "Entanglement localization of a noisy GHZ state"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Measure qubit 3 once and report both outcomes, closed form next to numeric.
    Localize(LocalizeArgs),
    /// Emit the data grid behind one of the figures (2, 3, 4, 5, 7, 8).
    Figure(FigureArgs),
    /// Best measurement angle for an objective.
    Optimize(OptimizeArgs),
    /// Uniform noise strength where an objective reaches its baseline.
    Threshold(ThresholdArgs),
    /// Direct versus ancilla-assisted distribution at one point.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Amp,
    Depol,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format (default: csv for figures, text otherwise).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Digits after the decimal point.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct NoiseArgs {
    /// Strength for all three qubits; `--d1/--d2/--d3` override per qubit.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
    #[arg(long)]
    pub d3: Option<f64>,
}

impl NoiseArgs {
    pub fn params(&self) -> Result<DecoherenceParams> {
        let base = self.d.unwrap_or(0.0);
        DecoherenceParams::new(
            self.d1.unwrap_or(base),
            self.d2.unwrap_or(base),
            self.d3.unwrap_or(base),
        )
    }
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct LocalizeArgs {
    #[arg(long, value_enum, default_value_t = Model::Amp)]
    pub model: Model,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Angles are in degrees.
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    pub id: u32,
    /// Points per axis.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Fixed measurement angle for figure 8.
    #[arg(long, default_value_t = DEFAULT_THETA_PRIME)]
    pub theta_prime: f64,
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct OptimizeArgs {
    /// n+, n-, nave, f+, f-, fave or ndep.
    #[arg(long)]
    pub objective: Objective,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub objective: Objective,
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub theta: f64,
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct CompareArgs {
    /// Strength of the two transmitted qubits.
    #[arg(long)]
    pub d: f64,
    /// Strength of the kept qubit.
    #[arg(long, conflicts_with = "r")]
    pub d3: Option<f64>,
    /// Kept-qubit strength as a fraction of `d`.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub theta: f64,
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// `1`/`0` in CSV and text, a JSON boolean.
    Flag(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

/// A flat table plus the configuration that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub config: Value,
    pub grid_shape: Vec<usize>,
}

/// Fixed-point with `precision` digits; never prints `-0.000`.
pub fn format_fixed(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".to_owned();
    }
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => s,
    }
}

fn rounded(x: f64, precision: usize) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let v: f64 = format_fixed(x, precision).parse().expect("formatted float");
    json!(v)
}

impl Report {
    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format_fixed(*x, precision),
                    Cell::Text(s) => s.clone(),
                    Cell::Flag(b) => u8::from(*b).to_string(),
                    Cell::Missing => "nan".to_owned(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, precision: usize) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(x) => rounded(*x, precision),
                            Cell::Text(s) => Value::String(s.clone()),
                            Cell::Flag(b) => Value::Bool(*b),
                            Cell::Missing => Value::Null,
                        };
                        ((*k).to_owned(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "config": self.config,
            "rows": rows,
            "meta": {
                "tool_version": env!("CARGO_PKG_VERSION"),
                "grid_shape": self.grid_shape,
            },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    /// Aligned columns for reading in a terminal.
    pub fn to_text(&self, precision: usize) -> String {
        let cells: Vec<Vec<String>> = std::iter::once(self.columns.iter().map(|c| (*c).to_owned()).collect())
            .chain(self.rows.iter().map(|row| {
                row.iter()
                    .map(|c| match c {
                        Cell::Num(x) => format_fixed(*x, precision),
                        Cell::Text(s) => s.clone(),
                        Cell::Flag(b) => u8::from(*b).to_string(),
                        Cell::Missing => "-".to_owned(),
                    })
                    .collect()
            }))
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Text => self.to_text(precision),
            Format::Csv => self.to_csv(precision),
            Format::Json => self.to_json(precision),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

fn radians(angle: f64, degrees: bool) -> f64 {
    if degrees {
        angle.to_radians()
    } else {
        angle
    }
}

fn check_precision(precision: usize) -> Result<()> {
    if precision > 17 {
        return Err(Error::out_of_domain("precision", precision as f64, "0..=17"));
    }
    Ok(())
}

/// Both outcomes of one measurement: probability, negativity, FEF, minimal
/// partial-transpose eigenvalue and the usefulness flag, closed form against
/// the channel-and-diagonalize pipeline.
pub fn cmd_localize(args: &LocalizeArgs) -> Result<Report> {
    let p = args.noise.params()?;
    let b = MeasurementBasis::new(radians(args.theta, args.degrees), radians(args.phi, args.degrees))?;
    let mut rows = Vec::new();
    let mut push = |label: Outcome, quantity: &str, closed: Option<f64>, numeric: Option<f64>| {
        let diff = closed.zip(numeric).map(|(c, n)| (c - n).abs());
        rows.push(vec![
            Cell::from(label.symbol()),
            Cell::from(quantity),
            Cell::from(closed),
            Cell::from(numeric),
            Cell::from(diff),
        ]);
    };
    match args.model {
        Model::Amp => {
            for (label, prob, report) in amp_reports_numeric(&p, &b)? {
                let coeffs = amp_coefficients(&p, &b, label);
                let closed_n = negativity_closed_amp(&p, &b, label);
                let closed_f = fef_closed_amp(&p, &b, label);
                push(
                    label,
                    "probability",
                    Some(amp_probability(&p, b.theta(), label)),
                    Some(prob),
                );
                push(label, "negativity", closed_n, report.map(|r| r.negativity));
                push(label, "fef", closed_f, report.map(|r| r.fef));
                push(
                    label,
                    "min_pt_eigenvalue",
                    coeffs.min_pt_eigenvalue(),
                    report.map(|r| r.min_pt_eigenvalue),
                );
                let useful = |f: Option<f64>| f.map(|f| if f > 0.5 { 1.0 } else { 0.0 });
                push(
                    label,
                    "useful",
                    useful(closed_f),
                    report.map(|r| f64::from(u8::from(r.useful_for_teleportation))),
                );
            }
        }
        Model::Depol => {
            if !p.is_symmetric() {
                return Err(Error::out_of_domain(
                    "d2",
                    p.d2(),
                    "equal strengths for the depolarizing model",
                ));
            }
            let rho = depolarized_ghz(p.d1())?;
            let lambda = depolarized_lambda(p.d1(), b.theta());
            for out in measure_qubit3(&rho, &b)? {
                let report = out.collapsed.as_ref().map(entanglement_report).transpose()?;
                push(
                    out.label,
                    "probability",
                    Some(depolarized_probability()),
                    Some(out.probability),
                );
                push(
                    out.label,
                    "negativity",
                    Some((-2.0 * lambda).max(0.0)),
                    report.map(|r| r.negativity),
                );
                push(out.label, "fef", None, report.map(|r| r.fef));
                push(
                    out.label,
                    "min_pt_eigenvalue",
                    Some(lambda),
                    report.map(|r| r.min_pt_eigenvalue),
                );
                push(
                    out.label,
                    "useful",
                    None,
                    report.map(|r| f64::from(u8::from(r.useful_for_teleportation))),
                );
            }
        }
    }
    Ok(Report {
        columns: vec!["outcome", "quantity", "closed", "numeric", "diff"],
        rows,
        config: json!({
            "command": "localize",
            "model": format!("{:?}", args.model).to_lowercase(),
            "d1": p.d1(), "d2": p.d2(), "d3": p.d3(),
            "theta": b.theta(), "phi": b.phi(),
        }),
        grid_shape: vec![2],
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureConfig {
    pub grid_points: usize,
    pub theta_prime: f64,
}

impl Default for FigureConfig {
    fn default() -> Self {
        FigureConfig {
            grid_points: DEFAULT_GRID_POINTS,
            theta_prime: DEFAULT_THETA_PRIME,
        }
    }
}

fn sym(d: f64) -> DecoherenceParams {
    DecoherenceParams::symmetric(d).expect("grid inside [0, 1]")
}

fn basis(theta: f64) -> MeasurementBasis {
    MeasurementBasis::new(theta, 0.0).expect("grid inside [0, pi]")
}

/// Impossible outcomes carry no entanglement in the tables.
fn n_or_zero(p: &DecoherenceParams, theta: f64, label: Outcome) -> f64 {
    negativity_closed_amp(p, &basis(theta), label).unwrap_or(0.0)
}

fn grid2(d: Axis, theta: Axis, row: impl Fn(f64, f64) -> Vec<Cell> + Sync) -> Vec<Vec<Cell>> {
    let ds = d.values();
    let ts = theta.values();
    (0..ds.len() * ts.len())
        .into_par_iter()
        .map(|k| row(ds[k / ts.len()], ts[k % ts.len()]))
        .collect()
}

/// One row per row of the figure's surface, ordered by `branch` (where
/// present), then `d`, then `θ` (or `r`).
///
/// * 2: `N±` over `d ∈ [0, 1]`, `θ ∈ [0, π]`.
/// * 3: `ΔN± = N±(θ) − N±(π/2)`; `+` on `θ ∈ [π/2, 2π/3]`, `−` on `[π/3, π/2]`.
/// * 4: `N_ave` over `d ∈ [0.58, 0.64]`, `θ ∈ [0, π]`.
/// * 5: `F±` over `d ∈ [(√5−1)/2, 0.65]`, panels as in 3.
/// * 7: scheme comparison with `d3 = 0` over `d ∈ [0, 1]`, `θ ∈ [0, π/2]`.
/// * 8: scheme comparison at `θ = θ'` over `d ∈ (0, 1]`, `r ∈ [0, 0.1]`.
pub fn figure_report(id: u32, cfg: &FigureConfig) -> Result<Report> {
    let n = cfg.grid_points;
    if n < 2 {
        return Err(Error::out_of_domain("grid points", n as f64, ">= 2"));
    }
    let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
    let upper = Axis::new(FRAC_PI_2, 2.0 * FRAC_PI_3, n);
    let lower = Axis::new(FRAC_PI_3, FRAC_PI_2, n);
    let (columns, rows, shape): (Vec<&'static str>, Vec<Vec<Cell>>, Vec<usize>) = match id {
        2 => (
            vec!["d", "theta", "n_plus", "n_minus"],
            grid2(Axis::new(0.0, 1.0, n), Axis::new(0.0, PI, n), |d, t| {
                let p = sym(d);
                vec![
                    d.into(),
                    t.into(),
                    n_or_zero(&p, t, Outcome::Plus).into(),
                    n_or_zero(&p, t, Outcome::Minus).into(),
                ]
            }),
            vec![n, n],
        ),
        3 => {
            let panel = |label: Outcome, theta: Axis| {
                grid2(Axis::new(0.0, 1.0, n), theta, move |d, t| {
                    let p = sym(d);
                    let delta = n_or_zero(&p, t, label) - n_or_zero(&p, FRAC_PI_2, label);
                    vec![label.sign().into(), d.into(), t.into(), delta.into()]
                })
            };
            let mut rows = panel(Outcome::Plus, upper);
            rows.extend(panel(Outcome::Minus, lower));
            (vec!["branch", "d", "theta", "delta_n"], rows, vec![2, n, n])
        }
        4 => (
            vec!["d", "theta", "n_ave"],
            grid2(Axis::new(0.58, 0.64, n), Axis::new(0.0, PI, n), |d, t| {
                vec![d.into(), t.into(), n_average(&sym(d), &basis(t)).into()]
            }),
            vec![n, n],
        ),
        5 => {
            let panel = |label: Outcome, theta: Axis| {
                grid2(Axis::new(golden, 0.65, n), theta, move |d, t| {
                    let f = fef_closed_amp(&sym(d), &basis(t), label);
                    vec![label.sign().into(), d.into(), t.into(), f.into()]
                })
            };
            let mut rows = panel(Outcome::Plus, upper);
            rows.extend(panel(Outcome::Minus, lower));
            (vec!["branch", "d", "theta", "fef"], rows, vec![2, n, n])
        }
        7 => {
            let grid = ScanGrid {
                d: Axis::new(0.0, 1.0, n),
                theta: Axis::new(0.0, FRAC_PI_2, n),
                third: ThirdAxis::D3(Axis::fixed(0.0)),
            };
            let rows = compare_scan(&grid)?.iter().map(comparison_row).collect();
            (COMPARISON_COLUMNS.to_vec(), rows, vec![n, n])
        }
        8 => {
            MeasurementBasis::new(cfg.theta_prime, 0.0)?;
            let rs = Axis::new(0.0, 0.1, n);
            let grid = ScanGrid {
                d: Axis::new(MIN_RATIO_D, 1.0, n),
                theta: Axis::fixed(cfg.theta_prime),
                third: ThirdAxis::Ratio(rs),
            };
            let rs = rs.values();
            let rows = compare_scan(&grid)?
                .iter()
                .enumerate()
                .map(|(k, pt)| {
                    let mut row = vec![Cell::Num(rs[k % rs.len()])];
                    row.extend(comparison_row(pt));
                    row
                })
                .collect();
            let mut columns = vec!["r"];
            columns.extend(COMPARISON_COLUMNS);
            (columns, rows, vec![n, n])
        }
        other => return Err(Error::UnknownFigure(other)),
    };
    Ok(Report {
        columns,
        rows,
        config: json!({
            "command": "figure",
            "id": id,
            "grid_points": n,
            "theta_prime": cfg.theta_prime,
        }),
        grid_shape: shape,
    })
}

pub const COMPARISON_COLUMNS: [&str; 10] = [
    "d",
    "theta",
    "d3",
    "n_dds",
    "n_ads_plus",
    "f_dds",
    "f_ads_plus",
    "delta_n",
    "delta_f",
    "p_plus",
];

fn comparison_row(pt: &ComparisonPoint) -> Vec<Cell> {
    [
        pt.d,
        pt.theta,
        pt.d3,
        pt.n_dds,
        pt.n_ads_plus,
        pt.f_dds,
        pt.f_ads_plus,
        pt.delta_n,
        pt.delta_f,
        pt.p_plus,
    ]
    .into_iter()
    .map(Cell::Num)
    .collect()
}

pub fn cmd_optimize(args: &OptimizeArgs) -> Result<Report> {
    let p = args.noise.params()?;
    let r = optimize_theta(args.objective, &p, args.resolution)?;
    let warning = if r.flat {
        "flat objective: constant over the grid"
    } else {
        ""
    };
    Ok(Report {
        columns: vec![
            "objective",
            "d1",
            "d2",
            "d3",
            "best_theta",
            "best_value",
            "flat",
            "warning",
        ],
        rows: vec![vec![
            args.objective.label().into(),
            p.d1().into(),
            p.d2().into(),
            p.d3().into(),
            r.best_theta.into(),
            r.best_value.into(),
            r.flat.into(),
            warning.into(),
        ]],
        config: json!({
            "command": "optimize",
            "objective": args.objective.label(),
            "d1": p.d1(), "d2": p.d2(), "d3": p.d3(),
            "resolution": args.resolution,
        }),
        grid_shape: vec![args.resolution],
    })
}

pub fn cmd_threshold(args: &ThresholdArgs) -> Result<Report> {
    let theta = radians(args.theta, args.degrees);
    let outcome = sudden_death_threshold(theta, args.objective)?;
    let (d_star, width, found, warning) = match outcome {
        ThresholdOutcome::Found(r) => (Cell::Num(r.d_star), Cell::Num(r.bracket_width), true, ""),
        ThresholdOutcome::NoThreshold { .. } => (
            Cell::Missing,
            Cell::Missing,
            false,
            "no threshold: no crossing of the baseline for d in [0, 1]",
        ),
    };
    Ok(Report {
        columns: vec!["objective", "theta", "d_star", "bracket_width", "found", "warning"],
        rows: vec![vec![
            args.objective.label().into(),
            theta.into(),
            d_star,
            width,
            found.into(),
            warning.into(),
        ]],
        config: json!({
            "command": "threshold",
            "objective": args.objective.label(),
            "theta": theta,
        }),
        grid_shape: vec![1],
    })
}

pub fn cmd_compare(args: &CompareArgs) -> Result<Report> {
    let theta = radians(args.theta, args.degrees);
    let d3 = match (args.d3, args.r) {
        (_, Some(r)) => {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::out_of_domain("r", r, "[0, 1/d]"));
            }
            r * args.d.max(MIN_RATIO_D)
        }
        (Some(d3), None) => d3,
        (None, None) => 0.0,
    };
    let d = if args.r.is_some() {
        args.d.max(MIN_RATIO_D)
    } else {
        args.d
    };
    let pt = ComparisonPoint::new(d, theta, d3)?;
    Ok(Report {
        columns: COMPARISON_COLUMNS.to_vec(),
        rows: vec![comparison_row(&pt)],
        config: json!({
            "command": "compare",
            "d": d, "d3": d3, "theta": theta,
        }),
        grid_shape: vec![1],
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownFigure(_) | Error::UnknownObjective(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    // a pool that already exists (repeated in-process runs) is kept as is
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Reports go to `--output` or `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }

    let (result, out, default_format) = match &cli.command {
        Command::Localize(a) => (cmd_localize(a), &a.out, Format::Text),
        Command::Figure(a) => {
            let cfg = FigureConfig {
                grid_points: a.grid_points,
                theta_prime: radians(a.theta_prime, a.degrees),
            };
            (figure_report(a.id, &cfg), &a.out, Format::Csv)
        }
        Command::Optimize(a) => (cmd_optimize(a), &a.out, Format::Text),
        Command::Threshold(a) => (cmd_threshold(a), &a.out, Format::Text),
        Command::Compare(a) => (cmd_compare(a), &a.out, Format::Text),
    };
    let report = match check_precision(out.precision).and(result) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = report.render(out.format.unwrap_or(default_format), out.precision);
    let written = match &out.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}
