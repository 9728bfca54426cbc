//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or precondition violation, 3 numeric failure.

pub mod format;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::error::Error;
use crate::measures::{concurrence, gw_threshold, DiscordOptimizer, MeasurementBasis, Tolerances};
use crate::qlinalg::C64;
use crate::states::{generalized_werner, mix, werner, werner_separable_decomposition, DensityMatrix};
use format::fmt_num;
use report::{
    build_state, evaluate, load_state_file, Evaluated, Evaluation, Measure, OptimizerMeta, Param,
    Pauli, Row, StateName, StateParams, CSV_COLUMNS,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericFailure { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qdiscord", version, about = "Discord, concurrence and separability of two-qubit states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Discord components at or below this count as zero
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub zero_tol: f64,
    /// Eigenvalues below minus this count as negative
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub psd_tol: f64,
    /// Points per angle axis of the discord grid search
    #[arg(long, global = true, default_value_t = 64)]
    pub grid: usize,
    /// Nelder-Mead iteration cap per refinement start
    #[arg(long, global = true, default_value_t = 500)]
    pub refine_iters: usize,
}

impl GlobalOpts {
    fn tolerances(&self) -> Result<Tolerances, CliError> {
        if !(self.zero_tol >= 0.0) || !(self.psd_tol >= 0.0) {
            return Err(CliError::Usage("tolerances must be non-negative".into()));
        }
        Ok(Tolerances {
            zero_tol: self.zero_tol,
            psd_tol: self.psd_tol,
        })
    }

    fn optimizer(&self) -> Result<DiscordOptimizer, CliError> {
        if self.grid < 2 {
            return Err(CliError::Usage("--grid must be at least 2".into()));
        }
        Ok(DiscordOptimizer {
            grid: self.grid,
            refine_iters: self.refine_iters,
            ..DiscordOptimizer::default()
        })
    }

    fn header(&self, extra: &str) -> String {
        format!(
            "# qdiscord {VERSION} grid={} refine_iters={} zero_tol={} psd_tol={}{extra}\n",
            self.grid,
            self.refine_iters,
            fmt_num(self.zero_tol),
            fmt_num(self.psd_tol)
        )
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every measure for one state
    Measure(MeasureArgs),
    /// Tabulate measures over a grid of one or two parameters
    Sweep(SweepArgs),
    /// Label one state as entangled, locally quantum or classical
    Classify(MeasureArgs),
    /// Check the separable product-state decomposition of the Werner state
    VerifyDecomposition(VerifyArgs),
    /// Compare the generalized Werner entanglement threshold with bisection
    Threshold(ThresholdArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub state: StateName,
    /// Classical mixing parameter
    #[arg(long)]
    pub p: Option<f64>,
    /// Mixing parameter of rho_c
    #[arg(long)]
    pub q: Option<f64>,
    /// Local superposition parameter (real part)
    #[arg(long)]
    pub n: Option<f64>,
    /// Imaginary part of the local superposition parameter
    #[arg(long, default_value_t = 0.0)]
    pub n_im: f64,
    /// Nonlocal superposition parameter
    #[arg(long)]
    pub k: Option<f64>,
    /// State file for `--state file`: 32 reals, row-major re/im pairs
    #[arg(long)]
    pub path: Option<PathBuf>,
}

impl StateArgs {
    fn params(&self) -> StateParams {
        StateParams {
            p: self.p,
            q: self.q,
            n: self.n.map(|re| C64::new(re, self.n_im)),
            k: self.k,
        }
    }

    fn file_state(&self, psd_tol: f64) -> Result<Option<DensityMatrix>, CliError> {
        match (self.state, &self.path) {
            (StateName::File, Some(path)) => Ok(Some(load_state_file(path, psd_tol)?)),
            (StateName::File, None) => Err(CliError::Usage("state file needs --path".into())),
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Swept axis `name:start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisName {
    P,
    Q,
    N,
    K,
    Theta,
    Phi,
}

impl AxisName {
    fn as_str(&self) -> &'static str {
        match self {
            AxisName::P => "p",
            AxisName::Q => "q",
            AxisName::N => "n",
            AxisName::K => "k",
            AxisName::Theta => "theta",
            AxisName::Phi => "phi",
        }
    }

    fn param(&self) -> Option<Param> {
        match self {
            AxisName::P => Some(Param::P),
            AxisName::Q => Some(Param::Q),
            AxisName::N => Some(Param::N),
            AxisName::K => Some(Param::K),
            AxisName::Theta | AxisName::Phi => None,
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("axis must look like name:start:stop:step, got {s:?}"));
        }
        let name = match parts[0] {
            "p" => AxisName::P,
            "q" => AxisName::Q,
            "n" => AxisName::N,
            "k" => AxisName::K,
            "theta" => AxisName::Theta,
            "phi" => AxisName::Phi,
            other => return Err(format!("unknown axis {other:?}")),
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("bad number {t:?} in axis {s:?}"));
        Ok(Axis {
            name,
            start: num(parts[1])?,
            stop: num(parts[2])?,
            step: num(parts[3])?,
        })
    }
}

impl Axis {
    fn values(&self) -> Result<Vec<f64>, CliError> {
        let valid = self.start.is_finite() && self.stop.is_finite() && self.step.is_finite();
        if !valid || self.step <= 0.0 || self.start > self.stop {
            return Err(CliError::Usage(format!(
                "axis {} needs finite start <= stop and step > 0",
                self.name.as_str()
            )));
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(CliError::Usage(format!("axis {} has too many points", self.name.as_str())));
        }
        Ok((0..count).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Swept axis name:start:stop:step (p, q, n, k, theta or phi); at most two, first is outermost
    #[arg(long = "axis", value_name = "AXIS")]
    pub axes: Vec<Axis>,
    /// Comma-separated measures
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub measures: Vec<Measure>,
    /// Measurement polar angle for the discord-function columns
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Measurement azimuth for the discord-function columns
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Observable on qubit A for the covariance measure
    #[arg(long, value_enum, default_value = "z")]
    pub obs_a: Pauli,
    /// Observable on qubit B for the covariance measure
    #[arg(long, value_enum, default_value = "z")]
    pub obs_b: Pauli,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 0.0)]
    pub k_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k_stop: f64,
    #[arg(long, default_value_t = 0.1)]
    pub k_step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Measure(args) => cmd_measure(&cli.global, args, false),
        Command::Classify(args) => cmd_measure(&cli.global, args, true),
        Command::Sweep(args) => cmd_sweep(&cli.global, args),
        Command::VerifyDecomposition(args) => cmd_verify_decomposition(args.p),
        Command::Threshold(args) => cmd_threshold(&cli.global, args),
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn csv_document(global: &GlobalOpts, extra: &str, rows: &[Row]) -> String {
    let mut text = global.header(extra);
    text.push_str(&CSV_COLUMNS.join(","));
    text.push('\n');
    for row in rows {
        row.write_csv(&mut text);
    }
    text
}

#[derive(Serialize)]
struct MeasureReport<'a> {
    #[serde(flatten)]
    row: &'a Row,
    optimizer: &'a OptimizerMeta,
    zero_tol: f64,
    psd_tol: f64,
    version: &'static str,
}

fn cmd_measure(global: &GlobalOpts, args: &MeasureArgs, classify_only: bool) -> Result<(), CliError> {
    let tolerances = global.tolerances()?;
    let optimizer = global.optimizer()?;
    let file_state = args.state.file_state(tolerances.psd_tol)?;
    let params = args.state.params();
    let rho = build_state(args.state.state, &params, file_state.as_ref())?;
    let measures = if classify_only {
        vec![Measure::Classification]
    } else {
        vec![
            Measure::DiscordA,
            Measure::DiscordB,
            Measure::Concurrence,
            Measure::Negativity,
            Measure::Classification,
        ]
    };
    let eval = Evaluation {
        measures,
        tolerances,
        optimizer,
        observables: (Pauli::Z, Pauli::Z),
        report_angles: false,
    };
    let Evaluated { row, meta, error } = evaluate(
        args.state.state,
        &params,
        MeasurementBasis::computational(),
        &rho,
        &eval,
    );
    let text = match args.out.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => {
            let report = MeasureReport {
                row: &row,
                optimizer: &meta,
                zero_tol: tolerances.zero_tol,
                psd_tol: tolerances.psd_tol,
                version: VERSION,
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        OutputFormat::Csv => csv_document(global, "", std::slice::from_ref(&row)),
    };
    emit(&args.out, &text)?;
    match error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

struct GridPoint {
    params: StateParams,
    basis: MeasurementBasis,
    rho: DensityMatrix,
}

fn cmd_sweep(global: &GlobalOpts, args: &SweepArgs) -> Result<(), CliError> {
    let tolerances = global.tolerances()?;
    let optimizer = global.optimizer()?;
    let format = args.out.format.unwrap_or(OutputFormat::Csv);
    let state = args.state.state;

    if args.axes.len() > 2 {
        return Err(CliError::Usage("at most two swept axes".into()));
    }
    if args.axes.len() == 2 && args.axes[0].name == args.axes[1].name {
        return Err(CliError::Usage("the two swept axes must differ".into()));
    }
    for axis in &args.axes {
        if let Some(param) = axis.name.param() {
            if !state.uses(param) {
                return Err(CliError::Usage(format!(
                    "state {} has no parameter {}",
                    state.as_str(),
                    axis.name.as_str()
                )));
            }
        }
    }
    if args.measures.contains(&Measure::Covariance) && format == OutputFormat::Csv {
        return Err(CliError::Usage(
            "covariance has no CSV column; use --format json".into(),
        ));
    }

    let file_state = args.state.file_state(tolerances.psd_tol)?;
    let base = args.state.params();
    let axis_values: Vec<Vec<f64>> = args.axes.iter().map(Axis::values).collect::<Result<_, _>>()?;

    // Lexicographic in the axis values: first axis outermost.
    let mut combos: Vec<Vec<f64>> = vec![vec![]];
    for values in &axis_values {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut c = prefix.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }

    let mut points = Vec::with_capacity(combos.len());
    for combo in combos {
        let mut params = base;
        let (mut theta, mut phi) = (args.theta, args.phi);
        for (axis, &v) in args.axes.iter().zip(&combo) {
            match axis.name {
                AxisName::P => params.p = Some(v),
                AxisName::Q => params.q = Some(v),
                AxisName::N => params.n = Some(C64::new(v, args.state.n_im)),
                AxisName::K => params.k = Some(v),
                AxisName::Theta => theta = v,
                AxisName::Phi => phi = v,
            }
        }
        let rho = build_state(state, &params, file_state.as_ref())?;
        points.push(GridPoint {
            params,
            // Raw angles: the columns echo the requested grid values.
            basis: MeasurementBasis { theta, phi },
            rho,
        });
    }

    let swept_angles = args
        .axes
        .iter()
        .any(|a| matches!(a.name, AxisName::Theta | AxisName::Phi));
    let eval = Evaluation {
        measures: args.measures.clone(),
        tolerances,
        optimizer,
        observables: (args.obs_a, args.obs_b),
        report_angles: swept_angles,
    };
    let results: Vec<Evaluated> = points
        .par_iter()
        .map(|pt| evaluate(state, &pt.params, pt.basis, &pt.rho, &eval))
        .collect();
    let first_error = results.iter().find_map(|r| r.error.clone());
    let rows: Vec<Row> = results.into_iter().map(|r| r.row).collect();

    let axes_desc: Vec<String> = args
        .axes
        .iter()
        .map(|a| {
            format!(
                "{}:{}:{}:{}",
                a.name.as_str(),
                fmt_num(a.start),
                fmt_num(a.stop),
                fmt_num(a.step)
            )
        })
        .collect();
    let extra = format!(
        " state={} axes={} theta={} phi={}",
        state.as_str(),
        if axes_desc.is_empty() { "none".to_string() } else { axes_desc.join(",") },
        fmt_num(args.theta),
        fmt_num(args.phi)
    );
    let text = match format {
        OutputFormat::Csv => csv_document(global, &extra, &rows),
        OutputFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
    };
    emit(&args.out, &text)?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

/// Max-abs entry error between the reassembled product-state mixture and
/// the Werner state at `p`.
pub fn decomposition_error(p: f64) -> Result<f64, CliError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Usage(format!("p must lie in [0, 1], got {p}")));
    }
    if p > 1.0 / 3.0 {
        return Err(CliError::Usage(format!(
            "p = {p}: the mixture is a valid density operator only when p <= 1/3"
        )));
    }
    let parts = werner_separable_decomposition(p)?;
    let assembled = mix(&parts)?;
    Ok(assembled.matrix().max_abs_diff(werner(p)?.matrix()))
}

fn cmd_verify_decomposition(p: f64) -> Result<(), CliError> {
    let err = decomposition_error(p)?;
    let pass = err < 1e-12;
    println!("p={}", fmt_num(p));
    println!("components=7");
    println!("max_abs_error={}", fmt_num(err));
    println!("result={}", if pass { "pass" } else { "fail" });
    if pass {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "decomposition differs from the Werner state by {err:e}"
        )))
    }
}

/// Outcome of locating the entanglement onset of the n = 0 generalized
/// Werner state by bisection on the sign of its concurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bisection {
    Boundary(f64),
    NoSignChange,
}

pub fn bisect_concurrence_onset(k: f64, tol: f64) -> Result<Bisection, CliError> {
    let entangled = |p: f64| -> Result<bool, CliError> {
        Ok(concurrence(&generalized_werner(p, C64::new(0.0, 0.0), k)?)? > 0.0)
    };
    if entangled(0.0)? || !entangled(1.0)? {
        return Ok(Bisection::NoSignChange);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if entangled(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Bisection::Boundary(0.5 * (lo + hi)))
}

const THRESHOLD_AGREEMENT: f64 = 1e-5;

fn cmd_threshold(global: &GlobalOpts, args: &ThresholdArgs) -> Result<(), CliError> {
    if args.k_start < 0.0 {
        return Err(CliError::Usage("k range must start at k >= 0".into()));
    }
    let ks = Axis {
        name: AxisName::K,
        start: args.k_start,
        stop: args.k_stop,
        step: args.k_step,
    }
    .values()?;
    let results: Vec<Result<(f64, f64, Bisection), CliError>> = ks
        .par_iter()
        .map(|&k| Ok((k, gw_threshold(k)?, bisect_concurrence_onset(k, 1e-10)?)))
        .collect();

    let format = args.out.format.unwrap_or(OutputFormat::Csv);
    let mut failure: Option<String> = None;
    let mut text = String::new();
    let mut records = Vec::new();
    if format == OutputFormat::Csv {
        text.push_str(&global.header(" command=threshold"));
        text.push_str("k,p_formula,p_bisection,abs_diff,status\n");
    }
    for r in results {
        let (k, formula, bisection) = r?;
        let (found, status) = match bisection {
            Bisection::Boundary(b) if (b - formula).abs() <= THRESHOLD_AGREEMENT => (Some(b), "ok"),
            Bisection::Boundary(b) => {
                failure.get_or_insert(format!("k = {k}: bisection {b} vs formula {formula}"));
                (Some(b), "mismatch")
            }
            // The formula puts the onset at the p = 1 endpoint only at k = 0.
            Bisection::NoSignChange if formula >= 1.0 => (None, "no sign change in [0, 1]"),
            Bisection::NoSignChange => {
                failure.get_or_insert(format!("k = {k}: no sign change bracketing {formula}"));
                (None, "bracket failure")
            }
        };
        let diff = found.map(|b| (b - formula).abs());
        match format {
            OutputFormat::Csv => {
                let _ = writeln!(
                    text,
                    "{},{},{},{},\"{status}\"",
                    fmt_num(k),
                    fmt_num(formula),
                    found.map(fmt_num).unwrap_or_default(),
                    diff.map(fmt_num).unwrap_or_default()
                );
            }
            OutputFormat::Json => records.push(serde_json::json!({
                "k": k,
                "p_formula": formula,
                "p_bisection": found,
                "abs_diff": diff,
                "status": status,
            })),
        }
    }
    if format == OutputFormat::Json {
        text = serde_json::to_string_pretty(&records).expect("records serialize") + "\n";
    }
    emit(&args.out, &text)?;
    match failure {
        Some(msg) => Err(CliError::Numeric(msg)),
        None => Ok(()),
    }
}
