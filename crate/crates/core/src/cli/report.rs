//! Per-state measure evaluation and the CSV/JSON record layout.

use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use super::format::{fmt_complex, fmt_num};
use super::CliError;
use crate::error::{Error, Result};
use crate::measures::{
    concurrence, covariance, discord_function, entropy, is_entangled_with, negativity,
    ClassificationLabel, DiscordOptimizer, DiscordResult, Label, MeasurementBasis, Tolerances,
};
use crate::qlinalg::{ComplexMatrix, Subsystem, C64};
use crate::states::{self, DensityMatrix, Rho1234, RhoAbc};

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 18] = [
    "state",
    "p",
    "q",
    "n",
    "k",
    "theta",
    "phi",
    "entropy_joint",
    "entropy_A",
    "entropy_B",
    "discord_A",
    "discord_B",
    "discord_fn_A",
    "discord_fn_B",
    "concurrence",
    "negativity",
    "entangled",
    "label",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateName {
    #[value(name = "rho_a")]
    RhoA,
    #[value(name = "rho_b")]
    RhoB,
    #[value(name = "rho_c")]
    RhoC,
    #[value(name = "rho1")]
    Rho1,
    #[value(name = "rho2")]
    Rho2,
    #[value(name = "rho3")]
    Rho3,
    #[value(name = "rho4")]
    Rho4,
    #[value(name = "werner")]
    Werner,
    #[value(name = "gwerner")]
    Gwerner,
    #[value(name = "bell")]
    Bell,
    #[value(name = "file")]
    File,
}

/// State parameters that can be fixed by flags or swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    P,
    Q,
    N,
    K,
}

impl StateName {
    pub fn as_str(&self) -> &'static str {
        match self {
            StateName::RhoA => "rho_a",
            StateName::RhoB => "rho_b",
            StateName::RhoC => "rho_c",
            StateName::Rho1 => "rho1",
            StateName::Rho2 => "rho2",
            StateName::Rho3 => "rho3",
            StateName::Rho4 => "rho4",
            StateName::Werner => "werner",
            StateName::Gwerner => "gwerner",
            StateName::Bell => "bell",
            StateName::File => "file",
        }
    }

    pub fn params(&self) -> &'static [Param] {
        match self {
            StateName::RhoB
            | StateName::Rho1
            | StateName::Rho2
            | StateName::Rho3
            | StateName::Rho4
            | StateName::Werner => &[Param::P],
            StateName::RhoC => &[Param::Q],
            StateName::Gwerner => &[Param::P, Param::N, Param::K],
            StateName::RhoA | StateName::Bell | StateName::File => &[],
        }
    }

    pub fn uses(&self, param: Param) -> bool {
        self.params().contains(&param)
    }
}

/// Fully resolved parameters of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub n: Option<C64>,
    pub k: Option<f64>,
}

fn required(value: Option<f64>, state: StateName, flag: &str) -> std::result::Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("state {} needs --{flag}", state.as_str())))
}

/// Builds the named state; `file_state` supplies the matrix for `file`.
pub fn build_state(
    name: StateName,
    params: &StateParams,
    file_state: Option<&DensityMatrix>,
) -> std::result::Result<DensityMatrix, CliError> {
    let rho = match name {
        StateName::RhoA => states::rho_abc(RhoAbc::A, 0.0),
        StateName::RhoB => states::rho_abc(RhoAbc::B, required(params.p, name, "p")?),
        StateName::RhoC => states::rho_abc(RhoAbc::C, required(params.q, name, "q")?),
        StateName::Rho1 => states::rho_1234(Rho1234::One, required(params.p, name, "p")?),
        StateName::Rho2 => states::rho_1234(Rho1234::Two, required(params.p, name, "p")?),
        StateName::Rho3 => states::rho_1234(Rho1234::Three, required(params.p, name, "p")?),
        StateName::Rho4 => states::rho_1234(Rho1234::Four, required(params.p, name, "p")?),
        StateName::Werner => states::werner(required(params.p, name, "p")?),
        StateName::Gwerner => {
            let n = params
                .n
                .ok_or_else(|| CliError::Usage("state gwerner needs --n".into()))?;
            states::generalized_werner(
                required(params.p, name, "p")?,
                n,
                required(params.k, name, "k")?,
            )
        }
        StateName::Bell => Ok(states::bell()),
        StateName::File => {
            return file_state
                .copied()
                .ok_or_else(|| CliError::Usage("state file needs --path".into()))
        }
    };
    rho.map_err(CliError::from)
}

/// Reads 16 complex entries given as 32 whitespace-separated reals
/// (row-major, real and imaginary parts interleaved).
pub fn load_state_file(path: &Path, psd_tol: f64) -> std::result::Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let values = text
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad number {t:?} in {}", path.display())))
        })
        .collect::<std::result::Result<Vec<f64>, _>>()?;
    if values.len() != 32 {
        return Err(CliError::Usage(format!(
            "{} holds {} numbers, expected 32 (16 complex entries)",
            path.display(),
            values.len()
        )));
    }
    let entries: Vec<C64> = values.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    let m = ComplexMatrix::from_row_major(4, &entries)?;
    Ok(DensityMatrix::with_psd_tol(m, psd_tol)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Measure {
    #[value(name = "dA")]
    DiscordA,
    #[value(name = "dB")]
    DiscordB,
    #[value(name = "discord_function_A")]
    DiscordFunctionA,
    #[value(name = "discord_function_B")]
    DiscordFunctionB,
    #[value(name = "concurrence")]
    Concurrence,
    #[value(name = "negativity")]
    Negativity,
    #[value(name = "covariance")]
    Covariance,
    #[value(name = "classification")]
    Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pauli {
    #[value(name = "x")]
    X,
    #[value(name = "y")]
    Y,
    #[value(name = "z")]
    Z,
}

impl Pauli {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            Pauli::X => ComplexMatrix::pauli_x(),
            Pauli::Y => ComplexMatrix::pauli_y(),
            Pauli::Z => ComplexMatrix::pauli_z(),
        }
    }
}

/// Everything needed to evaluate a row besides the state itself.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub measures: Vec<Measure>,
    pub tolerances: Tolerances,
    pub optimizer: DiscordOptimizer,
    pub observables: (Pauli, Pauli),
    /// Fill the theta/phi columns even without a discord-function measure.
    pub report_angles: bool,
}

impl Evaluation {
    fn wants(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }
}

/// One output record. Field names double as CSV column names.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub state: String,
    pub p: Option<f64>,
    pub q: Option<f64>,
    #[serde(serialize_with = "serialize_n")]
    pub n: Option<C64>,
    pub k: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub entropy_joint: Option<f64>,
    #[serde(rename = "entropy_A")]
    pub entropy_a: Option<f64>,
    #[serde(rename = "entropy_B")]
    pub entropy_b: Option<f64>,
    #[serde(rename = "discord_A")]
    pub discord_a: Option<f64>,
    #[serde(rename = "discord_B")]
    pub discord_b: Option<f64>,
    #[serde(rename = "discord_fn_A")]
    pub discord_fn_a: Option<f64>,
    #[serde(rename = "discord_fn_B")]
    pub discord_fn_b: Option<f64>,
    pub concurrence: Option<f64>,
    pub negativity: Option<f64>,
    pub entangled: Option<bool>,
    pub label: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance: Option<f64>,
}

fn serialize_n<S: serde::Serializer>(n: &Option<C64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        None => s.serialize_none(),
        Some(z) if z.im == 0.0 => s.serialize_f64(z.re),
        Some(z) => s.serialize_str(&fmt_complex(*z)),
    }
}

impl Row {
    pub fn write_csv(&self, out: &mut String) {
        let num = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
        let fields = [
            self.state.clone(),
            num(self.p),
            num(self.q),
            self.n.map(fmt_complex).unwrap_or_default(),
            num(self.k),
            num(self.theta),
            num(self.phi),
            num(self.entropy_joint),
            num(self.entropy_a),
            num(self.entropy_b),
            num(self.discord_a),
            num(self.discord_b),
            num(self.discord_fn_a),
            num(self.discord_fn_b),
            num(self.concurrence),
            num(self.negativity),
            self.entangled.map(|b| b.to_string()).unwrap_or_default(),
            self.label.map(|l| l.as_str().to_string()).unwrap_or_default(),
        ];
        let _ = writeln!(out, "{}", fields.join(","));
    }
}

/// Optimizer record for one measured side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideMeta {
    pub theta: f64,
    pub phi: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl From<&DiscordResult> for SideMeta {
    fn from(r: &DiscordResult) -> Self {
        SideMeta {
            theta: r.basis.theta,
            phi: r.basis.phi,
            iterations: r.iterations,
            evaluations: r.evaluations,
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OptimizerMeta {
    pub grid: usize,
    pub refine_iters: usize,
    #[serde(rename = "A")]
    pub side_a: Option<SideMeta>,
    #[serde(rename = "B")]
    pub side_b: Option<SideMeta>,
}

/// Row plus optimizer metadata; the first error met while filling it.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub row: Row,
    pub meta: OptimizerMeta,
    pub error: Option<Error>,
}

/// Evaluates the requested measures. A failing measure leaves its columns
/// empty and the first failure is returned alongside the partial row.
pub fn evaluate(
    name: StateName,
    params: &StateParams,
    basis: MeasurementBasis,
    rho: &DensityMatrix,
    eval: &Evaluation,
) -> Evaluated {
    let uses = |p: Param| name.uses(p);
    let angles = eval.report_angles
        || eval.wants(Measure::DiscordFunctionA)
        || eval.wants(Measure::DiscordFunctionB);
    let mut row = Row {
        state: name.as_str().to_string(),
        p: params.p.filter(|_| uses(Param::P)),
        q: params.q.filter(|_| uses(Param::Q)),
        n: params.n.filter(|_| uses(Param::N)),
        k: params.k.filter(|_| uses(Param::K)),
        theta: angles.then_some(basis.theta),
        phi: angles.then_some(basis.phi),
        entropy_joint: None,
        entropy_a: None,
        entropy_b: None,
        discord_a: None,
        discord_b: None,
        discord_fn_a: None,
        discord_fn_b: None,
        concurrence: None,
        negativity: None,
        entangled: None,
        label: None,
        covariance: None,
    };
    let mut meta = OptimizerMeta {
        grid: eval.optimizer.grid,
        refine_iters: eval.optimizer.refine_iters,
        ..Default::default()
    };
    let mut error: Option<Error> = None;
    let keep = |r: Result<f64>, error: &mut Option<Error>| -> Option<f64> {
        r.map_err(|e| {
            error.get_or_insert(e);
        })
        .ok()
    };

    row.entropy_joint = keep(entropy(rho), &mut error);
    row.entropy_a = keep(rho.marginal(Subsystem::A).and_then(|m| entropy(&m)), &mut error);
    row.entropy_b = keep(rho.marginal(Subsystem::B).and_then(|m| entropy(&m)), &mut error);

    let classification = eval.wants(Measure::Classification);
    let need_a = classification || eval.wants(Measure::DiscordA);
    let need_b = classification || eval.wants(Measure::DiscordB);
    let (res_a, res_b) = rayon::join(
        || need_a.then(|| eval.optimizer.minimize(rho, Subsystem::A)),
        || need_b.then(|| eval.optimizer.minimize(rho, Subsystem::B)),
    );
    if let Some(r) = res_a {
        meta.side_a = r.as_ref().ok().map(SideMeta::from);
        row.discord_a = keep(r.map(|d| d.value), &mut error);
    }
    if let Some(r) = res_b {
        meta.side_b = r.as_ref().ok().map(SideMeta::from);
        row.discord_b = keep(r.map(|d| d.value), &mut error);
    }

    if eval.wants(Measure::DiscordFunctionA) {
        row.discord_fn_a = keep(discord_function(rho, Subsystem::A, &basis), &mut error);
    }
    if eval.wants(Measure::DiscordFunctionB) {
        row.discord_fn_b = keep(discord_function(rho, Subsystem::B, &basis), &mut error);
    }
    if eval.wants(Measure::Concurrence) {
        row.concurrence = keep(concurrence(rho), &mut error);
    }
    if eval.wants(Measure::Negativity) || classification {
        if eval.wants(Measure::Negativity) {
            row.negativity = keep(negativity(rho), &mut error);
        }
        match is_entangled_with(rho, eval.tolerances.psd_tol) {
            Ok(b) => row.entangled = Some(b),
            Err(e) => {
                error.get_or_insert(e);
            }
        }
    }
    if eval.wants(Measure::Covariance) {
        let (a, b) = eval.observables;
        row.covariance = keep(covariance(rho, &a.matrix(), &b.matrix()), &mut error);
    }
    if classification {
        if let (Some(entangled), Some(on_a), Some(on_b)) = (row.entangled, row.discord_a, row.discord_b) {
            let c = ClassificationLabel::from_evidence(
                entangled,
                crate::measures::DiscordVector { on_a, on_b },
                eval.tolerances.zero_tol,
            );
            row.label = Some(c.label);
        }
    }

    Evaluated { row, meta, error }
}
