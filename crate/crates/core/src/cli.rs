//! `qwalk` command-line interface.
//!
//! Data tables go to `--output` (or standard output when absent) as CSV or
//! JSON. Summaries are single-line JSON objects on standard output; when the
//! table itself occupies standard output the summary moves to standard error.
//!
//! Exit codes: 0 success, 2 invalid input, 3 runtime failure, 4 comparison
//! tolerance exceeded.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classical::classical_distribution;
use crate::ctqw::{rescaling_check, CtqwConfig, CtqwState, Graph};
use crate::distribution::Distribution;
use crate::error::Error;
use crate::momentum::{ClosedFormSolver, IntegralForm, QuadratureSpec};
use crate::transport::{estimate_alpha, track_peaks, Side, DEFAULT_T_MIN};
use crate::walk::{simulate, BarrierParams, InitialState, ShiftKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Quantum walks on the line through tunneling barriers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the coined walk and write the position distribution.
    Simulate(SimulateArgs),
    /// Evaluate the momentum-space solution by quadrature.
    Analytic(AnalyticArgs),
    /// Track the ballistic peak, fit its speed and infer the barrier.
    #[command(
        after_help = "The fit summary always goes to standard output; the t,n_peak,p_peak trace is written only with --output."
    )]
    Peaks(PeaksArgs),
    /// Infer the barrier from a measured peak speed in sites per step.
    EstimateAlpha(EstimateAlphaArgs),
    /// Check the continuous-time walk's time-rescaling equivalence.
    Ctqw(CtqwArgs),
    /// Write the classical random-walk distribution.
    Classical(ClassicalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShiftArg {
    Flipflop,
    Moving,
}

impl From<ShiftArg> for ShiftKind {
    fn from(s: ShiftArg) -> Self {
        match s {
            ShiftArg::Flipflop => ShiftKind::FlipFlop,
            ShiftArg::Moving => ShiftKind::Moving,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    Left,
    Unbiased,
}

impl From<InitialArg> for InitialState {
    fn from(s: InitialArg) -> Self {
        match s {
            InitialArg::Left => InitialState::LeftLocalized,
            InitialArg::Unbiased => InitialState::Unbiased,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Right,
    Left,
    Either,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
            SideArg::Either => Side::Either,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Substituted,
    Direct,
}

impl From<FormArg> for IntegralForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Substituted => IntegralForm::Substituted,
            FormArg::Direct => IntegralForm::Direct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphArg {
    Cycle,
    Complete,
}

#[derive(Debug, Args)]
pub struct BarrierArgs {
    /// Barrier angle: alpha = cos(phi), beta = i sin(phi). Default 0.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "alpha")]
    pub phi: Option<f64>,
    /// Tunneling amplitude in [0, 1]; beta = i sqrt(1 - alpha^2).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

impl BarrierArgs {
    fn params(&self) -> Result<BarrierParams, CliError> {
        let b = match (self.phi, self.alpha) {
            (Some(phi), _) => BarrierParams::from_phi(phi)?,
            (None, Some(alpha)) => BarrierParams::from_alpha(alpha)?,
            (None, None) => BarrierParams::none(),
        };
        Ok(b)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Table destination; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub steps: i64,
    #[command(flatten)]
    pub barrier: BarrierArgs,
    #[arg(long, value_enum, default_value_t = ShiftArg::Flipflop)]
    pub shift: ShiftArg,
    #[arg(long, value_enum, default_value_t = InitialArg::Left)]
    pub initial: InitialArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub steps: i64,
    #[command(flatten)]
    pub barrier: BarrierArgs,
    /// Quadrature nodes; defaults to max(1024, 16 * steps).
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormArg::Substituted)]
    pub form: FormArg,
    /// Also simulate the walk and report per-position differences.
    #[arg(long)]
    pub compare: bool,
    /// Largest tolerated probability difference with --compare.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PeaksArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub steps: i64,
    #[command(flatten)]
    pub barrier: BarrierArgs,
    #[arg(long, value_enum, default_value_t = ShiftArg::Flipflop)]
    pub shift: ShiftArg,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    pub side: SideArg,
    /// First time step included in the regression.
    #[arg(long, default_value_t = DEFAULT_T_MIN)]
    pub t_min: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EstimateAlphaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub slope: f64,
}

#[derive(Debug, Args)]
pub struct CtqwArgs {
    #[arg(long, value_enum, default_value_t = GraphArg::Cycle)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = 8)]
    pub vertices: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub time: f64,
    /// Vertex holding the initial amplitude.
    #[arg(long, default_value_t = 0)]
    pub start: usize,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub steps: i64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::Tolerance(_) => EXIT_TOLERANCE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) | CliError::Tolerance(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidPhi(_)
            | Error::InvalidAlpha(_)
            | Error::SingularParameterization(_)
            | Error::InvalidQuadrature(_)
            | Error::InsufficientData { .. }
            | Error::InvalidConfig(_)
            | Error::InvalidGraph(_) => CliError::Usage(msg),
            _ => CliError::Runtime(msg),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(format!("csv error: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn execute(
    cmd: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match cmd {
        Command::Simulate(a) => cmd_simulate(a, stdout, stderr),
        Command::Analytic(a) => cmd_analytic(a, stdout, stderr),
        Command::Peaks(a) => cmd_peaks(a, stdout, stderr),
        Command::EstimateAlpha(a) => cmd_estimate_alpha(a, stdout),
        Command::Ctqw(a) => cmd_ctqw(a, stdout),
        Command::Classical(a) => cmd_classical(a, stdout, stderr),
    }
}

fn non_negative_steps(steps: i64) -> Result<usize, CliError> {
    usize::try_from(steps)
        .map_err(|_| CliError::Usage(format!("--steps must be non-negative, got {steps}")))
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// A table column value.
#[derive(Debug, Clone, Copy)]
enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn text(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(x),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
        }
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn distribution(d: &Distribution) -> Self {
        Table {
            header: vec!["position", "probability"],
            rows: d
                .iter()
                .map(|(n, p)| vec![Cell::Int(n), Cell::Float(p)])
                .collect(),
        }
    }

    fn write_to(&self, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record(&self.header)?;
                for row in &self.rows {
                    wtr.write_record(row.iter().map(|c| c.text()))?;
                }
                wtr.flush()?;
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect::<serde_json::Map<_, _>>();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer(&mut *w, &records)
                    .map_err(|e| CliError::Runtime(e.to_string()))?;
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

/// Writes the table and its summary following the routing rule in the module docs.
fn emit(
    out: &OutputArgs,
    table: &Table,
    summary: Option<Value>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match &out.output {
        Some(path) => {
            let mut f = io::BufWriter::new(File::create(path)?);
            table.write_to(out.format, &mut f)?;
            f.flush()?;
            if let Some(s) = summary {
                writeln!(stdout, "{s}")?;
            }
        }
        None => {
            table.write_to(out.format, stdout)?;
            if let Some(s) = summary {
                writeln!(stderr, "{s}")?;
            }
        }
    }
    Ok(())
}

pub fn cmd_simulate(
    a: &SimulateArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let steps = non_negative_steps(a.steps)?;
    let barriers = a.barrier.params()?;
    let field = simulate(a.initial.into(), a.shift.into(), barriers, steps)?;
    if !field.is_unitary() {
        writeln!(
            stderr,
            "warning: moving shift with barriers is not unitary; probabilities do not sum to 1"
        )?;
    }
    let dist = field.probabilities();
    let summary = json!({ "steps": steps, "total": dist.total(), "unitary": field.is_unitary() });
    emit(
        &a.out,
        &Table::distribution(&dist),
        Some(summary),
        stdout,
        stderr,
    )
}

pub fn cmd_analytic(
    a: &AnalyticArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let steps = non_negative_steps(a.steps)?;
    let t = u32::try_from(steps)
        .map_err(|_| CliError::Usage(format!("--steps {steps} is too large")))?;
    let barriers = a.barrier.params()?;
    let quad = match a.nodes {
        Some(n) => QuadratureSpec::new(n)?,
        None => QuadratureSpec::default_for(steps),
    };
    let solver = ClosedFormSolver::new(t, barriers, quad, a.form.into())?;
    let closed = solver.distribution();

    if !a.compare {
        let summary = json!({ "total": closed.total(), "nodes": quad.len() });
        return emit(
            &a.out,
            &Table::distribution(&closed),
            Some(summary),
            stdout,
            stderr,
        );
    }

    let simulated = simulate(
        InitialState::LeftLocalized,
        ShiftKind::FlipFlop,
        barriers,
        steps,
    )?
    .probabilities();
    let rows: Vec<Vec<Cell>> = closed
        .iter()
        .map(|(n, p)| {
            let q = simulated.get(n);
            vec![
                Cell::Int(n),
                Cell::Float(p),
                Cell::Float(q),
                Cell::Float((p - q).abs()),
            ]
        })
        .collect();
    let max_diff = closed.max_abs_diff(&simulated);
    let table = Table {
        header: vec!["position", "probability", "simulated", "abs_diff"],
        rows,
    };
    let summary = json!({ "total": closed.total(), "nodes": quad.len(), "max_abs_diff": max_diff });
    emit(&a.out, &table, Some(summary), stdout, stderr)?;
    if max_diff.is_nan() || max_diff > a.tol {
        return Err(CliError::Tolerance(format!(
            "closed form and simulation differ by {max_diff:e}, above --tol {:e}",
            a.tol
        )));
    }
    Ok(())
}

pub fn cmd_peaks(
    a: &PeaksArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let steps = non_negative_steps(a.steps)?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let barriers = a.barrier.params()?;
    let trace = track_peaks(a.shift.into(), barriers, steps, a.side.into())?;
    let fit = trace.fit(a.t_min)?;
    // the left-moving peak has negative slope but the same speed
    let estimate = estimate_alpha(fit.slope.abs())?;
    writeln!(
        stderr,
        "fit over t in [{}, {}] ({} points), residual rms {:.4}",
        fit.t_min, fit.t_max, fit.points, fit.residual_rms
    )?;
    if let Some(path) = &a.out.output {
        let table = Table {
            header: vec!["t", "n_peak", "p_peak"],
            rows: trace
                .entries
                .iter()
                .map(|e| {
                    vec![
                        Cell::Int(e.t as i64),
                        Cell::Int(e.n_peak),
                        Cell::Float(e.p_peak),
                    ]
                })
                .collect(),
        };
        let mut f = io::BufWriter::new(File::create(path)?);
        table.write_to(a.out.format, &mut f)?;
        f.flush()?;
    }
    let summary = json!({ "slope": fit.slope, "alpha": estimate.alpha(), "phi": estimate.phi() });
    writeln!(stdout, "{summary}")?;
    Ok(())
}

pub fn cmd_estimate_alpha(a: &EstimateAlphaArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let estimate = match estimate_alpha(a.slope) {
        Err(e @ Error::SlopeOutOfRange { .. }) => return Err(CliError::Usage(e.to_string())),
        r => r?,
    };
    let summary = json!({ "alpha": estimate.alpha(), "phi": estimate.phi() });
    writeln!(stdout, "{summary}")?;
    Ok(())
}

pub fn cmd_ctqw(a: &CtqwArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let graph = match a.graph {
        GraphArg::Cycle => Graph::cycle(a.vertices)?,
        GraphArg::Complete => Graph::complete(a.vertices)?,
    };
    if a.start >= a.vertices {
        return Err(CliError::Usage(format!(
            "--start {} is not a vertex of a {}-vertex graph",
            a.start, a.vertices
        )));
    }
    if !a.time.is_finite() || a.time < 0.0 {
        return Err(CliError::Usage(format!(
            "--time must be non-negative, got {}",
            a.time
        )));
    }
    let cfg = CtqwConfig::new(graph, a.gamma, a.eps)?;
    let psi0 = CtqwState::localized(a.vertices, a.start);
    let check = rescaling_check(&cfg, &psi0, a.time)?;
    writeln!(
        stdout,
        "{}",
        json!({ "distance": check.distance, "phase_check": check.phase_error })
    )?;
    Ok(())
}

pub fn cmd_classical(
    a: &ClassicalArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let steps = non_negative_steps(a.steps)?;
    let dist = classical_distribution(steps);
    let summary = json!({ "spread": dist.spread()? });
    emit(
        &a.out,
        &Table::distribution(&dist),
        Some(summary),
        stdout,
        stderr,
    )
}
