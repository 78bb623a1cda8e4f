//! Command-line front end. The `mebkit` binary is a thin wrapper over [`run`].
//!
//! Exit codes: 0 success, 1 verification or bound failure, 2 bad parameters
//! or unreadable input.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::distributions::{alpha_constraint_grid, scan_feasibility, ScanGrid};
use crate::error::{MebError, MebResult};
use crate::io::{fmt_num, write_csv, CsvRecord};
use crate::meb::{build_d2, build_d3, verify_meb, MebReport, MebSet, PairChoice, QOrder};
use crate::sweep::{sweep_entropy, sweep_prob, sweep_purity, StateFamily};
use crate::uncertainty::LogBase;
use crate::witness::{
    isotropic_state, isotropic_witness_value, mu_grid, threshold_curve, witness_operator, RotationSet,
    WitnessVariant,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mebkit", version, about = "Mutually equi-biased bases toolkit")]
pub struct Cli {
    /// Numerical tolerance for verification and bound checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Base seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a set of equi-biased bases and write it as JSON.
    Construct(ConstructArgs),
    /// Check a set JSON against the equi-biasedness condition.
    Verify {
        input: PathBuf,
    },
    /// Emit feasibility or phase-constraint grids.
    Scan(ScanArgs),
    /// Random-state sweep of the uncertainty bounds on a set.
    Bounds(BoundsArgs),
    /// Witness thresholds and evaluations.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub d: usize,
    /// Bias parameter for d=2.
    #[arg(long, conflicts_with = "mu")]
    pub delta: Option<f64>,
    /// Coincidence index for d=3.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Placement of (q+, q0, q-), e.g. "+0-".
    #[arg(long, default_value = "+0-", allow_hyphen_values = true)]
    pub order: String,
    /// Two distinct phase cases from {a, b, c}.
    #[arg(long, default_value = "ab")]
    pub pairs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    Feasibility,
    #[value(name = "alpha_contour", alias = "alpha-contour")]
    AlphaContour,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(value_enum)]
    pub kind: ScanKind,
    /// Grid points per axis (400 for feasibility, 200 for the contour).
    #[arg(long)]
    pub res: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Prob,
    Entropy,
    Purity,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = BoundKind::Prob)]
    pub kind: BoundKind,
    /// Sample pure states instead of Hilbert–Schmidt mixed states.
    #[arg(long)]
    pub pure: bool,
    /// Natural logarithms for entropies (bits otherwise).
    #[arg(long)]
    pub nats: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessAction {
    #[value(name = "threshold_curve", alias = "threshold-curve")]
    ThresholdCurve,
    Evaluate,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(value_enum)]
    pub action: WitnessAction,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long = "L", visible_alias = "l", default_value_t = 4)]
    pub l: usize,
    /// Number of μ points on [1/3, 1/2].
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Isotropic-state weight ω to evaluate.
    #[arg(long)]
    pub isotropic: Option<f64>,
    /// Use the γ = 1 mutually unbiased witness.
    #[arg(long)]
    pub mub: bool,
    #[arg(long, conflicts_with = "delta")]
    pub mu: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.exit_code() == 0 {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

struct Output<'a> {
    file: Option<BufWriter<File>>,
    stdout: &'a mut dyn Write,
}

impl<'a> Output<'a> {
    fn open(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> MebResult<Self> {
        let file = path.as_ref().map(File::create).transpose()?.map(BufWriter::new);
        Ok(Self { file, stdout })
    }

    fn writer(&mut self) -> &mut dyn Write {
        match self.file.as_mut() {
            Some(f) => f,
            None => &mut *self.stdout,
        }
    }

    fn to_file(&self) -> bool {
        self.file.is_some()
    }

    fn finish(mut self) -> MebResult<()> {
        if let Some(f) = self.file.as_mut() {
            f.flush()?;
        }
        Ok(())
    }
}

fn emit<R: CsvRecord + Serialize>(out: &mut dyn Write, rows: &[R], format: Format) -> MebResult<()> {
    match format {
        Format::Csv => write_csv(out, rows),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> MebResult<i32> {
    match &cli.command {
        Command::Construct(a) => construct(cli, a, stdout, stderr),
        Command::Verify { input } => verify(cli, input, stdout),
        Command::Scan(a) => scan(cli, a, stdout),
        Command::Bounds(a) => bounds(cli, a, stdout, stderr),
        Command::Witness(a) => witness(cli, a, stdout),
    }
}

fn missing(name: &str) -> MebError {
    MebError::Malformed(format!("--{name} is required"))
}

fn build_set(d: usize, delta: Option<f64>, mu: Option<f64>, order: &str, pairs: &str) -> MebResult<MebSet> {
    match d {
        2 => build_d2(delta.ok_or_else(|| missing("delta"))?),
        3 => build_d3(mu.ok_or_else(|| missing("mu"))?, order.parse::<QOrder>()?, pairs.parse::<PairChoice>()?),
        _ => Err(MebError::UnsupportedDimension(d, "construct (d must be 2 or 3)")),
    }
}

fn summary(report: &MebReport) -> String {
    format!(
        "verify: {} max_residual={} same_basis_residual={} pairs={}",
        if report.pass { "pass" } else { "FAIL" },
        fmt_num(report.max_residual),
        fmt_num(report.same_basis_residual),
        report.pairs.len()
    )
}

/// JSON goes to `--out` or stdout; the verification summary goes to stdout
/// when `--out` is given and to stderr otherwise.
fn construct(cli: &Cli, a: &ConstructArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> MebResult<i32> {
    let set = build_set(a.d, a.delta, a.mu, &a.order, &a.pairs)?;
    let report = verify_meb(&set, cli.tol)?;
    let mut out = Output::open(&cli.out, stdout)?;
    writeln!(out.writer(), "{}", set.to_json())?;
    if out.to_file() {
        writeln!(out.stdout, "{}", summary(&report))?;
    } else {
        writeln!(stderr, "{}", summary(&report))?;
    }
    out.finish()?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

struct PairRow<'a>(&'a crate::meb::PairReport);

impl Serialize for PairRow<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl CsvRecord for PairRow<'_> {
    fn header() -> &'static str {
        "alpha,beta,sigma,residual,shift"
    }

    fn fields(&self) -> Vec<String> {
        let p = self.0;
        vec![
            p.alpha.to_string(),
            p.beta.to_string(),
            p.sigma.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
            fmt_num(p.residual),
            p.shift.map(|c| c.to_string()).unwrap_or_default(),
        ]
    }
}

fn read_set(path: &PathBuf) -> MebResult<MebSet> {
    MebSet::from_json(&std::fs::read_to_string(path)?)
}

fn verify(cli: &Cli, input: &PathBuf, stdout: &mut dyn Write) -> MebResult<i32> {
    let set = read_set(input)?;
    let report = verify_meb(&set, cli.tol)?;
    let mut out = Output::open(&cli.out, stdout)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => writeln!(out.writer(), "{}", report.to_json())?,
        Format::Csv => {
            let rows: Vec<PairRow> = report.pairs.iter().map(PairRow).collect();
            write_csv(out.writer(), &rows)?;
        }
    }
    out.finish()?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn scan(cli: &Cli, a: &ScanArgs, stdout: &mut dyn Write) -> MebResult<i32> {
    let format = cli.format.unwrap_or(Format::Csv);
    let mut out = Output::open(&cli.out, stdout)?;
    match a.kind {
        ScanKind::Feasibility => {
            let grid = scan_feasibility(&ScanGrid::full(a.res.unwrap_or(400)))?;
            emit(out.writer(), &grid.cells, format)?;
        }
        ScanKind::AlphaContour => {
            let grid = alpha_constraint_grid(a.mu, a.res.unwrap_or(200))?;
            emit(out.writer(), &grid.points, format)?;
        }
    }
    out.finish()?;
    Ok(EXIT_OK)
}

fn bounds(cli: &Cli, a: &BoundsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> MebResult<i32> {
    let set = read_set(&a.input)?;
    let report = verify_meb(&set, cli.tol)?;
    if !report.pass {
        writeln!(stderr, "set failed verification: {}", summary(&report))?;
        return Ok(EXIT_FAIL);
    }
    let family = if a.pure { StateFamily::Pure } else { StateFamily::HilbertSchmidt };
    let base = if a.nats { LogBase::Nats } else { LogBase::Bits };
    let format = cli.format.unwrap_or(Format::Csv);
    let mut out = Output::open(&cli.out, stdout)?;
    let worst = match a.kind {
        BoundKind::Prob => {
            let rows = sweep_prob(&set, a.samples, cli.seed, family)?;
            emit(out.writer(), &rows, format)?;
            rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
        }
        BoundKind::Entropy => {
            let rows = sweep_entropy(&set, a.samples, cli.seed, family, base)?;
            emit(out.writer(), &rows, format)?;
            rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
        }
        BoundKind::Purity => {
            let rows = sweep_purity(&set, a.samples, cli.seed, family)?;
            emit(out.writer(), &rows, format)?;
            rows.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min)
        }
    };
    out.finish()?;
    Ok(if worst < -cli.tol { EXIT_FAIL } else { EXIT_OK })
}

#[derive(Debug, Serialize)]
struct Evaluation {
    d: usize,
    #[serde(rename = "L")]
    l: usize,
    variant: WitnessVariant,
    gamma: f64,
    omega: f64,
    value: f64,
    closed_form: f64,
    threshold: f64,
    detected: bool,
}

impl CsvRecord for Evaluation {
    fn header() -> &'static str {
        "d,L,variant,gamma,omega,value,closed_form,threshold,detected"
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.l.to_string(),
            format!("{:?}", self.variant).to_lowercase(),
            fmt_num(self.gamma),
            fmt_num(self.omega),
            fmt_num(self.value),
            fmt_num(self.closed_form),
            fmt_num(self.threshold),
            crate::io::fmt_bool(self.detected).into(),
        ]
    }
}

fn witness(cli: &Cli, a: &WitnessArgs, stdout: &mut dyn Write) -> MebResult<i32> {
    let format = cli.format.unwrap_or(Format::Csv);
    let mut out = Output::open(&cli.out, stdout)?;
    match a.action {
        WitnessAction::ThresholdCurve => {
            let rows = threshold_curve(a.d, a.l, &mu_grid(a.points))?;
            emit(out.writer(), &rows, format)?;
        }
        WitnessAction::Evaluate => {
            let omega = a.isotropic.ok_or_else(|| missing("isotropic"))?;
            let (variant, delta, mu) = if a.mub {
                (WitnessVariant::Mub, Some(0.0), Some(1.0 / 3.0))
            } else {
                (WitnessVariant::Meb, a.delta, a.mu)
            };
            let full = build_set(a.d, delta, mu, "+0-", "ab")?;
            if a.l < 1 || a.l > full.len() {
                return Err(MebError::OutOfRange {
                    name: "L",
                    range: "[1, number of constructed bases]",
                    value: a.l as f64,
                });
            }
            let set = full.truncated(a.l);
            let w = witness_operator(&set, &RotationSet::identity(a.d, a.l), variant)?;
            let value = w.expectation(&isotropic_state(a.d, omega)?)?;
            let row = Evaluation {
                d: a.d,
                l: a.l,
                variant,
                gamma: w.gamma,
                omega,
                value,
                closed_form: isotropic_witness_value(a.d, a.l, w.gamma, omega),
                threshold: 1.0 / (a.l as f64 * w.gamma),
                detected: value < 0.0,
            };
            emit(out.writer(), &[row], format)?;
        }
    }
    out.finish()?;
    Ok(EXIT_OK)
}
