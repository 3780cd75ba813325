//! The `kacgeron` command line.
//!
//! Every command is a pure function of its arguments and writes one table
//! (CSV) or one document (JSON) to `--out` or standard output. Exit status is
//! 0 on success, 2 for invalid arguments and 3 for numerical failures.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::expectation::{
    a0_alpha, asymptotic_estimate, expected_real_zeros, fit_expansion, leading_report, wilkins_a0,
};
use crate::geron::GeronimusParams;
use crate::intensity::{
    b_limit, b_ratio, h_limit, h_n, uniform_grid, verify_h_error_envelope, IntensityMethod,
    IntensityProfile,
};
use crate::montecarlo::{run_simulation_with, RootMethod, RootPolicy};
use crate::quadrature::QuadratureConfig;

/// Version of the JSON documents written by every command.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "kacgeron", version, about = "Real zeros of random Kac-Geronimus polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, env = "KACGERON_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate h_{n+1}, its limit h and the real-zero intensity on [-1, 1].
    Intensity(IntensityArgs),
    /// Expected number of real zeros by quadrature, with the asymptotic estimate.
    Expect(ExpectArgs),
    /// The constants A_0 and A_0^alpha.
    Constants(ConstantsArgs),
    /// Monte Carlo real-zero statistics.
    Simulate(SimulateArgs),
    /// Fit the parity-dependent coefficients of the expansion of E_n.
    Fit(FitArgs),
    /// Data for the b_4 / h_4 comparison plot at alpha = sqrt(3)/2.
    Figure1(Figure1Args),
    /// Error-envelope constants of h_{n+1} - h along a ladder of degrees.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file, written atomically; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    #[arg(long, default_value_t = 1e-11)]
    pub abs_tol: f64,

    #[arg(long, default_value_t = 1e-11)]
    pub rel_tol: f64,

    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
}

impl ToleranceArgs {
    fn config(&self) -> Result<QuadratureConfig, CliError> {
        let cfg = QuadratureConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
            endpoint_substitution: true,
        };
        cfg.validate().map_err(CliError::from)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntensityMethodArg {
    ClosedForm,
    CdRatio,
    Kernel,
}

#[derive(Debug, Clone, Args)]
pub struct IntensityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub n: usize,
    /// Number of equally spaced abscissae on [-1, 1], endpoints included.
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = IntensityMethodArg::ClosedForm)]
    pub method: IntensityMethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExpectArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Degrees: comma-separated integers or inclusive ranges `a..b` or `a..b:step`.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_n_spec)]
    pub n: Vec<NSpec>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootMethodArg {
    Scan,
    Companion,
    Sturm,
}

impl From<RootMethodArg> for RootMethod {
    fn from(m: RootMethodArg) -> Self {
        match m {
            RootMethodArg::Scan => RootMethod::Scan,
            RootMethodArg::Companion => RootMethod::Companion,
            RootMethodArg::Sturm => RootMethod::Sturm,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = RootMethodArg::Scan)]
    pub method: RootMethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Degrees used in the fit, as for `expect`.
    #[arg(long, value_delimiter = ',', value_parser = parse_n_spec, default_value = "1024..16384:8,1025..16384:8")]
    pub n: Vec<NSpec>,
    /// Number of inverse powers fitted per parity.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', value_parser = parse_n_spec, default_value = "100,200,400,800")]
    pub n: Vec<NSpec>,
    /// Sample points per envelope evaluation.
    #[arg(long, default_value_t = 4001)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// One item of a degree list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSpec(pub Vec<usize>);

/// Parses `7`, `2..9` (inclusive) or `2..9:3`.
pub fn parse_n_spec(s: &str) -> Result<NSpec, String> {
    let s = s.trim();
    let int = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("invalid degree {t:?}: {e}"));
    match s.split_once("..") {
        None => Ok(NSpec(vec![int(s)?])),
        Some((lo, rest)) => {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (int(hi)?, int(step)?),
                None => (int(rest)?, 1),
            };
            let lo = int(lo)?;
            if step == 0 {
                return Err("range step must be positive".into());
            }
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok(NSpec((lo..=hi).step_by(step).collect()))
        }
    }
}

fn flatten(specs: &[NSpec]) -> Result<Vec<usize>, CliError> {
    let n: Vec<usize> = specs.iter().flat_map(|s| s.0.iter().copied()).collect();
    if n.is_empty() {
        return Err(CliError::Config("the degree list is empty".into()));
    }
    Ok(n)
}

/// Failure of a command, with its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Numerical(Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlpha(_) | Error::InvalidInput(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

/// A rendered command result: a table for CSV and a document for JSON.
pub struct Report {
    pub command: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub json: Value,
}

/// A CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl Report {
    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::render))?;
                }
                w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
            }
            Format::Json => {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": self.command,
                    "data": self.json,
                });
                let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.into()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

fn params(alpha: f64) -> Result<GeronimusParams, CliError> {
    GeronimusParams::new(alpha).map_err(CliError::from)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn check_grid(grid: usize) -> Result<(), CliError> {
    if grid < 2 {
        return Err(CliError::Config(format!("--grid must be at least 2, got {grid}")));
    }
    Ok(())
}

pub fn cmd_intensity(args: &IntensityArgs) -> Result<Report, CliError> {
    let p = params(args.alpha)?;
    check_grid(args.grid)?;
    let method = match args.method {
        IntensityMethodArg::ClosedForm => IntensityMethod::ClosedForm,
        IntensityMethodArg::CdRatio => IntensityMethod::CdRatio,
        IntensityMethodArg::Kernel => IntensityMethod::Kernel,
    };
    let profile = IntensityProfile::compute(&p, args.n, uniform_grid(-1.0, 1.0, args.grid), method)?;
    let rows = (0..profile.grid.len())
        .map(|i| {
            vec![
                profile.grid[i].into(),
                profile.h_values[i].into(),
                profile.h_limit[i].into(),
                profile.density[i].into(),
            ]
        })
        .collect();
    Ok(Report {
        command: "intensity",
        header: vec!["x", "h_n_plus_1", "h_limit", "density"],
        rows,
        json: to_json(&profile),
    })
}

#[derive(Serialize)]
struct ExpectRow {
    n: usize,
    expected: Option<f64>,
    asymptotic: f64,
    difference: Option<f64>,
    status: String,
}

pub fn cmd_expect(args: &ExpectArgs) -> Result<Report, CliError> {
    let p = params(args.alpha)?;
    let cfg = args.tolerances.config()?;
    let ns = flatten(&args.n)?;
    let lead = leading_report(&p, &cfg)?;
    let values: Vec<_> = ns.par_iter().map(|&n| expected_real_zeros(&p, n, &cfg)).collect();
    let mut rows = Vec::new();
    let mut doc = Vec::new();
    for (&n, v) in ns.iter().zip(values) {
        let asym = asymptotic_estimate(&p, n, &lead, 1)?;
        let (e, status) = match v {
            Ok(e) => (Some(e), "ok".to_string()),
            Err(err) => (None, err.to_string()),
        };
        let diff = e.map(|e| e - asym);
        rows.push(vec![
            n.into(),
            e.unwrap_or(f64::NAN).into(),
            asym.into(),
            diff.unwrap_or(f64::NAN).into(),
            Cell::Text(status.clone()),
        ]);
        doc.push(ExpectRow {
            n,
            expected: e,
            asymptotic: asym,
            difference: diff,
            status,
        });
    }
    Ok(Report {
        command: "expect",
        header: vec!["n", "expected", "asymptotic", "difference", "status"],
        rows,
        json: json!({ "alpha": p.alpha(), "rows": to_json(&doc) }),
    })
}

pub fn cmd_constants(args: &ConstantsArgs) -> Result<Report, CliError> {
    let p = params(args.alpha)?;
    let cfg = args.tolerances.config()?;
    let a0 = wilkins_a0(&cfg)?;
    let lead = leading_report(&p, &cfg)?;
    let a0a = if p.is_kac() { None } else { Some(a0_alpha(&p, a0)?) };
    Ok(Report {
        command: "constants",
        header: vec!["alpha", "a0", "a0_alpha", "lead"],
        rows: vec![vec![
            p.alpha().into(),
            a0.into(),
            a0a.unwrap_or(f64::NAN).into(),
            lead.lead.into(),
        ]],
        json: json!({
            "alpha": p.alpha(),
            "a0": a0,
            "a0_alpha": a0a,
            "lead": lead.lead,
        }),
    })
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    let p = params(args.alpha)?;
    if args.trials < 100 {
        return Err(CliError::Config(format!("--trials must be at least 100, got {}", args.trials)));
    }
    let policy = RootPolicy::with_method(args.method.into());
    let r = run_simulation_with(&p, args.n, args.trials, args.seed, &policy)?;
    let rows = vec![vec![
        r.alpha.into(),
        r.n.into(),
        r.trials.into(),
        r.flagged.into(),
        r.ambiguous.into(),
        r.mean_real_zeros.into(),
        r.std_error.into(),
        r.ci99.0.into(),
        r.ci99.1.into(),
        Cell::Int(r.seed),
        Cell::Text(args.method.to_possible_value().unwrap().get_name().to_string()),
    ]];
    Ok(Report {
        command: "simulate",
        header: vec![
            "alpha",
            "n",
            "trials",
            "flagged",
            "ambiguous",
            "mean_real_zeros",
            "std_error",
            "ci99_low",
            "ci99_high",
            "seed",
            "root_method",
        ],
        rows,
        json: to_json(&r),
    })
}

pub fn cmd_fit(args: &FitArgs) -> Result<Report, CliError> {
    let p = params(args.alpha)?;
    let cfg = args.tolerances.config()?;
    let mut ns = flatten(&args.n)?;
    ns.sort_unstable();
    ns.dedup();
    if args.depth == 0 {
        return Err(CliError::Config("--depth must be at least 1".into()));
    }
    let r = fit_expansion(&p, &ns, args.depth, &cfg)?;
    let mut rows = vec![vec![
        0usize.into(),
        r.a0_alpha.into(),
        0.0.into(),
        r.a0_alpha.into(),
        0.0.into(),
    ]];
    for i in 0..args.depth {
        rows.push(vec![
            (i + 1).into(),
            r.fitted_even[i].into(),
            r.stderr_even[i].into(),
            r.fitted_odd[i].into(),
            r.stderr_odd[i].into(),
        ]);
    }
    Ok(Report {
        command: "fit",
        header: vec!["p", "even", "even_std_error", "odd", "odd_std_error"],
        rows,
        json: to_json(&r),
    })
}

pub fn cmd_figure1(args: &Figure1Args) -> Result<Report, CliError> {
    check_grid(args.grid)?;
    let p = params(3f64.sqrt() / 2.0)?;
    let n = 3;
    let mut rows = Vec::new();
    let mut doc = Vec::new();
    for x in uniform_grid(-1.0, 1.0, args.grid) {
        let z = num_complex::Complex64::new(x, 0.0);
        let b4 = b_ratio(&p, n, z)?.re;
        let b = b_limit(&p, z)?.re;
        let h4 = h_n(&p, n, x);
        let h = h_limit(&p, x);
        rows.push(vec![x.into(), b4.into(), b.into(), h4.into(), h.into()]);
        doc.push(json!({ "x": x, "b_4": b4, "b": b, "h_4": h4, "h": h }));
    }
    Ok(Report {
        command: "figure1",
        header: vec!["x", "b_4", "b", "h_4", "h"],
        rows,
        json: json!({ "alpha": p.alpha(), "n": n, "rows": doc }),
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Report, CliError> {
    let p = params(args.alpha)?;
    check_grid(args.grid)?;
    let ns = flatten(&args.n)?;
    let consts = ns
        .iter()
        .map(|&n| verify_h_error_envelope(&p, n, args.grid))
        .collect::<Result<Vec<f64>, Error>>()?;
    let first = consts[0];
    let mut rows = Vec::new();
    let mut doc = Vec::new();
    for (&n, &c) in ns.iter().zip(&consts) {
        let ratio = c / first;
        rows.push(vec![n.into(), c.into(), ratio.into()]);
        doc.push(json!({ "n": n, "constant": c, "ratio": ratio }));
    }
    Ok(Report {
        command: "verify",
        header: vec!["n", "constant", "ratio"],
        rows,
        json: json!({ "alpha": p.alpha(), "grid": args.grid, "rows": doc }),
    })
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Intensity(a) => &a.output,
            Command::Expect(a) => &a.output,
            Command::Constants(a) => &a.output,
            Command::Simulate(a) => &a.output,
            Command::Fit(a) => &a.output,
            Command::Figure1(a) => &a.output,
            Command::Verify(a) => &a.output,
        }
    }

    pub fn report(&self) -> Result<Report, CliError> {
        match self {
            Command::Intensity(a) => cmd_intensity(a),
            Command::Expect(a) => cmd_expect(a),
            Command::Constants(a) => cmd_constants(a),
            Command::Simulate(a) => cmd_simulate(a),
            Command::Fit(a) => cmd_fit(a),
            Command::Figure1(a) => cmd_figure1(a),
            Command::Verify(a) => cmd_verify(a),
        }
    }
}

/// Runs a parsed command line, writing its output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Config("thread count must be positive".into()));
        }
        // Fails only if a pool already exists, in which case it is reused.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let report = cli.command.report()?;
    let out = cli.command.output();
    let bytes = report.render(out.format)?;
    match &out.out {
        Some(path) => write_atomically(path, &bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
