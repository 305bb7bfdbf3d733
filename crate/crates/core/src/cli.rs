//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 data error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::descriptors::FunctionDescriptor;
use crate::error::LiLabError;
use crate::ingest::{cache_path, load_zero_file, RemoteClient, ZeroSource};
use crate::li::{
    asymptotic_residual, li_arithmetic, li_decomposition_with, li_general_sum, li_zero_sum,
    LiEvaluation, Route,
};
use crate::stieltjes::{bound_scan, logderiv_coefficients, LaurentData};
use crate::volchkov::{i3, volchkov_integral, VolchkovConfig};
use crate::zeros::{OffLineZero, OffLineZeroSet, ZeroTable};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

const PRESETS: [(&str, &str); 3] = [
    ("zeta", include_str!("../data/descriptors/zeta.json")),
    (
        "dirichlet_mod4",
        include_str!("../data/descriptors/dirichlet_mod4.json"),
    ),
    ("delta", include_str!("../data/descriptors/delta.json")),
];

#[derive(Debug, Parser)]
#[command(
    name = "li-lab",
    version,
    about = "Generalized Li coefficients and related integrals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Re λ_F(n) by the selected routes.
    Compute(ComputeArgs),
    /// Compare routes against their error budgets; exit 1 on any violation.
    Verify(VerifyArgs),
    /// Both sides of the Volchkov-type identity and the γ_F(0) check.
    Volchkov(VolchkovArgs),
    /// Normalized sequences whose boundedness is equivalent to GRH.
    Scan(ScanArgs),
    /// Download a zero list into the cache.
    Fetch(FetchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Preset name (zeta, dirichlet_mod4, delta) or path to a descriptor JSON file.
    #[arg(long, default_value = "zeta")]
    pub descriptor: String,
    /// Local zero file.
    #[arg(long, conflicts_with = "zeros_label")]
    pub zeros: Option<PathBuf>,
    /// Remote label to load zeros for (cached).
    #[arg(long, requires = "height")]
    pub zeros_label: Option<String>,
    /// Height requested for a remote label.
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long, default_value = ".li-lab-cache")]
    pub cache_dir: PathBuf,
    /// Laurent data JSON, or `zeta` for the bundled data. Defaults to the
    /// bundled data when the descriptor is the zeta preset.
    #[arg(long)]
    pub laurent: Option<String>,
    /// Off-line zero set for the general_sum route: lines of `sigma gamma [multiplicity]`.
    #[arg(long)]
    pub offline: Option<PathBuf>,
    /// Assumed bound on |S_F| above the table height.
    #[arg(long, default_value_t = 4.0)]
    pub s_cap: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `a..b` (inclusive), comma-separated values, or a mix such as `1..5,10`.
    #[arg(long, value_parser = parse_n_spec)]
    pub n: NSpec,
    #[arg(long, value_delimiter = ',', default_value = "zero_sum")]
    pub routes: Vec<Route>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_parser = parse_n_spec, default_value = "1..20")]
    pub n: NSpec,
    /// Slack added to the zero_sum/arithmetic budget.
    #[arg(long, default_value_t = 1e-4)]
    pub tol_arithmetic: f64,
    /// Slack added to the zero_sum/decomposition budget.
    #[arg(long, default_value_t = 1e-3)]
    pub tol_decomposition: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VolchkovArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    /// `I₃(n)/n · √n / log(n+1)`.
    Integral,
    /// `(λ(n) - model)/(√n log n)` from the zero-sum route.
    Residual,
    /// `|S_NA(n) - m| / (√n log n)` from the Laurent data.
    Nonarchimedean,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_parser = parse_n_spec)]
    pub n: NSpec,
    #[arg(long, value_enum, default_value_t = ScanKind::Integral)]
    pub kind: ScanKind,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long)]
    pub label: String,
    #[arg(long)]
    pub height: f64,
    #[arg(long, default_value = ".li-lab-cache")]
    pub cache_dir: PathBuf,
}

/// A nonempty list of positive `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSpec(pub Vec<u32>);

pub fn parse_n_spec(text: &str) -> Result<NSpec, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let parse = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{s}` is not a nonnegative integer"))
        };
        let (lo, hi) = match part.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(part)?;
                (v, v)
            }
        };
        if lo == 0 {
            return Err("n must be >= 1".into());
        }
        if hi < lo {
            return Err(format!("empty range `{part}`"));
        }
        out.extend(lo..=hi);
    }
    if out.is_empty() {
        return Err("no values of n given".into());
    }
    Ok(NSpec(out))
}

/// Resolved run parameters shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub descriptor: String,
    pub zeros_source: Option<ZeroSource>,
    pub cache_dir: PathBuf,
    pub laurent: Option<String>,
    pub offline: Option<PathBuf>,
    pub n_values: Vec<u32>,
    pub routes: Vec<Route>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub s_cap: f64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(LiLabError),
}

impl From<LiLabError> for CliError {
    fn from(e: LiLabError) -> Self {
        CliError::Data(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    fn from_parts(input: &InputArgs, output: &OutputArgs, n_values: Vec<u32>) -> CliResult<Self> {
        let zeros_source = match (&input.zeros, &input.zeros_label) {
            (Some(path), _) => Some(ZeroSource::local(path)),
            (None, Some(label)) => {
                let height = input
                    .height
                    .ok_or_else(|| CliError::Usage("--height is required".into()))?;
                Some(
                    ZeroSource::remote(label, height)
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                )
            }
            (None, None) => None,
        };
        if !(input.s_cap >= 0.0) {
            return Err(CliError::Usage("--s-cap must be >= 0".into()));
        }
        Ok(Self {
            descriptor: input.descriptor.clone(),
            zeros_source,
            cache_dir: input.cache_dir.clone(),
            laurent: input.laurent.clone(),
            offline: input.offline.clone(),
            n_values,
            routes: Vec::new(),
            output_format: output.format,
            output_path: output.output.clone(),
            tolerance_overrides: BTreeMap::new(),
            s_cap: input.s_cap,
        })
    }

    fn volchkov_config(&self) -> VolchkovConfig {
        VolchkovConfig {
            s_cap: self.s_cap,
            ..VolchkovConfig::default()
        }
    }

    fn load_descriptor(&self) -> CliResult<FunctionDescriptor> {
        if let Some((_, text)) = PRESETS.iter().find(|(name, _)| *name == self.descriptor) {
            return Ok(FunctionDescriptor::from_json_str(text)?);
        }
        let path = Path::new(&self.descriptor);
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "descriptor `{}` is neither a preset nor an existing file",
                self.descriptor
            )));
        }
        Ok(FunctionDescriptor::from_json_file(path)?)
    }

    fn load_zeros(&self) -> CliResult<ZeroTable> {
        match &self.zeros_source {
            None => Err(CliError::Usage(
                "this route needs a zero table (--zeros or --zeros-label)".into(),
            )),
            Some(ZeroSource::LocalFile { path }) => Ok(load_zero_file(path)?),
            Some(source) => Ok(RemoteClient::from_env().load(source, &self.cache_dir)?),
        }
    }

    fn load_laurent(&self) -> CliResult<LaurentData> {
        match self.laurent.as_deref() {
            Some("zeta") => Ok(LaurentData::zeta()),
            Some(path) => Ok(LaurentData::from_json_file(path)?),
            None if self.descriptor == "zeta" => Ok(LaurentData::zeta()),
            None => Err(CliError::Usage(
                "the arithmetic route needs --laurent".into(),
            )),
        }
    }

    fn load_offline(&self) -> CliResult<OffLineZeroSet> {
        let path = self
            .offline
            .as_ref()
            .ok_or_else(|| CliError::Usage("the general_sum route needs --offline".into()))?;
        Ok(parse_offline(&fs::read_to_string(path)?)?)
    }
}

/// Parse `sigma gamma [multiplicity]` lines; `#` starts a comment.
pub fn parse_offline(text: &str) -> crate::error::Result<OffLineZeroSet> {
    let mut zeros = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| LiLabError::Parse {
            line: idx + 1,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(bad("expected `sigma gamma [multiplicity]`"));
        }
        let sigma = fields[0].parse::<f64>().map_err(|_| bad("bad sigma"))?;
        let gamma = fields[1].parse::<f64>().map_err(|_| bad("bad gamma"))?;
        let multiplicity = match fields.get(2) {
            Some(m) => m.parse::<u32>().map_err(|_| bad("bad multiplicity"))?,
            None => 1,
        };
        zeros.push(OffLineZero {
            sigma,
            gamma,
            multiplicity,
        });
    }
    OffLineZeroSet::new(zeros)
}

#[derive(Debug, Clone, Serialize)]
pub struct ComputeRow {
    pub n: u32,
    pub route: Route,
    pub value: f64,
    pub tail_bound: f64,
    pub truncation_height: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub n: u32,
    pub route: Route,
    pub reference: Route,
    pub value: f64,
    pub reference_value: f64,
    pub delta: f64,
    pub budget: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantityRow {
    pub quantity: &'static str,
    pub value: f64,
    pub tail_bound: f64,
    pub truncation_height: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanOutputRow {
    pub n: u32,
    pub value: f64,
    pub normalized: f64,
    pub tail_bound: f64,
    pub truncation_height: Option<f64>,
    pub wall_ms: f64,
}

fn write_rows<T: Serialize>(config: &RunConfig, rows: &[T]) -> CliResult<()> {
    let mut sink: Box<dyn Write> = match &config.output_path {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match config.output_format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for row in rows {
                w.serialize(row)
                    .map_err(|e| CliError::Data(LiLabError::Io(io::Error::other(e))))?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, rows).map_err(|e| CliError::Data(e.into()))?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

struct Inputs {
    descriptor: FunctionDescriptor,
    zeros: Option<ZeroTable>,
    laurent: Option<LaurentData>,
    offline: Option<OffLineZeroSet>,
}

fn load_inputs(config: &RunConfig, routes: &[Route]) -> CliResult<Inputs> {
    let descriptor = config.load_descriptor()?;
    let needs = |r: Route| routes.contains(&r);
    let zeros = if needs(Route::ZeroSum) || needs(Route::Decomposition) {
        Some(config.load_zeros()?)
    } else {
        None
    };
    let laurent = if needs(Route::Arithmetic) {
        Some(config.load_laurent()?)
    } else {
        None
    };
    let offline = if needs(Route::GeneralSum) {
        Some(config.load_offline()?)
    } else {
        None
    };
    Ok(Inputs {
        descriptor,
        zeros,
        laurent,
        offline,
    })
}

fn evaluate(
    inputs: &Inputs,
    config: &RunConfig,
    route: Route,
    n: u32,
) -> crate::error::Result<LiEvaluation> {
    let d = &inputs.descriptor;
    match route {
        Route::ZeroSum => li_zero_sum(d, inputs.zeros.as_ref().expect("loaded"), n),
        Route::Decomposition => li_decomposition_with(
            d,
            inputs.zeros.as_ref().expect("loaded"),
            n,
            config.volchkov_config(),
        ),
        Route::Arithmetic => li_arithmetic(d, inputs.laurent.as_ref().expect("loaded"), n),
        Route::GeneralSum => Ok(LiEvaluation {
            n,
            route,
            value: li_general_sum(inputs.offline.as_ref().expect("loaded"), n)?,
            complex_value: None,
            truncation_height: None,
            tail_bound: 0.0,
        }),
    }
}

/// Evaluate every `(n, route)` pair, in parallel over `n`; output order
/// follows the input order.
fn evaluate_all(
    inputs: &Inputs,
    config: &RunConfig,
    routes: &[Route],
) -> crate::error::Result<Vec<Vec<(LiEvaluation, f64)>>> {
    config
        .n_values
        .par_iter()
        .map(|&n| {
            routes
                .iter()
                .map(|&r| {
                    let (e, ms) = timed(|| evaluate(inputs, config, r, n));
                    e.map(|e| (e, ms))
                })
                .collect()
        })
        .collect()
}

fn run_compute(config: &RunConfig) -> CliResult<i32> {
    let inputs = load_inputs(config, &config.routes)?;
    let rows: Vec<ComputeRow> = evaluate_all(&inputs, config, &config.routes)?
        .into_iter()
        .flatten()
        .map(|(e, wall_ms)| ComputeRow {
            n: e.n,
            route: e.route,
            value: e.value,
            tail_bound: e.tail_bound,
            truncation_height: e.truncation_height,
            wall_ms,
        })
        .collect();
    write_rows(config, &rows)?;
    Ok(EXIT_SUCCESS)
}

fn run_verify(config: &RunConfig) -> CliResult<i32> {
    let mut routes = vec![Route::ZeroSum, Route::Decomposition];
    let have_laurent = config.laurent.is_some() || config.descriptor == "zeta";
    if have_laurent {
        routes.push(Route::Arithmetic);
    }
    let inputs = load_inputs(config, &routes)?;
    let tol = |key: &str| config.tolerance_overrides[key];
    let mut rows = Vec::new();
    for per_n in evaluate_all(&inputs, config, &routes)? {
        let zs = &per_n[0].0;
        for (other, _) in &per_n[1..] {
            let slack = match other.route {
                Route::Arithmetic => tol("arithmetic"),
                _ => tol("decomposition"),
            };
            let delta = (zs.value - other.value).abs();
            let budget = zs.tail_bound + other.tail_bound + slack;
            rows.push(VerifyRow {
                n: zs.n,
                route: other.route,
                reference: Route::ZeroSum,
                value: other.value,
                reference_value: zs.value,
                delta,
                budget,
                pass: delta <= budget,
            });
        }
    }
    write_rows(config, &rows)?;
    Ok(if rows.iter().all(|r| r.pass) {
        EXIT_SUCCESS
    } else {
        EXIT_VERIFICATION
    })
}

fn run_volchkov(config: &RunConfig) -> CliResult<i32> {
    let desc = config.load_descriptor()?;
    let table = config.load_zeros()?;
    let laurent = config.load_laurent()?;
    let report = volchkov_integral(&desc, &table, &laurent, config.volchkov_config())?;
    let bound = report.integral.tail_bound + report.integral.quadrature_error;
    let height = Some(report.integral.truncation_height);
    let rows = vec![
        QuantityRow {
            quantity: "integral",
            value: report.integral.value,
            tail_bound: bound,
            truncation_height: height,
        },
        QuantityRow {
            quantity: "rhs",
            value: report.rhs,
            tail_bound: 0.0,
            truncation_height: None,
        },
        QuantityRow {
            quantity: "difference",
            value: report.integral.value - report.rhs,
            tail_bound: bound,
            truncation_height: height,
        },
        QuantityRow {
            quantity: "gamma0",
            value: report.gamma0,
            tail_bound: 0.0,
            truncation_height: None,
        },
        QuantityRow {
            quantity: "gamma0_from_integral",
            value: report.gamma0_from_integral,
            tail_bound: bound,
            truncation_height: height,
        },
    ];
    write_rows(config, &rows)?;
    Ok(EXIT_SUCCESS)
}

fn run_scan(config: &RunConfig, kind: ScanKind) -> CliResult<i32> {
    let desc = config.load_descriptor()?;
    let rows: Vec<ScanOutputRow> = match kind {
        ScanKind::Integral => {
            let table = config.load_zeros()?;
            let cfg = config.volchkov_config();
            config
                .n_values
                .par_iter()
                .map(|&n| {
                    let (r, wall_ms) = timed(|| i3(&desc, &table, n, cfg));
                    let r = r?;
                    let nf = f64::from(n);
                    let value = r.value / nf;
                    Ok(ScanOutputRow {
                        n,
                        value,
                        normalized: value * nf.sqrt() / (nf + 1.0).ln(),
                        tail_bound: (r.tail_bound + r.quadrature_error) / nf,
                        truncation_height: Some(r.truncation_height),
                        wall_ms,
                    })
                })
                .collect::<crate::error::Result<_>>()?
        }
        ScanKind::Residual => {
            if config.n_values.contains(&1) {
                return Err(CliError::Usage("residual scan needs n >= 2".into()));
            }
            let table = config.load_zeros()?;
            config
                .n_values
                .par_iter()
                .map(|&n| {
                    let (e, wall_ms) = timed(|| li_zero_sum(&desc, &table, n));
                    let e = e?;
                    Ok(ScanOutputRow {
                        n,
                        value: e.value,
                        normalized: asymptotic_residual(&desc, &e)?,
                        tail_bound: e.tail_bound,
                        truncation_height: e.truncation_height,
                        wall_ms,
                    })
                })
                .collect::<crate::error::Result<_>>()?
        }
        ScanKind::Nonarchimedean => {
            let laurent = config.load_laurent()?;
            let gammas = logderiv_coefficients(&laurent)?;
            let n_max = config.n_values.iter().copied().max().unwrap_or(1);
            let (scan, wall_ms) = timed(|| bound_scan(&gammas, desc.polar_order(), n_max));
            let scan = scan?;
            config
                .n_values
                .iter()
                .map(|&n| {
                    let e = scan[n as usize - 1];
                    ScanOutputRow {
                        n,
                        value: crate::stieltjes::nonarchimedean_sum(&gammas, desc.polar_order(), n)
                            .map(|s| s.re)
                            .unwrap_or(f64::NAN),
                        normalized: e.normalized,
                        tail_bound: 0.0,
                        truncation_height: None,
                        wall_ms,
                    }
                })
                .collect()
        }
    };
    write_rows(config, &rows)?;
    Ok(EXIT_SUCCESS)
}

fn run_fetch(args: &FetchArgs) -> CliResult<i32> {
    let source =
        ZeroSource::remote(&args.label, args.height).map_err(|e| CliError::Usage(e.to_string()))?;
    let table = RemoteClient::from_env().load(&source, &args.cache_dir)?;
    println!(
        "{} ordinates up to {} cached at {}",
        table.len(),
        table.coverage_height(),
        cache_path(&args.cache_dir, &args.label, args.height).display()
    );
    Ok(EXIT_SUCCESS)
}

/// Run a parsed command line and return the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result =
        match &cli.command {
            Command::Compute(a) => RunConfig::from_parts(&a.input, &a.output, a.n.0.clone())
                .and_then(|mut c| {
                    c.routes = a.routes.clone();
                    c.routes.dedup();
                    run_compute(&c)
                }),
            Command::Verify(a) => RunConfig::from_parts(&a.input, &a.output, a.n.0.clone())
                .and_then(|mut c| {
                    c.tolerance_overrides
                        .insert("arithmetic".into(), a.tol_arithmetic);
                    c.tolerance_overrides
                        .insert("decomposition".into(), a.tol_decomposition);
                    run_verify(&c)
                }),
            Command::Volchkov(a) => {
                RunConfig::from_parts(&a.input, &a.output, vec![1]).and_then(|c| run_volchkov(&c))
            }
            Command::Scan(a) => RunConfig::from_parts(&a.input, &a.output, a.n.0.clone())
                .and_then(|c| run_scan(&c, a.kind)),
            Command::Fetch(a) => run_fetch(a),
        };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

/// Entry point for the binary: parse `std::env::args` and execute.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_SUCCESS
            };
            let _ = e.print();
            code
        }
    }
}
