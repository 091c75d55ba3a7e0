use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qgeodiv::divergences::{
    bs_divergence, e_divergence_closed, e_divergence_quadrature, m_divergence, quantum_relative_entropy,
};
use qgeodiv::harness::{claim_description, claim_ids, run_all, HarnessConfig, VerificationReport};
use qgeodiv::metrics::{fisher_info_mixture, fisher_info_numeric};
use qgeodiv::transport::{solve_direction, Geodesic, SECOND_DERIVATIVE_STEP};
use qgeodiv::{DensityMatrix, Error, GeodesicKind, MatrixFile, MetricKind, QuadratureConfig};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_CLAIM_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(name = "qgeodiv", version, about = "Quantum path-divergences, e-geodesics and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divergence table for a pair of states.
    Compute(ComputeArgs),
    /// Moment function, its derivatives and the spectrum along an e-geodesic.
    Geodesic(GeodesicArgs),
    /// Fisher information along the mixture path from ρ to σ.
    Fisher(FisherArgs),
    /// Run the randomized verification harness.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Quadrature,
    Both,
}

#[derive(Args)]
struct QuadratureArgs {
    /// Starting Gauss–Legendre node count.
    #[arg(long, default_value_t = QuadratureConfig::default().nodes)]
    nodes: usize,
    /// Relative tolerance between successive node doublings.
    #[arg(long = "rel-tol", default_value_t = QuadratureConfig::default().rel_tol)]
    rel_tol: f64,
    /// Largest node count tried before giving up.
    #[arg(long = "max-nodes", default_value_t = QuadratureConfig::default().max_nodes)]
    max_nodes: usize,
}

impl QuadratureArgs {
    fn config(&self) -> Result<QuadratureConfig, Error> {
        let cfg = QuadratureConfig {
            nodes: self.nodes,
            rel_tol: self.rel_tol,
            max_nodes: self.max_nodes.max(self.nodes),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    /// State file for ρ.
    #[arg(long)]
    rho: PathBuf,
    /// State file for σ.
    #[arg(long)]
    sigma: PathBuf,
    /// Restrict to these metrics: s, b, r, half, lambda=<x> (comma separated).
    #[arg(long, value_delimiter = ',')]
    metric: Vec<String>,
    /// How e-divergences are evaluated.
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Report values in bits instead of nats.
    #[arg(long)]
    bits: bool,
    #[command(flatten)]
    quadrature: QuadratureArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct GeodesicArgs {
    /// Base state σ at θ = 0.
    #[arg(long)]
    sigma: PathBuf,
    /// Hermitian direction file.
    #[arg(long, conflicts_with = "target", required_unless_present = "target")]
    direction: Option<PathBuf>,
    /// Target state reached at θ = 1; the direction is solved for.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Geodesic kind: s, b, r or half.
    #[arg(long = "metric", default_value = "b")]
    kind: String,
    /// Grid as start:end:points.
    #[arg(long, default_value = "0:1:11", conflicts_with = "theta", allow_hyphen_values = true)]
    grid: String,
    /// Explicit θ values (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FisherArgs {
    #[arg(long)]
    rho: PathBuf,
    #[arg(long)]
    sigma: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "s,b,r,half")]
    metric: Vec<String>,
    /// Grid over t as start:end:points.
    #[arg(long, default_value = "0.1:0.9:9", allow_hyphen_values = true)]
    grid: String,
    /// Finite-difference step for the numeric column.
    #[arg(long, default_value_t = SECOND_DERIVATIVE_STEP)]
    step: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Harness configuration JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Only run these claim ids (comma separated).
    #[arg(long, value_delimiter = ',')]
    claims: Vec<String>,
    /// Trials for every selected claim.
    #[arg(long)]
    trials: Option<usize>,
    /// List claim ids and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here; a summary is printed to stderr.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Numerical(String),
    ClaimFailure,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn read_state(path: &Path) -> CliResult<DensityMatrix> {
    let file = MatrixFile::from_json(&read_file(path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    file.to_state()
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    write_or_print(out.output.as_deref(), text)
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Validation(format!("grid {spec:?} must be start:end:points with points >= 1"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    Ok((0..n).map(|i| start + (end - start) * i as f64 / (n - 1) as f64).collect())
}

fn parse_metrics(names: &[String]) -> CliResult<Vec<MetricKind>> {
    names.iter().map(|n| Ok(n.parse::<MetricKind>()?)).collect()
}

#[derive(Serialize)]
struct Row {
    id: String,
    value: f64,
    method: &'static str,
    nodes: usize,
}

#[derive(Serialize)]
struct Table<R> {
    unit: &'static str,
    rows: Vec<R>,
}

fn compute(args: &ComputeArgs) -> CliResult<()> {
    let rho = read_state(&args.rho)?;
    let sigma = read_state(&args.sigma)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        }
        .into());
    }
    let quad = args.quadrature.config()?;
    let metrics = if args.metric.is_empty() {
        GeodesicKind::ALL.iter().map(|k| k.metric()).collect()
    } else {
        parse_metrics(&args.metric)?
    };
    let scale = if args.bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };

    let mut rows = Vec::new();
    if args.metric.is_empty() {
        rows.push(Row {
            id: "D".into(),
            value: quantum_relative_entropy(&rho, &sigma)?,
            method: "closed",
            nodes: 0,
        });
        rows.push(Row {
            id: "Dbar".into(),
            value: bs_divergence(&rho, &sigma)?,
            method: "closed",
            nodes: 0,
        });
    }
    for x in &metrics {
        if let Some(kind) = GeodesicKind::from_metric(x) {
            let id = format!("e_{}", kind.label());
            if matches!(args.method, Method::Closed | Method::Both) {
                rows.push(Row {
                    id: id.clone(),
                    value: e_divergence_closed(kind, &rho, &sigma)?,
                    method: "closed",
                    nodes: 0,
                });
            }
            if matches!(args.method, Method::Quadrature | Method::Both) {
                let est = e_divergence_quadrature(kind, &rho, &sigma, &quad)?;
                rows.push(Row {
                    id,
                    value: est.value,
                    method: "quadrature",
                    nodes: est.nodes,
                });
            }
        }
    }
    for x in &metrics {
        let est = m_divergence(x, &rho, &sigma, &quad)?;
        rows.push(Row {
            id: format!("m_{}", x.label()),
            value: est.value,
            method: "quadrature",
            nodes: est.nodes,
        });
    }
    for r in &mut rows {
        r.value *= scale;
    }
    let unit = if args.bits { "bits" } else { "nats" };
    let text = match args.out.format {
        Format::Json => json(&Table { unit, rows })?,
        Format::Csv => {
            let mut s = String::from("id,value,method,nodes\n");
            for r in &rows {
                writeln!(s, "{},{},{},{}", r.id, r.value, r.method, r.nodes).unwrap();
            }
            s
        }
    };
    emit(&args.out, &text)
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Validation(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct GeodesicRow {
    theta: f64,
    mu: f64,
    dmu: f64,
    d2mu: f64,
    min_eig: f64,
    max_eig: f64,
}

fn geodesic(args: &GeodesicArgs) -> CliResult<()> {
    let kind: GeodesicKind = args.kind.parse()?;
    let sigma = read_state(&args.sigma)?;
    let g = match (&args.direction, &args.target) {
        (Some(path), None) => {
            let file = MatrixFile::from_json(&read_file(path)?)?;
            Geodesic::new(kind, sigma, file.to_matrix()?)?
        }
        (None, Some(path)) => solve_direction(kind, &read_state(path)?, &sigma)?,
        _ => return Err(CliError::Validation("give exactly one of --direction and --target".into())),
    };
    let thetas = if args.theta.is_empty() {
        parse_grid(&args.grid)?
    } else {
        args.theta.clone()
    };
    let mut rows = Vec::with_capacity(thetas.len());
    for theta in thetas {
        let state = g.state_at(theta)?;
        rows.push(GeodesicRow {
            theta,
            mu: g.moment(theta)?,
            dmu: g.moment_slope(theta)?,
            d2mu: g.fisher_info(theta)?,
            min_eig: state.min_eigenvalue(),
            max_eig: state.spectrum().last().copied().unwrap_or(0.0),
        });
    }
    let text = match args.out.format {
        Format::Json => json(&Table { unit: "nats", rows })?,
        Format::Csv => {
            let mut s = String::from("theta,mu,dmu,d2mu,min_eig,max_eig\n");
            for r in &rows {
                writeln!(s, "{},{},{},{},{},{}", r.theta, r.mu, r.dmu, r.d2mu, r.min_eig, r.max_eig).unwrap();
            }
            s
        }
    };
    emit(&args.out, &text)
}

#[derive(Serialize)]
struct FisherRow {
    metric: String,
    t: f64,
    exact: f64,
    numeric: f64,
}

fn fisher(args: &FisherArgs) -> CliResult<()> {
    let rho = read_state(&args.rho)?;
    let sigma = read_state(&args.sigma)?;
    let metrics = parse_metrics(&args.metric)?;
    let grid = parse_grid(&args.grid)?;
    let mut rows = Vec::new();
    for x in &metrics {
        for &t in &grid {
            if !(0.0..=1.0).contains(&t) {
                return Err(CliError::Validation(format!("t = {t} outside [0, 1]")));
            }
            rows.push(FisherRow {
                metric: x.label(),
                t,
                exact: fisher_info_mixture(&rho, &sigma, x, t)?,
                numeric: fisher_info_numeric(|s| DensityMatrix::mix(&rho, &sigma, s), t, x, args.step)?,
            });
        }
    }
    let text = match args.out.format {
        Format::Json => json(&Table { unit: "nats", rows })?,
        Format::Csv => {
            let mut s = String::from("metric,t,exact,numeric\n");
            for r in &rows {
                writeln!(s, "{},{},{},{}", r.metric, r.t, r.exact, r.numeric).unwrap();
            }
            s
        }
    };
    emit(&args.out, &text)
}

fn summary(report: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &report.claims {
        let status = if c.pass { "PASS" } else { "FAIL" };
        writeln!(s, "{status} {} worst={:e} tol={:e} trials={}", c.id, c.worst_slack, c.tolerance, c.trials).unwrap();
        if let Some(e) = &c.error {
            writeln!(s, "     error: {e}").unwrap();
        }
    }
    writeln!(
        s,
        "{}/{} claims pass (seed {}, config {})",
        report.claims.iter().filter(|c| c.pass).count(),
        report.claims.len(),
        report.global_seed,
        report.config_hash
    )
    .unwrap();
    s
}

fn verify(args: &VerifyArgs) -> CliResult<()> {
    if args.list {
        let mut s = String::new();
        for id in claim_ids() {
            writeln!(s, "{id}\t{}", claim_description(id)?).unwrap();
        }
        print!("{s}");
        return Ok(());
    }
    let mut config = match &args.config {
        Some(p) => HarnessConfig::from_json(&read_file(p)?)?,
        None => HarnessConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if !args.claims.is_empty() {
        config.claims = Some(args.claims.clone());
    }
    if args.trials.is_some() {
        config.trials = args.trials;
    }
    let report = run_all(&config)?;
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => {
            let mut s = String::from("id,pass,worst_slack,tolerance,trials,fraction\n");
            for c in &report.claims {
                let fraction = c.fraction.map(|f| f.to_string()).unwrap_or_default();
                writeln!(s, "{},{},{},{},{},{}", c.id, c.pass, c.worst_slack, c.tolerance, c.trials, fraction).unwrap();
            }
            s
        }
    };
    match &args.output {
        Some(path) => {
            write_or_print(Some(path), &text)?;
            eprint!("{}", summary(&report));
        }
        None => print!("{text}"),
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(CliError::ClaimFailure)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Geodesic(a) => geodesic(a),
        Command::Fisher(a) => fisher(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(CliError::ClaimFailure) => {
            eprintln!("error: one or more claims failed");
            ExitCode::from(EXIT_CLAIM_FAILURE)
        }
    }
}
