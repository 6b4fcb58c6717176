//! The `otclt` command line.
//!
//! Exit codes: 0 on success, 1 for input and configuration errors, 2 for
//! numerical failures. Reports go to `--out` (written atomically) or to
//! standard output.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cost::CostSpec;
use crate::duality::{c_transform, PotentialVector};
use crate::error::{Error, Result};
use crate::inference::{
    default_pairs, efron_stein_bound, efron_stein_two_sample, one_sample_ci, two_sample_ci, wasserstein_ci,
    CltReport, HolderPair, DEFAULT_SEPARATION,
};
use crate::measure::{load_csv, DiscreteMeasure, Generator, SampleSource};
use crate::montecarlo::{linspace, remainder_variance, simulate_clt, stability_report, ExperimentConfig, Target};
use crate::oracle1d::{monotone_map, potential_1d, sigma_sq_1d, Distribution1D};
use crate::report::{fmt17, to_json, write_atomic, Envelope};
use crate::solver::{solve, verify_optimality, Certificate, DualPair, PlanEntry, Side, SolverOptions};

/// Quadrature order used for oracle targets.
const ORACLE_QUAD: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "otclt", version, about = "Exact discrete optimal transport and CLT inference for transport costs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a discrete transport problem: plan, duals, objective, certificate.
    Solve(SolveArgs),
    /// c-transform of a potential file onto the other side.
    Transform(TransformArgs),
    /// One-sample confidence interval for T_c(P_n, Q).
    InferOne(InferArgs),
    /// Two-sample confidence interval for T_c(P_n, Q_m).
    InferTwo(InferArgs),
    /// Delta-method confidence interval for W_p.
    WpCi(WpArgs),
    /// Plug-in Efron–Stein variance bound.
    Bound(BoundArgs),
    /// Monte-Carlo check of the Gaussian limit.
    Simulate(SimulateArgs),
    /// Stability of empirical potentials and maps against the 1-D oracle.
    Stability(StabilityArgs),
    /// Decay of the linearization remainder variance.
    Remainder(RemainderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QMode {
    /// Fresh i.i.d. sample of size m (two-sample).
    Sample,
    /// Midpoint-quantile grid of the Q law, size m (one-sample, d = 1).
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    P,
    Q,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CostArg {
    /// Cost as power:<p> with p > 1.
    #[arg(long, default_value = "power:2")]
    pub cost: String,
}

/// Measures from CSV files or from seeded generators.
#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// CSV of P points (d columns, optional weight column).
    #[arg(long)]
    pub p: Option<PathBuf>,
    /// CSV of Q points.
    #[arg(long)]
    pub q: Option<PathBuf>,
    /// Generator for P when no file is given: unif:a:b[..], gauss:mu:sd[..], file:<path>.
    #[arg(long)]
    pub p_law: Option<String>,
    /// Generator for Q when no file is given.
    #[arg(long)]
    pub q_law: Option<String>,
    /// Dimension of CSV inputs.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Sample size drawn from --p-law.
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Sample size drawn from --q-law.
    #[arg(long, default_value_t = 500)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub measures: MeasureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub measures: MeasureArgs,
    /// One potential value per line, indexed by the points of --side.
    #[arg(long)]
    pub potential: PathBuf,
    /// Side the potential lives on.
    #[arg(long, value_enum, default_value_t = SideArg::P)]
    pub side: SideArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub measures: MeasureArgs,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WpArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub measures: MeasureArgs,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Smallest W_p accepted by the delta method.
    #[arg(long, default_value_t = DEFAULT_SEPARATION)]
    pub separation: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub measures: MeasureArgs,
    /// Hölder pairs as q1:q2 separated by commas, e.g. 1:inf,2:2.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Bound the two-sample statistic instead of the one-sample one.
    #[arg(long)]
    pub two_sample: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    #[arg(long, default_value = "unif:0:1")]
    pub p_law: String,
    #[arg(long, default_value = "unif:0.5:1.5")]
    pub q_law: String,
    #[arg(long, value_enum, default_value_t = QMode::Sample)]
    pub q_mode: QMode,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub laws: LawArgs,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub m: usize,
    #[arg(long, default_value_t = 400)]
    pub reps: usize,
    /// Theoretical limit variance; computed by the 1-D oracle when absent.
    #[arg(long)]
    pub theory_sigma_sq: Option<f64>,
    /// Skip the per-replication Efron–Stein bound.
    #[arg(long)]
    pub no_bound: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub laws: LawArgs,
    /// Comma-separated sample sizes.
    #[arg(long, default_value = "100,200,400,800,1600,3200")]
    pub schedule: String,
    /// Evaluation grid as lo:hi:points.
    #[arg(long, default_value = "0.05:0.95:101")]
    pub grid: String,
    /// Grid index where both potentials are anchored.
    #[arg(long, default_value_t = 0)]
    pub anchor: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RemainderArgs {
    #[command(flatten)]
    pub cost: CostArg,
    #[command(flatten)]
    pub laws: LawArgs,
    #[arg(long, default_value = "100,200,400,800")]
    pub schedule: String,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A rendered report and where it goes.
#[derive(Debug)]
pub struct Rendered {
    pub text: String,
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first} (see --help)");
            return 1;
        }
    };
    match execute(&cli).and_then(|r| emit(&r)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

fn emit(r: &Rendered) -> Result<()> {
    match &r.out {
        Some(path) => write_atomic(path, r.text.as_bytes()),
        None => {
            print!("{}", r.text);
            Ok(())
        }
    }
}

/// Runs a parsed command and renders its report.
pub fn execute(cli: &Cli) -> Result<Rendered> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Transform(a) => cmd_transform(a),
        Command::InferOne(a) => cmd_infer(a, "infer-one"),
        Command::InferTwo(a) => cmd_infer(a, "infer-two"),
        Command::WpCi(a) => cmd_wp(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Stability(a) => cmd_stability(a),
        Command::Remainder(a) => cmd_remainder(a),
    }
}

fn flag_error(flag: &str, e: Error) -> Error {
    match e {
        Error::Config(msg) => Error::Config(format!("{flag}: {msg}")),
        Error::InvalidInput(msg) => Error::InvalidInput(format!("{flag}: {msg}")),
        Error::Parse { .. } => Error::InvalidInput(format!("{flag}: {e}")),
        other => other,
    }
}

fn parse_cost(arg: &CostArg, dim: usize) -> Result<CostSpec> {
    let spec: CostSpec = arg.cost.parse().map_err(|e| flag_error("--cost", e))?;
    spec.with_dim(dim).map_err(|e| flag_error("--cost", e))
}

fn parse_generator(flag: &str, s: &str) -> Result<Generator> {
    s.parse().map_err(|e| flag_error(flag, e))
}

fn load(flag: &str, path: &Path, dim: usize) -> Result<DiscreteMeasure> {
    load_csv(path, dim).map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::InvalidInput(format!("{flag} {}: {other}", path.display())),
    })
}

/// Resolves `(P, Q)` from files or generators; returns the data dimension.
fn measures(a: &MeasureArgs) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    let side = |file: &Option<PathBuf>, law: &Option<String>, flag: &str, law_flag: &str, size: usize, label: &str| {
        match (file, law) {
            (Some(path), None) => load(flag, path, a.dim),
            (None, Some(g)) => {
                let g = parse_generator(law_flag, g)?;
                SampleSource::new(g, label).sample(size, a.seed, 0).map_err(|e| flag_error(law_flag, e))
            }
            (Some(_), Some(_)) => Err(Error::Config(format!("give either {flag} or {law_flag}, not both"))),
            (None, None) => Err(Error::Config(format!("missing input: pass {flag} <csv> or {law_flag} <generator>"))),
        }
    };
    let p = side(&a.p, &a.p_law, "--p", "--p-law", a.n, "P")?;
    let q = side(&a.q, &a.q_law, "--q", "--q-law", a.m, "Q")?;
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    Ok((p, q))
}

fn render<T: Serialize>(command: &str, body: &T, out: &OutputArgs, csv: impl FnOnce() -> String) -> Result<Rendered> {
    let text = match out.format {
        Format::Json => to_json(&Envelope::new(command, body))?,
        Format::Csv => csv(),
    };
    Ok(Rendered { text, out: out.out.clone() })
}

#[derive(Serialize)]
struct SolveReport<'a> {
    cost: String,
    dim: usize,
    n: usize,
    m: usize,
    objective: f64,
    pivots: usize,
    entries: &'a [PlanEntry],
    duals: &'a DualPair,
    certificate: Certificate,
}

fn cmd_solve(a: &SolveArgs) -> Result<Rendered> {
    let (p, q) = measures(&a.measures)?;
    let spec = parse_cost(&a.cost, p.dim())?;
    let sol = solve(&spec, &p, &q, SolverOptions::default())?;
    let certificate = verify_optimality(&sol.plan, &sol.duals, &sol.costs, p.weights(), q.weights())?;
    let report = SolveReport {
        cost: spec.label(),
        dim: p.dim(),
        n: p.len(),
        m: q.len(),
        objective: sol.plan.objective,
        pivots: sol.pivots,
        entries: &sol.plan.entries,
        duals: &sol.duals,
        certificate,
    };
    render("solve", &report, &a.output, || {
        let mut s = String::from("i,j,mass\n");
        for e in &sol.plan.entries {
            s.push_str(&format!("{},{},{}\n", e.i, e.j, fmt17(e.mass)));
        }
        s
    })
}

fn load_potential(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            l.trim().trim_end_matches(',').parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!("--potential {}: row {}: '{}' is not a number", path.display(), k + 1, l.trim()))
            })
        })
        .collect()
}

#[derive(Serialize)]
struct TransformReport {
    cost: String,
    source_side: Side,
    target_side: Side,
    values: Vec<f64>,
}

fn cmd_transform(a: &TransformArgs) -> Result<Rendered> {
    let (p, q) = measures(&a.measures)?;
    let spec = parse_cost(&a.cost, p.dim())?;
    let values = load_potential(&a.potential)?;
    let (side, source, target) = match a.side {
        SideArg::P => (Side::P, &p, &q),
        SideArg::Q => (Side::Q, &q, &p),
    };
    if values.len() != source.len() {
        return Err(Error::InvalidInput(format!(
            "--potential has {} values but the {:?} side has {} points",
            values.len(),
            side,
            source.len()
        )));
    }
    let f = PotentialVector::new(side, values)?;
    let g = c_transform(&spec, &f, source, target)?;
    let report = TransformReport {
        cost: spec.label(),
        source_side: side,
        target_side: g.side,
        values: g.values,
    };
    render("transform", &report, &a.output, || {
        report.values.iter().map(|v| fmt17(*v) + "\n").collect()
    })
}

fn report_csv(r: &CltReport) -> String {
    let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
    let mut s = String::from("key,value\n");
    let rows = [
        ("statistic", fmt17(r.statistic)),
        ("sigma_sq_hat", fmt17(r.sigma_sq_hat)),
        ("stderr", fmt17(r.stderr)),
        ("ci_lo", fmt17(r.ci[0])),
        ("ci_hi", fmt17(r.ci[1])),
        ("alpha", fmt17(r.alpha)),
        ("n", r.n.to_string()),
        ("m", r.m.to_string()),
        ("lambda", opt(r.lambda)),
        ("es_bound", opt(r.es_bound)),
    ];
    for (k, v) in rows {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

fn cmd_infer(a: &InferArgs, command: &str) -> Result<Rendered> {
    let (p, q) = measures(&a.measures)?;
    let spec = parse_cost(&a.cost, p.dim())?;
    let report = if command == "infer-one" {
        one_sample_ci(&spec, &p, &q, a.alpha)
    } else {
        two_sample_ci(&spec, &p, &q, a.alpha)
    }
    .map_err(|e| flag_error("--alpha", e))?;
    render(command, &report, &a.output, || report_csv(&report))
}

fn cmd_wp(a: &WpArgs) -> Result<Rendered> {
    let (p, q) = measures(&a.measures)?;
    let spec = parse_cost(&a.cost, p.dim())?;
    let report = wasserstein_ci(&spec, &p, &q, a.alpha, a.separation)?;
    render("wp-ci", &report, &a.output, || report_csv(&report))
}

fn parse_pairs(s: &str) -> Result<Vec<HolderPair>> {
    let exponent = |t: &str| -> Result<f64> {
        match t.trim() {
            "inf" | "∞" => Ok(f64::INFINITY),
            v => v
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("--pairs: '{v}' is not an exponent"))),
        }
    };
    s.split(',')
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("--pairs: '{item}' should look like q1:q2")))?;
            HolderPair::new(exponent(a)?, exponent(b)?).map_err(|e| flag_error("--pairs", e))
        })
        .collect()
}

fn cmd_bound(a: &BoundArgs) -> Result<Rendered> {
    let (p, q) = measures(&a.measures)?;
    let spec = parse_cost(&a.cost, p.dim())?;
    let pairs = match &a.pairs {
        Some(s) => parse_pairs(s)?,
        None => default_pairs(&spec),
    };
    if a.two_sample {
        let r = efron_stein_two_sample(&spec, &p, &q, &pairs)?;
        render("bound", &r, &a.output, || format!("side,bound\nP,{}\nQ,{}\nmixture,{}\n", fmt17(r.x_side.bound), fmt17(r.y_side.bound), fmt17(r.bound)))
    } else {
        let r = efron_stein_bound(&spec, &p, &q, &pairs)?;
        render("bound", &r, &a.output, || {
            let mut s = String::from("q1,q2,spread,gradient,value\n");
            for t in &r.terms {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt17(t.pair.q1),
                    fmt17(t.pair.q2),
                    fmt17(t.spread),
                    fmt17(t.gradient),
                    fmt17(t.value)
                ));
            }
            s
        })
    }
}

fn experiment(cost: &CostArg, laws: &LawArgs) -> Result<ExperimentConfig> {
    let pg = parse_generator("--p-law", &laws.p_law)?;
    let qg = parse_generator("--q-law", &laws.q_law)?;
    let spec = parse_cost(cost, pg.dim())?;
    let q = match laws.q_mode {
        QMode::Sample => Target::Sample(SampleSource::new(qg, "Q")),
        QMode::Grid => Target::QuantileGrid(qg),
    };
    let mut cfg = ExperimentConfig::new(spec, SampleSource::new(pg, "P"), q);
    cfg.seed = laws.seed;
    Ok(cfg)
}

fn parse_schedule(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("--schedule: '{t}' is not a sample size")))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Config(format!("--grid: expected lo:hi:points, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let k: usize = parts[2].parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi && k >= 1) {
        return Err(bad());
    }
    Ok(linspace(lo, hi, k))
}

/// Closed-form laws of the experiment, required by the oracle.
fn oracle_laws(cfg: &ExperimentConfig) -> Result<(Distribution1D, Distribution1D)> {
    if cfg.cost.dim() != 1 {
        return Err(Error::Config("the oracle needs one-dimensional laws".into()));
    }
    let q = match &cfg.q {
        Target::Sample(s) => &s.generator,
        Target::QuantileGrid(g) => g,
        Target::Fixed(_) => return Err(Error::Config("the oracle needs a closed-form Q law".into())),
    };
    Ok((
        Distribution1D::from_generator(&cfg.p_law.generator).map_err(|e| flag_error("--p-law", e))?,
        Distribution1D::from_generator(q).map_err(|e| flag_error("--q-law", e))?,
    ))
}

/// Limit variance of the simulated statistic from the oracle.
pub fn oracle_sigma_sq(cfg: &ExperimentConfig) -> Result<f64> {
    let (x, y) = oracle_laws(cfg)?;
    let sp = sigma_sq_1d(&cfg.cost, &x, &y, ORACLE_QUAD)?;
    if !cfg.q.is_sampled() {
        return Ok(sp);
    }
    let sq = sigma_sq_1d(&cfg.cost, &y, &x, ORACLE_QUAD)?;
    let lambda = cfg.n as f64 / (cfg.n + cfg.m) as f64;
    Ok((1.0 - lambda) * sp + lambda * sq)
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Rendered> {
    let mut cfg = experiment(&a.cost, &a.laws)?;
    cfg.n = a.n;
    cfg.m = a.m;
    cfg.reps = a.reps;
    cfg.efron_stein = !a.no_bound;
    let theory = match a.theory_sigma_sq {
        Some(v) => v,
        None => oracle_sigma_sq(&cfg).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{msg}; pass --theory-sigma-sq")),
            other => other,
        })?,
    };
    let r = simulate_clt(&cfg, theory)?;
    render("simulate", &r, &a.output, || r.to_csv())
}

fn cmd_stability(a: &StabilityArgs) -> Result<Rendered> {
    let mut cfg = experiment(&a.cost, &a.laws)?;
    cfg.schedule = parse_schedule(&a.schedule)?;
    cfg.grid = parse_grid(&a.grid)?;
    let (x, y) = oracle_laws(&cfg)?;
    let x0 = *cfg.grid.get(a.anchor).ok_or_else(|| Error::Config(format!("--anchor {} is outside the grid", a.anchor)))?;
    let pot = potential_1d(&cfg.cost, &x, &y, x0, &[])?;
    let r = stability_report(&cfg, &|t| pot.eval(t), &|t| monotone_map(&x, &y, t), a.anchor)?;
    render("stability", &r, &a.output, || r.to_csv())
}

fn cmd_remainder(a: &RemainderArgs) -> Result<Rendered> {
    let mut cfg = experiment(&a.cost, &a.laws)?;
    cfg.schedule = parse_schedule(&a.schedule)?;
    cfg.reps = a.reps;
    let (x, y) = oracle_laws(&cfg)?;
    let pot = potential_1d(&cfg.cost, &x, &y, x.quantile(0.5), &[])?;
    let r = remainder_variance(&cfg, &|p| pot.eval(p[0]), &|q| pot.conjugate(q[0]))?;
    render("remainder", &r, &a.output, || r.to_csv())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_grids_and_schedules() {
        let p = parse_pairs("1:inf,2:2").unwrap();
        assert_eq!(p.len(), 2);
        assert!(p[0].q2.is_infinite());
        assert!(parse_pairs("2:3").is_err());
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_grid("0:1").is_err());
        assert_eq!(parse_schedule("100, 200").unwrap(), vec![100, 200]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["otclt", "--bogus"]), 1);
        assert_eq!(run(["otclt", "solve", "--cost", "power:1", "--p-law", "unif:0:1", "--q-law", "unif:0:1"]), 1);
        assert_eq!(run(["otclt", "solve", "--p", "/nonexistent/a.csv", "--q-law", "unif:0:1"]), 1);
    }

    #[test]
    fn oracle_variance_for_the_shift_benchmark() {
        let cfg = ExperimentConfig::shift_benchmark();
        assert!((oracle_sigma_sq(&cfg).unwrap() - 1.0 / 12.0).abs() < 1e-10);
    }
}
