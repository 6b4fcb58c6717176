//! Replication harness for the limit theorems and the stability results.
//!
//! Every replication draws from its own stream `(seed, label, index)`, so
//! results do not depend on scheduling. Replications run on a rayon pool
//! whose size is capped by `OTCLT_THREADS`; outputs are reduced in
//! replication order.
//!
//! The expectation `E T_c(P_n, Q)` that the limit theorems center at is
//! estimated by the across-replication mean. Decay and tolerance thresholds
//! used on these outputs are empirical choices; the theorems give no rates.

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::CostSpec;
use crate::duality::{c_transform_at, default_tau, CanonicalPair};
use crate::error::{Error, Result};
use crate::inference::{default_pairs, efron_stein_bound, efron_stein_two_sample, solve_canonical};
use crate::measure::{DiscreteMeasure, Generator, SampleSource};
use crate::normal;
use crate::oracle1d::Distribution1D;
use crate::report::fmt17;
use crate::solver::{solve, SolverOptions};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "OTCLT_THREADS";

/// The second marginal of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// A fresh i.i.d. sample of size `m` per replication (two-sample).
    Sample(SampleSource),
    /// The `m` midpoint quantiles of a one-dimensional law; deterministic.
    QuantileGrid(Generator),
    /// A fixed measure, whatever `m` says.
    Fixed(DiscreteMeasure),
}

impl Target {
    pub fn is_sampled(&self) -> bool {
        matches!(self, Target::Sample(_))
    }

    pub fn dim(&self) -> usize {
        match self {
            Target::Sample(s) => s.dim(),
            Target::QuantileGrid(g) => g.dim(),
            Target::Fixed(m) => m.dim(),
        }
    }

    /// The measure used with sample size `m` in replication `index`.
    pub fn measure(&self, m: usize, seed: u64, index: u64) -> Result<DiscreteMeasure> {
        match self {
            Target::Sample(s) => s.sample(m, seed, index),
            Target::QuantileGrid(g) => Distribution1D::from_generator(g)?.discretize(m),
            Target::Fixed(q) => Ok(q.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Target::Sample(s) => format!("sample {} [{}]", s.generator, s.label),
            Target::QuantileGrid(g) => format!("quantile-grid {g}"),
            Target::Fixed(q) => format!("fixed measure with {} points", q.len()),
        }
    }

    fn generator(&self) -> Option<&Generator> {
        match self {
            Target::Sample(s) => Some(&s.generator),
            Target::QuantileGrid(g) => Some(g),
            Target::Fixed(_) => None,
        }
    }
}

/// Everything that determines an experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub cost: CostSpec,
    pub p_law: SampleSource,
    pub q: Target,
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub seed: u64,
    pub alpha: f64,
    /// Evaluation points of the stability diagnostics (d = 1).
    pub grid: Vec<f64>,
    /// Sample sizes of the decay and stability runs; the target size
    /// follows `n` there.
    pub schedule: Vec<usize>,
    /// Evaluate the Efron–Stein bound in every replication.
    pub efron_stein: bool,
    /// Replace the P sample by the midpoint quantiles of its law (d = 1),
    /// for self-consistency runs.
    pub p_grid: bool,
}

/// `k` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect(),
    }
}

impl ExperimentConfig {
    /// Defaults: `n = m = 500`, 400 replications, seed 1, `α = 0.05`, a
    /// 101-point grid on `[0.05, 0.95]` and the schedule `100, 200, ..., 3200`.
    pub fn new(cost: CostSpec, p_law: SampleSource, q: Target) -> Self {
        ExperimentConfig {
            cost,
            p_law,
            q,
            n: 500,
            m: 500,
            reps: 400,
            seed: 1,
            alpha: 0.05,
            grid: linspace(0.05, 0.95, 101),
            schedule: vec![100, 200, 400, 800, 1600, 3200],
            efron_stein: true,
            p_grid: false,
        }
    }

    /// `Unif(0, 1)` against an independent sample of `Unif(0.5, 1.5)` with
    /// the quadratic cost.
    pub fn shift_benchmark() -> Self {
        let p = SampleSource::new(Generator::uniform(vec![0.0], vec![1.0]).expect("valid"), "P");
        let q = SampleSource::new(Generator::uniform(vec![0.5], vec![1.5]).expect("valid"), "Q");
        ExperimentConfig::new(CostSpec::power(2.0, 1).expect("valid"), p, Target::Sample(q))
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 2 {
            return Err(Error::Config(format!("reps must be at least 2, got {}", self.reps)));
        }
        if self.n < 2 || (self.q.is_sampled() && self.m < 2) || self.m == 0 {
            return Err(Error::Config(format!("n and m must be at least 2, got n={} m={}", self.n, self.m)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.schedule.iter().any(|&k| k < 2) {
            return Err(Error::Config("schedule sizes must be at least 2".into()));
        }
        let d = self.cost.dim();
        if self.p_law.dim() != d || self.q.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: self.p_law.dim().max(self.q.dim()) });
        }
        Ok(())
    }

    /// The P measure with `n` points for stream index `index`.
    pub fn p_measure(&self, n: usize, index: u64) -> Result<DiscreteMeasure> {
        if self.p_grid {
            Distribution1D::from_generator(&self.p_law.generator)?.discretize(n)
        } else {
            self.p_law.sample(n, self.seed, index)
        }
    }

    fn rate(&self, n: usize, m: usize) -> f64 {
        if self.q.is_sampled() {
            (n as f64 * m as f64 / (n + m) as f64).sqrt()
        } else {
            (n as f64).sqrt()
        }
    }

    /// `P` and `Q` are the same law, so the linearization has no content.
    pub fn laws_coincide(&self) -> bool {
        self.q.generator() == Some(&self.p_law.generator)
    }

    fn summary(&self) -> ConfigSummary {
        ConfigSummary {
            cost: self.cost.label(),
            dim: self.cost.dim(),
            p_law: if self.p_grid {
                format!("quantile-grid {}", self.p_law.generator)
            } else {
                format!("sample {} [{}]", self.p_law.generator, self.p_law.label)
            },
            q: self.q.describe(),
            two_sample: self.q.is_sampled(),
            n: self.n,
            m: self.m,
            reps: self.reps,
            seed: self.seed,
        }
    }
}

/// Serializable description of the configuration behind a result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub cost: String,
    pub dim: usize,
    pub p_law: String,
    pub q: String,
    pub two_sample: bool,
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub seed: u64,
}

/// Stream index for replication `rep` at sample size `n` of a schedule.
fn schedule_index(n: usize, rep: usize) -> u64 {
    ((n as u64) << 32) | rep as u64
}

/// Worker-thread count from `OTCLT_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
    }
}

/// Runs `f(0..reps)` in parallel and returns the outputs in index order.
/// The first failing replication by index is reported.
fn replicate<T: Send>(reps: usize, f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_cap()? {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))?;
    let results: Vec<Result<T>> = pool.install(|| (0..reps).into_par_iter().map(&f).collect());
    results
        .into_iter()
        .enumerate()
        .map(|(rep, r)| r.map_err(|e| Error::Replication { rep, source: Box::new(e) }))
        .collect()
}

fn unbiased_variance(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    (mean, var)
}

/// Kolmogorov–Smirnov distance between a sample and `N(0, 1)`.
pub fn ks_distance_normal(values: &[f64]) -> f64 {
    let mut z = values.to_vec();
    z.sort_by(f64::total_cmp);
    let k = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = normal::cdf(v);
            f64::max((i + 1) as f64 / k - f, f - i as f64 / k)
        })
        .fold(0.0, f64::max)
}

/// One replication of [`simulate_clt`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepRecord {
    pub rep: usize,
    pub statistic: f64,
    /// `rate (T_r - mean) / σ_theory`; zero when `σ²_theory = 0`.
    pub standardized: f64,
    pub es_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltSimResult {
    pub config: ConfigSummary,
    /// `√n` (one sample) or `√(nm/(n+m))` (two samples).
    pub rate: f64,
    pub mean_statistic: f64,
    /// Unbiased variance of `rate · T_r`.
    pub scaled_variance: f64,
    pub theory_sigma_sq: f64,
    /// Absent when the theoretical variance is zero.
    pub ks_distance: Option<f64>,
    /// Fraction of replications whose Efron–Stein bound is at least
    /// `scaled_variance`.
    pub es_fraction: Option<f64>,
    pub reps: Vec<RepRecord>,
}

impl CltSimResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rep,statistic,standardized,es_bound\n");
        for r in &self.reps {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.rep,
                fmt17(r.statistic),
                fmt17(r.standardized),
                r.es_bound.map(fmt17).unwrap_or_default()
            ));
        }
        out
    }
}

/// Replicates `T_c(P_n, Q)` (or `T_c(P_n, Q_m)`) and compares the scaled
/// fluctuations with `N(0, theory_sigma_sq)`.
pub fn simulate_clt(cfg: &ExperimentConfig, theory_sigma_sq: f64) -> Result<CltSimResult> {
    cfg.validate()?;
    if !(theory_sigma_sq >= 0.0 && theory_sigma_sq.is_finite()) {
        return Err(Error::Config(format!("theoretical variance must be finite and >= 0, got {theory_sigma_sq}")));
    }
    let pairs = default_pairs(&cfg.cost);
    let runs = replicate(cfg.reps, |rep| {
        let x = cfg.p_measure(cfg.n, rep as u64)?;
        let y = cfg.q.measure(cfg.m, cfg.seed, rep as u64)?;
        let sol = solve(&cfg.cost, &x, &y, SolverOptions::default())?;
        let es = if !cfg.efron_stein {
            None
        } else if cfg.q.is_sampled() {
            Some(efron_stein_two_sample(&cfg.cost, &x, &y, &pairs)?.bound)
        } else {
            Some(efron_stein_bound(&cfg.cost, &x, &y, &pairs)?.bound)
        };
        Ok((sol.plan.objective, es))
    })?;
    let stats: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let rate = cfg.rate(cfg.n, cfg.m);
    let (mean, var) = unbiased_variance(&stats);
    let scaled_variance = rate * rate * var;
    let sd = theory_sigma_sq.sqrt();
    let reps: Vec<RepRecord> = runs
        .iter()
        .enumerate()
        .map(|(rep, &(statistic, es_bound))| RepRecord {
            rep,
            statistic,
            standardized: if sd > 0.0 { rate * (statistic - mean) / sd } else { 0.0 },
            es_bound,
        })
        .collect();
    let ks_distance = (sd > 0.0).then(|| ks_distance_normal(&reps.iter().map(|r| r.standardized).collect::<Vec<_>>()));
    let es_fraction = cfg.efron_stein.then(|| {
        let ok = reps.iter().filter(|r| r.es_bound.is_some_and(|b| scaled_variance <= b)).count();
        ok as f64 / reps.len() as f64
    });
    Ok(CltSimResult {
        config: cfg.summary(),
        rate,
        mean_statistic: mean,
        scaled_variance,
        theory_sigma_sq,
        ks_distance,
        es_fraction,
        reps,
    })
}

/// A potential known in closed form or from the oracle, on either side.
pub type PointFn<'a> = &'a (dyn Fn(&[f64]) -> Result<f64> + Sync);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderRow {
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub mean_remainder: f64,
    pub variance: f64,
    /// `n · Var(R_n)`.
    pub scaled_variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderTable {
    pub config: ConfigSummary,
    pub rows: Vec<RemainderRow>,
    /// Last over first `scaled_variance`.
    pub decay_ratio: Option<f64>,
    /// Set when `P` and `Q` are the same law; the decay is then not expected.
    pub diagnostic_only: bool,
    pub note: String,
}

impl RemainderTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,reps,mean_remainder,variance,scaled_variance\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                r.m,
                r.reps,
                fmt17(r.mean_remainder),
                fmt17(r.variance),
                fmt17(r.scaled_variance)
            ));
        }
        out
    }
}

/// `n Var(R_n)` along the schedule, with
/// `R_n = T_c(P_n, Q_m) - mean_{P_n} φ - mean_{Q_m} ψ`.
pub fn remainder_variance(cfg: &ExperimentConfig, phi: PointFn<'_>, psi: PointFn<'_>) -> Result<RemainderTable> {
    cfg.validate()?;
    if cfg.schedule.is_empty() {
        return Err(Error::Config("the remainder run needs a nonempty schedule".into()));
    }
    let mut rows = Vec::with_capacity(cfg.schedule.len());
    for &n in &cfg.schedule {
        let m = n;
        let rs = replicate(cfg.reps, |rep| {
            let idx = schedule_index(n, rep);
            let x = cfg.p_measure(n, idx)?;
            let y = cfg.q.measure(m, cfg.seed, idx)?;
            let sol = solve(&cfg.cost, &x, &y, SolverOptions::default())?;
            let mut linear = 0.0;
            for (pt, w) in x.points().zip(x.weights()) {
                linear += w * phi(pt)?;
            }
            for (pt, w) in y.points().zip(y.weights()) {
                linear += w * psi(pt)?;
            }
            Ok(sol.plan.objective - linear)
        })?;
        let (mean, var) = unbiased_variance(&rs);
        rows.push(RemainderRow {
            n,
            m: if cfg.q.is_sampled() || matches!(cfg.q, Target::QuantileGrid(_)) { m } else { 0 },
            reps: cfg.reps,
            mean_remainder: mean,
            variance: var,
            scaled_variance: n as f64 * var,
        });
    }
    let first = rows[0].scaled_variance;
    let last = rows[rows.len() - 1].scaled_variance;
    let diagnostic_only = cfg.laws_coincide();
    Ok(RemainderTable {
        config: cfg.summary(),
        decay_ratio: (first > 0.0).then_some(last / first),
        diagnostic_only,
        note: if diagnostic_only {
            "P and Q are the same law; n Var(R_n) -> 0 is not asserted".to_string()
        } else {
            "decay thresholds are empirical choices, not theorem rates".to_string()
        },
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub n: usize,
    pub sup_error: f64,
    /// Square root of the density-weighted mean squared error on the grid.
    pub l2_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapStabilityRow {
    pub n: usize,
    /// `sup_x max_{ŷ ∈ argmin} |ŷ - T(x)|`.
    pub sup_error: f64,
    /// Grid point where the supremum is attained.
    pub worst_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub config: ConfigSummary,
    pub grid_points: usize,
    pub anchor: f64,
    pub potential: Vec<StabilityRow>,
    pub map: Vec<MapStabilityRow>,
    pub note: String,
}

impl StabilityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,potential_sup_error,potential_l2_error,map_sup_error\n");
        for (p, m) in self.potential.iter().zip(&self.map) {
            out.push_str(&format!("{},{},{},{}\n", p.n, fmt17(p.sup_error), fmt17(p.l2_error), fmt17(m.sup_error)));
        }
        out
    }
}

struct StabilitySolve {
    n: usize,
    target: DiscreteMeasure,
    pair: CanonicalPair,
    tau: f64,
}

fn stability_solves(cfg: &ExperimentConfig) -> Result<Vec<StabilitySolve>> {
    cfg.validate()?;
    if cfg.cost.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: cfg.cost.dim() });
    }
    if cfg.grid.is_empty() || cfg.schedule.is_empty() {
        return Err(Error::Config("stability runs need a grid and a schedule".into()));
    }
    if let Ok(law) = Distribution1D::from_generator(&cfg.p_law.generator) {
        let (lo, hi) = law.support();
        if let Some(g) = cfg.grid.iter().find(|g| !(**g >= lo && **g <= hi)) {
            return Err(Error::Config(format!("grid point {g} lies outside the support [{lo}, {hi}] of P")));
        }
    }
    cfg.schedule
        .iter()
        .map(|&n| {
            let idx = schedule_index(n, 0);
            let x = cfg.p_measure(n, idx)?;
            let y = cfg.q.measure(n, cfg.seed, idx)?;
            let (sol, pair) = solve_canonical(&cfg.cost, &x, &y)?;
            Ok(StabilitySolve { n, target: y, tau: default_tau(&sol.costs), pair })
        })
        .collect()
}

fn grid_weights(cfg: &ExperimentConfig) -> Vec<f64> {
    let dens: Vec<f64> = match Distribution1D::from_generator(&cfg.p_law.generator) {
        Ok(law) => cfg.grid.iter().map(|&g| law.pdf(g).unwrap_or(1.0)).collect(),
        Err(_) => vec![1.0; cfg.grid.len()],
    };
    let total: f64 = dens.iter().sum();
    if total > 0.0 {
        dens.iter().map(|d| d / total).collect()
    } else {
        vec![1.0 / cfg.grid.len() as f64; cfg.grid.len()]
    }
}

fn potential_rows(
    cfg: &ExperimentConfig,
    solves: &[StabilitySolve],
    phi: &dyn Fn(f64) -> Result<f64>,
    anchor: usize,
) -> Result<Vec<StabilityRow>> {
    let weights = grid_weights(cfg);
    let p0 = cfg.grid[anchor];
    let truth: Vec<f64> = cfg.grid.iter().map(|&g| phi(g)).collect::<Result<_>>()?;
    let truth0 = phi(p0)?;
    solves
        .iter()
        .map(|s| {
            let ext = |x: f64| c_transform_at(&cfg.cost, &s.pair.v, &s.target, &[x], 0.0).map(|r| r.0);
            let ext0 = ext(p0)?;
            let mut sup: f64 = 0.0;
            let mut l2 = 0.0;
            for ((&g, t), w) in cfg.grid.iter().zip(&truth).zip(&weights) {
                let e = (ext(g)? - ext0) - (t - truth0);
                sup = sup.max(e.abs());
                l2 += w * e * e;
            }
            Ok(StabilityRow { n: s.n, sup_error: sup, l2_error: l2.sqrt() })
        })
        .collect()
}

fn map_rows(
    cfg: &ExperimentConfig,
    solves: &[StabilitySolve],
    map: &dyn Fn(f64) -> Result<f64>,
) -> Result<Vec<MapStabilityRow>> {
    let truth: Vec<f64> = cfg.grid.iter().map(|&g| map(g)).collect::<Result<_>>()?;
    solves
        .iter()
        .map(|s| {
            let mut row = MapStabilityRow { n: s.n, sup_error: 0.0, worst_x: cfg.grid[0] };
            for (&g, &t) in cfg.grid.iter().zip(&truth) {
                let (_, argmin) = c_transform_at(&cfg.cost, &s.pair.v, &s.target, &[g], s.tau)?;
                let err = argmin
                    .iter()
                    .map(|&j| (s.target.point(j)[0] - t).abs())
                    .fold(0.0, f64::max);
                if err > row.sup_error {
                    row.sup_error = err;
                    row.worst_x = g;
                }
            }
            Ok(row)
        })
        .collect()
}

/// Sup and weighted L² distance on the grid between the c-transform
/// extension of the empirical Q-side potential and the oracle `φ`, both
/// anchored at `grid[anchor]`.
pub fn stability_diagnostic(
    cfg: &ExperimentConfig,
    phi: &dyn Fn(f64) -> Result<f64>,
    anchor: usize,
) -> Result<Vec<StabilityRow>> {
    check_anchor(cfg, anchor)?;
    let solves = stability_solves(cfg)?;
    potential_rows(cfg, &solves, phi, anchor)
}

/// Sup over the grid of the distance between the discrete
/// superdifferential and the oracle map.
pub fn map_stability_diagnostic(
    cfg: &ExperimentConfig,
    map: &dyn Fn(f64) -> Result<f64>,
) -> Result<Vec<MapStabilityRow>> {
    let solves = stability_solves(cfg)?;
    map_rows(cfg, &solves, map)
}

/// Both diagnostics from one solve per schedule size.
pub fn stability_report(
    cfg: &ExperimentConfig,
    phi: &dyn Fn(f64) -> Result<f64>,
    map: &dyn Fn(f64) -> Result<f64>,
    anchor: usize,
) -> Result<StabilityReport> {
    check_anchor(cfg, anchor)?;
    let solves = stability_solves(cfg)?;
    Ok(StabilityReport {
        config: cfg.summary(),
        grid_points: cfg.grid.len(),
        anchor: cfg.grid[anchor],
        potential: potential_rows(cfg, &solves, phi, anchor)?,
        map: map_rows(cfg, &solves, map)?,
        note: "one solve per n; tolerances on these curves are empirical".to_string(),
    })
}

fn check_anchor(cfg: &ExperimentConfig, anchor: usize) -> Result<()> {
    if anchor >= cfg.grid.len() {
        return Err(Error::Config(format!("anchor index {anchor} is outside the {}-point grid", cfg.grid.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(cfg: &mut ExperimentConfig) {
        cfg.n = 40;
        cfg.m = 40;
        cfg.reps = 24;
        cfg.schedule = vec![20, 40];
        cfg.grid = linspace(0.1, 0.9, 9);
    }

    #[test]
    fn degenerate_control_gives_zero_statistics() {
        let mut cfg = ExperimentConfig::shift_benchmark();
        small(&mut cfg);
        cfg.q = Target::Sample(cfg.p_law.clone());
        let r = simulate_clt(&cfg, 0.0).unwrap();
        assert!(r.reps.iter().all(|x| x.statistic == 0.0));
        assert_eq!(r.ks_distance, None);
    }

    #[test]
    fn runs_are_bit_reproducible() {
        let mut cfg = ExperimentConfig::shift_benchmark();
        small(&mut cfg);
        let a = simulate_clt(&cfg, 1.0 / 12.0).unwrap();
        let b = simulate_clt(&cfg, 1.0 / 12.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.reps.len(), 24);
        assert!(a.ks_distance.unwrap() >= 0.0 && a.ks_distance.unwrap() <= 1.0);
        assert_eq!(a.to_csv().lines().count(), 25);
    }

    #[test]
    fn remainder_ignores_constants_in_the_potential() {
        let mut cfg = ExperimentConfig::shift_benchmark();
        small(&mut cfg);
        let phi = |x: &[f64]| Ok(-x[0]);
        let psi = |y: &[f64]| Ok(y[0] - 0.25);
        let phi_shift = |x: &[f64]| Ok(-x[0] + 3.0);
        let a = remainder_variance(&cfg, &phi, &psi).unwrap();
        let b = remainder_variance(&cfg, &phi_shift, &psi).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert!((ra.variance - rb.variance).abs() <= 1e-12 * ra.variance.max(1e-300));
        }
        assert!(!a.diagnostic_only);
    }

    #[test]
    fn identical_grids_are_self_consistent() {
        let mut cfg = ExperimentConfig::shift_benchmark();
        small(&mut cfg);
        cfg.p_grid = true;
        cfg.q = Target::QuantileGrid(cfg.p_law.generator.clone());
        cfg.schedule = vec![200];
        assert!(cfg.laws_coincide());
        let r = stability_report(&cfg, &|_| Ok(0.0), &|x| Ok(x), 4).unwrap();
        // Off the atoms the discrete map moves x to a neighbouring atom.
        assert!(r.map[0].sup_error <= 1.0 / 200.0 + 1e-12, "{:?}", r.map);
        assert!(r.potential[0].sup_error <= 0.01, "{:?}", r.potential);
    }

    #[test]
    fn ks_distance_of_normal_quantiles_is_small() {
        let z: Vec<f64> = (0..1000).map(|i| normal::quantile((i as f64 + 0.5) / 1000.0)).collect();
        assert!(ks_distance_normal(&z) <= 0.0005 + 1e-12);
    }
}
