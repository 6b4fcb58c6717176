//! Plug-in limiting variances, Wald intervals for empirical transport
//! costs, Efron–Stein variance bounds and the `W_p` delta method.
//!
//! All intervals are centered at the observed statistic and target its
//! expectation `E T_c(P_n, Q)`, not the population cost `T_c(P, Q)`; the
//! bias between the two is not estimated.
//!
//! Two-sample intervals weight the two plug-in variances with
//! `λ̂ = n / (n + m)`, so that `(1 - λ̂) σ̂²_P + λ̂ σ̂²_Q` estimates the limit
//! variance of `√(nm / (n + m)) T̂`.

use serde::Serialize;

use crate::cost::{CostKind, CostSpec};
use crate::duality::{canonical_potentials, CanonicalPair, PotentialVector};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::normal;
use crate::report::extended_f64;
use crate::solver::{solve, Solution, SolverOptions};

pub const CENTER_NOTE: &str = "CI targets E T_c(P_n,Q), not T_c(P,Q)";
const LAMBDA_NOTE: &str = "lambda = n/(n+m) weights the P-side and Q-side plug-in variances";
const DEGENERATE_WARNING: &str = "plug-in variance is zero; the interval collapses to the statistic";

/// Default lower limit on `Ŵ_p` below which the delta method is refused.
pub const DEFAULT_SEPARATION: f64 = 1e-6;

/// Probes used when a custom cost is checked before inference.
const VALIDATION_PROBES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    OneSample,
    TwoSample,
    Wasserstein,
}

/// A confidence interval for an empirical transport cost or distance.
///
/// `sigma_sq_hat` is the plug-in limit variance on the theorem's scale:
/// `σ̂²` (one sample), `v̂` (two samples) or `β̂²` (`W_p`). The standard error
/// divides it by the matching rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub kind: ReportKind,
    pub statistic: f64,
    pub sigma_sq_hat: f64,
    pub stderr: f64,
    pub ci: [f64; 2],
    pub alpha: f64,
    pub n: usize,
    /// Zero for one-sample reports.
    pub m: usize,
    pub lambda: Option<f64>,
    pub sigma_sq_p: Option<f64>,
    pub sigma_sq_q: Option<f64>,
    /// `T̂` behind a `W_p` report.
    pub transport_cost: Option<f64>,
    #[serde(serialize_with = "extended_opt")]
    pub es_bound: Option<f64>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub center_note: String,
}

fn extended_opt<S: serde::Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => extended_f64(v, s),
        None => s.serialize_none(),
    }
}

impl CltReport {
    pub fn width(&self) -> f64 {
        self.ci[1] - self.ci[0]
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci[0] <= value && value <= self.ci[1]
    }
}

/// Weighted variance of a potential under the weights of its side.
pub fn sigma_sq_plugin(potential: &PotentialVector, weights: &[f64]) -> Result<f64> {
    if potential.len() != weights.len() || weights.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            got: potential.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    let mean = potential.values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total;
    // Spread at rounding level is reported as an exact zero.
    let scale = potential.values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let spread = potential.values.iter().fold(0.0_f64, |a, v| a.max((v - mean).abs()));
    if spread <= 1e-12 * scale {
        return Ok(0.0);
    }
    let var = potential
        .values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - mean) * (v - mean))
        .sum::<f64>()
        / total;
    Ok(var.max(0.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn check_sample(name: &str, x: &DiscreteMeasure) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::InvalidInput(format!("{name} needs at least 2 points, got {}", x.len())));
    }
    if !x.has_uniform_weights() {
        return Err(Error::InvalidInput(format!("{name} must carry uniform weights")));
    }
    Ok(())
}

/// Power costs with `p > 1` satisfy the assumptions by construction; custom
/// costs are probed.
fn ensure_valid(spec: &CostSpec) -> Result<()> {
    if let CostKind::Custom { .. } = spec.kind() {
        spec.validate_assumptions(VALIDATION_PROBES, 0)?;
    }
    Ok(())
}

/// Solves `P_n → Q` and returns the solution with its canonical potentials.
pub fn solve_canonical(
    spec: &CostSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<(Solution, CanonicalPair)> {
    let sol = solve(spec, p, q, SolverOptions::default())?;
    let pair = canonical_potentials(&sol, p)?;
    Ok((sol, pair))
}

fn interval(statistic: f64, stderr: f64, alpha: f64) -> [f64; 2] {
    let half = normal::two_sided_z(alpha) * stderr;
    [statistic - half, statistic + half]
}

/// One-sample interval for `T_c(P_n, Q)` with a discrete `Q`.
pub fn one_sample_ci(
    spec: &CostSpec,
    x: &DiscreteMeasure,
    q: &DiscreteMeasure,
    alpha: f64,
) -> Result<CltReport> {
    check_alpha(alpha)?;
    check_sample("the P sample", x)?;
    ensure_valid(spec)?;
    let (sol, pair) = solve_canonical(spec, x, q)?;
    let es = efron_stein_bound(spec, x, q, &default_pairs(spec))?;
    one_sample_report(&sol, &pair, x, alpha, Some(es.bound))
}

/// [`one_sample_ci`] from an existing solution.
pub fn one_sample_report(
    sol: &Solution,
    pair: &CanonicalPair,
    x: &DiscreteMeasure,
    alpha: f64,
    es_bound: Option<f64>,
) -> Result<CltReport> {
    check_alpha(alpha)?;
    let n = x.len();
    let statistic = sol.plan.objective;
    let sigma_sq = sigma_sq_plugin(&pair.u, x.weights())?;
    let stderr = (sigma_sq / n as f64).sqrt();
    let mut warnings = Vec::new();
    if sigma_sq == 0.0 && n > 1 {
        warnings.push(DEGENERATE_WARNING.to_string());
    }
    Ok(CltReport {
        kind: ReportKind::OneSample,
        statistic,
        sigma_sq_hat: sigma_sq,
        stderr,
        ci: interval(statistic, stderr, alpha),
        alpha,
        n,
        m: 0,
        lambda: None,
        sigma_sq_p: Some(sigma_sq),
        sigma_sq_q: None,
        transport_cost: None,
        es_bound,
        warnings,
        notes: Vec::new(),
        center_note: CENTER_NOTE.to_string(),
    })
}

/// Two-sample interval for `T_c(P_n, Q_m)`.
pub fn two_sample_ci(
    spec: &CostSpec,
    x: &DiscreteMeasure,
    y: &DiscreteMeasure,
    alpha: f64,
) -> Result<CltReport> {
    check_alpha(alpha)?;
    check_sample("the P sample", x)?;
    check_sample("the Q sample", y)?;
    ensure_valid(spec)?;
    let (sol, pair) = solve_canonical(spec, x, y)?;
    let es = efron_stein_two_sample(spec, x, y, &default_pairs(spec))?;
    two_sample_report(&sol, &pair, x, y, alpha, Some(es.bound))
}

/// [`two_sample_ci`] from an existing solution.
pub fn two_sample_report(
    sol: &Solution,
    pair: &CanonicalPair,
    x: &DiscreteMeasure,
    y: &DiscreteMeasure,
    alpha: f64,
    es_bound: Option<f64>,
) -> Result<CltReport> {
    check_alpha(alpha)?;
    let (n, m) = (x.len(), y.len());
    let lambda = n as f64 / (n + m) as f64;
    let sp = sigma_sq_plugin(&pair.u, x.weights())?;
    let sq = sigma_sq_plugin(&pair.v, y.weights())?;
    let v = (1.0 - lambda) * sp + lambda * sq;
    let stderr = (v * (n + m) as f64 / (n as f64 * m as f64)).sqrt();
    let statistic = sol.plan.objective;
    let mut warnings = Vec::new();
    if v == 0.0 {
        warnings.push(DEGENERATE_WARNING.to_string());
    }
    Ok(CltReport {
        kind: ReportKind::TwoSample,
        statistic,
        sigma_sq_hat: v,
        stderr,
        ci: interval(statistic, stderr, alpha),
        alpha,
        n,
        m,
        lambda: Some(lambda),
        sigma_sq_p: Some(sp),
        sigma_sq_q: Some(sq),
        transport_cost: None,
        es_bound,
        warnings,
        notes: vec![LAMBDA_NOTE.to_string()],
        center_note: CENTER_NOTE.to_string(),
    })
}

/// Delta-method interval for `W_p = T̂^{1/p}` from two samples. Refused when
/// `Ŵ_p <= separation`, where the derivative of `t ↦ t^{1/p}` blows up.
pub fn wasserstein_ci(
    spec: &CostSpec,
    x: &DiscreteMeasure,
    y: &DiscreteMeasure,
    alpha: f64,
    separation: f64,
) -> Result<CltReport> {
    let p = spec
        .power_exponent()
        .ok_or_else(|| Error::Config("the W_p interval needs a power cost".into()))?;
    let base = two_sample_ci(spec, x, y, alpha)?;
    wasserstein_from_two_sample(&base, p, separation)
}

/// Turns a two-sample report into the `W_p` interval.
pub fn wasserstein_from_two_sample(base: &CltReport, p: f64, separation: f64) -> Result<CltReport> {
    let w = base.statistic.max(0.0).powf(1.0 / p);
    if w <= separation {
        return Err(Error::Separation(w));
    }
    let beta_sq = beta_sq(base.sigma_sq_hat, w, p);
    let (n, m) = (base.n as f64, base.m as f64);
    let stderr = (beta_sq * (n + m) / (n * m)).sqrt();
    let mut notes = base.notes.clone();
    notes.push("centering targets (E T_c(P_n,Q_m))^(1/p)".to_string());
    Ok(CltReport {
        kind: ReportKind::Wasserstein,
        statistic: w,
        sigma_sq_hat: beta_sq,
        stderr,
        ci: interval(w, stderr, base.alpha),
        transport_cost: Some(base.statistic),
        es_bound: None,
        notes,
        ..base.clone()
    })
}

/// `β² = v / (p W^{p-1})²`, the delta-method variance of `T^{1/p}`.
pub fn beta_sq(v: f64, w: f64, p: f64) -> f64 {
    let d = p * w.powf(p - 1.0);
    v / (d * d)
}

/// Hölder-conjugate exponents `1/q1 + 1/q2 = 1`; either may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderPair {
    #[serde(serialize_with = "extended_f64")]
    pub q1: f64,
    #[serde(serialize_with = "extended_f64")]
    pub q2: f64,
}

impl HolderPair {
    pub fn new(q1: f64, q2: f64) -> Result<Self> {
        let inv = |q: f64| if q.is_infinite() { 0.0 } else { 1.0 / q };
        if !(q1 >= 1.0 && q2 >= 1.0) || (inv(q1) + inv(q2) - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("({q1}, {q2}) is not a Hölder-conjugate pair")));
        }
        Ok(HolderPair { q1, q2 })
    }

    /// `(q, q / (q - 1))`.
    pub fn conjugate_of(q1: f64) -> Result<Self> {
        let q2 = if q1 == 1.0 { f64::INFINITY } else if q1.is_infinite() { 1.0 } else { q1 / (q1 - 1.0) };
        HolderPair::new(q1, q2)
    }
}

/// `(1, ∞)`, `(p, p/(p-1))`, `(2, 2)`, `(∞, 1)`, with `p = 2` for
/// non-power costs; duplicates removed.
pub fn default_pairs(spec: &CostSpec) -> Vec<HolderPair> {
    let p = spec.power_exponent().unwrap_or(2.0);
    let mut out: Vec<HolderPair> = Vec::new();
    for q1 in [1.0, p, 2.0, f64::INFINITY] {
        let pair = HolderPair::conjugate_of(q1).expect("q1 >= 1");
        if !out.iter().any(|o| o.q1 == pair.q1) {
            out.push(pair);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfronSteinTerm {
    pub pair: HolderPair,
    /// `(Ê|X - X'|^{2 q1})^{1/q1}`.
    #[serde(serialize_with = "extended_f64")]
    pub spread: f64,
    /// `(Ê|∇h(X - Y)|^{2 q2})^{1/q2}`.
    #[serde(serialize_with = "extended_f64")]
    pub gradient: f64,
    #[serde(serialize_with = "extended_f64")]
    pub value: f64,
}

/// Plug-in Efron–Stein bound on `n Var T_c(P_n, Q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfronSteinReport {
    pub terms: Vec<EfronSteinTerm>,
    /// Minimum over `terms`; `inf` when no term is finite.
    #[serde(serialize_with = "extended_f64")]
    pub bound: f64,
    /// Power costs: `(Ê|X-X'|^{2p})^{1/p} p² (Ê|X-Y|^{2p})^{(p-1)/p}`, the
    /// `(p, p/(p-1))` term written through moments of `|X - Y|`.
    #[serde(serialize_with = "extended_opt")]
    pub power_bound: Option<f64>,
    /// Power costs: `(Ê|X-X'|^{2p})^{1/p} (p Ê|X-Y|^{2p})^{p/(p-1)}`. Kept
    /// for comparison; its exponents do not follow from the Hölder step and
    /// it is not used as a bound.
    #[serde(serialize_with = "extended_opt")]
    pub power_bound_alt: Option<f64>,
}

/// Pairwise squared distances within a sample, with product weights;
/// diagonal excluded.
fn within_sq_distances(x: &DiscreteMeasure) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let mut d2 = Vec::with_capacity(n * (n - 1) / 2);
    let mut w = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        let xi = x.point(i);
        for j in (i + 1)..n {
            let s: f64 = xi.iter().zip(x.point(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            d2.push(s);
            w.push(x.weight(i) * x.weight(j));
        }
    }
    (d2, w)
}

/// `t^q`, exact and fast for small integer exponents.
fn pow_fast(t: f64, q: f64) -> f64 {
    if q == 1.0 {
        t
    } else if q == 2.0 {
        t * t
    } else if q.fract() == 0.0 && q.abs() <= 64.0 {
        t.powi(q as i32)
    } else {
        t.powf(q)
    }
}

/// `(Σ w t^q / Σ w)^{1/q}` for `t >= 0`; `max t` when `q = ∞`.
fn lq_norm(t: &[f64], w: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return t.iter().zip(w).filter(|(_, w)| **w > 0.0).map(|(t, _)| *t).fold(0.0, f64::max);
    }
    let total: f64 = w.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let s: f64 = t.iter().zip(w).map(|(t, w)| w * pow_fast(*t, q)).sum::<f64>() / total;
    let v = if q == 1.0 { s } else { s.powf(1.0 / q) };
    if v.is_finite() { v } else { f64::INFINITY }
}

struct CrossMoments {
    /// `|∇h(x_i - y_j)|²`.
    grad_sq: Vec<f64>,
    /// `|x_i - y_j|²`.
    dist_sq: Vec<f64>,
    weights: Vec<f64>,
}

fn cross_moments(spec: &CostSpec, x: &DiscreteMeasure, y: &DiscreteMeasure) -> Result<CrossMoments> {
    if x.dim() != y.dim() || x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: y.dim() });
    }
    let cap = x.len() * y.len();
    let (mut grad_sq, mut dist_sq, mut weights) = (Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap));
    let power = spec.power_exponent();
    let mut v = vec![0.0; x.dim()];
    for i in 0..x.len() {
        for j in 0..y.len() {
            for (k, vk) in v.iter_mut().enumerate() {
                *vk = x.point(i)[k] - y.point(j)[k];
            }
            let d2: f64 = v.iter().map(|a| a * a).sum();
            // |∇h(v)|² = p² |v|^{2(p-1)} for power costs.
            let g2 = match power {
                Some(p) => p * p * pow_fast(d2, p - 1.0),
                None => {
                    let g = spec.gradient_norm(&v)?;
                    g * g
                }
            };
            grad_sq.push(g2);
            dist_sq.push(d2);
            weights.push(x.weight(i) * y.weight(j));
        }
    }
    Ok(CrossMoments { grad_sq, dist_sq, weights })
}

fn side_report(spec: &CostSpec, spread_sq: &(Vec<f64>, Vec<f64>), cross: &CrossMoments, pairs: &[HolderPair]) -> EfronSteinReport {
    let terms: Vec<EfronSteinTerm> = pairs
        .iter()
        .map(|&pair| {
            let spread = lq_norm(&spread_sq.0, &spread_sq.1, pair.q1);
            let gradient = lq_norm(&cross.grad_sq, &cross.weights, pair.q2);
            let value = if spread == 0.0 || gradient == 0.0 { 0.0 } else { spread * gradient };
            EfronSteinTerm { pair, spread, gradient, value }
        })
        .collect();
    let bound = terms.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
    let (power_bound, power_bound_alt) = match spec.power_exponent() {
        Some(p) => {
            let spread = lq_norm(&spread_sq.0, &spread_sq.1, p);
            let total: f64 = cross.weights.iter().sum();
            let m2p = cross.dist_sq.iter().zip(&cross.weights).map(|(d, w)| w * pow_fast(*d, p)).sum::<f64>() / total;
            let derived = spread * p * p * m2p.powf((p - 1.0) / p);
            let printed = spread * (p * m2p).powf(p / (p - 1.0));
            let fin = |v: f64| if v.is_finite() { v } else { f64::INFINITY };
            (Some(fin(derived)), Some(fin(printed)))
        }
        None => (None, None),
    };
    EfronSteinReport { terms, bound, power_bound, power_bound_alt }
}

/// Plug-in bound on `n Var T_c(P_n, Q)` over the given Hölder pairs, with
/// `Ê` the U-statistic over distinct sample pairs for `X - X'` and the
/// product empirical measure for `X - Y`.
pub fn efron_stein_bound(
    spec: &CostSpec,
    x: &DiscreteMeasure,
    y: &DiscreteMeasure,
    pairs: &[HolderPair],
) -> Result<EfronSteinReport> {
    if x.len() < 2 {
        return Err(Error::InvalidInput("the Efron–Stein bound needs at least 2 sample points".into()));
    }
    if pairs.is_empty() {
        return Err(Error::Config("no Hölder pairs supplied".into()));
    }
    let cross = cross_moments(spec, x, y)?;
    Ok(side_report(spec, &within_sq_distances(x), &cross, pairs))
}

/// Two-sample bound on `nm/(n+m) Var T_c(P_n, Q_m)`: Efron–Stein applied to
/// both samples gives `(1 - λ) B_X + λ B_Y` with `λ = n / (n + m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSampleEfronStein {
    pub x_side: EfronSteinReport,
    pub y_side: EfronSteinReport,
    pub lambda: f64,
    #[serde(serialize_with = "extended_f64")]
    pub bound: f64,
}

pub fn efron_stein_two_sample(
    spec: &CostSpec,
    x: &DiscreteMeasure,
    y: &DiscreteMeasure,
    pairs: &[HolderPair],
) -> Result<TwoSampleEfronStein> {
    if x.len() < 2 || y.len() < 2 {
        return Err(Error::InvalidInput("the Efron–Stein bound needs at least 2 points per sample".into()));
    }
    if pairs.is_empty() {
        return Err(Error::Config("no Hölder pairs supplied".into()));
    }
    let cross = cross_moments(spec, x, y)?;
    let x_side = side_report(spec, &within_sq_distances(x), &cross, pairs);
    let y_side = side_report(spec, &within_sq_distances(y), &cross, pairs);
    let lambda = x.len() as f64 / (x.len() + y.len()) as f64;
    let bound = (1.0 - lambda) * x_side.bound + lambda * y_side.bound;
    Ok(TwoSampleEfronStein { x_side, y_side, lambda, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::SampleSource;
    use crate::oracle1d::Distribution1D;
    use crate::solver::Side;

    fn p2() -> CostSpec {
        CostSpec::power(2.0, 1).unwrap()
    }

    fn shift_samples(n: usize, m: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
        let x = SampleSource::new("unif:0:1".parse().unwrap(), "P").sample(n, seed, 0).unwrap();
        let y = SampleSource::new("unif:0.5:1.5".parse().unwrap(), "Q").sample(m, seed, 0).unwrap();
        (x, y)
    }

    #[test]
    fn plugin_variance_examples() {
        let c = PotentialVector::new(Side::P, vec![3.0; 4]).unwrap();
        assert_eq!(sigma_sq_plugin(&c, &[0.25; 4]).unwrap(), 0.0);
        let b = PotentialVector::new(Side::P, vec![0.0, 1.0]).unwrap();
        assert_eq!(sigma_sq_plugin(&b, &[0.5, 0.5]).unwrap(), 0.25);
        assert!(sigma_sq_plugin(&b, &[1.0]).is_err());
    }

    #[test]
    fn one_sample_against_a_point_mass() {
        let x = SampleSource::new("unif:-1:2".parse().unwrap(), "P").sample(50, 5, 0).unwrap();
        let q = DiscreteMeasure::dirac(&[0.0]).unwrap();
        let r = one_sample_ci(&p2(), &x, &q, 0.05).unwrap();
        let sq: Vec<f64> = x.coords().iter().map(|v| v * v).collect();
        let mean = sq.iter().sum::<f64>() / 50.0;
        let var = sq.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / 50.0;
        assert!((r.statistic - mean).abs() < 1e-12);
        assert!((r.sigma_sq_hat - var).abs() < 1e-10);
        assert!(r.ci[0] <= r.statistic && r.statistic <= r.ci[1]);
        assert_eq!(r.m, 0);
        assert_eq!(r.center_note, CENTER_NOTE);
    }

    #[test]
    fn identical_measures_give_degenerate_reports() {
        let (x, _) = shift_samples(30, 30, 1);
        let r = one_sample_ci(&p2(), &x, &x, 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.sigma_sq_hat, 0.0);
        assert_eq!(r.ci, [0.0, 0.0]);
        assert_eq!(r.warnings.len(), 1);
        let r = two_sample_ci(&p2(), &x, &x, 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.sigma_sq_hat, 0.0);
        assert!(matches!(
            wasserstein_ci(&p2(), &x, &x, 0.05, DEFAULT_SEPARATION),
            Err(Error::Separation(_))
        ));
    }

    #[test]
    fn one_sample_grid_target_variance() {
        let (x, _) = shift_samples(400, 2, 11);
        let q = Distribution1D::uniform(0.5, 1.5).unwrap().discretize(400).unwrap();
        let r = one_sample_ci(&p2(), &x, &q, 0.05).unwrap();
        assert!((0.06..=0.11).contains(&r.sigma_sq_hat), "{}", r.sigma_sq_hat);
    }

    #[test]
    fn two_sample_lambda_and_mixture() {
        let (x, y) = shift_samples(60, 60, 2);
        let r = two_sample_ci(&p2(), &x, &y, 0.05).unwrap();
        assert_eq!(r.lambda, Some(0.5));
        let mix = 0.5 * (r.sigma_sq_p.unwrap() + r.sigma_sq_q.unwrap());
        assert!((r.sigma_sq_hat - mix).abs() < 1e-15);
        let (x, y) = shift_samples(30, 90, 2);
        let r = two_sample_ci(&p2(), &x, &y, 0.05).unwrap();
        assert_eq!(r.lambda, Some(0.25));
        let half = (r.ci[1] - r.ci[0]) / 2.0;
        let expected = 1.959963984540054 * (r.sigma_sq_hat * 120.0 / 2700.0).sqrt();
        assert!((half - expected).abs() < 1e-12);
    }

    #[test]
    fn beta_formula_instantiation() {
        assert!((beta_sq(0.04, 1.0, 2.0) - 0.01).abs() < 1e-15);
        assert!((beta_sq(1.0 / 12.0, 0.5, 2.0) - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn wasserstein_ci_on_the_shift_benchmark() {
        let (x, y) = shift_samples(300, 300, 4);
        let r = wasserstein_ci(&p2(), &x, &y, 0.05, DEFAULT_SEPARATION).unwrap();
        assert!((r.statistic - 0.5).abs() < 0.1);
        assert!((r.transport_cost.unwrap().sqrt() - r.statistic).abs() < 1e-15);
        assert!((r.sigma_sq_hat - 1.0 / 12.0).abs() < 0.04);
        assert_eq!(r.kind, ReportKind::Wasserstein);
    }

    #[test]
    fn holder_pairs() {
        assert!(HolderPair::new(2.0, 2.0).is_ok());
        assert!(HolderPair::new(1.0, f64::INFINITY).is_ok());
        assert!(HolderPair::new(2.0, 3.0).is_err());
        assert!(HolderPair::new(0.5, -1.0).is_err());
        let d = default_pairs(&p2());
        assert_eq!(d.len(), 3);
        let d = default_pairs(&CostSpec::power(3.0, 1).unwrap());
        assert_eq!(d.len(), 4);
        assert!((d[1].q2 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn efron_stein_examples() {
        let x = DiscreteMeasure::uniform_1d(&[0.7; 5]).unwrap();
        let y = DiscreteMeasure::uniform_1d(&[0.0, 1.0]).unwrap();
        let r = efron_stein_bound(&p2(), &x, &y, &default_pairs(&p2())).unwrap();
        for t in &r.terms {
            assert_eq!(t.value, 0.0);
        }
        assert_eq!(r.bound, 0.0);

        let x = DiscreteMeasure::uniform_1d(&[0.0, 1.0, 3.0]).unwrap();
        let y = DiscreteMeasure::uniform_1d(&[0.5, 2.0]).unwrap();
        let pair = HolderPair::new(1.0, f64::INFINITY).unwrap();
        let r = efron_stein_bound(&p2(), &x, &y, &[pair]).unwrap();
        // Ê|X-X'|² over distinct pairs: (1 + 9 + 4) / 3; max |X-Y| = 2.5.
        let expected = (14.0 / 3.0) * 4.0 * 2.5 * 2.5;
        assert!((r.bound - expected).abs() < 1e-12);
    }

    #[test]
    fn power_bound_equals_the_matching_holder_term() {
        let (x, y) = shift_samples(40, 30, 8);
        for p in [1.5, 2.0, 3.0] {
            let spec = CostSpec::power(p, 1).unwrap();
            let r = efron_stein_bound(&spec, &x, &y, &[HolderPair::conjugate_of(p).unwrap()]).unwrap();
            let derived = r.power_bound.unwrap();
            assert!((derived - r.bound).abs() <= 1e-12 * derived, "p={p}");
            assert!(r.power_bound_alt.unwrap() > 0.0);
        }
    }

    #[test]
    fn serialized_report_keeps_field_order() {
        let (x, y) = shift_samples(10, 10, 1);
        let r = two_sample_ci(&p2(), &x, &y, 0.1).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let keys = ["\"kind\"", "\"statistic\"", "\"sigma_sq_hat\"", "\"stderr\"", "\"ci\"", "\"lambda\"", "\"es_bound\"", "\"center_note\""];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }
}
