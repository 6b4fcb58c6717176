//! One-dimensional ground truth.
//!
//! On the line every convex cost is optimally transported by the monotone
//! rearrangement `T = G⁻¹ ∘ F`, and the transport cost is the integral of
//! `h(F⁻¹(u) - G⁻¹(u))` over `u ∈ (0, 1)`. This module evaluates those
//! quantities independently of the discrete solver: exactly for pairs of
//! empirical laws, and by composite Gauss–Legendre quadrature otherwise.
//!
//! The P-side potential is reconstructed from the first-order condition
//! `φ'(x) = h'(x - T(x))` and anchored at a chosen `x0`.
//!
//! At an atom of an empirical `F` the map is set-valued; the midpoint of the
//! jump `(F(x-) + F(x)) / 2` is used to pick a single value.

use crate::cost::CostSpec;
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, Generator};
use crate::normal;
use crate::quadrature::GaussLegendre;

/// Half-width, in standard deviations, of the range integrated for
/// Gaussian laws. The neglected tail mass is below 1e-32.
const GAUSSIAN_SPAN: f64 = 12.0;
const REL_TOL: f64 = 1e-10;
const POTENTIAL_REL_TOL: f64 = 1e-9;
const ABS_TOL: f64 = 1e-15;

/// A law on the real line with CDF and quantile function.
#[derive(Debug, Clone)]
pub enum Distribution1D {
    Uniform { a: f64, b: f64 },
    Gaussian { mu: f64, sigma: f64 },
    /// Sorted atoms with cumulative weights; the last cumulative weight is 1.
    Empirical { points: Vec<f64>, cumulative: Vec<f64> },
}

impl Distribution1D {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Config(format!("uniform law requires a < b, got ({a}, {b})")));
        }
        Ok(Distribution1D::Uniform { a, b })
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Config(format!("gaussian law requires finite mean and sd > 0, got ({mu}, {sigma})")));
        }
        Ok(Distribution1D::Gaussian { mu, sigma })
    }

    /// Atoms with the given weights (normalized), sorted by position.
    pub fn empirical(points: &[f64], weights: &[f64]) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidInput("empirical law needs matching nonempty points and weights".into()));
        }
        if points.iter().any(|x| !x.is_finite()) || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput("empirical law needs finite points and positive weights".into()));
        }
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&a, &b| points[a].total_cmp(&points[b]));
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(points.len());
        for &k in &idx {
            acc += weights[k] / total;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Distribution1D::Empirical {
            points: idx.iter().map(|&k| points[k]).collect(),
            cumulative,
        })
    }

    /// The point mass at `x`.
    pub fn atom(x: f64) -> Result<Self> {
        Distribution1D::empirical(&[x], &[1.0])
    }

    pub fn from_measure(m: &DiscreteMeasure) -> Result<Self> {
        if m.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: m.dim() });
        }
        Distribution1D::empirical(m.coords(), m.weights())
    }

    /// The law of a one-dimensional uniform, Gaussian or shifted generator.
    pub fn from_generator(g: &Generator) -> Result<Self> {
        match g {
            Generator::Uniform { lo, hi } if lo.len() == 1 => Distribution1D::uniform(lo[0], hi[0]),
            Generator::Gaussian { mean, sd } if mean.len() == 1 => Distribution1D::gaussian(mean[0], sd[0]),
            Generator::Shift { base, offset } if offset.len() == 1 => {
                Ok(Distribution1D::from_generator(base)?.shifted(offset[0]))
            }
            other => Err(Error::Config(format!(
                "no one-dimensional closed-form law for generator '{other}'"
            ))),
        }
    }

    /// The law of `X + t`.
    pub fn shifted(&self, t: f64) -> Self {
        match self {
            Distribution1D::Uniform { a, b } => Distribution1D::Uniform { a: a + t, b: b + t },
            Distribution1D::Gaussian { mu, sigma } => {
                Distribution1D::gaussian(mu + t, *sigma).expect("shift keeps sigma valid")
            }
            Distribution1D::Empirical { points, cumulative } => Distribution1D::Empirical {
                points: points.iter().map(|x| x + t).collect(),
                cumulative: cumulative.clone(),
            },
        }
    }

    pub fn is_empirical(&self) -> bool {
        matches!(self, Distribution1D::Empirical { .. })
    }

    /// Closed support; `(-inf, inf)` for Gaussians and the atom hull for
    /// empirical laws.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Distribution1D::Uniform { a, b } => (*a, *b),
            Distribution1D::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Distribution1D::Empirical { points, .. } => (points[0], *points.last().unwrap()),
        }
    }

    /// Finite range used for integration against the law.
    fn integration_range(&self) -> (f64, f64) {
        match self {
            Distribution1D::Gaussian { mu, sigma } => {
                (mu - GAUSSIAN_SPAN * sigma, mu + GAUSSIAN_SPAN * sigma)
            }
            _ => self.support(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Distribution1D::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Distribution1D::Gaussian { mu, sigma } => normal::cdf((x - mu) / sigma),
            Distribution1D::Empirical { points, cumulative } => {
                let k = points.partition_point(|&p| p <= x);
                if k == 0 {
                    0.0
                } else {
                    cumulative[k - 1]
                }
            }
        }
    }

    /// `F(x)` off the atoms; the midpoint of the jump on an atom.
    pub fn mid_cdf(&self, x: f64) -> f64 {
        match self {
            Distribution1D::Empirical { points, cumulative } => {
                let hi = points.partition_point(|&p| p <= x);
                let lo = points.partition_point(|&p| p < x);
                let f_hi = if hi == 0 { 0.0 } else { cumulative[hi - 1] };
                let f_lo = if lo == 0 { 0.0 } else { cumulative[lo - 1] };
                0.5 * (f_lo + f_hi)
            }
            _ => self.cdf(x),
        }
    }

    /// Left-continuous inverse `inf {x : F(x) >= u}`.
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            Distribution1D::Uniform { a, b } => a + (b - a) * u.clamp(0.0, 1.0),
            Distribution1D::Gaussian { mu, sigma } => mu + sigma * normal::quantile(u),
            Distribution1D::Empirical { points, cumulative } => {
                let k = cumulative.partition_point(|&c| c < u);
                points[k.min(points.len() - 1)]
            }
        }
    }

    /// Survival function `1 - F(x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        match self {
            Distribution1D::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            Distribution1D::Gaussian { mu, sigma } => normal::sf((x - mu) / sigma),
            Distribution1D::Empirical { .. } => 1.0 - self.cdf(x),
        }
    }

    /// `F⁻¹(1 - s)`, accurate for small `s`.
    pub fn upper_quantile(&self, s: f64) -> f64 {
        match self {
            Distribution1D::Uniform { a, b } => b - (b - a) * s.clamp(0.0, 1.0),
            Distribution1D::Gaussian { mu, sigma } => mu - sigma * normal::quantile(s),
            Distribution1D::Empirical { .. } => self.quantile(1.0 - s),
        }
    }

    /// `G⁻¹(F(x))` for `G = target`, evaluated through the upper tail above
    /// the median so that Gaussian tails do not saturate.
    pub fn map_to(&self, target: &Distribution1D, x: f64) -> f64 {
        let u = self.mid_cdf(x);
        if u <= 0.5 || self.is_empirical() {
            target.quantile(u)
        } else {
            target.upper_quantile(self.sf(x))
        }
    }

    /// Density for continuous laws.
    pub fn pdf(&self, x: f64) -> Option<f64> {
        match self {
            Distribution1D::Uniform { a, b } => Some(if x >= *a && x <= *b { 1.0 / (b - a) } else { 0.0 }),
            Distribution1D::Gaussian { mu, sigma } => Some(normal::pdf((x - mu) / sigma) / sigma),
            Distribution1D::Empirical { .. } => None,
        }
    }

    /// Interior cumulative weights of an empirical law.
    fn jumps(&self) -> &[f64] {
        match self {
            Distribution1D::Empirical { cumulative, .. } => &cumulative[..cumulative.len() - 1],
            _ => &[],
        }
    }

    /// `k` points at the midpoint quantiles `(i + 1/2) / k`, equal weights.
    pub fn discretize(&self, k: usize) -> Result<DiscreteMeasure> {
        if k == 0 {
            return Err(Error::InvalidInput("discretization needs at least one point".into()));
        }
        let pts: Vec<f64> = (0..k).map(|i| self.quantile((i as f64 + 0.5) / k as f64)).collect();
        DiscreteMeasure::uniform_1d(&pts)
    }

    fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.support();
        x.is_finite() && x >= lo && x <= hi
    }
}

fn require_1d(spec: &CostSpec) -> Result<()> {
    if spec.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: spec.dim() });
    }
    Ok(())
}

/// Integrates `f` against the continuous law `law`, splitting at `breaks`.
fn integrate_against<F: FnMut(f64) -> f64>(
    law: &Distribution1D,
    breaks: &[f64],
    gl: &GaussLegendre,
    rel_tol: f64,
    mut f: F,
) -> Result<f64> {
    let (lo, hi) = law.integration_range();
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);
    let mut g = |x: f64| f(x) * law.pdf(x).unwrap_or(0.0);
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += gl.adaptive(w[0], w[1], rel_tol, ABS_TOL, &mut g)?;
    }
    if !total.is_finite() {
        return Err(Error::Numerical("non-finite quadrature".into()));
    }
    Ok(total)
}

/// `∫₀¹ h(F⁻¹(u) - G⁻¹(u)) du`, the optimal transport cost between two laws
/// on the line.
pub fn quantile_cost(
    spec: &CostSpec,
    x: &Distribution1D,
    y: &Distribution1D,
    quad_points: usize,
) -> Result<f64> {
    require_1d(spec)?;
    let h = |t: f64| spec.h(&[t]);
    match (x, y) {
        (
            Distribution1D::Empirical { points: xp, cumulative: xc },
            Distribution1D::Empirical { points: yp, cumulative: yc },
        ) => {
            // Exact integral over the merged quantile partition.
            let (mut i, mut j) = (0, 0);
            let mut prev = 0.0;
            let mut total = 0.0;
            while i < xp.len() && j < yp.len() {
                let next = xc[i].min(yc[j]);
                total += (next - prev) * h(xp[i] - yp[j]);
                prev = next;
                if xc[i] <= next {
                    i += 1;
                }
                if yc[j] <= next {
                    j += 1;
                }
            }
            Ok(total)
        }
        (Distribution1D::Empirical { .. }, _) => {
            let gl = GaussLegendre::new(quad_points);
            let breaks: Vec<f64> = x.jumps().iter().map(|&u| y.quantile(u)).collect();
            integrate_against(y, &breaks, &gl, REL_TOL, |t| h(y.map_to(x, t) - t))
        }
        _ => {
            let gl = GaussLegendre::new(quad_points);
            let breaks: Vec<f64> = y.jumps().iter().map(|&u| x.quantile(u)).collect();
            integrate_against(x, &breaks, &gl, REL_TOL, |s| h(s - x.map_to(y, s)))
        }
    }
}

/// `T(x) = G⁻¹(F(x))`.
pub fn monotone_map(x_law: &Distribution1D, y_law: &Distribution1D, x: f64) -> Result<f64> {
    if !x_law.contains(x) {
        let (lo, hi) = x_law.support();
        return Err(Error::InvalidInput(format!("{x} lies outside the support [{lo}, {hi}]")));
    }
    Ok(x_law.map_to(y_law, x))
}

/// The anchored P-side Kantorovich potential between two laws on the line.
#[derive(Debug, Clone)]
pub struct Potential1D {
    spec: CostSpec,
    x_law: Distribution1D,
    y_law: Distribution1D,
    x0: f64,
    /// Internal integration origin; `φ(x) = Φ(x) - Φ(x0)` with `Φ(r) = 0`.
    reference: f64,
    offset: f64,
    breaks: Vec<f64>,
    gl: GaussLegendre,
    /// The evaluation grid passed at construction.
    pub grid: Vec<f64>,
    /// `φ` on `grid`.
    pub values: Vec<f64>,
}

impl Potential1D {
    pub fn anchor_point(&self) -> f64 {
        self.x0
    }

    fn slope(&self, s: f64) -> f64 {
        let t = self.x_law.map_to(&self.y_law, s);
        self.spec.derivative_1d(s - t).unwrap_or(f64::NAN)
    }

    /// `φ(x) = ∫_{x0}^{x} h'(s - T(s)) ds`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.x_law.contains(x) {
            let (lo, hi) = self.x_law.support();
            return Err(Error::InvalidInput(format!("{x} lies outside the support [{lo}, {hi}]")));
        }
        Ok(self.relative_to_reference(x)? - self.offset)
    }

    fn relative_to_reference(&self, x: f64) -> Result<f64> {
        self.integral(self.reference, x, ABS_TOL)
    }

    /// `∫_a^b h'(s - T(s)) ds`, split at the breakpoints.
    fn integral(&self, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
        let (lo, hi, sign) = if b >= a { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut edges = vec![lo];
        edges.extend(self.breaks.iter().copied().filter(|b| *b > lo && *b < hi));
        edges.push(hi);
        let mut f = |s: f64| self.slope(s);
        let mut total = 0.0;
        for w in edges.windows(2) {
            total += self.gl.adaptive(w[0], w[1], POTENTIAL_REL_TOL, abs_tol, &mut f)?;
        }
        Ok(sign * total)
    }

    /// The c-conjugate `ψ(y) = c(S(y), y) - φ(S(y))` with `S = F⁻¹ ∘ G`,
    /// the Q-side potential paired with `φ`.
    pub fn conjugate(&self, y: f64) -> Result<f64> {
        let s = self.y_law.map_to(&self.x_law, y);
        let (lo, hi) = self.x_law.support();
        let s = s.clamp(lo, hi);
        Ok(self.spec.h(&[s - y]) - self.eval(s)?)
    }
}

/// Builds the potential anchored at `x0` and tabulates it on `grid`.
pub fn potential_1d(
    spec: &CostSpec,
    x_law: &Distribution1D,
    y_law: &Distribution1D,
    x0: f64,
    grid: &[f64],
) -> Result<Potential1D> {
    require_1d(spec)?;
    if !x_law.contains(x0) {
        return Err(Error::InvalidInput(format!("anchor {x0} lies outside the support")));
    }
    if let Some(g) = grid.iter().find(|g| !x_law.contains(**g)) {
        let (lo, hi) = x_law.support();
        return Err(Error::InvalidInput(format!("grid point {g} lies outside the support [{lo}, {hi}]")));
    }
    let mut breaks: Vec<f64> = y_law.jumps().iter().map(|&u| x_law.quantile(u)).collect();
    if let Distribution1D::Empirical { points, .. } = x_law {
        breaks.extend_from_slice(points);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut pot = Potential1D {
        spec: spec.clone(),
        x_law: x_law.clone(),
        y_law: y_law.clone(),
        x0,
        reference: x_law.quantile(0.5),
        offset: 0.0,
        breaks,
        gl: GaussLegendre::new(8),
        grid: grid.to_vec(),
        values: Vec::new(),
    };
    pot.offset = pot.relative_to_reference(x0)?;
    pot.values = grid.iter().map(|&g| pot.eval(g)).collect::<Result<_>>()?;
    Ok(pot)
}

/// `Var_X(φ)`, the limiting variance of the one-sample statistic.
pub fn sigma_sq_1d(
    spec: &CostSpec,
    x_law: &Distribution1D,
    y_law: &Distribution1D,
    quad_points: usize,
) -> Result<f64> {
    let x0 = match x_law {
        Distribution1D::Uniform { a, b } => 0.5 * (a + b),
        Distribution1D::Gaussian { mu, .. } => *mu,
        Distribution1D::Empirical { points, .. } => points[0],
    };
    sigma_sq_1d_anchored(spec, x_law, y_law, quad_points, x0)
}

/// [`sigma_sq_1d`] with an explicit anchor; the result does not depend on it.
pub fn sigma_sq_1d_anchored(
    spec: &CostSpec,
    x_law: &Distribution1D,
    y_law: &Distribution1D,
    quad_points: usize,
    x0: f64,
) -> Result<f64> {
    let pot = potential_1d(spec, x_law, y_law, x0, &[])?;
    if let Distribution1D::Empirical { points, cumulative } = x_law {
        let weights: Vec<f64> = cumulative
            .iter()
            .scan(0.0, |prev, &c| {
                let w = c - *prev;
                *prev = c;
                Some(w)
            })
            .collect();
        let vals: Vec<f64> = points.iter().map(|&x| pot.eval(x)).collect::<Result<_>>()?;
        let mean: f64 = vals.iter().zip(&weights).map(|(v, w)| v * w).sum();
        let var = vals.iter().zip(&weights).map(|(v, w)| w * (v - mean) * (v - mean)).sum::<f64>();
        return Ok(var.max(0.0));
    }
    let gl = GaussLegendre::new(quad_points);
    // Values relative to the internal reference, memoized so each new node
    // integrates only from its nearest known neighbour. The anchor enters
    // as a constant and drops out of the variance.
    let knots = std::cell::RefCell::new(vec![(pot.reference, 0.0f64)]);
    let err = std::cell::RefCell::new(None);
    let phi = |x: f64| {
        let mut knots = knots.borrow_mut();
        let k = knots.partition_point(|(t, _)| *t < x);
        let nearest = match (k.checked_sub(1), knots.get(k)) {
            (Some(l), Some(r)) if (r.0 - x) < (x - knots[l].0) => *r,
            (Some(l), _) => knots[l],
            (None, Some(r)) => *r,
            (None, None) => unreachable!("knots start nonempty"),
        };
        if nearest.0 == x {
            return nearest.1;
        }
        match pot.integral(nearest.0, x, ABS_TOL * (1.0 + nearest.1.abs())) {
            Ok(v) => {
                let value = nearest.1 + v;
                knots.insert(k, (x, value));
                value
            }
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let breaks = pot.breaks.clone();
    let mean = integrate_against(x_law, &breaks, &gl, REL_TOL, phi);
    let var = mean.and_then(|mean| {
        integrate_against(x_law, &breaks, &gl, REL_TOL, |x| {
            let d = phi(x) - mean;
            d * d
        })
    });
    match (var, err.into_inner()) {
        (_, Some(e)) | (Err(e), None) => Err(e),
        (Ok(v), None) => Ok(v.max(0.0)),
    }
}
