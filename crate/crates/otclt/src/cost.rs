//! Translation-invariant costs `c(x, y) = h(x - y)` with strictly convex `h`.
//!
//! The built-in family is the power cost `h(v) = |v|^p` for `p > 1`
//! (Euclidean norm). Other convex costs can be registered programmatically
//! through [`CostSpec::custom`]; they must provide `h`, its gradient and the
//! inverse of the gradient explicitly.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stream;

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Which member of the cost family a [`CostSpec`] describes.
#[derive(Clone)]
pub enum CostKind {
    Power { p: f64 },
    Custom {
        name: String,
        h: ScalarFn,
        gradient: Option<VectorFn>,
        grad_conjugate: Option<VectorFn>,
    },
}

/// An immutable cost description shared freely across threads.
#[derive(Clone)]
pub struct CostSpec {
    kind: CostKind,
    dim: usize,
}

impl fmt::Debug for CostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CostKind::Power { p } => write!(f, "CostSpec(power:{p}, d={})", self.dim),
            CostKind::Custom { name, .. } => write!(f, "CostSpec(custom:{name}, d={})", self.dim),
        }
    }
}

impl CostSpec {
    /// `h(v) = |v|^p` on `R^dim`.
    pub fn power(p: f64, dim: usize) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::Config(format!(
                "power cost requires a finite exponent p > 1, got {p}"
            )));
        }
        if dim == 0 {
            return Err(Error::Config("cost dimension must be positive".into()));
        }
        Ok(CostSpec {
            kind: CostKind::Power { p },
            dim,
        })
    }

    /// A user supplied convex `h`. The gradient and inverse gradient are
    /// optional at construction; operations that need them report a
    /// configuration error when they are missing.
    pub fn custom<H>(
        name: impl Into<String>,
        dim: usize,
        h: H,
        gradient: Option<VectorFn>,
        grad_conjugate: Option<VectorFn>,
    ) -> Result<Self>
    where
        H: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::Config("cost dimension must be positive".into()));
        }
        Ok(CostSpec {
            kind: CostKind::Custom {
                name: name.into(),
                h: Arc::new(h),
                gradient,
                grad_conjugate,
            },
            dim,
        })
    }

    /// Same cost on a different ambient dimension.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("cost dimension must be positive".into()));
        }
        Ok(CostSpec {
            kind: self.kind.clone(),
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &CostKind {
        &self.kind
    }

    /// The exponent for power costs.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            CostKind::Power { p } => Some(p),
            CostKind::Custom { .. } => None,
        }
    }

    /// `power:<p>` or the custom name, as accepted on the command line.
    pub fn label(&self) -> String {
        match &self.kind {
            CostKind::Power { p } => format!("power:{p}"),
            CostKind::Custom { name, .. } => name.clone(),
        }
    }

    /// `h(v)`, without a dimension check.
    #[inline]
    pub fn h(&self, v: &[f64]) -> f64 {
        match &self.kind {
            CostKind::Power { p } => power_h(norm_sq(v), *p),
            CostKind::Custom { h, .. } => h(v),
        }
    }

    /// `c(x, y) = h(x - y)` without allocation or dimension checks.
    #[inline]
    pub fn cost_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match &self.kind {
            CostKind::Power { p } => {
                let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                power_h(sq, *p)
            }
            CostKind::Custom { h, .. } => {
                let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                h(&diff)
            }
        }
    }

    /// `c(x, y) = h(x - y)`.
    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(self.cost_unchecked(x, y))
    }

    /// `∇h(v)`. For power costs `∇h(0) = 0`, the subgradient element that
    /// keeps `1 < p < 2` well defined at the origin.
    pub fn gradient(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v.len())?;
        match &self.kind {
            CostKind::Power { p } => {
                let r = norm_sq(v).sqrt();
                if r == 0.0 {
                    return Ok(vec![0.0; v.len()]);
                }
                let scale = p * r.powf(p - 2.0);
                Ok(v.iter().map(|x| scale * x).collect())
            }
            CostKind::Custom { gradient, name, .. } => match gradient {
                Some(g) => Ok(g(v)),
                None => Err(Error::Config(format!(
                    "custom cost '{name}' has no gradient"
                ))),
            },
        }
    }

    /// `|∇h(v)|`, the quantity entering variance bounds.
    pub fn gradient_norm(&self, v: &[f64]) -> Result<f64> {
        match &self.kind {
            CostKind::Power { p } => {
                self.check_dim(v.len())?;
                let r = norm_sq(v).sqrt();
                Ok(if r == 0.0 { 0.0 } else { p * r.powf(p - 1.0) })
            }
            CostKind::Custom { .. } => Ok(norm_sq(&self.gradient(v)?).sqrt()),
        }
    }

    /// `∇h*(z)`, the unique `v` with `∇h(v) = z`.
    pub fn grad_conjugate(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(z.len())?;
        match &self.kind {
            CostKind::Power { p } => {
                let r = norm_sq(z).sqrt();
                if r == 0.0 {
                    return Ok(vec![0.0; z.len()]);
                }
                let scale = (r / p).powf(1.0 / (p - 1.0)) / r;
                Ok(z.iter().map(|x| scale * x).collect())
            }
            CostKind::Custom {
                grad_conjugate,
                name,
                ..
            } => match grad_conjugate {
                Some(g) => Ok(g(z)),
                None => Err(Error::Config(format!(
                    "custom cost '{name}' has no inverse gradient"
                ))),
            },
        }
    }

    /// One-dimensional derivative `h'(t)`.
    pub fn derivative_1d(&self, t: f64) -> Result<f64> {
        match &self.kind {
            CostKind::Power { p } => Ok(if t == 0.0 {
                0.0
            } else {
                p * t.abs().powf(p - 1.0) * t.signum()
            }),
            CostKind::Custom { gradient: Some(g), .. } => Ok(g(&[t])[0]),
            CostKind::Custom { .. } => self.with_dim(1)?.gradient(&[t]).map(|g| g[0]),
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    /// Numerical checks of strict convexity and superlinear growth on
    /// seeded random probes.
    ///
    /// Strict convexity is tested through the midpoint inequality on random
    /// pairs and on collinear pairs `(u, s u)`, which is where costs such as
    /// `|v|` degenerate. Growth is tested by checking that `h(R w) / R`
    /// increases over `R ∈ {10, 100, 1000, 10000}`. The cone condition is
    /// geometric and only documented.
    pub fn validate_assumptions(&self, probes: usize, seed: u64) -> Result<ValidationReport> {
        if probes == 0 {
            return Err(Error::InvalidInput("probes must be at least 1".into()));
        }
        let d = self.dim;
        let mut rng = stream(seed, "cost-validation", 0);
        let mut worst_gap = f64::INFINITY;
        for k in 0..probes {
            let u: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0)).collect();
            let v: Vec<f64> = if k % 2 == 0 {
                (0..d).map(|_| rng.random_range(-10.0..10.0)).collect()
            } else {
                let s = rng.random_range(0.1..4.0);
                u.iter().map(|x| s * x).collect()
            };
            if u == v {
                continue;
            }
            let mid: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 0.5 * (a + b)).collect();
            let (hu, hv, hm) = (self.h(&u), self.h(&v), self.h(&mid));
            if !(hu.is_finite() && hv.is_finite() && hm.is_finite()) || hu < 0.0 || hv < 0.0 {
                return Err(Error::CostRejected(format!(
                    "h is negative or non-finite on probe {k}"
                )));
            }
            let avg = 0.5 * (hu + hv);
            let gap = (avg - hm) / avg.max(1.0);
            worst_gap = worst_gap.min(gap);
            if gap <= STRICT_CONVEXITY_TOL {
                return Err(Error::CostRejected(format!(
                    "strict convexity fails on probe {k}: h(mid) = {hm}, mean of endpoints = {avg}"
                )));
            }
        }

        let radii = [10.0, 1e2, 1e3, 1e4];
        let mut growth_ok = true;
        for _ in 0..probes {
            let mut w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r = norm_sq(&w).sqrt();
            if r < 1e-6 {
                continue;
            }
            w.iter_mut().for_each(|x| *x /= r);
            let ratios: Vec<f64> = radii
                .iter()
                .map(|&big_r| {
                    let x: Vec<f64> = w.iter().map(|c| c * big_r).collect();
                    self.h(&x) / big_r
                })
                .collect();
            if ratios.windows(2).any(|pair| !(pair[1] > pair[0] || pair[1] == f64::INFINITY)) {
                growth_ok = false;
                break;
            }
        }

        Ok(ValidationReport {
            strict_convexity: true,
            worst_midpoint_gap: worst_gap,
            superlinear_growth: growth_ok,
            cone_condition: CONE_NOTE.to_string(),
            passed: growth_ok,
        })
    }
}

const STRICT_CONVEXITY_TOL: f64 = 1e-12;
const CONE_NOTE: &str =
    "not numerically checkable; guaranteed for power costs with p > 1";

/// Outcome of [`CostSpec::validate_assumptions`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub strict_convexity: bool,
    /// Smallest relative midpoint gap observed, `(h(u)+h(v))/2 - h(mid)`
    /// divided by `max(1, (h(u)+h(v))/2)`.
    pub worst_midpoint_gap: f64,
    pub superlinear_growth: bool,
    pub cone_condition: String,
    pub passed: bool,
}

impl FromStr for CostSpec {
    type Err = Error;

    /// Parses `power:<p>` into a one-dimensional spec; call
    /// [`CostSpec::with_dim`] to lift it to the data dimension.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("malformed cost string '{s}', expected power:<p>")))?;
        if kind != "power" {
            return Err(Error::Config(format!(
                "unsupported cost '{kind}' in '{s}', only power:<p> is built in"
            )));
        }
        let p: f64 = arg
            .parse()
            .map_err(|_| Error::Config(format!("malformed exponent '{arg}' in cost string '{s}'")))?;
        CostSpec::power(p, 1)
    }
}

#[inline]
fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

#[inline]
fn power_h(sq: f64, p: f64) -> f64 {
    if p == 2.0 {
        sq
    } else if sq == 0.0 {
        0.0
    } else {
        sq.powf(0.5 * p)
    }
}
