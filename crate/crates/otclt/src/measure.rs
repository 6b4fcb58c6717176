//! Discrete probability measures and the samplers that produce them.

use std::cmp::Ordering;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::rng::stream;

const WEIGHT_SUM_TOL: f64 = 1e-9;
const CSV_RENORMALIZE_TOL: f64 = 1e-6;

/// A weighted point cloud on `R^d`.
///
/// Points are stored row-major. Duplicate points are kept as separate atoms
/// so that `len()` always equals the sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Builds a measure from row-major coordinates and weights.
    pub fn new(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("measure dimension must be positive".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidInput("measure must have at least one point".into()));
        }
        if coords.len() != dim * weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} coordinates cannot form {} points of dimension {dim}",
                coords.len(),
                weights.len()
            )));
        }
        if let Some(k) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate at point {}",
                k / dim
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "weight {i} is {} but weights must be positive",
                weights[i]
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(DiscreteMeasure {
            dim,
            coords,
            weights,
        })
    }

    /// Equal weights `1/n` on the given row-major points.
    pub fn uniform(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidInput(format!(
                "{} coordinates cannot form points of dimension {dim}",
                coords.len()
            )));
        }
        let n = coords.len() / dim;
        DiscreteMeasure::new(dim, coords, vec![1.0 / n as f64; n])
    }

    /// Equal weights on one-dimensional points.
    pub fn uniform_1d(values: &[f64]) -> Result<Self> {
        DiscreteMeasure::uniform(1, values.to_vec())
    }

    /// The unit point mass at `x`.
    pub fn dirac(x: &[f64]) -> Result<Self> {
        DiscreteMeasure::new(x.len(), x.to_vec(), vec![1.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// True when every weight is exactly `1/n`.
    pub fn has_uniform_weights(&self) -> bool {
        let w = 1.0 / self.len() as f64;
        self.weights.iter().all(|&x| x == w)
    }

    /// Weighted mean of the points.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for (x, w) in self.points().zip(&self.weights) {
            for (acc, c) in m.iter_mut().zip(x) {
                *acc += w * c;
            }
        }
        m
    }

    /// Indices sorted by lexicographic order of the points, ties by index.
    pub fn lexicographic_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| lex_cmp(self.point(a), self.point(b)).then(a.cmp(&b)));
        idx
    }

    /// Index of the lexicographically smallest point (first on ties).
    pub fn lexicographic_min(&self) -> usize {
        (1..self.len()).fold(0, |best, i| {
            if lex_cmp(self.point(i), self.point(best)) == Ordering::Less {
                i
            } else {
                best
            }
        })
    }

    /// Every point multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        DiscreteMeasure::new(
            self.dim,
            self.coords.iter().map(|c| c * s).collect(),
            self.weights.clone(),
        )
    }

    /// Writes the measure as CSV, one point per line with the weight as the
    /// last column. Values carry 17 significant digits so that
    /// [`load_csv`] reproduces the measure exactly.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::with_capacity(self.len() * (self.dim + 1) * 26);
        for (x, w) in self.points().zip(&self.weights) {
            for c in x {
                out.push_str(&format!("{c:.16e},"));
            }
            out.push_str(&format!("{w:.16e}\n"));
        }
        crate::report::write_atomic(path, out.as_bytes())
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Reads a measure from CSV.
///
/// Each row holds `d` coordinates, optionally followed by a weight. Weights
/// are uniform when the column is absent. A weight column whose sum is
/// within `1e-6` of one is renormalized; larger deviations are rejected.
pub fn load_csv(path: impl AsRef<Path>, d: usize) -> Result<DiscreteMeasure> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, d)
}

/// [`load_csv`] on in-memory text.
pub fn parse_csv(text: &str, d: usize) -> Result<DiscreteMeasure> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    let mut has_weights: Option<bool> = None;
    for (r, line) in text.lines().enumerate() {
        let row = r + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let weighted = match fields.len() {
            n if n == d => false,
            n if n == d + 1 => true,
            n => {
                return Err(Error::Parse {
                    row,
                    column: n.min(d + 1),
                    message: format!("expected {d} or {} columns, found {n}", d + 1),
                })
            }
        };
        if *has_weights.get_or_insert(weighted) != weighted {
            return Err(Error::Parse {
                row,
                column: fields.len(),
                message: "weight column present on some rows only".into(),
            });
        }
        for (c, field) in fields.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
                row,
                column: c + 1,
                message: format!("cannot parse '{}' as a number", field.trim()),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: c + 1,
                    message: "non-finite value".into(),
                });
            }
            if c < d {
                coords.push(value);
            } else {
                if value <= 0.0 {
                    return Err(Error::Parse {
                        row,
                        column: c + 1,
                        message: format!("weight {value} must be positive"),
                    });
                }
                weights.push(value);
            }
        }
    }
    if coords.is_empty() {
        return Err(Error::InvalidInput("no points found".into()));
    }
    if has_weights == Some(true) {
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > CSV_RENORMALIZE_TOL {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, which deviates from 1 by more than {CSV_RENORMALIZE_TOL:e}"
            )));
        }
        if total != 1.0 && (total - 1.0).abs() > f64::EPSILON {
            weights.iter_mut().for_each(|w| *w /= total);
        }
        DiscreteMeasure::new(d, coords, weights)
    } else {
        DiscreteMeasure::uniform(d, coords)
    }
}

/// How sample points are generated.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Independent uniform coordinates on `[lo_k, hi_k)`.
    Uniform { lo: Vec<f64>, hi: Vec<f64> },
    /// Independent normal coordinates.
    Gaussian { mean: Vec<f64>, sd: Vec<f64> },
    /// Another source translated by `offset`.
    Shift { base: Box<Generator>, offset: Vec<f64> },
    /// Resampling with replacement from a CSV measure.
    File { path: PathBuf, dim: usize },
}

impl Generator {
    pub fn uniform(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::Config("uniform generator needs one (a, b) pair per axis".into()));
        }
        if let Some(k) = lo.iter().zip(&hi).position(|(a, b)| a >= b || !a.is_finite() || !b.is_finite()) {
            return Err(Error::Config(format!(
                "uniform generator requires a < b on axis {k}, got ({}, {})",
                lo[k], hi[k]
            )));
        }
        Ok(Generator::Uniform { lo, hi })
    }

    pub fn gaussian(mean: Vec<f64>, sd: Vec<f64>) -> Result<Self> {
        if mean.is_empty() || mean.len() != sd.len() {
            return Err(Error::Config("gaussian generator needs one (mu, sd) pair per axis".into()));
        }
        if let Some(k) = sd.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::Config(format!(
                "gaussian generator requires sd > 0 on axis {k}, got {}",
                sd[k]
            )));
        }
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::Config("gaussian mean must be finite".into()));
        }
        Ok(Generator::Gaussian { mean, sd })
    }

    pub fn shift(base: Generator, offset: Vec<f64>) -> Result<Self> {
        if offset.len() != base.dim() {
            return Err(Error::Config(format!(
                "shift offset has dimension {}, base generator has {}",
                offset.len(),
                base.dim()
            )));
        }
        Ok(Generator::Shift {
            base: Box::new(base),
            offset,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Generator::Uniform { lo, .. } => lo.len(),
            Generator::Gaussian { mean, .. } => mean.len(),
            Generator::Shift { offset, .. } => offset.len(),
            Generator::File { dim, .. } => *dim,
        }
    }

    fn draw<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        let d = self.dim();
        match self {
            Generator::Uniform { lo, hi } => {
                let axes: Vec<Uniform<f64>> = lo
                    .iter()
                    .zip(hi)
                    .map(|(&a, &b)| Uniform::new(a, b).map_err(|e| Error::Config(e.to_string())))
                    .collect::<Result<_>>()?;
                let mut out = Vec::with_capacity(n * d);
                for _ in 0..n {
                    for axis in &axes {
                        out.push(axis.sample(rng));
                    }
                }
                Ok(out)
            }
            Generator::Gaussian { mean, sd } => {
                let axes: Vec<Normal<f64>> = mean
                    .iter()
                    .zip(sd)
                    .map(|(&m, &s)| Normal::new(m, s).map_err(|e| Error::Config(e.to_string())))
                    .collect::<Result<_>>()?;
                let mut out = Vec::with_capacity(n * d);
                for _ in 0..n {
                    for axis in &axes {
                        out.push(axis.sample(rng));
                    }
                }
                Ok(out)
            }
            Generator::Shift { base, offset } => {
                let mut out = base.draw(n, rng)?;
                for (k, c) in out.iter_mut().enumerate() {
                    *c += offset[k % d];
                }
                Ok(out)
            }
            Generator::File { path, dim } => {
                let source = load_csv(path, *dim)?;
                let cumulative: Vec<f64> = source
                    .weights()
                    .iter()
                    .scan(0.0, |acc, w| {
                        *acc += w;
                        Some(*acc)
                    })
                    .collect();
                let total = *cumulative.last().unwrap();
                let mut out = Vec::with_capacity(n * d);
                for _ in 0..n {
                    let u = rng.random::<f64>() * total;
                    let i = cumulative.partition_point(|&c| c <= u).min(source.len() - 1);
                    out.extend_from_slice(source.point(i));
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Uniform { lo, hi } => {
                write!(f, "unif")?;
                for (a, b) in lo.iter().zip(hi) {
                    write!(f, ":{a}:{b}")?;
                }
                Ok(())
            }
            Generator::Gaussian { mean, sd } => {
                write!(f, "gauss")?;
                for (m, s) in mean.iter().zip(sd) {
                    write!(f, ":{m}:{s}")?;
                }
                Ok(())
            }
            Generator::Shift { base, offset } => {
                write!(f, "shift(")?;
                for (k, o) in offset.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{o}")?;
                }
                write!(f, ";{base})")
            }
            Generator::File { path, .. } => write!(f, "file:{}", path.display()),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    /// Parses `unif:a:b[:a2:b2...]` and `gauss:mu:sd[...]`. The dimension is
    /// the number of parameter pairs. `file:<path>` yields a one-dimensional
    /// file source; use [`Generator::file`] for other dimensions.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            return Generator::file(path, 1);
        }
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let params: Vec<f64> = parts
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Config(format!("malformed number '{t}' in generator '{s}'")))
            })
            .collect::<Result<_>>()?;
        if params.is_empty() || !params.len().is_multiple_of(2) {
            return Err(Error::Config(format!(
                "generator '{s}' needs parameters in pairs, got {}",
                params.len()
            )));
        }
        let first: Vec<f64> = params.iter().step_by(2).copied().collect();
        let second: Vec<f64> = params.iter().skip(1).step_by(2).copied().collect();
        match kind {
            "unif" | "uniform" => Generator::uniform(first, second),
            "gauss" | "gaussian" => Generator::gaussian(first, second),
            other => Err(Error::Config(format!(
                "unsupported generator '{other}' in '{s}', expected unif, gauss or file"
            ))),
        }
    }
}

impl Generator {
    /// A resampling source over the measure stored in `path`.
    pub fn file(path: impl Into<PathBuf>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("file generator dimension must be positive".into()));
        }
        Ok(Generator::File {
            path: path.into(),
            dim,
        })
    }
}

/// A generator paired with the label of its random stream.
///
/// Two sources with equal generators and labels produce identical samples
/// for the same seed, which is how degenerate control runs are set up.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSource {
    pub generator: Generator,
    pub label: String,
}

impl SampleSource {
    pub fn new(generator: Generator, label: impl Into<String>) -> Self {
        SampleSource {
            generator,
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// `n` i.i.d. draws from stream `(seed, label, index)` with weights `1/n`.
    pub fn sample(&self, n: usize, seed: u64, index: u64) -> Result<DiscreteMeasure> {
        if n == 0 {
            return Err(Error::InvalidInput("sample size must be at least 1".into()));
        }
        let mut rng = stream(seed, &self.label, index);
        let coords = self.generator.draw(n, &mut rng)?;
        DiscreteMeasure::uniform(self.dim(), coords)
    }
}

/// The empirical measure of `n` draws from `src`.
pub fn empirical_from_sample(src: &SampleSource, n: usize, seed: u64) -> Result<DiscreteMeasure> {
    src.sample(n, seed, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unif01() -> SampleSource {
        SampleSource::new("unif:0:1".parse().unwrap(), "P")
    }

    #[test]
    fn empirical_weights_are_uniform() {
        let m = empirical_from_sample(&unif01(), 3, 7).unwrap();
        assert_eq!(m.weights(), &[1.0 / 3.0; 3]);
        let one = empirical_from_sample(&unif01(), 1, 7).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.weights(), &[1.0]);
    }

    #[test]
    fn sample_mean_obeys_law_of_large_numbers() {
        let m = empirical_from_sample(&unif01(), 10_000, 1).unwrap();
        let mean = m.coords().iter().sum::<f64>() / m.len() as f64;
        assert!((0.48..=0.52).contains(&mean), "mean {mean}");
    }

    #[test]
    fn generation_is_reproducible() {
        let src = SampleSource::new("gauss:0:1:3:2".parse().unwrap(), "Q");
        let a = empirical_from_sample(&src, 50, 11).unwrap();
        let b = empirical_from_sample(&src, 50, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert_ne!(a, empirical_from_sample(&src, 50, 12).unwrap());
    }

    #[test]
    fn shift_translates_base_samples() {
        let base: Generator = "unif:0:1".parse().unwrap();
        let shifted = SampleSource::new(Generator::shift(base.clone(), vec![0.5]).unwrap(), "P");
        let a = unif01().sample(20, 3, 0).unwrap();
        let b = shifted.sample(20, 3, 0).unwrap();
        for (x, y) in a.coords().iter().zip(b.coords()) {
            assert!((y - x - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn generator_validation() {
        assert!("unif:1:0".parse::<Generator>().is_err());
        assert!("gauss:0:0".parse::<Generator>().is_err());
        assert!("unif:0".parse::<Generator>().is_err());
        assert!(matches!("beta:1:2".parse::<Generator>(), Err(Error::Config(_))));
        assert_eq!("unif:0:1:2:3".parse::<Generator>().unwrap().dim(), 2);
        assert!(unif01().sample(0, 1, 0).is_err());
    }

    #[test]
    fn csv_examples() {
        let m = parse_csv("0\n1\n", 1).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.weights(), &[0.5, 0.5]);

        let m = parse_csv("0,0.25\r\n1,0.75\r\n", 1).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.75]);

        match parse_csv("a,b", 1) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 1);
                assert_eq!(column, 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_weight_handling() {
        let m = parse_csv("0,0.2500001\n1,0.75\n", 1).unwrap();
        assert!((m.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(parse_csv("0,0.3\n1,0.75\n", 1).is_err());
        assert!(parse_csv("0,0\n1,1\n", 1).is_err());
        assert!(parse_csv("0,inf\n", 2).is_err());
        assert!(parse_csv("0,1\n1\n", 1).is_err());
    }

    #[test]
    fn measure_invariants_enforced() {
        assert!(DiscreteMeasure::new(1, vec![0.0, 1.0], vec![0.5, 0.4]).is_err());
        assert!(DiscreteMeasure::new(1, vec![0.0, f64::NAN], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(1, vec![], vec![]).is_err());
        assert!(DiscreteMeasure::new(2, vec![0.0, 1.0], vec![1.0]).is_ok());
    }

    #[test]
    fn lexicographic_min_breaks_ties_by_coordinates() {
        let m = DiscreteMeasure::uniform(2, vec![1.0, 0.0, 0.0, 5.0, 0.0, 2.0]).unwrap();
        assert_eq!(m.lexicographic_min(), 2);
        assert_eq!(m.lexicographic_order(), vec![2, 1, 0]);
    }
}
