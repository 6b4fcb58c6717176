//! c-concave calculus on finite point sets.
//!
//! Potentials live on one side of a transport problem. The c-transform maps
//! a potential on one side to the other; two transforms turn any feasible
//! dual pair into a c-concave one with at least the same dual objective.
//! Optimal duals of a discrete problem are not unique: every P-potential
//! that is feasible and tight on the plan support is optimal. The canonical
//! potential of a solved problem is the midpoint of the largest and the
//! smallest such potential vanishing at the lexicographically smallest P
//! point, passed through the double transform and anchored there. It does
//! not depend on the basis the solver stopped at.

use rand::seq::index::sample;
use serde::Serialize;

use crate::cost::CostSpec;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::rng::stream;
use crate::solver::{build_cost_matrix, CostMatrix, DualPair, Side, Solution, TransportPlan};

/// Potential values indexed by the points of one side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialVector {
    pub side: Side,
    pub values: Vec<f64>,
    pub anchored_at: Option<usize>,
}

impl PotentialVector {
    pub fn new(side: Side, values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("potential value {k} is not finite")));
        }
        Ok(PotentialVector {
            side,
            values,
            anchored_at: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds `a` to every value. Clears the anchor unless `a` is zero.
    pub fn shifted(&self, a: f64) -> Self {
        PotentialVector {
            side: self.side,
            values: self.values.iter().map(|v| v + a).collect(),
            anchored_at: if a == 0.0 { self.anchored_at } else { None },
        }
    }

    /// Weighted mean of the values.
    pub fn mean(&self, weights: &[f64]) -> f64 {
        self.values.iter().zip(weights).map(|(v, w)| v * w).sum()
    }
}

/// `g(t) = min_s [c(s, t) - f(s)]` for every target point, with the cost
/// always evaluated as `c(P point, Q point)`.
pub fn c_transform_with_costs(costs: &CostMatrix, f: &PotentialVector) -> Result<PotentialVector> {
    let (sources, targets, other) = match f.side {
        Side::P => (costs.rows(), costs.cols(), Side::Q),
        Side::Q => (costs.cols(), costs.rows(), Side::P),
    };
    if f.len() != sources {
        return Err(Error::DimensionMismatch {
            expected: sources,
            got: f.len(),
        });
    }
    if sources == 0 {
        return Err(Error::InvalidInput("c-transform over an empty source set".into()));
    }
    let values = match f.side {
        Side::P => {
            let mut g = vec![f64::INFINITY; targets];
            for (i, fi) in f.values.iter().enumerate() {
                for (gj, c) in g.iter_mut().zip(costs.row(i)) {
                    let t = c - fi;
                    if t < *gj {
                        *gj = t;
                    }
                }
            }
            g
        }
        Side::Q => (0..targets)
            .map(|i| {
                costs
                    .row(i)
                    .iter()
                    .zip(&f.values)
                    .map(|(c, fj)| c - fj)
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
    };
    PotentialVector::new(other, values)
}

/// The c-transform of `f` from its own points `source` onto `target`.
///
/// `f.side` says which argument of the cost the source points fill.
pub fn c_transform(
    spec: &CostSpec,
    f: &PotentialVector,
    source: &DiscreteMeasure,
    target: &DiscreteMeasure,
) -> Result<PotentialVector> {
    if f.len() != source.len() {
        return Err(Error::DimensionMismatch {
            expected: source.len(),
            got: f.len(),
        });
    }
    let costs = match f.side {
        Side::P => build_cost_matrix(spec, source, target)?,
        Side::Q => build_cost_matrix(spec, target, source)?,
    };
    c_transform_with_costs(&costs, f)
}

/// `min_s [c(s, x) - f(s)]` at an arbitrary point `x`, together with the
/// indices that attain the minimum within `tol`.
///
/// For a Q-side potential this is the c-concave extension of the P-side
/// potential to points outside the sample, and the minimizers form the
/// discrete superdifferential at `x`.
pub fn c_transform_at(
    spec: &CostSpec,
    f: &PotentialVector,
    source: &DiscreteMeasure,
    x: &[f64],
    tol: f64,
) -> Result<(f64, Vec<usize>)> {
    if f.len() != source.len() || f.is_empty() {
        return Err(Error::InvalidInput(
            "potential and source points must be nonempty and of equal length".into(),
        ));
    }
    if x.len() != source.dim() {
        return Err(Error::DimensionMismatch {
            expected: source.dim(),
            got: x.len(),
        });
    }
    let values: Vec<f64> = source
        .points()
        .zip(&f.values)
        .map(|(s, fs)| {
            let c = match f.side {
                Side::P => spec.cost_unchecked(s, x),
                Side::Q => spec.cost_unchecked(x, s),
            };
            c - fs
        })
        .collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let argmin = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v <= best + tol)
        .map(|(k, _)| k)
        .collect();
    Ok((best, argmin))
}

/// Largest dual violation `max (u_i + v_j - C_ij)` and where it occurs.
fn worst_violation(costs: &CostMatrix, u: &[f64], v: &[f64]) -> (f64, usize, usize) {
    let mut worst = (f64::NEG_INFINITY, 0, 0);
    for (i, ui) in u.iter().enumerate() {
        for (j, (c, vj)) in costs.row(i).iter().zip(v).enumerate() {
            let e = ui + vj - c;
            if e > worst.0 {
                worst = (e, i, j);
            }
        }
    }
    worst
}

/// Feasibility slack allowed on input pairs, relative to the cost scale.
const FEASIBILITY_TOL: f64 = 1e-9;

/// Double c-transform of a feasible pair: `v_c = u^c`, `u_cc = v_c^c`.
pub fn canonicalize_with_costs(
    costs: &CostMatrix,
    u: &PotentialVector,
    v: &PotentialVector,
) -> Result<(PotentialVector, PotentialVector)> {
    if u.side != Side::P || v.side != Side::Q {
        return Err(Error::InvalidInput("canonicalize expects (P-side, Q-side) potentials".into()));
    }
    if u.len() != costs.rows() || v.len() != costs.cols() {
        return Err(Error::DimensionMismatch {
            expected: costs.rows() + costs.cols(),
            got: u.len() + v.len(),
        });
    }
    let (excess, i, j) = worst_violation(costs, &u.values, &v.values);
    if excess > FEASIBILITY_TOL * costs.scale() {
        return Err(Error::InfeasibleDuals { i, j, excess });
    }
    let v_c = c_transform_with_costs(costs, u)?;
    let u_cc = c_transform_with_costs(costs, &v_c)?;
    Ok((u_cc, v_c))
}

/// [`canonicalize_with_costs`] from points.
pub fn canonicalize(
    spec: &CostSpec,
    u: &PotentialVector,
    v: &PotentialVector,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<(PotentialVector, PotentialVector)> {
    let costs = build_cost_matrix(spec, p, q)?;
    canonicalize_with_costs(&costs, u, v)
}

/// Subtracts `f(p0)` from every value.
pub fn anchor(f: &PotentialVector, p0: usize) -> Result<PotentialVector> {
    let Some(&at) = f.values.get(p0) else {
        return Err(Error::InvalidInput(format!(
            "anchor index {p0} out of range for {} values",
            f.len()
        )));
    };
    let mut values: Vec<f64> = f.values.iter().map(|v| v - at).collect();
    values[p0] = 0.0;
    Ok(PotentialVector {
        side: f.side,
        values,
        anchored_at: Some(p0),
    })
}

/// The canonical anchored pair of a solved problem.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalPair {
    /// c-concave P-side potential, zero at `anchor`.
    pub u: PotentialVector,
    /// Q-side potential, the c-transform of `u`.
    pub v: PotentialVector,
    /// The constant subtracted from `u` (and added to `v`).
    pub shift: f64,
    pub anchor: usize,
}

impl CanonicalPair {
    pub fn as_duals(&self) -> DualPair {
        DualPair {
            u: self.u.values.clone(),
            v: self.v.values.clone(),
            anchored: true,
            anchor_side: Some(Side::P),
            anchor_index: Some(self.anchor),
        }
    }
}

/// `anchor(canonicalize(central optimal duals))` at the lexicographically
/// smallest P point.
pub fn canonical_potentials(solution: &Solution, p: &DiscreteMeasure) -> Result<CanonicalPair> {
    let p0 = p.lexicographic_min();
    let central = central_potential(&solution.costs, &solution.plan, &solution.duals.u, p0)?;
    let u = PotentialVector::new(Side::P, central)?;
    let v_c = c_transform_with_costs(&solution.costs, &u)?;
    let u_cc = c_transform_with_costs(&solution.costs, &v_c)?;
    let shift = u_cc.values[p0];
    let u = anchor(&u_cc, p0)?;
    let v = v_c.shifted(shift);
    Ok(CanonicalPair {
        u,
        v,
        shift,
        anchor: p0,
    })
}

/// Midpoint of the extreme optimal P-potentials with `u(p0) = 0`.
///
/// Optimality given the plan support `S` is the system of difference
/// constraints `u_i - u_k <= C_ij - C_kj` for `(k, j) ∈ S`, so the extremes
/// are shortest-path distances `d(p0 → i)` and `-d(i → p0)`. Arc lengths are
/// reduced by the feasible duals `u_lp`, which makes them nonnegative and
/// lets dense Dijkstra run in `O(n |S|)`.
pub fn central_potential(
    costs: &CostMatrix,
    plan: &TransportPlan,
    u_lp: &[f64],
    p0: usize,
) -> Result<Vec<f64>> {
    let n = costs.rows();
    if u_lp.len() != n || p0 >= n {
        return Err(Error::DimensionMismatch { expected: n, got: u_lp.len() });
    }
    let mut row_support: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &plan.entries {
        row_support[e.i].push(e.j);
    }
    // Arc k -> i with length min_{j ∈ S_k} (C_ij - C_kj), reduced.
    let arc = |k: usize, i: usize| -> f64 {
        let best = row_support[k]
            .iter()
            .map(|&j| costs.get(i, j) - costs.get(k, j))
            .fold(f64::INFINITY, f64::min);
        (best - u_lp[i] + u_lp[k]).max(0.0)
    };
    let forward = dense_dijkstra(n, p0, arc);
    let backward = dense_dijkstra(n, p0, |k, i| arc(i, k));
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if !forward[i].is_finite() || !backward[i].is_finite() {
            return Err(Error::Numerical(format!("P point {i} is unreachable in the support graph")));
        }
        let hi = forward[i] + u_lp[i] - u_lp[p0];
        let lo = -(backward[i] - u_lp[i] + u_lp[p0]);
        out.push(0.5 * (hi + lo));
    }
    Ok(out)
}

fn dense_dijkstra(n: usize, source: usize, length: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let mut k = usize::MAX;
        let mut best = f64::INFINITY;
        for (i, (&d, &fixed)) in dist.iter().zip(&done).enumerate() {
            if !fixed && d < best {
                best = d;
                k = i;
            }
        }
        if k == usize::MAX {
            break;
        }
        done[k] = true;
        for i in 0..n {
            if !done[i] {
                let cand = best + length(k, i);
                if cand < dist[i] {
                    dist[i] = cand;
                }
            }
        }
    }
    dist
}

/// Pairs `(i, j)` with `f(x_i) + f_c(y_j) >= c(x_i, y_j) - tau`.
#[derive(Debug, Clone, Serialize)]
pub struct SuperdifferentialGraph {
    pub tau: f64,
    pub pairs: Vec<(usize, usize)>,
    /// `c(x_i, y_j) - f(x_i) - f_c(y_j)` for each listed pair.
    pub margins: Vec<f64>,
}

impl SuperdifferentialGraph {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }
}

/// Default membership tolerance `1e-8 (1 + max C)`.
pub fn default_tau(costs: &CostMatrix) -> f64 {
    let max = costs.as_slice().iter().fold(0.0_f64, |a, &b| a.max(b));
    1e-8 * (1.0 + max)
}

pub fn superdifferential_with_costs(
    costs: &CostMatrix,
    f: &PotentialVector,
    f_c: &PotentialVector,
    tau: Option<f64>,
) -> Result<SuperdifferentialGraph> {
    if f.len() != costs.rows() || f_c.len() != costs.cols() {
        return Err(Error::DimensionMismatch {
            expected: costs.rows() + costs.cols(),
            got: f.len() + f_c.len(),
        });
    }
    let tau = tau.unwrap_or_else(|| default_tau(costs));
    let mut pairs = Vec::new();
    let mut margins = Vec::new();
    for (i, fi) in f.values.iter().enumerate() {
        for (j, (c, gj)) in costs.row(i).iter().zip(&f_c.values).enumerate() {
            let margin = c - fi - gj;
            if margin <= tau {
                pairs.push((i, j));
                margins.push(margin);
            }
        }
    }
    Ok(SuperdifferentialGraph { tau, pairs, margins })
}

/// The discrete c-superdifferential of `f` between the P and Q points.
pub fn superdifferential(
    spec: &CostSpec,
    f: &PotentialVector,
    f_c: &PotentialVector,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    tau: Option<f64>,
) -> Result<SuperdifferentialGraph> {
    let costs = build_cost_matrix(spec, p, q)?;
    superdifferential_with_costs(&costs, f, f_c, tau)
}

/// Result of a c-cyclical monotonicity check.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    /// `min over checked (subset, σ) of Σ c(x_σ(k), y_k) - Σ c(x_k, y_k)`;
    /// `+inf` when nothing was checked.
    pub worst_margin: f64,
    /// Pair indices of the subset attaining `worst_margin`.
    pub worst_subset: Vec<usize>,
    pub exhaustive_subsets: usize,
    pub sampled_subsets: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Tolerance on the worst margin.
pub const MONOTONICITY_TOL: f64 = 1e-9;

/// Checks that no permutation of matched pairs lowers the total cost.
///
/// All subsets of size 2 and 3 are checked under every permutation. For
/// `4 <= k <= k_max`, `trials` random subsets of size `k` are drawn from
/// stream `(seed, "cyclical-monotonicity", k)` and checked under every
/// cyclic shift.
pub fn check_cyclical_monotonicity(
    spec: &CostSpec,
    pairs: &[(Vec<f64>, Vec<f64>)],
    k_max: usize,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityReport> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("cyclical monotonicity needs at least one pair".into()));
    }
    if k_max < 2 {
        return Err(Error::InvalidInput(format!("k_max must be at least 2, got {k_max}")));
    }
    let s = pairs.len();
    // cross[a * s + b] = c(x_a, y_b)
    let mut cross = Vec::with_capacity(s * s);
    for (x, _) in pairs {
        for (_, y) in pairs {
            cross.push(spec.evaluate(x, y)?);
        }
    }
    let c = |a: usize, b: usize| cross[a * s + b];

    let mut worst = f64::INFINITY;
    let mut worst_subset = Vec::new();
    let mut note = |margin: f64, subset: &[usize]| {
        if margin < worst {
            worst = margin;
            worst_subset = subset.to_vec();
        }
    };

    let mut exhaustive = 0usize;
    for a in 0..s {
        for b in a + 1..s {
            exhaustive += 1;
            let base = c(a, a) + c(b, b);
            note(c(b, a) + c(a, b) - base, &[a, b]);
            if k_max < 3 {
                continue;
            }
            for d in b + 1..s {
                exhaustive += 1;
                let base3 = base + c(d, d);
                // Non-identity permutations of three (x-index for y_a, y_b, y_d).
                let perms = [
                    c(b, a) + c(a, b) + c(d, d),
                    c(d, a) + c(b, b) + c(a, d),
                    c(a, a) + c(d, b) + c(b, d),
                    c(b, a) + c(d, b) + c(a, d),
                    c(d, a) + c(a, b) + c(b, d),
                ];
                let m = perms.iter().copied().fold(f64::INFINITY, f64::min) - base3;
                note(m, &[a, b, d]);
            }
        }
    }

    let mut sampled = 0usize;
    for k in 4..=k_max.min(s) {
        let mut rng = stream(seed, "cyclical-monotonicity", k as u64);
        for _ in 0..trials {
            let subset = sample(&mut rng, s, k).into_vec();
            let base: f64 = subset.iter().map(|&a| c(a, a)).sum();
            for shift in 1..k {
                let permuted: f64 = (0..k).map(|t| c(subset[(t + shift) % k], subset[t])).sum();
                note(permuted - base, &subset);
            }
            sampled += 1;
        }
    }

    Ok(MonotonicityReport {
        passed: worst >= -MONOTONICITY_TOL,
        worst_margin: worst,
        worst_subset,
        exhaustive_subsets: exhaustive,
        sampled_subsets: sampled,
        tolerance: MONOTONICITY_TOL,
    })
}

/// The `(x_i, y_j)` point pairs on the support of a plan.
pub fn support_pairs(
    plan: &TransportPlan,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    plan.entries
        .iter()
        .map(|e| (p.point(e.i).to_vec(), q.point(e.j).to_vec()))
        .collect()
}
