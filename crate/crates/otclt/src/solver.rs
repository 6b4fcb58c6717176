//! Exact discrete optimal transport.
//!
//! The transportation linear program between two discrete measures is solved
//! with a primal network simplex on the bipartite graph `P -> Q`. The basis
//! is a spanning tree with `n + m - 1` cells; node potentials on the tree are
//! the dual variables, so an optimal basis yields exact complementary
//! slackness and strong duality without a separate dual solve.
//!
//! Degenerate bases are avoided with the classic supply perturbation
//! `a_i + ε`, `b_last + n ε`. The perturbation is carried symbolically: each
//! flow is a pair `(value, k)` meaning `value + k ε`, compared
//! lexicographically. The perturbed problem is nondegenerate, so every pivot
//! strictly improves the lexicographic objective and the method terminates
//! under any entering rule. The reported flows are the `ε = 0` parts,
//! recomputed from the final tree with the original weights.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::cost::CostSpec;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

/// Default refusal threshold on `n * m`.
pub const DEFAULT_MAX_PAIRS: usize = 50_000_000;

/// Reduced-cost threshold on the unit-scaled costs.
const PRICE_TOL: f64 = 1e-12;
/// Flow values closer than this are tied and compared by their ε parts.
const FLOW_TIE_TOL: f64 = 1e-14;
/// Basic flows at or below this are dropped from the reported plan.
const DROP_MASS: f64 = 1e-13;

/// Dense row-major `n × m` cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "cost matrix data of length {} does not match shape {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCost {
                i: k / cols,
                j: k % cols,
                value: data[k],
            });
        }
        Ok(CostMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest entry, or 1 when every entry is zero.
    pub fn scale(&self) -> f64 {
        let max = self.data.iter().fold(0.0_f64, |a, &b| a.max(b));
        if max > 0.0 {
            max
        } else {
            1.0
        }
    }
}

/// `C_ij = h(x_i - y_j)` for all pairs.
pub fn build_cost_matrix(
    spec: &CostSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<CostMatrix> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    if p.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: p.dim(),
        });
    }
    let (n, m) = (p.len(), q.len());
    let mut data = Vec::with_capacity(n * m);
    for x in p.points() {
        for y in q.points() {
            data.push(spec.cost_unchecked(x, y));
        }
    }
    let matrix = CostMatrix::from_rows(n, m, data)?;
    if let Some(k) = matrix.data.iter().position(|&c| c < 0.0) {
        return Err(Error::InvalidInput(format!(
            "negative cost {} at pair ({}, {})",
            matrix.data[k],
            k / m,
            k % m
        )));
    }
    Ok(matrix)
}

/// One positive entry of a transport plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanEntry {
    pub i: usize,
    pub j: usize,
    pub mass: f64,
}

/// A sparse optimal coupling with its total cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPlan {
    pub n: usize,
    pub m: usize,
    pub objective: f64,
    pub entries: Vec<PlanEntry>,
}

impl TransportPlan {
    pub fn row_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n];
        for e in &self.entries {
            s[e.i] += e.mass;
        }
        s
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.m];
        for e in &self.entries {
            s[e.j] += e.mass;
        }
        s
    }

    /// `Σ mass · C_ij`.
    pub fn cost_under(&self, costs: &CostMatrix) -> f64 {
        self.entries.iter().map(|e| e.mass * costs.get(e.i, e.j)).sum()
    }
}

/// Which side of the problem an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    P,
    Q,
}

/// Dual variables `u` on the P points and `v` on the Q points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualPair {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub anchored: bool,
    pub anchor_side: Option<Side>,
    pub anchor_index: Option<usize>,
}

impl DualPair {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Self {
        DualPair {
            u,
            v,
            anchored: false,
            anchor_side: None,
            anchor_index: None,
        }
    }

    /// `Σ p_i u_i + Σ q_j v_j`.
    pub fn objective(&self, p_weights: &[f64], q_weights: &[f64]) -> f64 {
        let a: f64 = self.u.iter().zip(p_weights).map(|(u, w)| u * w).sum();
        let b: f64 = self.v.iter().zip(q_weights).map(|(v, w)| v * w).sum();
        a + b
    }
}

/// Solver settings.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub max_pairs: usize,
    pub max_pivots: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_pairs: DEFAULT_MAX_PAIRS,
            max_pivots: 50_000_000,
        }
    }
}

/// An optimal plan, optimal duals and the cost matrix they were computed on.
#[derive(Debug, Clone)]
pub struct Solution {
    pub plan: TransportPlan,
    pub duals: DualPair,
    pub costs: CostMatrix,
    pub pivots: usize,
}

/// Solves the Kantorovich problem between `p` and `q` exactly.
pub fn solve_discrete_ot(
    spec: &CostSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<(TransportPlan, DualPair)> {
    let sol = solve(spec, p, q, SolverOptions::default())?;
    Ok((sol.plan, sol.duals))
}

/// [`solve_discrete_ot`] with explicit options, keeping the cost matrix.
pub fn solve(
    spec: &CostSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    options: SolverOptions,
) -> Result<Solution> {
    let pairs = p.len().saturating_mul(q.len());
    if pairs > options.max_pairs {
        return Err(Error::MemoryBudget {
            pairs,
            budget: options.max_pairs,
        });
    }
    let costs = build_cost_matrix(spec, p, q)?;
    let p_order = p.lexicographic_order();
    let q_order = q.lexicographic_order();
    let (plan, duals, pivots) =
        network_simplex(&costs, p.weights(), q.weights(), &p_order, &q_order, options)?;
    Ok(Solution {
        plan,
        duals,
        costs,
        pivots,
    })
}

/// Solves the transportation problem for an explicit cost matrix. The
/// initial basis is the north-west corner rule in index order.
pub fn solve_with_costs(
    costs: &CostMatrix,
    p_weights: &[f64],
    q_weights: &[f64],
    options: SolverOptions,
) -> Result<(TransportPlan, DualPair)> {
    if p_weights.len() != costs.rows() || q_weights.len() != costs.cols() {
        return Err(Error::InvalidInput(format!(
            "weights of length {}x{} do not match a {}x{} cost matrix",
            p_weights.len(),
            q_weights.len(),
            costs.rows(),
            costs.cols()
        )));
    }
    let pairs = costs.rows() * costs.cols();
    if pairs > options.max_pairs {
        return Err(Error::MemoryBudget {
            pairs,
            budget: options.max_pairs,
        });
    }
    let p_order: Vec<usize> = (0..costs.rows()).collect();
    let q_order: Vec<usize> = (0..costs.cols()).collect();
    let (plan, duals, _) = network_simplex(costs, p_weights, q_weights, &p_order, &q_order, options)?;
    Ok((plan, duals))
}

/// `value + k ε` for an infinitesimal ε > 0.
#[derive(Debug, Clone, Copy)]
struct Flow {
    value: f64,
    k: i64,
}

impl Flow {
    const ZERO: Flow = Flow { value: 0.0, k: 0 };

    fn cmp(self, other: Flow) -> Ordering {
        if (self.value - other.value).abs() > FLOW_TIE_TOL {
            self.value.total_cmp(&other.value)
        } else {
            self.k.cmp(&other.k)
        }
    }

    fn add(self, other: Flow) -> Flow {
        Flow {
            value: self.value + other.value,
            k: self.k + other.k,
        }
    }

    fn sub(self, other: Flow) -> Flow {
        Flow {
            value: self.value - other.value,
            k: self.k - other.k,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    i: usize,
    j: usize,
    flow: Flow,
}

const NONE: usize = usize::MAX;

/// Spanning-tree basis. Nodes `0..n` are P points, `n..n+m` Q points.
struct Tree<'a> {
    n: usize,
    costs: &'a [f64],
    m: usize,
    scale: f64,
    cells: Vec<Cell>,
    adj: Vec<Vec<usize>>,
    parent_cell: Vec<usize>,
    depth: Vec<usize>,
    pot: Vec<f64>,
}

impl<'a> Tree<'a> {
    #[inline]
    fn cost(&self, i: usize, j: usize) -> f64 {
        self.costs[i * self.m + j] / self.scale
    }

    #[inline]
    fn other_end(&self, cell: usize, node: usize) -> usize {
        let c = self.cells[cell];
        if node == c.i {
            self.n + c.j
        } else {
            c.i
        }
    }

    /// Sets parent, depth and potential for every node reachable from
    /// `start` without crossing `start`'s parent cell.
    fn relabel_from(&mut self, start: usize, queue: &mut VecDeque<usize>) {
        queue.clear();
        queue.push_back(start);
        while let Some(node) = queue.pop_front() {
            let parent = self.parent_cell[node];
            for k in 0..self.adj[node].len() {
                let cell = self.adj[node][k];
                if cell == parent {
                    continue;
                }
                let child = self.other_end(cell, node);
                self.parent_cell[child] = cell;
                self.depth[child] = self.depth[node] + 1;
                let c = self.cells[cell];
                self.pot[child] = self.cost(c.i, c.j) - self.pot[node];
                queue.push_back(child);
            }
        }
    }
}

fn network_simplex(
    costs: &CostMatrix,
    p_weights: &[f64],
    q_weights: &[f64],
    p_order: &[usize],
    q_order: &[usize],
    options: SolverOptions,
) -> Result<(TransportPlan, DualPair, usize)> {
    let (n, m) = (costs.rows(), costs.cols());
    let scale = costs.scale();
    let nodes = n + m;

    // North-west corner rule on the given orders, with symbolic supplies.
    let mut supply: Vec<Flow> = p_weights.iter().map(|&w| Flow { value: w, k: 1 }).collect();
    let mut demand: Vec<Flow> = q_weights.iter().map(|&w| Flow { value: w, k: 0 }).collect();
    demand[q_order[m - 1]].k = n as i64;
    let mut cells = Vec::with_capacity(nodes - 1);
    let (mut ii, mut jj) = (0, 0);
    while ii < n && jj < m {
        let (i, j) = (p_order[ii], q_order[jj]);
        let last = ii == n - 1 && jj == m - 1;
        let advance_row = match supply[i].cmp(demand[j]) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => last || ii < n - 1,
        };
        if advance_row {
            let x = supply[i];
            cells.push(Cell { i, j, flow: x });
            demand[j] = demand[j].sub(x);
            supply[i] = Flow::ZERO;
            ii += 1;
        } else {
            let x = demand[j];
            cells.push(Cell { i, j, flow: x });
            supply[i] = supply[i].sub(x);
            demand[j] = Flow::ZERO;
            jj += 1;
        }
    }
    // The loop stops on the row or column that received the last cell.
    // Anything beyond it can only come from rounding ties; attach it with
    // zero flow so the basis stays a spanning tree.
    if ii == n {
        for &j in &q_order[jj + 1..] {
            cells.push(Cell { i: p_order[n - 1], j, flow: Flow::ZERO });
        }
    } else {
        for &i in &p_order[ii + 1..] {
            cells.push(Cell { i, j: q_order[m - 1], flow: Flow::ZERO });
        }
    }
    debug_assert_eq!(cells.len(), nodes - 1);

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (k, c) in cells.iter().enumerate() {
        adj[c.i].push(k);
        adj[n + c.j].push(k);
    }
    let root = p_order[0];
    let mut tree = Tree {
        n,
        costs: costs.as_slice(),
        m,
        scale,
        cells,
        adj,
        parent_cell: vec![NONE; nodes],
        depth: vec![0; nodes],
        pot: vec![0.0; nodes],
    };
    let mut queue = VecDeque::with_capacity(nodes);
    tree.relabel_from(root, &mut queue);

    let total = n * m;
    let block = ((total as f64).sqrt().ceil() as usize).max(10).min(total);
    let mut next = 0usize;
    let mut pivots = 0usize;
    let mut a_path: Vec<usize> = Vec::new();
    let mut b_path: Vec<usize> = Vec::new();

    loop {
        // Block pricing: scan cyclically, take the most negative reduced
        // cost within the first block that contains one.
        let mut best = NONE;
        let mut best_rc = -PRICE_TOL;
        let mut scanned = 0usize;
        let mut in_block = 0usize;
        while scanned < total {
            let k = next;
            next += 1;
            if next == total {
                next = 0;
            }
            scanned += 1;
            in_block += 1;
            let (i, j) = (k / m, k % m);
            let rc = tree.costs[k] / scale - tree.pot[i] - tree.pot[n + j];
            if rc < best_rc {
                best_rc = rc;
                best = k;
            }
            if in_block == block {
                if best != NONE {
                    break;
                }
                in_block = 0;
            }
        }
        if best == NONE {
            break;
        }
        pivots += 1;
        if pivots > options.max_pivots {
            return Err(Error::Numerical(format!(
                "network simplex exceeded {} pivots",
                options.max_pivots
            )));
        }

        let (ei, ej) = (best / m, best % m);
        let (a, b) = (ei, n + ej);

        // Tree paths from both endpoints up to their common ancestor.
        a_path.clear();
        b_path.clear();
        let (mut x, mut y) = (a, b);
        while tree.depth[x] > tree.depth[y] {
            let c = tree.parent_cell[x];
            a_path.push(c);
            x = tree.other_end(c, x);
        }
        while tree.depth[y] > tree.depth[x] {
            let c = tree.parent_cell[y];
            b_path.push(c);
            y = tree.other_end(c, y);
        }
        while x != y {
            let c = tree.parent_cell[x];
            a_path.push(c);
            x = tree.other_end(c, x);
            let c = tree.parent_cell[y];
            b_path.push(c);
            y = tree.other_end(c, y);
        }

        // Cells at even positions on either path lose flow.
        let mut theta: Option<Flow> = None;
        let mut leaving = NONE;
        let mut leaving_on_a = false;
        for (on_a, path) in [(false, &b_path), (true, &a_path)] {
            for &c in path.iter().step_by(2) {
                let f = tree.cells[c].flow;
                let better = match theta {
                    None => true,
                    Some(t) => f.cmp(t) == Ordering::Less,
                };
                if better {
                    theta = Some(f);
                    leaving = c;
                    leaving_on_a = on_a;
                }
            }
        }
        let theta = theta.expect("cycle always contains a decreasing cell");
        for path in [&a_path, &b_path] {
            for (pos, &c) in path.iter().enumerate() {
                let cell = &mut tree.cells[c];
                cell.flow = if pos % 2 == 0 {
                    cell.flow.sub(theta)
                } else {
                    cell.flow.add(theta)
                };
            }
        }

        // Swap the leaving cell for the entering one and re-hang the
        // detached subtree from the entering endpoint inside it.
        let old = tree.cells[leaving];
        tree.adj[old.i].retain(|&c| c != leaving);
        tree.adj[n + old.j].retain(|&c| c != leaving);
        tree.cells[leaving] = Cell {
            i: ei,
            j: ej,
            flow: theta,
        };
        tree.adj[a].push(leaving);
        tree.adj[b].push(leaving);
        let (inside, outside) = if leaving_on_a { (a, b) } else { (b, a) };
        tree.parent_cell[inside] = leaving;
        tree.depth[inside] = tree.depth[outside] + 1;
        tree.pot[inside] = tree.cost(ei, ej) - tree.pot[outside];
        tree.relabel_from(inside, &mut queue);
    }

    // Exact-weight flows of the final basis by peeling leaves.
    let mut residual: Vec<f64> = p_weights.iter().chain(q_weights).copied().collect();
    let mut degree: Vec<usize> = tree.adj.iter().map(Vec::len).collect();
    let mut done = vec![false; nodes - 1];
    let mut mass = vec![0.0; nodes - 1];
    let mut leaves: Vec<usize> = (0..nodes).filter(|&v| degree[v] == 1).collect();
    while let Some(leaf) = leaves.pop() {
        let Some(&cell) = tree.adj[leaf].iter().find(|&&c| !done[c]) else {
            continue;
        };
        done[cell] = true;
        let x = residual[leaf];
        mass[cell] = x;
        residual[leaf] = 0.0;
        let other = tree.other_end(cell, leaf);
        residual[other] -= x;
        degree[leaf] -= 1;
        degree[other] -= 1;
        if degree[other] == 1 {
            leaves.push(other);
        }
    }

    let mut entries: Vec<PlanEntry> = tree
        .cells
        .iter()
        .zip(&mass)
        .filter(|(_, &x)| x > DROP_MASS)
        .map(|(c, &x)| PlanEntry { i: c.i, j: c.j, mass: x })
        .collect();
    entries.sort_by_key(|e| (e.i, e.j));
    let objective = entries.iter().map(|e| e.mass * costs.get(e.i, e.j)).sum::<f64>();

    let u = tree.pot[..n].iter().map(|x| x * scale).collect();
    let v = tree.pot[n..].iter().map(|x| x * scale).collect();
    Ok((
        TransportPlan {
            n,
            m,
            objective,
            entries,
        },
        DualPair::new(u, v),
        pivots,
    ))
}

/// Optimality certificate for a plan and dual pair.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    /// Largest absolute deviation of a row or column sum from its weight.
    pub marginal_violation: f64,
    /// `max (u_i + v_j - C_ij) / scale`, clamped below at 0.
    pub dual_infeasibility: f64,
    /// `max |u_i + v_j - C_ij| / scale` over plan entries.
    pub slackness_violation: f64,
    /// `|Σ p u + Σ q v - objective| / scale`.
    pub duality_gap: f64,
    /// The largest cost, used to put costs on a unit scale.
    pub cost_scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Tolerance applied by [`verify_optimality`].
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Checks feasibility of both the plan and the duals, complementary
/// slackness on the plan support, and the duality gap.
pub fn verify_optimality(
    plan: &TransportPlan,
    duals: &DualPair,
    costs: &CostMatrix,
    p_weights: &[f64],
    q_weights: &[f64],
) -> Result<Certificate> {
    let (n, m) = (costs.rows(), costs.cols());
    if plan.n != n
        || plan.m != m
        || duals.u.len() != n
        || duals.v.len() != m
        || p_weights.len() != n
        || q_weights.len() != m
    {
        return Err(Error::InvalidInput("certificate inputs have inconsistent shapes".into()));
    }
    let scale = costs.scale();
    let rows = plan.row_sums();
    let cols = plan.col_sums();
    let mut marginal = rows
        .iter()
        .zip(p_weights)
        .chain(cols.iter().zip(q_weights))
        .map(|(s, w)| (s - w).abs())
        .fold(0.0_f64, f64::max);
    if plan.entries.iter().any(|e| e.mass < 0.0) {
        marginal = marginal.max(plan.entries.iter().map(|e| -e.mass).fold(0.0, f64::max));
    }

    let mut infeasible = 0.0_f64;
    for i in 0..n {
        let ui = duals.u[i];
        for (j, &c) in costs.row(i).iter().enumerate() {
            infeasible = infeasible.max((ui + duals.v[j] - c) / scale);
        }
    }
    let slackness = plan
        .entries
        .iter()
        .map(|e| (duals.u[e.i] + duals.v[e.j] - costs.get(e.i, e.j)).abs() / scale)
        .fold(0.0_f64, f64::max);
    let gap = (duals.objective(p_weights, q_weights) - plan.cost_under(costs)).abs() / scale;
    let passed = [marginal, infeasible, slackness, gap]
        .iter()
        .all(|v| v.is_finite() && *v <= CERTIFICATE_TOL);
    Ok(Certificate {
        marginal_violation: marginal,
        dual_infeasibility: infeasible,
        slackness_violation: slackness,
        duality_gap: gap,
        cost_scale: scale,
        tolerance: CERTIFICATE_TOL,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn heap_permutations(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(a.clone());
            return;
        }
        heap_permutations(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap_permutations(k - 1, a, out);
        }
    }

    fn brute_force(costs: &CostMatrix) -> f64 {
        let n = costs.rows();
        let mut perms = Vec::new();
        heap_permutations(n, &mut (0..n).collect(), &mut perms);
        perms
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, &j)| costs.get(i, j)).sum::<f64>() / n as f64)
            .fold(f64::INFINITY, f64::min)
    }

    fn random_measure(seed: u64, label: &str, n: usize, d: usize) -> DiscreteMeasure {
        let mut rng = stream(seed, label, 0);
        DiscreteMeasure::uniform(d, (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn cost_matrix_examples() {
        let c = CostSpec::power(2.0, 1).unwrap();
        let p = DiscreteMeasure::uniform_1d(&[0.0]).unwrap();
        let q = DiscreteMeasure::uniform_1d(&[1.0]).unwrap();
        assert_eq!(build_cost_matrix(&c, &p, &q).unwrap().as_slice(), &[1.0]);

        let p = DiscreteMeasure::uniform_1d(&[0.0, 1.0]).unwrap();
        let q = DiscreteMeasure::uniform_1d(&[0.0, 2.0]).unwrap();
        assert_eq!(build_cost_matrix(&c, &p, &q).unwrap().as_slice(), &[0.0, 4.0, 1.0, 1.0]);

        let p = random_measure(1, "p", 3, 1);
        let cm = build_cost_matrix(&c, &p, &p).unwrap();
        assert!((0..3).all(|i| cm.get(i, i) == 0.0));
    }

    #[test]
    fn overflowing_costs_are_rejected() {
        let c = CostSpec::power(4.0, 1).unwrap();
        let p = DiscreteMeasure::uniform_1d(&[0.0]).unwrap();
        let q = DiscreteMeasure::uniform_1d(&[1e200]).unwrap();
        assert!(matches!(build_cost_matrix(&c, &p, &q), Err(Error::NonFiniteCost { i: 0, j: 0, .. })));
    }

    #[test]
    fn single_point_problem() {
        let c = CostSpec::power(2.0, 2).unwrap();
        let p = DiscreteMeasure::dirac(&[1.0, 2.0]).unwrap();
        let q = DiscreteMeasure::dirac(&[0.0, 0.0]).unwrap();
        let (plan, _) = solve_discrete_ot(&c, &p, &q).unwrap();
        assert_eq!(plan.entries, vec![PlanEntry { i: 0, j: 0, mass: 1.0 }]);
        assert_eq!(plan.objective, 5.0);
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let c = CostSpec::power(2.0, 2).unwrap();
        let p = random_measure(4, "p", 4, 2);
        let (plan, duals) = solve_discrete_ot(&c, &p, &p).unwrap();
        assert_eq!(plan.objective, 0.0);
        assert!(plan.entries.iter().all(|e| e.i == e.j));
        let cm = build_cost_matrix(&c, &p, &p).unwrap();
        assert!(verify_optimality(&plan, &duals, &cm, p.weights(), p.weights()).unwrap().passed);
    }

    #[test]
    fn matches_permutation_enumeration() {
        let c = CostSpec::power(2.0, 2).unwrap();
        for seed in 0..20 {
            let p = random_measure(seed, "p", 5, 2);
            let q = random_measure(seed, "q", 5, 2);
            let sol = solve(&c, &p, &q, SolverOptions::default()).unwrap();
            let brute = brute_force(&sol.costs);
            assert!((sol.plan.objective - brute).abs() <= 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn certificate_detects_perturbations() {
        let c = CostSpec::power(2.0, 2).unwrap();
        let p = random_measure(9, "p", 6, 2);
        let q = random_measure(9, "q", 6, 2);
        let sol = solve(&c, &p, &q, SolverOptions::default()).unwrap();
        let cert = verify_optimality(&sol.plan, &sol.duals, &sol.costs, p.weights(), q.weights()).unwrap();
        assert!(cert.passed, "{cert:?}");

        let mut plan = sol.plan.clone();
        plan.entries[0].mass += 1e-3;
        let cert = verify_optimality(&plan, &sol.duals, &sol.costs, p.weights(), q.weights()).unwrap();
        assert!((cert.marginal_violation - 1e-3).abs() < 1e-9);
        assert!(!cert.passed);

        let mut duals = sol.duals.clone();
        duals.u[0] += 1.0;
        let expected = (0..6)
            .map(|j| duals.u[0] + duals.v[j] - sol.costs.get(0, j))
            .fold(f64::NEG_INFINITY, f64::max)
            / sol.costs.scale();
        let cert = verify_optimality(&sol.plan, &duals, &sol.costs, p.weights(), q.weights()).unwrap();
        assert!((cert.dual_infeasibility - expected).abs() < 1e-12);
        assert!(cert.dual_infeasibility >= 1.0 / sol.costs.scale() - 1e-9);
    }

    #[test]
    fn handles_unequal_sizes_and_weights() {
        let c = CostSpec::power(3.0, 2).unwrap();
        let p = DiscreteMeasure::new(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0], vec![0.2, 0.5, 0.3]).unwrap();
        let q = random_measure(2, "q", 7, 2);
        let sol = solve(&c, &p, &q, SolverOptions::default()).unwrap();
        assert!(sol.plan.entries.len() < 3 + 7);
        let cert = verify_optimality(&sol.plan, &sol.duals, &sol.costs, p.weights(), q.weights()).unwrap();
        assert!(cert.passed, "{cert:?}");
    }

    #[test]
    fn refuses_over_budget() {
        let c = CostSpec::power(2.0, 1).unwrap();
        let p = random_measure(1, "p", 10, 1);
        let opts = SolverOptions { max_pairs: 99, ..Default::default() };
        assert!(matches!(solve(&c, &p, &p, opts), Err(Error::MemoryBudget { pairs: 100, budget: 99 })));
    }

    #[test]
    fn explicit_cost_matrix_entry_point() {
        let costs = CostMatrix::from_rows(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let (plan, duals) = solve_with_costs(&costs, &[0.5, 0.5], &[0.5, 0.5], SolverOptions::default()).unwrap();
        assert_eq!(plan.objective, 0.0);
        let cert = verify_optimality(&plan, &duals, &costs, &[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert!(cert.passed);
    }
}
