#![allow(dead_code)]

use otclt::cost::CostSpec;
use otclt::measure::DiscreteMeasure;

/// Minimum of `Σ c(x_i, y_σ(i)) / n` over all permutations σ.
pub fn brute_force_assignment(spec: &CostSpec, p: &DiscreteMeasure, q: &DiscreteMeasure) -> f64 {
    let n = p.len();
    assert_eq!(n, q.len());
    let costs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| spec.cost_unchecked(p.point(i), q.point(j))).collect())
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &costs, &mut best);
    best / n as f64
}

fn permute(perm: &mut [usize], k: usize, costs: &[Vec<f64>], best: &mut f64) {
    if k == perm.len() {
        let total: f64 = perm.iter().enumerate().map(|(i, &j)| costs[i][j]).sum();
        *best = best.min(total);
        return;
    }
    for t in k..perm.len() {
        perm.swap(k, t);
        permute(perm, k + 1, costs, best);
        perm.swap(k, t);
    }
}

pub fn uniform_cloud(dim: usize, coords: Vec<f64>) -> DiscreteMeasure {
    DiscreteMeasure::uniform(dim, coords).unwrap()
}
