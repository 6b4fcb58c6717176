mod common;

use otclt::cost::CostSpec;
use otclt::duality::{canonical_potentials, check_cyclical_monotonicity, support_pairs};
use otclt::measure::DiscreteMeasure;
use otclt::solver::{solve, solve_with_costs, verify_optimality, CostMatrix, SolverOptions};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (usize, usize, f64, Vec<f64>, Vec<f64>)> {
    (1usize..=3, 1usize..=6, prop::sample::select(vec![1.5, 2.0, 3.0])).prop_flat_map(|(d, n, p)| {
        (
            Just(d),
            Just(n),
            Just(p),
            prop::collection::vec(-3.0f64..3.0, d * n),
            prop::collection::vec(-3.0f64..3.0, d * n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_brute_force_assignment((d, _n, p, xs, ys) in instance()) {
        let spec = CostSpec::power(p, d).unwrap();
        let a = common::uniform_cloud(d, xs);
        let b = common::uniform_cloud(d, ys);
        let sol = solve(&spec, &a, &b, SolverOptions::default()).unwrap();
        let brute = common::brute_force_assignment(&spec, &a, &b);
        prop_assert!((sol.plan.objective - brute).abs() <= 1e-9 * brute.max(1.0));

        let cert = verify_optimality(&sol.plan, &sol.duals, &sol.costs, a.weights(), b.weights()).unwrap();
        prop_assert!(cert.passed, "{cert:?}");
        let mono = check_cyclical_monotonicity(&spec, &support_pairs(&sol.plan, &a, &b), 5, 50, 1).unwrap();
        prop_assert!(mono.passed);
    }

    #[test]
    fn weighted_marginals_are_respected(
        wp in prop::collection::vec(0.05f64..1.0, 1..8),
        wq in prop::collection::vec(0.05f64..1.0, 1..8),
    ) {
        let sp: f64 = wp.iter().sum();
        let sq: f64 = wq.iter().sum();
        let xs: Vec<f64> = (0..wp.len()).map(|i| i as f64 * 0.7).collect();
        let ys: Vec<f64> = (0..wq.len()).map(|j| 1.0 - j as f64 * 0.3).collect();
        let a = DiscreteMeasure::new(1, xs, wp.iter().map(|w| w / sp).collect()).unwrap();
        let b = DiscreteMeasure::new(1, ys, wq.iter().map(|w| w / sq).collect()).unwrap();
        let spec = CostSpec::power(2.0, 1).unwrap();
        let sol = solve(&spec, &a, &b, SolverOptions::default()).unwrap();
        let cert = verify_optimality(&sol.plan, &sol.duals, &sol.costs, a.weights(), b.weights()).unwrap();
        prop_assert!(cert.passed, "{cert:?}");
        // A basic solution has at most n + m - 1 positive entries.
        prop_assert!(sol.plan.entries.len() < a.len() + b.len());
    }

    #[test]
    fn canonical_potentials_ignore_point_order(xs in prop::collection::vec(0.0f64..1.0, 2..7), ys in prop::collection::vec(0.0f64..2.0, 2..7)) {
        let spec = CostSpec::power(2.0, 1).unwrap();
        let a = DiscreteMeasure::uniform_1d(&xs).unwrap();
        let b = DiscreteMeasure::uniform_1d(&ys).unwrap();
        let rev: Vec<f64> = xs.iter().rev().copied().collect();
        let a_rev = DiscreteMeasure::uniform_1d(&rev).unwrap();
        let u = canonical_potentials(&solve(&spec, &a, &b, SolverOptions::default()).unwrap(), &a).unwrap();
        let u_rev = canonical_potentials(&solve(&spec, &a_rev, &b, SolverOptions::default()).unwrap(), &a_rev).unwrap();
        let k = xs.len();
        for i in 0..k {
            prop_assert!((u.u.values[i] - u_rev.u.values[k - 1 - i]).abs() < 1e-9);
        }
    }
}

#[test]
fn explicit_cost_matrix() {
    let costs = CostMatrix::from_rows(2, 3, vec![1.0, 2.0, 3.0, 3.0, 1.0, 2.0]).unwrap();
    let (plan, duals) = solve_with_costs(&costs, &[0.5, 0.5], &[0.2, 0.3, 0.5], SolverOptions::default()).unwrap();
    let cert = verify_optimality(&plan, &duals, &costs, &[0.5, 0.5], &[0.2, 0.3, 0.5]).unwrap();
    assert!(cert.passed);
    // Optimal value 1.8, attained by more than one plan.
    assert!((plan.objective - 1.8).abs() < 1e-12);
}
