//! Canonical potentials, c-transforms, the superdifferential and a
//! cyclical monotonicity check on one solved problem.

use otclt::cost::CostSpec;
use otclt::duality::{c_transform, canonical_potentials, check_cyclical_monotonicity, superdifferential, support_pairs};
use otclt::measure::SampleSource;
use otclt::solver::{solve, SolverOptions};

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(1.5, 1)?;
    let p = SampleSource::new("unif:0:1".parse()?, "P").sample(8, 7, 0)?;
    let q = SampleSource::new("gauss:0.5:0.3".parse()?, "Q").sample(6, 7, 0)?;

    let sol = solve(&cost, &p, &q, SolverOptions::default())?;
    let pair = canonical_potentials(&sol, &p)?;
    println!("anchor x{} shift {:.6}", pair.anchor, pair.shift);
    println!("u = {:?}", pair.u.values);

    // v is already the c-transform of u; transforming back recovers u.
    let back = c_transform(&cost, &pair.v, &q, &p)?;
    let err = back.values.iter().zip(&pair.u.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("|u^cc - u|_inf = {err:.2e}");

    let graph = superdifferential(&cost, &pair.u, &pair.v, &p, &q, None)?;
    println!("superdifferential has {} pairs (plan support {})", graph.pairs.len(), sol.plan.entries.len());

    let mono = check_cyclical_monotonicity(&cost, &support_pairs(&sol.plan, &p, &q), 6, 200, 7)?;
    println!("cyclically monotone: {} (worst margin {:.2e})", mono.passed, mono.worst_margin);
    Ok(())
}
