//! Solve a small transport problem in the plane and check its certificate.

use otclt::cost::CostSpec;
use otclt::measure::DiscreteMeasure;
use otclt::solver::{solve, verify_optimality, SolverOptions};

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(2.0, 2)?;
    let p = DiscreteMeasure::new(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0], vec![0.5, 0.25, 0.25])?;
    let q = DiscreteMeasure::uniform(2, vec![1.0, 1.0, 2.0, 0.0])?;

    let sol = solve(&cost, &p, &q, SolverOptions::default())?;
    println!("objective {:.6} after {} pivots", sol.plan.objective, sol.pivots);
    for e in &sol.plan.entries {
        println!("  x{} -> y{}  mass {:.4}", e.i, e.j, e.mass);
    }
    let cert = verify_optimality(&sol.plan, &sol.duals, &sol.costs, p.weights(), q.weights())?;
    println!(
        "certificate passed={} gap={:.1e} slackness={:.1e}",
        cert.passed, cert.duality_gap, cert.slackness_violation
    );
    Ok(())
}
