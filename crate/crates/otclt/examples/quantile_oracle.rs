//! One-dimensional transport in closed form: quantile costs, the monotone
//! map and the limit variance, compared with the discrete solver.

use otclt::cost::CostSpec;
use otclt::measure::SampleSource;
use otclt::oracle1d::{monotone_map, potential_1d, quantile_cost, sigma_sq_1d, Distribution1D};
use otclt::solver::solve_discrete_ot;

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(2.0, 1)?;
    let x = Distribution1D::uniform(0.0, 1.0)?;
    let y = Distribution1D::uniform(0.5, 1.5)?;
    println!("T(Unif(0,1), Unif(0.5,1.5)) = {:.10}", quantile_cost(&cost, &x, &y, 8)?);
    println!("T(0.3) = {}", monotone_map(&x, &y, 0.3)?);
    println!("sigma^2 = {:.10} (1/12 = {:.10})", sigma_sq_1d(&cost, &x, &y, 8)?, 1.0 / 12.0);

    let dirac = Distribution1D::atom(0.0)?;
    println!("sigma^2 against a point mass = {:.10} (4/45 = {:.10})", sigma_sq_1d(&cost, &x, &dirac, 8)?, 4.0 / 45.0);

    let g = Distribution1D::gaussian(0.0, 1.0)?;
    let pot = potential_1d(&cost, &g, &g.shifted(1.0), 0.0, &[])?;
    println!("Gaussian shift potential at 1: {:.10} (exact -2)", pot.eval(1.0)?);

    // Sorted pairing equals the discrete optimum.
    let cubic = CostSpec::power(3.0, 1)?;
    let p = SampleSource::new("gauss:0:1".parse()?, "P").sample(300, 3, 0)?;
    let q = SampleSource::new("unif:-1:2".parse()?, "Q").sample(300, 3, 0)?;
    let sorted = quantile_cost(&cubic, &Distribution1D::from_measure(&p)?, &Distribution1D::from_measure(&q)?, 8)?;
    let (plan, _) = solve_discrete_ot(&cubic, &p, &q)?;
    println!("p=3: sorted {sorted:.12}  solver {:.12}", plan.objective);
    Ok(())
}
