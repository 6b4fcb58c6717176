//! Confidence interval for T_c(P_n, Q) with Q known, here a fine grid.

use otclt::cost::CostSpec;
use otclt::inference::one_sample_ci;
use otclt::measure::SampleSource;
use otclt::oracle1d::Distribution1D;

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(2.0, 1)?;
    let x = SampleSource::new("unif:0:1".parse()?, "P").sample(1000, 11, 0)?;
    let q = Distribution1D::uniform(0.5, 1.5)?.discretize(1000)?;
    let r = one_sample_ci(&cost, &x, &q, 0.05)?;
    println!("T = {:.6}  sigma^2 = {:.6}  95% CI [{:.6}, {:.6}]", r.statistic, r.sigma_sq_hat, r.ci[0], r.ci[1]);
    println!("{}", r.center_note);
    Ok(())
}
