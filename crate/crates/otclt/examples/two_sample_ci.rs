//! Two-sample interval, with the P and Q plug-in variances reported apart.

use otclt::cost::CostSpec;
use otclt::inference::two_sample_ci;
use otclt::measure::SampleSource;

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(2.0, 2)?;
    let x = SampleSource::new("gauss:0:1:0:1".parse()?, "P").sample(400, 5, 0)?;
    let y = SampleSource::new("gauss:1:1:0:2".parse()?, "Q").sample(300, 5, 0)?;
    let r = two_sample_ci(&cost, &x, &y, 0.1)?;
    println!(
        "T = {:.5}  lambda = {:.3}  sigma_P^2 = {:.5}  sigma_Q^2 = {:.5}",
        r.statistic,
        r.lambda.unwrap_or(f64::NAN),
        r.sigma_sq_p.unwrap_or(f64::NAN),
        r.sigma_sq_q.unwrap_or(f64::NAN)
    );
    println!("90% CI [{:.5}, {:.5}]", r.ci[0], r.ci[1]);
    Ok(())
}
