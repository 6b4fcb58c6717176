//! Delta-method interval for W_p, and the refusal when P and Q coincide.

use otclt::cost::CostSpec;
use otclt::inference::{wasserstein_ci, DEFAULT_SEPARATION};
use otclt::measure::SampleSource;

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(2.0, 1)?;
    let x = SampleSource::new("unif:0:1".parse()?, "P").sample(500, 2, 0)?;
    let y = SampleSource::new("unif:0.5:1.5".parse()?, "Q").sample(500, 2, 0)?;
    let r = wasserstein_ci(&cost, &x, &y, 0.05, DEFAULT_SEPARATION)?;
    println!("W_2 = {:.5}  95% CI [{:.5}, {:.5}]", r.statistic, r.ci[0], r.ci[1]);

    match wasserstein_ci(&cost, &x, &x, 0.05, DEFAULT_SEPARATION) {
        Ok(r) => println!("identical samples: {:?}", r.warnings),
        Err(e) => println!("identical samples: {e}"),
    }
    Ok(())
}
