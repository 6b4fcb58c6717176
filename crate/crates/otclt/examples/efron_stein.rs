//! Plug-in Efron–Stein bounds on n·Var T_c(P_n, Q) over Hölder pairs.

use otclt::cost::CostSpec;
use otclt::inference::{default_pairs, efron_stein_bound, efron_stein_two_sample};
use otclt::measure::SampleSource;

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(2.0, 1)?;
    let x = SampleSource::new("unif:0:1".parse()?, "P").sample(1000, 4, 0)?;
    let y = SampleSource::new("unif:0.5:1.5".parse()?, "Q").sample(1000, 4, 0)?;
    let pairs = default_pairs(&cost);

    let one = efron_stein_bound(&cost, &x, &y, &pairs)?;
    for t in &one.terms {
        println!("q1={} q2={}  bound {:.5}", t.pair.q1, t.pair.q2, t.value);
    }
    println!("one-sample bound {:.5}  (power form {:.5})", one.bound, one.power_bound.unwrap_or(f64::NAN));

    let two = efron_stein_two_sample(&cost, &x, &y, &pairs)?;
    println!("two-sample bound {:.5} at lambda {:.2}", two.bound, two.lambda);
    Ok(())
}
