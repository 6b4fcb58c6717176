//! Empirical potentials and maps against the closed-form ones as n grows.

use otclt::cost::CostSpec;
use otclt::measure::SampleSource;
use otclt::montecarlo::{stability_report, ExperimentConfig, Target};
use otclt::oracle1d::{monotone_map, potential_1d, Distribution1D};

fn main() -> otclt::error::Result<()> {
    let cost = CostSpec::power(2.0, 1)?;
    let p_law = "unif:0:1".parse()?;
    let q_law = "gauss:0:1".parse()?;
    let x = Distribution1D::from_generator(&p_law)?;
    let y = Distribution1D::from_generator(&q_law)?;

    let mut cfg = ExperimentConfig::new(cost.clone(), SampleSource::new(p_law, "P"), Target::QuantileGrid(q_law));
    cfg.schedule = vec![100, 400, 1600];
    let anchor = 50;
    let phi = potential_1d(&cost, &x, &y, cfg.grid[anchor], &[])?;
    let r = stability_report(&cfg, &|t| phi.eval(t), &|t| monotone_map(&x, &y, t), anchor)?;
    print!("{}", r.to_csv());
    Ok(())
}
