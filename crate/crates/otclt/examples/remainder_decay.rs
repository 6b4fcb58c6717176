//! n·Var of the linearization remainder shrinks with n.

use otclt::montecarlo::{remainder_variance, ExperimentConfig};
use otclt::oracle1d::{potential_1d, Distribution1D};

fn main() -> otclt::error::Result<()> {
    let mut cfg = ExperimentConfig::shift_benchmark();
    cfg.schedule = vec![100, 200, 400];
    cfg.reps = 100;
    let x = Distribution1D::uniform(0.0, 1.0)?;
    let y = Distribution1D::uniform(0.5, 1.5)?;
    let pot = potential_1d(&cfg.cost, &x, &y, 0.5, &[])?;
    let table = remainder_variance(&cfg, &|p| pot.eval(p[0]), &|q| pot.conjugate(q[0]))?;
    print!("{}", table.to_csv());
    if let Some(r) = table.decay_ratio {
        println!("decay ratio {r:.3}");
    }
    Ok(())
}
