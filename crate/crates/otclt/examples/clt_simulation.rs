//! Monte-Carlo check of the two-sample Gaussian limit on the shift benchmark.
//! Set OTCLT_THREADS to cap the worker pool.

use otclt::montecarlo::{simulate_clt, ExperimentConfig};

fn main() -> otclt::error::Result<()> {
    let mut cfg = ExperimentConfig::shift_benchmark();
    cfg.reps = 200;
    cfg.n = 300;
    cfg.m = 300;
    cfg.efron_stein = false;
    let r = simulate_clt(&cfg, 1.0 / 12.0)?;
    println!(
        "reps {}  scaled variance {:.4} (theory {:.4})  KS {:.3}",
        cfg.reps, r.scaled_variance, r.theory_sigma_sq, r.ks_distance.unwrap_or(f64::NAN)
    );
    Ok(())
}
