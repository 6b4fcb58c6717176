//! End-to-end acceptance suite.
//!
//! Every criterion writes a JSON report; the whole suite runs twice and the
//! two sets of reports must agree byte for byte. One PASS/FAIL line is
//! printed per criterion and the process exits non-zero if any fails.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use otclt::cli::oracle_sigma_sq;
use otclt::cost::CostSpec;
use otclt::duality::{check_cyclical_monotonicity, support_pairs};
use otclt::error::Result;
use otclt::inference::{one_sample_ci, two_sample_ci, wasserstein_ci, DEFAULT_SEPARATION};
use otclt::measure::{DiscreteMeasure, SampleSource};
use otclt::montecarlo::{remainder_variance, simulate_clt, stability_report, ExperimentConfig, Target};
use otclt::oracle1d::{monotone_map, potential_1d, quantile_cost, Distribution1D};
use otclt::report::{to_json, write_atomic};
use otclt::rng::stream;
use otclt::solver::{solve, verify_optimality, Solution, SolverOptions};
use rand::Rng;
use serde_json::{json, Value};

const SEED: u64 = 20240601;
const EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    summary: String,
    report: Value,
}

/// A solved instance kept for the certificate and monotonicity criteria.
struct Instance {
    spec: CostSpec,
    p: DiscreteMeasure,
    q: DiscreteMeasure,
    sol: Solution,
}

fn cloud(rng: &mut impl Rng, d: usize, n: usize, gaussian: bool) -> DiscreteMeasure {
    let coords = (0..d * n)
        .map(|_| {
            if gaussian {
                // Box–Muller keeps the draw inside the one stream.
                let (u, v): (f64, f64) = (rng.random(), rng.random());
                (-2.0 * (1.0 - u).ln()).sqrt() * (std::f64::consts::TAU * v).cos()
            } else {
                rng.random_range(-1.0..1.0)
            }
        })
        .collect();
    DiscreteMeasure::uniform(d, coords).unwrap()
}

fn c1_solver_exactness(pool: &mut Vec<Instance>) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for k in 0..200u64 {
        let mut rng = stream(SEED, "acceptance-brute-force", k);
        let d = 1 + (k % 3) as usize;
        let p_exp = EXPONENTS[(k / 3 % 3) as usize];
        let n = rng.random_range(1..=7);
        let spec = CostSpec::power(p_exp, d)?;
        let p = cloud(&mut rng, d, n, k % 2 == 0);
        let q = cloud(&mut rng, d, n, k % 4 == 1);
        let sol = solve(&spec, &p, &q, SolverOptions::default())?;
        worst = worst.max((sol.plan.objective - common::brute_force_assignment(&spec, &p, &q)).abs());
        pool.push(Instance { spec, p, q, sol });
    }
    let elapsed = start.elapsed();
    Ok(Outcome {
        id: "C1",
        title: "solver exactness",
        passed: worst <= 1e-9 && elapsed < Duration::from_secs(10),
        summary: format!("200 instances, max |solver - brute force| = {worst:.2e}, {:.2} s", elapsed.as_secs_f64()),
        report: json!({ "instances": 200, "max_abs_error": worst }),
    })
}

fn c3_oracle_equivalence(pool: &mut Vec<Instance>) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for k in 0..50u64 {
        let mut rng = stream(SEED, "acceptance-quantile", k);
        let p_exp = EXPONENTS[(k % 3) as usize];
        let n = rng.random_range(2..=500);
        let spec = CostSpec::power(p_exp, 1)?;
        let p = cloud(&mut rng, 1, n, k % 2 == 0);
        let q = cloud(&mut rng, 1, n, k % 5 < 2);
        let sol = solve(&spec, &p, &q, SolverOptions::default())?;
        let sorted = quantile_cost(&spec, &Distribution1D::from_measure(&p)?, &Distribution1D::from_measure(&q)?, 8)?;
        worst = worst.max((sol.plan.objective - sorted).abs());
        pool.push(Instance { spec, p, q, sol });
    }
    let elapsed = start.elapsed();
    Ok(Outcome {
        id: "C3",
        title: "1-D oracle equivalence",
        passed: worst <= 1e-9 && elapsed < Duration::from_secs(30),
        summary: format!("50 instances, max |solver - sorted pairing| = {worst:.2e}, {:.2} s", elapsed.as_secs_f64()),
        report: json!({ "instances": 50, "max_abs_error": worst }),
    })
}

fn c2_certificates(pool: &[Instance]) -> Result<Outcome> {
    let mut worst = [0.0_f64; 4];
    let mut all = true;
    for inst in pool {
        let c = verify_optimality(&inst.sol.plan, &inst.sol.duals, &inst.sol.costs, inst.p.weights(), inst.q.weights())?;
        for (w, v) in worst.iter_mut().zip([c.marginal_violation, c.dual_infeasibility, c.slackness_violation, c.duality_gap]) {
            *w = w.max(v);
        }
        all &= c.passed;
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    Ok(Outcome {
        id: "C2",
        title: "duality certificates",
        passed: all && max <= 1e-9,
        summary: format!(
            "{} instances, marginal {:.1e}, infeasibility {:.1e}, slackness {:.1e}, gap {:.1e}",
            pool.len(),
            worst[0],
            worst[1],
            worst[2],
            worst[3]
        ),
        report: json!({
            "instances": pool.len(),
            "marginal_violation": worst[0],
            "dual_infeasibility": worst[1],
            "slackness_violation": worst[2],
            "duality_gap": worst[3],
        }),
    })
}

fn c4_monotonicity(pool: &[Instance]) -> Result<Outcome> {
    let mut worst = f64::INFINITY;
    let mut all = true;
    for (k, inst) in pool.iter().enumerate() {
        let pairs = support_pairs(&inst.sol.plan, &inst.p, &inst.q);
        let r = check_cyclical_monotonicity(&inst.spec, &pairs, 6, 200, SEED + k as u64)?;
        worst = worst.min(r.worst_margin);
        all &= r.passed;
    }
    Ok(Outcome {
        id: "C4",
        title: "c-cyclical monotonicity",
        passed: all && worst >= -1e-9,
        summary: format!("{} plan supports, worst margin {worst:.2e}", pool.len()),
        report: json!({ "instances": pool.len(), "worst_margin": worst }),
    })
}

fn shift_benchmark() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::shift_benchmark();
    cfg.seed = SEED;
    cfg
}

fn c5_c6_clt() -> Result<(Outcome, Outcome)> {
    let start = Instant::now();
    let mut cfg = shift_benchmark();
    cfg.n = 500;
    cfg.m = 500;
    cfg.reps = 400;
    cfg.efron_stein = false;
    let theory = oracle_sigma_sq(&cfg)?;
    let r = simulate_clt(&cfg, theory)?;
    let elapsed = start.elapsed();
    let ks = r.ks_distance.unwrap_or(f64::INFINITY);
    let c5 = Outcome {
        id: "C5",
        title: "CLT variance",
        passed: (0.06..=0.11).contains(&r.scaled_variance) && elapsed < Duration::from_secs(180),
        summary: format!(
            "scaled variance {:.4} (target {theory:.4}, window [0.06, 0.11]), {:.1} s",
            r.scaled_variance,
            elapsed.as_secs_f64()
        ),
        report: json!({
            "theory_sigma_sq": theory,
            "scaled_variance": r.scaled_variance,
            "mean_statistic": r.mean_statistic,
            "statistics": r.reps.iter().map(|x| x.statistic).collect::<Vec<_>>(),
        }),
    };
    let c6 = Outcome {
        id: "C6",
        title: "CLT normality",
        passed: ks < 0.08,
        summary: format!("KS distance to N(0,1) {ks:.4} (limit 0.08)"),
        report: json!({ "ks_distance": ks }),
    };
    Ok((c5, c6))
}

fn c7_plugin_consistency() -> Result<Outcome> {
    let spec = CostSpec::power(2.0, 1)?;
    let target = 1.0 / 12.0;
    let p_src = SampleSource::new("unif:0:1".parse()?, "P");
    let q_src = SampleSource::new("unif:0.5:1.5".parse()?, "Q");
    let mut estimates = Vec::new();
    for seed in 1..=10u64 {
        let x = p_src.sample(2000, SEED + seed, 0)?;
        let y = q_src.sample(2000, SEED + seed, 0)?;
        estimates.push(two_sample_ci(&spec, &x, &y, 0.05)?.sigma_sq_p.unwrap_or(f64::NAN));
    }
    let hits = estimates.iter().filter(|s| (*s - target).abs() <= 0.1 * target).count();

    let dirac_target = 4.0 / 45.0;
    let x = p_src.sample(2000, SEED, 0)?;
    let dirac = one_sample_ci(&spec, &x, &DiscreteMeasure::dirac(&[0.0])?, 0.05)?.sigma_sq_hat;
    let dirac_ok = (dirac - dirac_target).abs() <= 0.1 * dirac_target;
    Ok(Outcome {
        id: "C7",
        title: "plug-in variance consistency",
        passed: hits >= 8 && dirac_ok,
        summary: format!(
            "{hits}/10 seeds within 10% of 1/12; point-mass case {dirac:.4} vs 4/45 = {dirac_target:.4}"
        ),
        report: json!({ "sigma_sq_p": estimates, "hits": hits, "dirac_sigma_sq": dirac }),
    })
}

fn c8_efron_stein() -> Result<Outcome> {
    let mut cfg = shift_benchmark();
    cfg.q = Target::QuantileGrid("unif:0.5:1.5".parse()?);
    cfg.n = 1000;
    cfg.m = 1000;
    cfg.reps = 100;
    cfg.efron_stein = true;
    let r = simulate_clt(&cfg, oracle_sigma_sq(&cfg)?)?;
    let fraction = r.es_fraction.unwrap_or(0.0);
    let bounds: Vec<f64> = r.reps.iter().filter_map(|x| x.es_bound).collect();
    let min_bound = bounds.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Outcome {
        id: "C8",
        title: "Efron–Stein bound",
        passed: fraction >= 0.95,
        summary: format!(
            "n Var T = {:.4}; bound holds in {:.0}% of reps (smallest bound {min_bound:.4})",
            r.scaled_variance,
            100.0 * fraction
        ),
        report: json!({ "scaled_variance": r.scaled_variance, "fraction": fraction, "bounds": bounds }),
    })
}

fn c9_remainder() -> Result<Outcome> {
    let start = Instant::now();
    let mut cfg = shift_benchmark();
    cfg.schedule = vec![100, 200, 400, 800];
    cfg.reps = 200;
    let x = Distribution1D::uniform(0.0, 1.0)?;
    let y = Distribution1D::uniform(0.5, 1.5)?;
    let pot = potential_1d(&cfg.cost, &x, &y, 0.5, &[])?;
    let table = remainder_variance(&cfg, &|p| pot.eval(p[0]), &|q| pot.conjugate(q[0]))?;
    let elapsed = start.elapsed();
    let ratio = table.decay_ratio.unwrap_or(f64::INFINITY);
    Ok(Outcome {
        id: "C9",
        title: "remainder decay",
        passed: ratio <= 1.0 / 3.0 && elapsed < Duration::from_secs(180),
        summary: format!(
            "n Var(R_n): {} -> ratio {ratio:.3} (limit 0.333), {:.1} s",
            table.rows.iter().map(|r| format!("{:.2e}", r.scaled_variance)).collect::<Vec<_>>().join(", "),
            elapsed.as_secs_f64()
        ),
        report: serde_json::to_value(&table).unwrap(),
    })
}

fn c10_stability() -> Result<Outcome> {
    let cfg = shift_benchmark();
    let x = Distribution1D::uniform(0.0, 1.0)?;
    let y = Distribution1D::uniform(0.5, 1.5)?;
    // Both potentials vanish at the left end of the grid, as the canonical
    // potential vanishes at the smallest P point.
    let anchor = 0;
    let phi = potential_1d(&cfg.cost, &x, &y, cfg.grid[anchor], &[])?;
    let r = stability_report(&cfg, &|t| phi.eval(t), &|t| monotone_map(&x, &y, t), anchor)?;
    let first = r.potential.first().map_or(f64::NAN, |row| row.sup_error);
    let last = r.potential.last().map_or(f64::NAN, |row| row.sup_error);
    let map_last = r.map.last().map_or(f64::NAN, |row| row.sup_error);
    Ok(Outcome {
        id: "C10",
        title: "potential and map stability",
        passed: last <= 0.05 && last <= 0.5 * first && map_last <= 0.1,
        summary: format!(
            "potential sup error {first:.4} (n=100) -> {last:.4} (n=3200, limit 0.05), ratio {:.2} (limit 0.5); map sup error {map_last:.4} (limit 0.1)",
            last / first
        ),
        report: serde_json::to_value(&r).unwrap(),
    })
}

fn c11_delta_method() -> Result<Outcome> {
    let mut pilot = shift_benchmark();
    pilot.reps = 2000;
    pilot.efron_stein = false;
    let pilot_run = simulate_clt(&pilot, oracle_sigma_sq(&pilot)?)?;
    let center = pilot_run.mean_statistic.sqrt();

    let spec = CostSpec::power(2.0, 1)?;
    let p_src = SampleSource::new("unif:0:1".parse()?, "P");
    let q_src = SampleSource::new("unif:0.5:1.5".parse()?, "Q");
    let fresh = SEED ^ 0x5eed;
    let mut covered = 0;
    for rep in 0..200u64 {
        let x = p_src.sample(500, fresh, rep)?;
        let y = q_src.sample(500, fresh, rep)?;
        if wasserstein_ci(&spec, &x, &y, 0.05, DEFAULT_SEPARATION)?.covers(center) {
            covered += 1;
        }
    }
    Ok(Outcome {
        id: "C11",
        title: "W_p delta method",
        passed: covered >= 176,
        summary: format!("pilot centre {center:.5}; {covered}/200 intervals cover it (need 176)"),
        report: json!({ "pilot_mean": pilot_run.mean_statistic, "center": center, "covered": covered }),
    })
}

fn run_suite() -> Result<Vec<Outcome>> {
    let mut pool = Vec::new();
    let c1 = c1_solver_exactness(&mut pool)?;
    let c3 = c3_oracle_equivalence(&mut pool)?;
    let c2 = c2_certificates(&pool)?;
    let c4 = c4_monotonicity(&pool)?;
    let (c5, c6) = c5_c6_clt()?;
    Ok(vec![
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
        c7_plugin_consistency()?,
        c8_efron_stein()?,
        c9_remainder()?,
        c10_stability()?,
        c11_delta_method()?,
    ])
}

fn write_reports(dir: &Path, outcomes: &[Outcome]) -> Result<()> {
    for o in outcomes {
        write_atomic(dir.join(format!("{}.json", o.id)), to_json(&o.report)?.as_bytes())?;
    }
    Ok(())
}

fn main() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut first = Vec::new();
    for (round, dir) in dirs.iter().enumerate() {
        let outcomes = match run_suite() {
            Ok(o) => o,
            Err(e) => {
                println!("acceptance suite aborted: {e}");
                std::process::exit(1);
            }
        };
        write_reports(dir.path(), &outcomes).unwrap();
        if round == 0 {
            first = outcomes;
        }
    }

    let mut identical = true;
    for o in &first {
        let name = format!("{}.json", o.id);
        let a = std::fs::read(dirs[0].path().join(&name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(&name)).unwrap();
        identical &= a == b;
    }
    first.push(Outcome {
        id: "C12",
        title: "determinism",
        passed: identical,
        summary: format!("{} JSON reports compared across two full runs", first.len()),
        report: Value::Null,
    });

    println!();
    for o in &first {
        println!("{:<4} {} {:<30} {}", o.id, if o.passed { "PASS" } else { "FAIL" }, o.title, o.summary);
    }
    let failed = first.iter().filter(|o| !o.passed).count();
    println!("\n{} of {} criteria passed", first.len() - failed, first.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
