//! Assumption checks on power costs, on |v| (rejected) and on cosh (accepted).

use otclt::cost::CostSpec;

fn main() -> otclt::error::Result<()> {
    for p in [1.5, 2.0, 3.0] {
        let report = CostSpec::power(p, 2)?.validate_assumptions(256, 0)?;
        println!("power:{p}  passed={}  worst gap {:.3e}", report.passed, report.worst_midpoint_gap);
    }
    println!("power:1  -> {}", CostSpec::power(1.0, 1).unwrap_err());

    let norm = CostSpec::custom("abs", 1, |v: &[f64]| v[0].abs(), None, None)?;
    match norm.validate_assumptions(256, 0) {
        Ok(r) => println!("abs passed={}", r.passed),
        Err(e) => println!("abs rejected: {e}"),
    }

    let cosh = CostSpec::custom("cosh", 1, |v: &[f64]| v[0].cosh(), None, None)?;
    let r = cosh.validate_assumptions(256, 0)?;
    println!("cosh passed={} growth={}", r.passed, r.superlinear_growth);
    Ok(())
}
