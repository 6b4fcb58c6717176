//! Independent, reproducible random streams keyed by (seed, label, index).

use otclt::measure::SampleSource;
use otclt::rng::stream;
use rand::Rng;

fn main() -> otclt::error::Result<()> {
    let a: f64 = stream(42, "demo", 0).random();
    let b: f64 = stream(42, "demo", 0).random();
    let c: f64 = stream(42, "demo", 1).random();
    println!("same key: {a} {b}\nnext index: {c}");

    let src = SampleSource::new("unif:0:1".parse()?, "P");
    let first = src.sample(3, 42, 0)?;
    println!("replication 0: {:?}", first.coords());
    println!("replication 1: {:?}", src.sample(3, 42, 1)?.coords());
    Ok(())
}
