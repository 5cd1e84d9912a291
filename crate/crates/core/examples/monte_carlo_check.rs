//! Runs 10^5 seeded trials of a noisy scenario, compares every statistic with
//! its closed form and reports throughput.

use std::time::Instant;

use multipool::analytics::ScenarioParams;
use multipool::model::NoiseModel;
use multipool::montecarlo::{compare, ExperimentConfig};

fn main() -> multipool::Result<()> {
    let sc = ScenarioParams::new(0.05, 16, 6, 0, NoiseModel::new(0.02, 0.02)?)?;
    let config = ExperimentConfig::multipool(sc, 100_000, 2024)?;

    let start = Instant::now();
    let report = compare(&config)?;
    let secs = start.elapsed().as_secs_f64();

    for row in &report.rows {
        match row.check.z() {
            Some(z) => println!("{:<9} z = {z:+.3}", row.statistic),
            None => println!(
                "{:<9} {}",
                row.statistic,
                if row.check.passed() { "ok" } else { "FAIL" }
            ),
        }
    }
    println!("all pass: {}", report.all_pass);
    println!(
        "{} trials in {secs:.2} s ({:.0} trials/s)",
        config.trials,
        config.trials as f64 / secs
    );
    Ok(())
}
