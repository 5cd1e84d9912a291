//! Empirical confusion statistics of a screen with 1000 people, 20 of them
//! infected, and the closed-form Type I error at very low prevalence.

use multipool::analytics::{confusion_stats, type_one, ScenarioParams};
use multipool::model::{NoiseModel, Tally};

fn main() -> multipool::Result<()> {
    let tally = Tally {
        positives: 39,
        false_positives: 20,
        false_negatives: 1,
        true_positives: 19,
        true_negatives: 960,
    };
    let stats = confusion_stats(&tally, 20, 1000)?;
    let show = |name, p: Option<multipool::analytics::Proportion>| match p {
        Some(p) => println!("{name:<12} {}/{} = {:.5}", p.numerator, p.denominator, p.value()),
        None => println!("{name:<12} undefined"),
    };
    show("sensitivity", stats.sensitivity);
    show("specificity", stats.specificity);
    show("type I", stats.type_one);
    show("type II", stats.type_two);

    // With a 20% false-positive rate per pool almost every positive is false
    // once infections are rare enough.
    let noise = NoiseModel::new(0.2, 0.02)?;
    for rho in [1e-2, 1e-3, 1e-4, 1e-6] {
        let sc = ScenarioParams::new(rho, 16, 2, 0, noise)?;
        println!("rho = {rho:e}: P(healthy | flagged) = {:.6}", type_one(&sc)?);
    }
    Ok(())
}
