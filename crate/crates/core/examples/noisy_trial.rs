//! One trial of the forward model on the (256, 16, 6)-multipool: infections,
//! noisy pool readouts, NCOMP decoding and the resulting tally.

use multipool::design::{build_multipool, MultipoolParams};
use multipool::model::{
    decode_ncomp, pool_loads, sample_infections, sample_pool_results, tally, NoiseModel, SeedSpec,
};

fn main() -> multipool::Result<()> {
    let matrix = build_multipool(MultipoolParams::new(16, 6)?)?;
    let noise = NoiseModel::new(0.02, 0.02)?;
    let seed = SeedSpec::new(42, 0);

    let state = sample_infections(matrix.n(), 0.05, &seed)?;
    let loads = pool_loads(&matrix, &state)?;
    let results = sample_pool_results(&loads, &noise, &seed);
    let positive_pools = results.y.iter().filter(|&&y| y).count();
    println!(
        "{} infected items, {positive_pools} of {} pools positive",
        state.infected_count(),
        matrix.t()
    );

    for nc in 0..=2 {
        let decoded = decode_ncomp(&matrix, &results, nc)?;
        let t = tally(&state, &decoded)?;
        println!(
            "NCOMP({nc}): T = {:>3}, false positives = {:>3}, false negatives = {}",
            t.positives, t.false_positives, t.false_negatives
        );
    }
    Ok(())
}
