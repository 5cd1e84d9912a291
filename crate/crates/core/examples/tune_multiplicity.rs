//! Smallest multiplicity meeting a Type I budget, across prevalences.

use multipool::analytics::min_multiplicity;
use multipool::model::NoiseModel;
use multipool::Error;

fn main() -> multipool::Result<()> {
    let noise = NoiseModel::new(0.01, 0.02)?;
    println!("q = 32, epsilon = 0.05");
    for rho in [0.001, 0.005, 0.01, 0.02, 0.05, 0.1] {
        match min_multiplicity(rho, 32, noise, 0.05, None) {
            Ok(t) => println!(
                "rho = {rho:<5}: m = {:>2} (raw bound {:.2}), type I {:.4}, q/m = {:.2}",
                t.m, t.raw_bound, t.type_one, t.compression_ratio
            ),
            Err(Error::Infeasible { raw_bound, .. }) => {
                println!("rho = {rho:<5}: infeasible, raw bound {raw_bound:.2}")
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
