//! Prevalence thresholds of the q = 16 designs.

use multipool::analytics::{binary_entropy, threshold_disjunct, threshold_info};

fn main() -> multipool::Result<()> {
    println!(" m  rho_disj    rho_info    H(rho_info)");
    for m in 1..=16 {
        let info = threshold_info(16, m)?;
        println!(
            "{m:>2}  {:<10.6}  {info:<10.6}  {:.6}",
            threshold_disjunct(16, m),
            binary_entropy(info)
        );
    }
    Ok(())
}
