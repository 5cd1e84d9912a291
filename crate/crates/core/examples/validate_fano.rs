//! Validation accepts designs from elsewhere: the Fano plane is a
//! (7, 3, 3)-multipool, and breaking it is reported.

use multipool::design::{fano_plane, validate_multipool, PoolingMatrix};

fn main() -> multipool::Result<()> {
    let fano = fano_plane();
    let report = validate_multipool(&fano, 3, 3);
    println!("Fano plane: multipool = {}", report.is_multipool);

    let mut pools = fano.pools().to_vec();
    pools[6] = pools[0].clone();
    let broken = PoolingMatrix::from_pools(7, pools)?;
    let report = validate_multipool(&broken, 3, 3);
    println!("with a duplicated line: multipool = {}", report.is_multipool);
    for v in &report.violations {
        println!("  {v}");
    }
    Ok(())
}
