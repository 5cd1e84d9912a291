//! Builds the (49, 7, 8)-multipool, prints its layers and writes it to disk
//! in both file formats.

use multipool::design::{
    build_multipool, max_pools_bound, read_matrix_file, validate_multipool, write_dense_csv,
    write_matrix_json, MultipoolParams,
};

fn main() -> multipool::Result<()> {
    let params = MultipoolParams::new(7, 8)?;
    let matrix = build_multipool(params)?;
    println!(
        "n = {}, t = {}, compression ratio {:.3}, largest possible t = {}",
        params.n(),
        params.t(),
        params.compression_ratio(),
        max_pools_bound(7, 49)?
    );

    // Pools of one layer (one slope) partition the items.
    let labels = matrix.labels().expect("built designs carry labels");
    for (pool, label) in matrix.pools().iter().zip(labels).take(14) {
        println!(
            "slope {:>3}, intercept {}: {:?}",
            label.slope.to_string(),
            label.intercept.index(),
            pool
        );
    }
    println!("... ({} pools in total; the last layer is vertical)", matrix.t());

    let report = validate_multipool(&matrix, 7, 8);
    println!(
        "multipool: {}, max pairwise overlap {}",
        report.is_multipool, report.max_pairwise_overlap
    );

    let dir = std::env::temp_dir();
    let json = write_matrix_json(&matrix);
    let csv = write_dense_csv(&matrix);
    std::fs::write(dir.join("multipool_49_7_8.json"), &json)?;
    std::fs::write(dir.join("multipool_49_7_8.csv"), &csv)?;
    assert_eq!(write_matrix_json(&read_matrix_file(&json)?), json);
    println!("wrote {}/multipool_49_7_8.{{json,csv}}", dir.display());
    Ok(())
}
