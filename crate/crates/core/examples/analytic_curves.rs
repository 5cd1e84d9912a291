//! Sensitivity of COMP and NCOMP(1) against prevalence for q = 16 and
//! multiplicities 2 to 10, written as CSV to stdout.

use multipool::cli::curve::{parse_range, CurveRequest, FixedParams, Statistic, SweepVar};

fn main() -> multipool::Result<()> {
    let grid = parse_range("0:0.2:0.01")?;
    let mut columns = Vec::new();
    let mut header = vec!["rho".to_string()];
    for nc in [0, 1] {
        for m in 2..=10 {
            let request = CurveRequest {
                statistic: Statistic::Sens,
                sweep: SweepVar::Rho,
                grid: grid.clone(),
                fixed: FixedParams {
                    rho: 0.0,
                    q: 16,
                    m,
                    nc,
                    p_fp: 0.02,
                    p_fn: 0.02,
                    n: None,
                },
            };
            let table = request.evaluate()?;
            columns.push(table.column("sens").expect("statistic column"));
            header.push(format!("sens_m{m}_nc{nc}"));
        }
    }
    println!("{}", header.join(","));
    for (i, rho) in grid.iter().enumerate() {
        let row: Vec<String> = columns.iter().map(|c| format!("{:.6}", c[i].unwrap())).collect();
        println!("{rho},{}", row.join(","));
    }
    Ok(())
}
