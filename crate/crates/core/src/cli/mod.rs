//! The `multipool` command line.
//!
//! Exit codes: 0 success, 1 a well-formed request whose answer is negative
//! (not a multipool, infeasible tuning, failed comparison, statistic not
//! applicable), 2 invalid input.

pub mod curve;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analytics::{self, ScenarioParams};
use crate::design::{self, MultipoolParams};
use crate::error::{Error, Result};
use crate::model::NoiseModel;
use crate::montecarlo::{self, CompareOptions, ExperimentConfig};
use curve::{CurveRequest, FixedParams, Statistic, SweepVar};

#[derive(Debug, Parser)]
#[command(
    name = "multipool",
    version,
    about = "Multipool group testing designs and their error analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the (q², q, m)-multipool and write its pooling matrix.
    Design {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        /// Output file; stdout if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: MatrixFormat,
    },
    /// Check a pooling matrix file (JSON or dense CSV) against the multipool
    /// conditions.
    Validate {
        path: PathBuf,
        /// Pool size; defaults to the value recorded in or inferred from the file.
        #[arg(long)]
        q: Option<u32>,
        /// Multiplicity; defaults to the value recorded in or inferred from the file.
        #[arg(long)]
        m: Option<u32>,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a closed-form statistic along a parameter sweep as CSV.
    Analyze {
        #[arg(long, value_enum)]
        statistic: Statistic,
        #[arg(long, value_enum)]
        sweep: SweepVar,
        /// Inclusive grid START:STOP:STEP.
        #[arg(long, conflicts_with = "values", required_unless_present = "values")]
        grid: Option<String>,
        /// Comma-separated grid values.
        #[arg(long)]
        values: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        rho: f64,
        #[arg(long, default_value_t = 16)]
        q: u32,
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        nc: u32,
        #[arg(long, default_value_t = 0.0)]
        pfp: f64,
        #[arg(long, default_value_t = 0.0)]
        pfn: f64,
        /// Population size; defaults to q² at every grid point.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo experiment compared against the closed forms.
    Simulate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        nc: u32,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        pfp: f64,
        #[arg(long, default_value_t = 0.0)]
        pfn: f64,
        /// Must equal q² when given.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Worker threads; results do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        /// Write the JSON report here and print a summary; otherwise print the report.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0)]
        z_threshold: f64,
    },
    /// Smallest multiplicity meeting a Type I error budget.
    Tune {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0.0)]
        pfp: f64,
        #[arg(long, default_value_t = 0.0)]
        pfn: f64,
        #[arg(long)]
        epsilon: f64,
        /// Largest multiplicity considered; defaults to q+1.
        #[arg(long)]
        cap: Option<u32>,
    },
}

/// Runs the command line with `args` (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(output: Option<&PathBuf>, text: &str, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Design { q, m, output, format } => {
            let params = MultipoolParams::new(q, m)?;
            let matrix = design::build_multipool(params)?;
            let text = match format {
                MatrixFormat::Json => design::write_matrix_json(&matrix),
                MatrixFormat::Csv => design::write_dense_csv(&matrix),
            };
            let summary = format!(
                "n = {}, t = {}, compression ratio n/t = {}",
                params.n(),
                params.t(),
                params.compression_ratio()
            );
            match output {
                Some(path) => {
                    fs::write(&path, text)?;
                    writeln!(out, "{summary}")?;
                    writeln!(out, "wrote {}", path.display())?;
                }
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Validate { path, q, m, json } => {
            let text = fs::read_to_string(&path)?;
            let matrix = design::read_matrix_file(&text)?;
            let q = q
                .or(matrix.q())
                .ok_or_else(|| Error::domain("pool size is not uniform; pass --q"))?;
            let m = m
                .or(matrix.m())
                .ok_or_else(|| Error::domain("multiplicity is not uniform; pass --m"))?;
            let report = design::validate_multipool(&matrix, q as usize, m as usize);
            if json {
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                out.write_all(s.as_bytes())?;
            } else {
                writeln!(out, "n = {}, t = {}, q = {q}, m = {m}", matrix.n(), matrix.t())?;
                writeln!(out, "max pairwise overlap = {}", report.max_pairwise_overlap)?;
                for v in &report.violations {
                    writeln!(out, "violation: {v}")?;
                }
                writeln!(
                    out,
                    "{}",
                    if report.is_multipool {
                        "multipool: yes"
                    } else {
                        "multipool: no"
                    }
                )?;
            }
            Ok(if report.is_multipool { 0 } else { 1 })
        }
        Command::Analyze {
            statistic,
            sweep,
            grid,
            values,
            rho,
            q,
            m,
            nc,
            pfp,
            pfn,
            n,
            output,
        } => {
            let grid = match (grid, values) {
                (Some(g), _) => curve::parse_range(&g)?,
                (None, Some(v)) => curve::parse_values(&v)?,
                (None, None) => return Err(Error::domain("pass --grid or --values")),
            };
            let request = CurveRequest {
                statistic,
                sweep,
                grid,
                fixed: FixedParams {
                    rho,
                    q,
                    m,
                    nc,
                    p_fp: pfp,
                    p_fn: pfn,
                    n,
                },
            };
            let table = request.evaluate()?;
            emit(output.as_ref(), &table.to_csv(), out)?;
            Ok(0)
        }
        Command::Simulate {
            q,
            m,
            nc,
            rho,
            pfp,
            pfn,
            n,
            trials,
            seed,
            threads,
            output,
            z_threshold,
        } => {
            let noise = NoiseModel::new(pfp, pfn)?;
            let scenario = ScenarioParams::new(rho, q, m, nc, noise)?;
            if let Some(n) = n {
                if n != u64::from(q) * u64::from(q) {
                    return Err(Error::domain(format!(
                        "the multipool design has n = q² = {} items, got --n {n}",
                        u64::from(q) * u64::from(q)
                    )));
                }
            }
            if threads == Some(0) {
                return Err(Error::domain("--threads must be at least 1"));
            }
            if z_threshold.is_nan() || z_threshold <= 0.0 {
                return Err(Error::domain("--z-threshold must be positive"));
            }
            let config = ExperimentConfig::multipool(scenario, trials, seed)?;
            let opts = CompareOptions {
                z_threshold,
                ..CompareOptions::default()
            };
            let report = montecarlo::compare_with(&config, opts, threads)?;
            match output {
                Some(path) => {
                    fs::write(&path, report.to_json())?;
                    writeln!(out, "trials = {}, seed = {seed}", report.trials)?;
                    for row in &report.rows {
                        let verdict = if row.check.passed() { "ok" } else { "FAIL" };
                        match row.check.z() {
                            Some(z) => writeln!(out, "{:<8} z = {z:>8.3}  {verdict}", row.statistic)?,
                            None => writeln!(out, "{:<8} {verdict}", row.statistic)?,
                        }
                    }
                    writeln!(
                        out,
                        "max false negatives in one trial = {}",
                        report.empirical.max_false_negatives
                    )?;
                    writeln!(out, "all pass: {}", report.all_pass)?;
                    writeln!(out, "wrote {}", path.display())?;
                }
                None => out.write_all(report.to_json().as_bytes())?,
            }
            Ok(if report.all_pass { 0 } else { 1 })
        }
        Command::Tune {
            rho,
            q,
            pfp,
            pfn,
            epsilon,
            cap,
        } => {
            let noise = NoiseModel::new(pfp, pfn)?;
            match analytics::min_multiplicity(rho, q, noise, epsilon, cap) {
                Ok(t) => {
                    writeln!(out, "raw bound = {}", t.raw_bound)?;
                    writeln!(out, "m = {}", t.m)?;
                    writeln!(out, "type I error = {}", t.type_one)?;
                    writeln!(out, "compression ratio q/m = {}", t.compression_ratio)?;
                    Ok(0)
                }
                Err(e @ Error::Infeasible { .. }) => {
                    writeln!(out, "{e}")?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
    }
}
