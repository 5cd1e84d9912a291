//! Analytic curves as CSV: one statistic evaluated along one swept
//! parameter, all other parameters held fixed.

use std::fmt;

use crate::analytics::{self, ScenarioParams};
use crate::error::{Error, Result};
use crate::model::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Statistic {
    #[value(name = "sens")]
    Sens,
    #[value(name = "spec")]
    Spec,
    #[value(name = "typeI")]
    TypeOne,
    #[value(name = "typeII")]
    TypeTwo,
    #[value(name = "e_T")]
    ExpectedPositives,
    #[value(name = "e_Tfp")]
    ExpectedFalsePositives,
    #[value(name = "e_Tfn")]
    ExpectedFalseNegatives,
    #[value(name = "var_T_bound")]
    VarianceBoundPositives,
    #[value(name = "var_Tfp_bound")]
    VarianceBoundFalsePositives,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Sens => "sens",
            Statistic::Spec => "spec",
            Statistic::TypeOne => "typeI",
            Statistic::TypeTwo => "typeII",
            Statistic::ExpectedPositives => "e_T",
            Statistic::ExpectedFalsePositives => "e_Tfp",
            Statistic::ExpectedFalseNegatives => "e_Tfn",
            Statistic::VarianceBoundPositives => "var_T_bound",
            Statistic::VarianceBoundFalsePositives => "var_Tfp_bound",
        }
    }

    /// `None` marks a value that is undefined at this point.
    pub fn evaluate(self, sc: &ScenarioParams) -> Result<Option<f64>> {
        Ok(match self {
            Statistic::Sens => Some(analytics::sensitivity(sc)),
            Statistic::Spec => Some(analytics::specificity(sc)),
            Statistic::TypeOne => undefined_as_none(analytics::type_one(sc))?,
            Statistic::TypeTwo => undefined_as_none(analytics::type_two(sc))?,
            Statistic::ExpectedPositives => Some(analytics::expected_counts(sc).positives),
            Statistic::ExpectedFalsePositives => Some(analytics::expected_counts(sc).false_positives),
            Statistic::ExpectedFalseNegatives => Some(analytics::expected_counts(sc).false_negatives),
            Statistic::VarianceBoundPositives => Some(analytics::variance_bounds(sc)?.positives),
            Statistic::VarianceBoundFalsePositives => Some(analytics::variance_bounds(sc)?.false_positives),
        })
    }
}

fn undefined_as_none(v: Result<f64>) -> Result<Option<f64>> {
    match v {
        Ok(x) => Ok(Some(x)),
        Err(Error::Undefined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepVar {
    Rho,
    M,
    Q,
    Nc,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Rho => "rho",
            SweepVar::M => "m",
            SweepVar::Q => "q",
            SweepVar::Nc => "nc",
        }
    }
}

/// Parameters held fixed along a curve. `n = None` means `n = q²` at every
/// point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub rho: f64,
    pub q: u32,
    pub m: u32,
    pub nc: u32,
    pub p_fp: f64,
    pub p_fn: f64,
    pub n: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRequest {
    pub statistic: Statistic,
    pub sweep: SweepVar,
    pub grid: Vec<f64>,
    pub fixed: FixedParams,
}

/// Parses `START:STOP:STEP` into an inclusive grid. Points are rounded to
/// 12 decimals to remove accumulated step error.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::domain(format!("bad number {s:?} in grid {spec:?}")))
    };
    let [start, stop, step] = parts.as_slice() else {
        return Err(Error::domain(format!("grid {spec:?} is not START:STOP:STEP")));
    };
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::domain(format!(
            "grid {spec:?} is empty or has a non-positive step"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Parses a comma-separated list of grid values.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let values = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("bad number {s:?} in value list")))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(Error::domain("empty value list"));
    }
    Ok(values)
}

/// Rectangular CSV table: header plus rows of numbers, `NA` for undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

fn integral(v: f64, what: &str) -> Result<u32> {
    if v.fract() == 0.0 && v >= 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(Error::domain(format!(
            "{what} must be a non-negative integer, got {v}"
        )))
    }
}

impl CurveRequest {
    fn scenario_at(&self, x: f64) -> Result<ScenarioParams> {
        let mut f = self.fixed;
        match self.sweep {
            SweepVar::Rho => f.rho = x,
            SweepVar::M => f.m = integral(x, "m")?,
            SweepVar::Q => f.q = integral(x, "q")?,
            SweepVar::Nc => f.nc = integral(x, "nc")?,
        }
        let noise = NoiseModel::new(f.p_fp, f.p_fn)?;
        let sc = ScenarioParams::new(f.rho, f.q, f.m, f.nc, noise)?;
        Ok(match f.n {
            Some(n) => sc.with_n(n),
            None => sc,
        })
    }

    pub fn evaluate(&self) -> Result<CurveTable> {
        if self.grid.is_empty() {
            return Err(Error::domain("empty grid"));
        }
        let fixed_names: Vec<&str> = ["rho", "q", "m", "nc", "pfp", "pfn", "n"]
            .into_iter()
            .filter(|&name| name != self.sweep.name())
            .collect();
        let mut header = vec![self.sweep.name().to_string(), self.statistic.name().to_string()];
        header.extend(fixed_names.iter().map(|s| s.to_string()));
        let rows = self
            .grid
            .iter()
            .map(|&x| {
                let sc = self.scenario_at(x)?;
                let mut row = vec![Some(x), self.statistic.evaluate(&sc)?];
                for name in &fixed_names {
                    row.push(Some(match *name {
                        "rho" => sc.rho,
                        "q" => sc.q as f64,
                        "m" => sc.m as f64,
                        "nc" => sc.nc as f64,
                        "pfp" => sc.noise.p_fp(),
                        "pfn" => sc.noise.p_fn(),
                        _ => sc.n as f64,
                    }));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CurveTable { header, rows })
    }
}

struct Cell(Option<f64>);

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            // Display for f64 is the shortest string that parses back exactly.
            Some(v) => write!(f, "{v}"),
            None => f.write_str("NA"),
        }
    }
}

impl CurveTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&c| Cell(c).to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                column: 0,
                message: e.to_string(),
            })?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                column: 0,
                message: e.to_string(),
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let row = record
                .iter()
                .enumerate()
                .map(|(k, cell)| match cell {
                    "NA" => Ok(None),
                    s => s.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                        line,
                        column: k as u64 + 1,
                        message: format!("not a number: {s:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    /// Column by header name.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}
