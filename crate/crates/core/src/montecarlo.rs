//! Seeded Monte Carlo estimation of the accuracy statistics, and comparison
//! against the closed forms.
//!
//! Trial `k` draws all of its randomness from `SeedSpec { master_seed, k }`,
//! and trials are aggregated through integer sums only, so the estimates are
//! bit-identical for any thread count or scheduling order.

use std::sync::Arc;

use rand::distr::{Bernoulli, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::{self, AnalyticReport, ScenarioParams};
use crate::design::{build_multipool, MultipoolParams, PoolingMatrix};
use crate::error::{Error, Result};
use crate::model::{Phase, SeedSpec, Tally};

/// Trials handed to one rayon task.
const CHUNK: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum DesignSource {
    Multipool(MultipoolParams),
    Matrix(Arc<PoolingMatrix>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: ScenarioParams,
    pub design: DesignSource,
    pub trials: u64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// Experiment on the line-construction multipool for the scenario's
    /// `q` and `m`; the scenario's `n` is set to `q²`.
    pub fn multipool(scenario: ScenarioParams, trials: u64, master_seed: u64) -> Result<Self> {
        let params = MultipoolParams::new(scenario.q, scenario.m)?;
        Self::new(
            scenario.with_n(params.n() as u64),
            DesignSource::Multipool(params),
            trials,
            master_seed,
        )
    }

    pub fn new(
        scenario: ScenarioParams,
        design: DesignSource,
        trials: u64,
        master_seed: u64,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("at least one trial is required"));
        }
        let (q, m, n) = match &design {
            DesignSource::Multipool(p) => (Some(p.q()), Some(p.m()), p.n() as u64),
            DesignSource::Matrix(mat) => (mat.q(), mat.m(), mat.n() as u64),
        };
        if q.is_some_and(|q| q != scenario.q) || m.is_some_and(|m| m != scenario.m) {
            return Err(Error::domain(format!(
                "design (q={q:?}, m={m:?}) does not match scenario (q={}, m={})",
                scenario.q, scenario.m
            )));
        }
        if n != scenario.n {
            return Err(Error::domain(format!(
                "design has {n} items but the scenario says n = {}",
                scenario.n
            )));
        }
        Ok(Self {
            scenario,
            design,
            trials,
            master_seed,
        })
    }

    fn matrix(&self) -> Result<Arc<PoolingMatrix>> {
        match &self.design {
            DesignSource::Multipool(p) => Ok(Arc::new(build_multipool(*p)?)),
            DesignSource::Matrix(m) => Ok(Arc::clone(m)),
        }
    }
}

/// Sums for a ratio estimator `Σa / Σb` over trials, with the cross
/// moments needed for a trial-clustered standard error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct RatioSums {
    a: u128,
    b: u128,
    aa: u128,
    ab: u128,
    bb: u128,
}

impl RatioSums {
    fn add(&mut self, a: u64, b: u64) {
        let (a, b) = (a as u128, b as u128);
        self.a += a;
        self.b += b;
        self.aa += a * a;
        self.ab += a * b;
        self.bb += b * b;
    }

    fn merge(&mut self, o: &Self) {
        self.a += o.a;
        self.b += o.b;
        self.aa += o.aa;
        self.ab += o.ab;
        self.bb += o.bb;
    }
}

/// Raw power sums of an integer count per trial.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct MomentSums {
    s1: u128,
    s2: u128,
    s3: u128,
    s4: u128,
}

impl MomentSums {
    fn add(&mut self, x: u64) {
        let x = x as u128;
        self.s1 += x;
        self.s2 += x * x;
        self.s3 += x * x * x;
        self.s4 += x * x * x * x;
    }

    fn merge(&mut self, o: &Self) {
        self.s1 += o.s1;
        self.s2 += o.s2;
        self.s3 += o.s3;
        self.s4 += o.s4;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Accumulator {
    trials: u64,
    sens: RatioSums,
    spec: RatioSums,
    type_one: RatioSums,
    type_two: RatioSums,
    positives: MomentSums,
    false_positives: MomentSums,
    false_negatives: MomentSums,
    true_positives: u128,
    max_false_negatives: u64,
}

impl Accumulator {
    fn add(&mut self, t: &Tally, n: u64) {
        self.trials += 1;
        let infected = t.infected();
        self.sens.add(t.true_positives, infected);
        self.spec.add(t.true_negatives, n - infected);
        self.type_one.add(t.false_positives, t.positives);
        self.type_two.add(t.false_negatives, n - t.positives);
        self.positives.add(t.positives);
        self.false_positives.add(t.false_positives);
        self.false_negatives.add(t.false_negatives);
        self.true_positives += t.true_positives as u128;
        self.max_false_negatives = self.max_false_negatives.max(t.false_negatives);
    }

    fn merge(mut self, o: Self) -> Self {
        self.trials += o.trials;
        self.sens.merge(&o.sens);
        self.spec.merge(&o.spec);
        self.type_one.merge(&o.type_one);
        self.type_two.merge(&o.type_two);
        self.positives.merge(&o.positives);
        self.false_positives.merge(&o.false_positives);
        self.false_negatives.merge(&o.false_negatives);
        self.true_positives += o.true_positives;
        self.max_false_negatives = self.max_false_negatives.max(o.max_false_negatives);
        self
    }
}

/// Pooled conditional proportion, e.g. sensitivity = flagged infected items
/// over all infected item-observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEstimate {
    /// `None` when no conditioning event was observed.
    pub value: Option<f64>,
    pub hits: u64,
    /// Number of conditioning events (effective sample size).
    pub events: u64,
    /// Binomial standard error on the pooled events.
    pub binomial_std_error: Option<f64>,
    /// Standard error of the ratio estimator with trials as clusters.
    pub clustered_std_error: Option<f64>,
}

impl RatioEstimate {
    fn from_sums(s: &RatioSums, trials: u64) -> Self {
        let events = s.b as u64;
        if s.b == 0 {
            return Self {
                value: None,
                hits: s.a as u64,
                events,
                binomial_std_error: None,
                clustered_std_error: None,
            };
        }
        let b = s.b as f64;
        let r = s.a as f64 / b;
        let binomial = (r * (1.0 - r) / b).max(0.0).sqrt();
        let clustered = if trials > 1 {
            let residual = (s.aa as f64 - 2.0 * r * s.ab as f64 + r * r * s.bb as f64).max(0.0);
            let t = trials as f64;
            Some((residual * t / (t - 1.0)).sqrt() / b)
        } else {
            None
        };
        Self {
            value: Some(r),
            hits: s.a as u64,
            events,
            binomial_std_error: Some(binomial),
            clustered_std_error: clustered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceEstimate {
    /// Unbiased sample variance across trials.
    pub value: f64,
    /// Standard error of the sample variance, from the fourth central moment.
    pub std_error: f64,
    pub samples: u64,
}

fn mean_and_variance(s: &MomentSums, trials: u64) -> (MeanEstimate, VarianceEstimate) {
    let t = trials as f64;
    let mean = s.s1 as f64 / t;
    // T·S2 − S1² is an exact integer.
    let centered = (trials as u128 * s.s2 - s.s1 * s.s1) as f64;
    let var = if trials > 1 {
        centered / (t * (t - 1.0))
    } else {
        0.0
    };
    let m4 = s.s4 as f64 / t - 4.0 * mean * s.s3 as f64 / t + 6.0 * mean * mean * s.s2 as f64 / t
        - 3.0 * mean.powi(4);
    let var_se = if trials > 3 {
        ((m4 - var * var * (t - 3.0) / (t - 1.0)) / t).max(0.0).sqrt()
    } else {
        0.0
    };
    (
        MeanEstimate {
            value: mean,
            std_error: (var / t).sqrt(),
            samples: trials,
        },
        VarianceEstimate {
            value: var,
            std_error: var_se,
            samples: trials,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalStats {
    pub trials: u64,
    pub sens: RatioEstimate,
    pub spec: RatioEstimate,
    pub type_one: RatioEstimate,
    pub type_two: RatioEstimate,
    pub mean_t: MeanEstimate,
    pub mean_tfp: MeanEstimate,
    pub mean_tfn: MeanEstimate,
    pub var_t: VarianceEstimate,
    pub var_tfp: VarianceEstimate,
    pub total_positives: u64,
    pub total_false_positives: u64,
    pub total_true_positives: u64,
    /// Largest false-negative count seen in any single trial.
    pub max_false_negatives: u64,
}

impl EmpiricalStats {
    fn from_accumulator(acc: &Accumulator) -> Self {
        let t = acc.trials;
        let (mean_t, var_t) = mean_and_variance(&acc.positives, t);
        let (mean_tfp, var_tfp) = mean_and_variance(&acc.false_positives, t);
        let (mean_tfn, _) = mean_and_variance(&acc.false_negatives, t);
        Self {
            trials: t,
            sens: RatioEstimate::from_sums(&acc.sens, t),
            spec: RatioEstimate::from_sums(&acc.spec, t),
            type_one: RatioEstimate::from_sums(&acc.type_one, t),
            type_two: RatioEstimate::from_sums(&acc.type_two, t),
            mean_t,
            mean_tfp,
            mean_tfn,
            var_t,
            var_tfp,
            total_positives: acc.positives.s1 as u64,
            total_false_positives: acc.false_positives.s1 as u64,
            total_true_positives: acc.true_positives as u64,
            max_false_negatives: acc.max_false_negatives,
        }
    }
}

/// Reusable buffers for one worker.
struct Scratch {
    x: Vec<bool>,
    y: Vec<bool>,
}

/// One trial, drawing the same random numbers in the same order as
/// [`crate::model::run_trial`] but without allocating.
fn simulate_tally(
    matrix: &PoolingMatrix,
    sc: &ScenarioParams,
    infection: &Bernoulli,
    negative: &[Bernoulli],
    seed: SeedSpec,
    scratch: &mut Scratch,
) -> Tally {
    let mut rng = seed.rng(Phase::Infections);
    for x in scratch.x.iter_mut() {
        *x = infection.sample(&mut rng);
    }
    let mut rng = seed.rng(Phase::PoolNoise);
    for (i, pool) in matrix.pools().iter().enumerate() {
        let load = pool.iter().filter(|&&j| scratch.x[j]).count();
        scratch.y[i] = !negative[load].sample(&mut rng);
    }
    let mut t = Tally::default();
    for (j, &x) in scratch.x.iter().enumerate() {
        let pools = matrix.item_pools(j);
        let positive = pools.iter().filter(|&&i| scratch.y[i]).count();
        let z = positive + sc.nc as usize >= pools.len();
        match (x, z) {
            (true, true) => t.true_positives += 1,
            (false, true) => t.false_positives += 1,
            (true, false) => t.false_negatives += 1,
            (false, false) => t.true_negatives += 1,
        }
    }
    t.positives = t.true_positives + t.false_positives;
    t
}

fn run_trials(config: &ExperimentConfig, matrix: &PoolingMatrix) -> Result<Accumulator> {
    let sc = &config.scenario;
    let infection = Bernoulli::new(sc.rho).map_err(|e| Error::domain(e.to_string()))?;
    let max_load = matrix.pools().iter().map(Vec::len).max().unwrap_or(0);
    let negative: Vec<Bernoulli> = (0..=max_load)
        .map(|k| Bernoulli::new(sc.noise.negative_probability(k as u32)))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::domain(e.to_string()))?;
    let max_deg = matrix.max_multiplicity();
    if sc.nc as usize > max_deg {
        return Err(Error::domain(format!(
            "nc = {} exceeds multiplicity {max_deg}",
            sc.nc
        )));
    }
    let n = matrix.n() as u64;
    let chunks = config.trials.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut scratch = Scratch {
                x: vec![false; matrix.n()],
                y: vec![false; matrix.t()],
            };
            let mut acc = Accumulator::default();
            let end = ((c + 1) * CHUNK).min(config.trials);
            for k in c * CHUNK..end {
                let seed = SeedSpec::new(config.master_seed, k);
                let t = simulate_tally(matrix, sc, &infection, &negative, seed, &mut scratch);
                acc.add(&t, n);
            }
            acc
        })
        .reduce(Accumulator::default, Accumulator::merge))
}

/// Runs `config.trials` independent trials on the global rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<EmpiricalStats> {
    let matrix = config.matrix()?;
    Ok(EmpiricalStats::from_accumulator(&run_trials(config, &matrix)?))
}

/// [`run_experiment`] on a dedicated pool of `threads` workers.
pub fn run_experiment_on(config: &ExperimentConfig, threads: usize) -> Result<EmpiricalStats> {
    with_threads(threads, || run_experiment(config))
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(f)
}

/// Gates for [`compare`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareOptions {
    /// Largest accepted `|z|` for point statistics.
    pub z_threshold: f64,
    /// Allowed excess of an empirical variance over its bound, in standard
    /// errors of the sample variance.
    pub variance_slack: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            z_threshold: 4.0,
            variance_slack: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    ZScore {
        analytic: f64,
        empirical: f64,
        /// Standard error used for the z-score.
        std_error: f64,
        z: f64,
        pass: bool,
    },
    UpperBound {
        bound: f64,
        empirical: f64,
        std_error: f64,
        respected: bool,
    },
    NotApplicable {
        reason: String,
    },
    Unavailable {
        reason: String,
    },
}

impl Check {
    pub fn passed(&self) -> bool {
        match self {
            Check::ZScore { pass, .. } => *pass,
            Check::UpperBound { respected, .. } => *respected,
            Check::NotApplicable { .. } | Check::Unavailable { .. } => true,
        }
    }

    pub fn z(&self) -> Option<f64> {
        match self {
            Check::ZScore { z, .. } => Some(*z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub statistic: &'static str,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub scenario: ScenarioParams,
    pub trials: u64,
    pub master_seed: u64,
    pub options: CompareOptions,
    pub analytic: AnalyticReport,
    pub empirical: EmpiricalStats,
    pub rows: Vec<ComparisonRow>,
    pub all_pass: bool,
}

impl ComparisonReport {
    pub fn row(&self, statistic: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.statistic == statistic)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn z_check(analytic: f64, empirical: f64, std_error: f64, threshold: f64) -> Check {
    let diff = empirical - analytic;
    let z = if std_error > 0.0 {
        diff / std_error
    } else if diff.abs() <= 1e-12 {
        0.0
    } else {
        diff.signum() * f64::MAX
    };
    Check::ZScore {
        analytic,
        empirical,
        std_error,
        z,
        pass: z.abs() <= threshold,
    }
}

fn ratio_check(analytic: Result<f64>, est: &RatioEstimate, opts: &CompareOptions) -> Check {
    let analytic = match analytic {
        Ok(v) => v,
        Err(e) => {
            return Check::Unavailable {
                reason: e.to_string(),
            }
        }
    };
    let Some(empirical) = est.value else {
        return Check::Unavailable {
            reason: "no conditioning events observed".into(),
        };
    };
    // Binomial error under the analytic value, or the clustered error,
    // whichever is larger.
    let null_binomial = (analytic * (1.0 - analytic) / est.events as f64).max(0.0).sqrt();
    let se = null_binomial.max(est.clustered_std_error.unwrap_or(0.0));
    z_check(analytic, empirical, se, opts.z_threshold)
}

fn bound_check(bound: Option<f64>, est: &VarianceEstimate, opts: &CompareOptions) -> Check {
    match bound {
        Some(bound) => Check::UpperBound {
            bound,
            empirical: est.value,
            std_error: est.std_error,
            respected: est.value <= bound + opts.variance_slack * est.std_error,
        },
        None => Check::NotApplicable {
            reason: "variance bounds hold only for noiseless testing decoded by COMP".into(),
        },
    }
}

/// Builds the comparison rows for already computed statistics.
pub fn compare_stats(
    config: &ExperimentConfig,
    empirical: EmpiricalStats,
    opts: CompareOptions,
) -> ComparisonReport {
    let sc = &config.scenario;
    let analytic = analytics::report(sc);
    let bounds = analytics::variance_bounds(sc).ok();
    let rows = vec![
        ComparisonRow {
            statistic: "sens",
            check: ratio_check(Ok(analytic.sens), &empirical.sens, &opts),
        },
        ComparisonRow {
            statistic: "spec",
            check: ratio_check(Ok(analytic.spec), &empirical.spec, &opts),
        },
        ComparisonRow {
            statistic: "type_one",
            check: ratio_check(analytics::type_one(sc), &empirical.type_one, &opts),
        },
        ComparisonRow {
            statistic: "type_two",
            check: ratio_check(analytics::type_two(sc), &empirical.type_two, &opts),
        },
        ComparisonRow {
            statistic: "e_t",
            check: z_check(
                analytic.expected.positives,
                empirical.mean_t.value,
                empirical.mean_t.std_error,
                opts.z_threshold,
            ),
        },
        ComparisonRow {
            statistic: "e_tfp",
            check: z_check(
                analytic.expected.false_positives,
                empirical.mean_tfp.value,
                empirical.mean_tfp.std_error,
                opts.z_threshold,
            ),
        },
        ComparisonRow {
            statistic: "e_tfn",
            check: z_check(
                analytic.expected.false_negatives,
                empirical.mean_tfn.value,
                empirical.mean_tfn.std_error,
                opts.z_threshold,
            ),
        },
        ComparisonRow {
            statistic: "var_t",
            check: bound_check(bounds.map(|b| b.positives), &empirical.var_t, &opts),
        },
        ComparisonRow {
            statistic: "var_tfp",
            check: bound_check(bounds.map(|b| b.false_positives), &empirical.var_tfp, &opts),
        },
    ];
    let all_pass = rows.iter().all(|r| r.check.passed());
    ComparisonReport {
        scenario: *sc,
        trials: config.trials,
        master_seed: config.master_seed,
        options: opts,
        analytic,
        empirical,
        rows,
        all_pass,
    }
}

/// Runs the experiment and compares every statistic with its closed form.
pub fn compare(config: &ExperimentConfig) -> Result<ComparisonReport> {
    compare_with(config, CompareOptions::default(), None)
}

/// [`compare`] with explicit gates, optionally on a pool of `threads`
/// workers.
pub fn compare_with(
    config: &ExperimentConfig,
    opts: CompareOptions,
    threads: Option<usize>,
) -> Result<ComparisonReport> {
    let empirical = match threads {
        Some(t) => run_experiment_on(config, t)?,
        None => run_experiment(config)?,
    };
    Ok(compare_stats(config, empirical, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{run_trial, NoiseModel};

    fn config(rho: f64, q: u32, m: u32, nc: u32, p: f64, trials: u64) -> ExperimentConfig {
        let noise = NoiseModel::new(p, p).unwrap();
        ExperimentConfig::multipool(ScenarioParams::new(rho, q, m, nc, noise).unwrap(), trials, 2024).unwrap()
    }

    #[test]
    fn fast_path_matches_reference_trial() {
        let cfg = config(0.1, 7, 4, 1, 0.05, 1);
        let matrix = cfg.matrix().unwrap();
        let sc = cfg.scenario;
        let infection = Bernoulli::new(sc.rho).unwrap();
        let negative: Vec<Bernoulli> = (0..=7)
            .map(|k| Bernoulli::new(sc.noise.negative_probability(k)).unwrap())
            .collect();
        let mut scratch = Scratch {
            x: vec![false; 49],
            y: vec![false; 28],
        };
        for k in 0..200 {
            let seed = SeedSpec::new(99, k);
            let fast = simulate_tally(&matrix, &sc, &infection, &negative, seed, &mut scratch);
            let slow = run_trial(&matrix, sc.rho, &sc.noise, sc.nc, &seed).unwrap();
            assert_eq!(fast, slow.tally);
        }
    }

    #[test]
    fn zero_prevalence_without_false_positives() {
        let stats = run_experiment(&config(0.0, 5, 3, 0, 0.0, 500)).unwrap();
        assert_eq!(stats.mean_t.value, 0.0);
        assert_eq!(stats.var_t.value, 0.0);
        assert!(stats.sens.value.is_none());
        assert_eq!(stats.sens.events, 0);
    }

    #[test]
    fn noiseless_comp_never_misses() {
        for rho in [0.02, 0.2, 0.6] {
            let stats = run_experiment(&config(rho, 8, 5, 0, 0.0, 2000)).unwrap();
            assert_eq!(stats.max_false_negatives, 0);
            assert_eq!(stats.sens.value, Some(1.0));
        }
    }

    #[test]
    fn bookkeeping_identity() {
        let stats = run_experiment(&config(0.08, 8, 3, 1, 0.05, 3000)).unwrap();
        assert_eq!(
            stats.total_positives,
            stats.total_false_positives + stats.total_true_positives
        );
        let t = stats.trials as f64;
        assert_eq!(stats.mean_t.value, stats.total_positives as f64 / t);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = config(0.05, 16, 4, 1, 0.02, 3000);
        let a = run_experiment_on(&cfg, 1).unwrap();
        let b = run_experiment_on(&cfg, 4).unwrap();
        let c = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let other = ExperimentConfig {
            master_seed: 7,
            ..cfg
        };
        assert_ne!(run_experiment(&other).unwrap(), a);
    }

    #[test]
    fn degenerate_all_infected() {
        let report = compare(&config(1.0, 4, 2, 0, 0.0, 100)).unwrap();
        match &report.row("sens").unwrap().check {
            Check::ZScore {
                analytic,
                empirical,
                z,
                ..
            } => {
                assert_eq!((*analytic, *empirical, *z), (1.0, 1.0, 0.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn noisy_variance_rows_not_applicable() {
        let report = compare(&config(0.05, 4, 2, 0, 0.02, 200)).unwrap();
        for stat in ["var_t", "var_tfp"] {
            assert!(matches!(
                report.row(stat).unwrap().check,
                Check::NotApplicable { .. }
            ));
        }
    }

    #[test]
    fn config_validation() {
        let sc = ScenarioParams::noiseless(0.1, 4, 2).unwrap();
        assert!(ExperimentConfig::multipool(sc, 0, 1).is_err());
        let params = MultipoolParams::new(4, 3).unwrap();
        assert!(ExperimentConfig::new(sc, DesignSource::Multipool(params), 10, 1).is_err());
        let fano = Arc::new(crate::design::fano_plane());
        let fano_sc = ScenarioParams::noiseless(0.1, 3, 3).unwrap().with_n(7);
        assert!(ExperimentConfig::new(fano_sc, DesignSource::Matrix(fano.clone()), 10, 1).is_ok());
        assert!(ExperimentConfig::new(fano_sc.with_n(9), DesignSource::Matrix(fano), 10, 1).is_err());
    }

    #[test]
    fn moment_formulas() {
        let mut s = MomentSums::default();
        for x in [1u64, 2, 3, 4] {
            s.add(x);
        }
        let (mean, var) = mean_and_variance(&s, 4);
        assert_eq!(mean.value, 2.5);
        assert!((var.value - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn clustered_error_of_constant_ratio_is_zero() {
        let mut s = RatioSums::default();
        for b in [4u64, 8, 12] {
            s.add(b / 4, b);
        }
        let est = RatioEstimate::from_sums(&s, 3);
        assert_eq!(est.value, Some(0.25));
        assert!(est.clustered_std_error.unwrap() < 1e-12);
    }
}
