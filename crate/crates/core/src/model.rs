//! Forward model of one screening run: Bernoulli infections, noisy pool
//! readouts, NCOMP decoding and the resulting tallies.

use rand::distr::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::design::PoolingMatrix;
use crate::error::{Error, Result};

/// Pool noise: a pool holding `k` infected items reads negative with
/// probability `(1 − p_fp)·p_fn^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    p_fp: f64,
    p_fn: f64,
}

impl NoiseModel {
    pub const NOISELESS: NoiseModel = NoiseModel { p_fp: 0.0, p_fn: 0.0 };

    pub fn new(p_fp: f64, p_fn: f64) -> Result<Self> {
        for (name, v) in [("p_fp", p_fp), ("p_fn", p_fn)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(Self { p_fp, p_fn })
    }

    pub fn p_fp(&self) -> f64 {
        self.p_fp
    }

    pub fn p_fn(&self) -> f64 {
        self.p_fn
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_fp == 0.0 && self.p_fn == 0.0
    }

    /// Probability that a pool with `load` infected members reads negative.
    /// `powi(0)` is 1, so `0⁰ = 1`.
    pub fn negative_probability(&self, load: u32) -> f64 {
        (1.0 - self.p_fp) * self.p_fn.powi(load as i32)
    }
}

/// Keys all randomness of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

/// Independent random sub-streams used within a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Phase {
    Infections = 0,
    PoolNoise = 1,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    /// ChaCha8 keyed by the master seed, on stream `stream_id`, positioned
    /// at a block offset reserved for `phase`.
    pub fn rng(&self, phase: Phase) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng.set_word_pos((phase as u128) << 60);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfectionState {
    pub x: Vec<bool>,
    pub rho: f64,
}

impl InfectionState {
    pub fn infected_count(&self) -> usize {
        self.x.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolResults {
    pub y: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedResults {
    pub z: Vec<bool>,
    pub nc: u32,
}

/// Confusion counts for one trial.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    /// All items flagged positive (T).
    pub positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub true_positives: u64,
    pub true_negatives: u64,
}

impl Tally {
    pub fn n(&self) -> u64 {
        self.false_positives + self.false_negatives + self.true_positives + self.true_negatives
    }

    pub fn infected(&self) -> u64 {
        self.true_positives + self.false_negatives
    }

    pub fn negatives(&self) -> u64 {
        self.false_negatives + self.true_negatives
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::domain(format!("prevalence {rho} is not in [0, 1]")))
    }
}

pub fn sample_infections(n: usize, rho: f64, seed: &SeedSpec) -> Result<InfectionState> {
    sample_infections_with(n, rho, &mut seed.rng(Phase::Infections))
}

/// Draws `n` independent Bernoulli(`rho`) infection indicators.
pub fn sample_infections_with<R: Rng + ?Sized>(n: usize, rho: f64, rng: &mut R) -> Result<InfectionState> {
    check_rho(rho)?;
    let dist = Bernoulli::new(rho).map_err(|e| Error::domain(e.to_string()))?;
    Ok(InfectionState {
        x: (0..n).map(|_| dist.sample(rng)).collect(),
        rho,
    })
}

/// Number of infected items in each pool.
pub fn pool_loads(matrix: &PoolingMatrix, state: &InfectionState) -> Result<Vec<u32>> {
    if state.x.len() != matrix.n() {
        return Err(Error::domain(format!(
            "infection vector has length {}, matrix has {} items",
            state.x.len(),
            matrix.n()
        )));
    }
    Ok(matrix
        .pools()
        .iter()
        .map(|pool| pool.iter().filter(|&&j| state.x[j]).count() as u32)
        .collect())
}

pub fn sample_pool_results(loads: &[u32], noise: &NoiseModel, seed: &SeedSpec) -> PoolResults {
    sample_pool_results_with(loads, noise, &mut seed.rng(Phase::PoolNoise))
}

/// Samples each pool's readout independently given its load.
pub fn sample_pool_results_with<R: Rng + ?Sized>(
    loads: &[u32],
    noise: &NoiseModel,
    rng: &mut R,
) -> PoolResults {
    let max_load = loads.iter().copied().max().unwrap_or(0);
    let negative: Vec<Bernoulli> = (0..=max_load)
        .map(|k| Bernoulli::new(noise.negative_probability(k)).expect("valid probability"))
        .collect();
    PoolResults {
        y: loads.iter().map(|&k| !negative[k as usize].sample(rng)).collect(),
    }
}

/// NCOMP(`nc`): item `j` is flagged when at most `nc` of its pools read
/// negative, i.e. `(Aᵀy)_j ≥ deg(j) − nc`. `nc = 0` is COMP.
pub fn decode_ncomp(matrix: &PoolingMatrix, results: &PoolResults, nc: u32) -> Result<DecodedResults> {
    if results.y.len() != matrix.t() {
        return Err(Error::domain(format!(
            "result vector has length {}, matrix has {} pools",
            results.y.len(),
            matrix.t()
        )));
    }
    let m = matrix
        .m()
        .map(|m| m as usize)
        .unwrap_or_else(|| matrix.max_multiplicity());
    if nc as usize > m {
        return Err(Error::domain(format!("nc = {nc} exceeds multiplicity {m}")));
    }
    let z = (0..matrix.n())
        .map(|j| {
            let pools = matrix.item_pools(j);
            let positive = pools.iter().filter(|&&i| results.y[i]).count();
            positive + nc as usize >= pools.len()
        })
        .collect();
    Ok(DecodedResults { z, nc })
}

pub fn tally(state: &InfectionState, decoded: &DecodedResults) -> Result<Tally> {
    if state.x.len() != decoded.z.len() {
        return Err(Error::domain(format!(
            "infection vector has length {}, decoded vector has {}",
            state.x.len(),
            decoded.z.len()
        )));
    }
    let mut t = Tally::default();
    for (&x, &z) in state.x.iter().zip(&decoded.z) {
        match (x, z) {
            (true, true) => t.true_positives += 1,
            (false, true) => t.false_positives += 1,
            (true, false) => t.false_negatives += 1,
            (false, false) => t.true_negatives += 1,
        }
    }
    t.positives = t.true_positives + t.false_positives;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub state: InfectionState,
    pub results: PoolResults,
    pub decoded: DecodedResults,
    pub tally: Tally,
}

/// Runs sample → pool → read → decode → tally for one seed.
pub fn run_trial(
    matrix: &PoolingMatrix,
    rho: f64,
    noise: &NoiseModel,
    nc: u32,
    seed: &SeedSpec,
) -> Result<TrialOutcome> {
    let state = sample_infections(matrix.n(), rho, seed)?;
    let loads = pool_loads(matrix, &state)?;
    let results = sample_pool_results(&loads, noise, seed);
    let decoded = decode_ncomp(matrix, &results, nc)?;
    let tally = tally(&state, &decoded)?;
    Ok(TrialOutcome {
        state,
        results,
        decoded,
        tally,
    })
}
