//! Closed-form accuracy statistics for NCOMP decoding on multipools.
//!
//! Everything here depends only on the multipool conditions, not on the
//! particular matrix: a pool that contains a given item also contains
//! `q − 1` other items, and the `m` pools of an item share no other item.
//! The central quantity is
//!
//! ```text
//! γ_k = (1 − p_fp)·(1 − (1 − p_fn)·ρ)^(q − k)
//! ```
//!
//! the probability that a pool reads negative given `k` of its members are
//! known to be uninfected.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{NoiseModel, Tally};

/// Bisection tolerance for the entropy threshold.
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

/// Largest `m` for which binomial coefficients are computed exactly in
/// integers; above it they come from log-factorials.
const EXACT_BINOMIAL_MAX: u32 = 30;

/// One parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioParams {
    pub rho: f64,
    pub q: u32,
    pub m: u32,
    pub nc: u32,
    pub noise: NoiseModel,
    /// Item count, used only to scale expectations and variances.
    pub n: u64,
}

impl ScenarioParams {
    /// Scenario with `n = q²`.
    pub fn new(rho: f64, q: u32, m: u32, nc: u32, noise: NoiseModel) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::domain(format!("prevalence {rho} is not in [0, 1]")));
        }
        if q < 2 {
            return Err(Error::domain("pool size q must be at least 2"));
        }
        if m < 1 {
            return Err(Error::domain("multiplicity m must be at least 1"));
        }
        if nc > m {
            return Err(Error::domain(format!("nc = {nc} exceeds m = {m}")));
        }
        Ok(Self {
            rho,
            q,
            m,
            nc,
            noise,
            n: q as u64 * q as u64,
        })
    }

    pub fn noiseless(rho: f64, q: u32, m: u32) -> Result<Self> {
        Self::new(rho, q, m, 0, NoiseModel::NOISELESS)
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = n;
        self
    }

    fn is_noiseless_comp(&self) -> bool {
        self.nc == 0 && self.noise.is_noiseless()
    }
}

/// `γ_k` for `0 ≤ k ≤ q`.
pub fn gamma(k: u32, sc: &ScenarioParams) -> Result<f64> {
    if k > sc.q {
        return Err(Error::domain(format!("k = {k} exceeds pool size {}", sc.q)));
    }
    let base = 1.0 - (1.0 - sc.noise.p_fn()) * sc.rho;
    Ok((1.0 - sc.noise.p_fp()) * base.powi((sc.q - k) as i32))
}

/// `γ₁`: probability a pool reads negative given one known-negative member.
pub fn gamma1(sc: &ScenarioParams) -> f64 {
    gamma(1, sc).expect("q >= 2")
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub(crate) fn binomial(m: u32, k: u32) -> f64 {
    if k > m {
        return 0.0;
    }
    if m <= EXACT_BINOMIAL_MAX {
        let k = k.min(m - k) as u64;
        let mut c: u64 = 1;
        for i in 0..k {
            c = c * (m as u64 - i) / (i + 1);
        }
        c as f64
    } else {
        (ln_factorial(m) - ln_factorial(k) - ln_factorial(m - k)).exp()
    }
}

/// `Σ_{k=from}^{m} C(m,k)·s^k·f^(m−k)`, where `s` and `f` are the success
/// and failure probabilities of one pool (passed separately so that neither
/// is recomputed as `1 − other`).
fn upper_tail(m: u32, from: u32, s: f64, f: f64) -> f64 {
    (from..=m)
        .map(|k| binomial(m, k) * s.powi(k as i32) * f.powi((m - k) as i32))
        .sum()
}

/// `P(Z_j = 1 | X_j = 1)`.
pub fn sensitivity(sc: &ScenarioParams) -> f64 {
    let miss = sc.noise.p_fn() * gamma1(sc);
    upper_tail(sc.m, sc.m - sc.nc, 1.0 - miss, miss).clamp(0.0, 1.0)
}

/// `P(Z_j = 0 | X_j = 0)`.
pub fn specificity(sc: &ScenarioParams) -> f64 {
    let g = gamma1(sc);
    (1.0 - upper_tail(sc.m, sc.m - sc.nc, 1.0 - g, g)).clamp(0.0, 1.0)
}

/// `P(X_j = 0 | Z_j = 1)`: the share of positive results that are false.
///
/// Returns 0 when false positives are impossible and `Undefined` when no
/// item can be flagged at all.
pub fn type_one(sc: &ScenarioParams) -> Result<f64> {
    type_one_from(sc.rho, sensitivity(sc), specificity(sc))
}

/// [`type_one`] for given prevalence, sensitivity and specificity.
pub fn type_one_from(rho: f64, sens: f64, spec: f64) -> Result<f64> {
    let false_mass = (1.0 - rho) * (1.0 - spec);
    let true_mass = rho * sens;
    if false_mass + true_mass == 0.0 {
        return Err(Error::Undefined("no item is ever flagged positive"));
    }
    if false_mass == 0.0 {
        return Ok(0.0);
    }
    if true_mass == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 / (1.0 + rho / (1.0 - rho) * (sens / (1.0 - spec))))
}

/// `P(X_j = 1 | Z_j = 0)`: the share of negative results that are false.
///
/// Returns 0 when `sens = 1` and `Undefined` when no item can be cleared.
pub fn type_two(sc: &ScenarioParams) -> Result<f64> {
    type_two_from(sc.rho, sensitivity(sc), specificity(sc))
}

/// [`type_two`] for given prevalence, sensitivity and specificity.
pub fn type_two_from(rho: f64, sens: f64, spec: f64) -> Result<f64> {
    let false_mass = rho * (1.0 - sens);
    let true_mass = (1.0 - rho) * spec;
    if false_mass + true_mass == 0.0 {
        return Err(Error::Undefined("no item is ever flagged negative"));
    }
    if false_mass == 0.0 {
        return Ok(0.0);
    }
    if true_mass == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 / (1.0 + (1.0 - rho) / rho * (spec / (1.0 - sens))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedCounts {
    /// `E[T]`, all positive results.
    pub positives: f64,
    /// `E[T_fp]`.
    pub false_positives: f64,
    /// `E[T_fn]`.
    pub false_negatives: f64,
}

pub fn expected_counts(sc: &ScenarioParams) -> ExpectedCounts {
    let n = sc.n as f64;
    let (sens, spec) = (sensitivity(sc), specificity(sc));
    let false_positives = n * (1.0 - sc.rho) * (1.0 - spec);
    ExpectedCounts {
        positives: false_positives + n * sc.rho * sens,
        false_positives,
        false_negatives: n * sc.rho * (1.0 - sens),
    }
}

/// `β = 1 − (1 − ρ)^(q−1)`: probability that the other members of a pool
/// contain at least one infection (noiseless).
pub fn beta(rho: f64, q: u32) -> f64 {
    1.0 - (1.0 - rho).powi(q as i32 - 1)
}

/// Probability that flipping item `i` changes the COMP decision on an item
/// `j` sharing a pool with it, in noiseless testing:
/// `(1−ρ)^(q−1)·β^(m−1)`.
pub fn pivotal_probability(sc: &ScenarioParams) -> f64 {
    (1.0 - sc.rho).powi(sc.q as i32 - 1) * beta(sc.rho, sc.q).powi(sc.m as i32 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceBounds {
    pub positives: f64,
    pub false_positives: f64,
}

/// Efron–Stein upper bounds on `Var[T]` and `Var[T_fp]`. Only proven for
/// noiseless COMP; anything else is `NotApplicable`.
pub fn variance_bounds(sc: &ScenarioParams) -> Result<VarianceBounds> {
    if !sc.is_noiseless_comp() {
        return Err(Error::NotApplicable(
            "variance bounds hold only for noiseless testing decoded by COMP",
        ));
    }
    let (rho, q, m) = (sc.rho, sc.q as f64, sc.m as i32);
    let b = beta(sc.rho, sc.q);
    let scale = sc.n as f64 * m as f64 * q * rho * (1.0 - rho);
    let neighbour = m as f64 * (q - 1.0) * pivotal_probability(sc);
    let bm = b.powi(m);
    Ok(VarianceBounds {
        positives: scale * (1.0 - bm + neighbour),
        false_positives: scale * (bm + neighbour),
    })
}

/// Result of [`min_multiplicity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tuning {
    pub m: u32,
    /// Real-valued lower bound on `m`; may be infinite or NaN in degenerate
    /// corners.
    pub raw_bound: f64,
    pub type_one: f64,
    pub compression_ratio: f64,
}

/// Smallest multiplicity `m ≤ cap` for which COMP keeps the Type I error
/// probability at or below `epsilon`. `cap` defaults to `q + 1`.
pub fn min_multiplicity(
    rho: f64,
    q: u32,
    noise: NoiseModel,
    epsilon: f64,
    cap: Option<u32>,
) -> Result<Tuning> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!(
            "prevalence {rho} must lie strictly in (0, 1)"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "epsilon {epsilon} must lie strictly in (0, 1)"
        )));
    }
    let cap = cap.unwrap_or(q + 1).max(1);
    let at = |m: u32| ScenarioParams::new(rho, q, m, 0, noise);
    let g = gamma1(&at(1)?);
    let raw_bound =
        (((1.0 - rho) / rho) * (1.0 / epsilon - 1.0)).ln() / ((1.0 - noise.p_fn() * g) / (1.0 - g)).ln();
    let meets = |m: u32| -> Result<Option<f64>> {
        Ok(match type_one(&at(m)?) {
            Ok(v) if v <= epsilon => Some(v),
            _ => None,
        })
    };

    let mut m = if raw_bound.is_finite() {
        raw_bound.ceil().clamp(1.0, cap as f64) as u32
    } else {
        1
    };
    if let Some(mut value) = meets(m)? {
        while m > 1 {
            match meets(m - 1)? {
                Some(v) => {
                    m -= 1;
                    value = v;
                }
                None => break,
            }
        }
        return Ok(Tuning {
            m,
            raw_bound,
            type_one: value,
            compression_ratio: q as f64 / m as f64,
        });
    }
    while m < cap {
        m += 1;
        if let Some(value) = meets(m)? {
            return Ok(Tuning {
                m,
                raw_bound,
                type_one: value,
                compression_ratio: q as f64 / m as f64,
            });
        }
    }
    Err(Error::Infeasible { raw_bound, cap })
}

/// `(m − 1) / q²`: prevalence at which the expected number of infections
/// reaches the design's disjunctness.
pub fn threshold_disjunct(q: u32, m: u32) -> f64 {
    (m as f64 - 1.0) / (q as f64 * q as f64)
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// The `x ∈ (0, 1/2]` with binary entropy `m / q`.
pub fn threshold_info(q: u32, m: u32) -> Result<f64> {
    if m == 0 || q == 0 {
        return Err(Error::domain("threshold_info needs m, q >= 1"));
    }
    let target = m as f64 / q as f64;
    if target > 1.0 {
        return Err(Error::NoSolution(format!(
            "entropy target m/q = {target} exceeds 1 bit"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > ENTROPY_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if target == 1.0 { 0.5 } else { 0.5 * (lo + hi) })
}

/// A count ratio kept as integers so it can be compared exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Proportion {
    pub numerator: u64,
    pub denominator: u64,
}

impl Proportion {
    /// `None` when the denominator is zero.
    pub fn new(numerator: u64, denominator: u64) -> Option<Self> {
        (denominator > 0).then_some(Self {
            numerator,
            denominator,
        })
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfusionStats {
    pub sensitivity: Option<Proportion>,
    pub specificity: Option<Proportion>,
    pub type_one: Option<Proportion>,
    pub type_two: Option<Proportion>,
}

/// Empirical sensitivity, specificity and error shares of one confusion
/// table. A ratio with an empty denominator is `None`.
pub fn confusion_stats(tally: &Tally, infected_count: u64, n: u64) -> Result<ConfusionStats> {
    if tally.infected() != infected_count
        || tally.n() != n
        || tally.positives != tally.true_positives + tally.false_positives
    {
        return Err(Error::domain(format!(
            "inconsistent confusion counts {tally:?} for {infected_count} infected of {n}"
        )));
    }
    let t = tally;
    Ok(ConfusionStats {
        sensitivity: Proportion::new(t.true_positives, t.true_positives + t.false_negatives),
        specificity: Proportion::new(t.true_negatives, t.true_negatives + t.false_positives),
        type_one: Proportion::new(t.false_positives, t.false_positives + t.true_positives),
        type_two: Proportion::new(t.false_negatives, t.false_negatives + t.true_negatives),
    })
}

/// Every closed-form statistic for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticReport {
    pub scenario: ScenarioParams,
    pub gamma1: f64,
    pub sens: f64,
    pub spec: f64,
    pub type_one: Option<f64>,
    pub type_two: Option<f64>,
    pub expected: ExpectedCounts,
    pub variance_bounds: Option<VarianceBounds>,
    pub beta: f64,
    pub rho_disj: f64,
    pub rho_info: Option<f64>,
}

pub fn report(sc: &ScenarioParams) -> AnalyticReport {
    AnalyticReport {
        scenario: *sc,
        gamma1: gamma1(sc),
        sens: sensitivity(sc),
        spec: specificity(sc),
        type_one: type_one(sc).ok(),
        type_two: type_two(sc).ok(),
        expected: expected_counts(sc),
        variance_bounds: variance_bounds(sc).ok(),
        beta: beta(sc.rho, sc.q),
        rho_disj: threshold_disjunct(sc.q, sc.m),
        rho_info: threshold_info(sc.q, sc.m).ok(),
    }
}
