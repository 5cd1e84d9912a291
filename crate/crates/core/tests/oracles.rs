//! Closed forms against independent oracles: exhaustive enumeration,
//! conditional frequencies and Monte Carlo estimates.

use multipool::analytics::{self, ScenarioParams};
use multipool::design::{build_multipool, MultipoolParams};
use multipool::model::{NoiseModel, SeedSpec};
use multipool::montecarlo::{self, Check, EmpiricalStats, ExperimentConfig, RatioEstimate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn noisy(rho: f64, q: u32, m: u32, nc: u32) -> ScenarioParams {
    ScenarioParams::new(rho, q, m, nc, NoiseModel::new(0.02, 0.02).unwrap()).unwrap()
}

fn simulate(sc: ScenarioParams, trials: u64, seed: u64) -> EmpiricalStats {
    montecarlo::run_experiment(&ExperimentConfig::multipool(sc, trials, seed).unwrap()).unwrap()
}

fn assert_within_3se(name: &str, analytic: f64, est: &RatioEstimate) {
    let value = est.value.expect("events observed");
    let se = est.clustered_std_error.unwrap();
    assert!(
        (value - analytic).abs() <= 3.0 * se,
        "{name}: analytic {analytic}, empirical {value} +- {se}"
    );
}

#[test]
fn pivotal_probability_by_enumeration() {
    // (9,3,2) design at rho = 1/2: every infection pattern is equally likely.
    let matrix = build_multipool(MultipoolParams::new(3, 2).unwrap()).unwrap();
    let n = matrix.n();
    let comp = |state: u32, k: usize| {
        matrix
            .item_pools(k)
            .iter()
            .all(|&p| matrix.pool(p).iter().any(|&i| state >> i & 1 == 1))
    };
    let sc = ScenarioParams::noiseless(0.5, 3, 2).unwrap();
    let analytic = analytics::pivotal_probability(&sc);
    assert!((analytic - 0.1875).abs() < 1e-15);
    for j in 0..n {
        for k in (0..n).filter(|&k| k != j) {
            let shares = matrix
                .item_pools(j)
                .iter()
                .any(|p| matrix.item_pools(k).contains(p));
            if !shares {
                continue;
            }
            // Count patterns of the other items in which item j's status
            // decides item k's result while k itself is uninfected.
            let pivotal = (0u32..1 << n)
                .filter(|s| s >> j & 1 == 0 && s >> k & 1 == 0)
                .filter(|&s| comp(s, k) != comp(s | 1 << j, k))
                .count();
            let frac = pivotal as f64 / (1u32 << (n - 1)) as f64;
            assert!((frac - analytic).abs() < 1e-15, "items {j},{k}: {frac}");
        }
    }
}

#[test]
fn gamma_one_matches_conditional_frequency() {
    let sc = noisy(0.05, 16, 1, 0);
    let analytic = analytics::gamma1(&sc);
    assert!((analytic - 0.98 * (1.0f64 - 0.98 * 0.05).powi(15)).abs() < 1e-15);
    // A pool with a fixed uninfected member and q-1 random members.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws = 1_000_000u64;
    let negatives = (0..draws)
        .filter(|_| {
            let load = (0..15).filter(|_| rng.random_bool(0.05)).count() as u32;
            rng.random_bool(sc.noise.negative_probability(load))
        })
        .count() as f64;
    let freq = negatives / draws as f64;
    let se = (analytic * (1.0 - analytic) / draws as f64).sqrt();
    assert!((freq - analytic).abs() <= 3.0 * se, "{freq} vs {analytic}");
}

#[test]
fn sensitivity_with_one_tolerated_negative() {
    let sc = noisy(0.05, 16, 4, 1);
    let emp = simulate(sc, 100_000, 1);
    assert!(emp.sens.events >= 100_000);
    assert_within_3se("sens", analytics::sensitivity(&sc), &emp.sens);
}

#[test]
fn sensitivity_and_specificity_default_cell() {
    let sc = noisy(0.05, 16, 6, 0);
    let emp = simulate(sc, 100_000, 2);
    assert_within_3se("sens", analytics::sensitivity(&sc), &emp.sens);
    assert_within_3se("spec", analytics::specificity(&sc), &emp.spec);
}

#[test]
fn type_two_probability() {
    let sc = noisy(0.05, 16, 4, 0);
    let emp = simulate(sc, 100_000, 3);
    assert_within_3se("type II", analytics::type_two(&sc).unwrap(), &emp.type_two);
}

#[test]
fn expected_counts() {
    let sc = noisy(0.1, 16, 8, 0);
    let emp = simulate(sc, 100_000, 4);
    let e = analytics::expected_counts(&sc);
    for (name, analytic, est) in [
        ("E[T]", e.positives, emp.mean_t),
        ("E[Tfp]", e.false_positives, emp.mean_tfp),
        ("E[Tfn]", e.false_negatives, emp.mean_tfn),
    ] {
        assert!(
            (est.value - analytic).abs() <= 3.0 * est.std_error,
            "{name}: {analytic} vs {} +- {}",
            est.value,
            est.std_error
        );
    }
}

#[test]
fn variance_bounds_respected() {
    let sc = ScenarioParams::noiseless(0.05, 16, 4).unwrap();
    let report = montecarlo::compare(&ExperimentConfig::multipool(sc, 100_000, 5).unwrap()).unwrap();
    for name in ["var_t", "var_tfp"] {
        assert!(matches!(
            report.row(name).unwrap().check,
            Check::UpperBound { respected: true, .. }
        ));
    }
}

#[test]
fn bound_respected_on_small_sweep() {
    for m in [2, 4, 6] {
        for rho in [0.01, 0.05, 0.1] {
            let sc = ScenarioParams::noiseless(rho, 16, m).unwrap();
            let config = ExperimentConfig::multipool(sc, 20_000, 6).unwrap();
            let report = montecarlo::compare(&config).unwrap();
            assert!(report.all_pass, "m={m} rho={rho}: {:?}", report.rows);
        }
    }
}

#[test]
fn degenerate_full_prevalence() {
    let sc = ScenarioParams::noiseless(1.0, 4, 2).unwrap();
    let report = montecarlo::compare(&ExperimentConfig::multipool(sc, 50, 7).unwrap()).unwrap();
    match report.row("sens").unwrap().check {
        Check::ZScore {
            analytic,
            empirical,
            z,
            ..
        } => {
            assert_eq!((analytic, empirical, z), (1.0, 1.0, 0.0));
        }
        ref other => panic!("{other:?}"),
    }
}

#[test]
fn trial_randomness_depends_only_on_seed_and_stream() {
    let a = SeedSpec::new(3, 17);
    let b = SeedSpec::new(3, 17);
    let draw = |s: &SeedSpec| multipool::model::sample_infections(256, 0.3, s).unwrap().x;
    assert_eq!(draw(&a), draw(&b));
    assert_ne!(draw(&a), draw(&SeedSpec::new(3, 18)));
}
