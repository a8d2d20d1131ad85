//! Monte-Carlo checks of the simulators, the estimator and the predictor.

mod common;

use approx::assert_abs_diff_eq;
use common::{mean, median, records_by_scanning};
use pipecorr_core::diagnostics::{ks_exponential_test, ks_p_value, ks_statistic, ks_two_sample};
use pipecorr_core::forecast::PredictionQuery;
use pipecorr_core::inference::{fit_mle, RecordSequence};
use pipecorr_core::simulation::{
    estimator_study, simulate_first_m, simulate_records_from_iid, simulate_to_horizon,
};
use pipecorr_core::PowerLawRate;

fn first_positions(rate: &PowerLawRate, m: usize, n: u64) -> Vec<Vec<f64>> {
    (0..n).map(|seed| simulate_first_m(rate, m, seed).unwrap().positions).collect()
}

#[test]
fn first_arrival_of_unit_process_has_mean_one() {
    let rate = PowerLawRate::new(1.0, 1.0).unwrap();
    let t1: Vec<f64> = first_positions(&rate, 1, 100_000).iter().map(|p| p[0]).collect();
    assert_abs_diff_eq!(mean(&t1), 1.0, epsilon = 0.01);
}

#[test]
fn first_arrival_median_for_quadratic_cumulative() {
    let rate = PowerLawRate::new(2.0, 1.0).unwrap();
    let t1: Vec<f64> = first_positions(&rate, 1, 100_000).iter().map(|p| p[0]).collect();
    assert_abs_diff_eq!(median(&t1), 2f64.ln().sqrt(), epsilon = 0.01);
}

#[test]
fn rescaled_increments_are_unit_exponential() {
    for (alpha, beta) in [(1.2, 0.17), (0.6, 2.0), (2.5, 0.01)] {
        let rate = PowerLawRate::new(alpha, beta).unwrap();
        let mut increments = Vec::with_capacity(100_000);
        for seed in 0..10_000u64 {
            let path = simulate_first_m(&rate, 10, seed).unwrap();
            let mut prev = 0.0;
            for &t in &path.positions {
                let c = rate.cumulative_intensity(t).unwrap();
                increments.push(c - prev);
                prev = c;
            }
        }
        let (_, p) = ks_exponential_test(&increments).unwrap();
        assert!(p > 0.01, "alpha={alpha}: p={p}");
    }
}

#[test]
fn mean_count_matches_cumulative_intensity() {
    let rate = PowerLawRate::new(1.2, 0.17).unwrap();
    let expected = rate.cumulative_intensity(50.0).unwrap();
    let counts: Vec<f64> = (0..10_000u64)
        .map(|seed| simulate_to_horizon(&rate, 50.0, seed).unwrap().count_at(50.0).unwrap() as f64)
        .collect();
    let got = mean(&counts);
    assert!((got - expected).abs() <= 0.02 * expected, "{got} vs {expected}");
}

#[test]
fn first_record_follows_event_density() {
    let rate = PowerLawRate::new(1.1808, 0.1662).unwrap();
    let r1: Vec<f64> = (0..100_000u64)
        .map(|seed| simulate_records_from_iid(&rate, 1, seed).unwrap().positions[0])
        .collect();
    // F(x) = 1 − R(x); compare with the density integrated by the oracle at a few points too.
    let d = ks_statistic(&r1, |x| 1.0 - rate.survival(x).unwrap());
    let p = ks_p_value(d, r1.len() as f64);
    assert!(p > 0.01, "p={p}");
    let at_ten = common::oracle::integrate(|t| rate.event_density(t).unwrap(), 0.0, 10.0, 1e-12);
    assert!((at_ten - (1.0 - rate.survival(10.0).unwrap())).abs() < 1e-10);
}

#[test]
fn unit_first_record_is_exponential() {
    let rate = PowerLawRate::new(1.0, 1.0).unwrap();
    let r1: Vec<f64> = (0..100_000u64)
        .map(|seed| simulate_records_from_iid(&rate, 1, seed).unwrap().positions[0])
        .collect();
    assert_abs_diff_eq!(mean(&r1), 1.0, epsilon = 0.01);
}

/// Rank-based check of a bivariate law: two-sample KS on both marginals, on
/// the ratio, and on the rank statistic of the first coordinate within pairs.
fn pairs_agree(a: &[(f64, f64)], b: &[(f64, f64)], alpha: f64) -> bool {
    let tests: [fn(&(f64, f64)) -> f64; 3] = [|p| p.0, |p| p.1, |p| p.0 / p.1];
    let level = alpha / tests.len() as f64;
    tests.iter().all(|f| {
        let xa: Vec<f64> = a.iter().map(f).collect();
        let xb: Vec<f64> = b.iter().map(f).collect();
        ks_two_sample(&xa, &xb).unwrap().1 > level
    })
}

#[test]
fn record_pairs_match_process_pairs() {
    let rate = PowerLawRate::new(1.4, 0.3).unwrap();
    let process: Vec<(f64, f64)> = (0..10_000u64)
        .map(|s| {
            let p = simulate_first_m(&rate, 2, s).unwrap().positions;
            (p[0], p[1])
        })
        .collect();
    let records: Vec<(f64, f64)> = (0..10_000u64)
        .map(|s| {
            let p = simulate_records_from_iid(&rate, 2, 1_000_000 + s).unwrap().positions;
            (p[0], p[1])
        })
        .collect();
    assert!(pairs_agree(&process, &records, 0.01));
}

#[test]
fn inversion_records_match_brute_force_scanning() {
    let rate = PowerLawRate::new(0.8, 1.5).unwrap();
    let mut scanned = Vec::new();
    let mut seed = 0u64;
    while scanned.len() < 4_000 {
        if let Some(r) = records_by_scanning(&rate, 3, seed, 2_000_000) {
            scanned.push((r[0], r[2]));
        }
        seed += 1;
    }
    let inverted: Vec<(f64, f64)> = (0..4_000u64)
        .map(|s| {
            let p = simulate_records_from_iid(&rate, 3, 77_000 + s).unwrap().positions;
            (p[0], p[2])
        })
        .collect();
    assert!(pairs_agree(&scanned, &inverted, 0.01));
}

#[test]
fn known_parameter_p_values_are_uniform() {
    let rate = PowerLawRate::new(1.2, 0.17).unwrap();
    let p_values: Vec<f64> = (0..1_000u64)
        .map(|seed| {
            let path = simulate_first_m(&rate, 20, 10_000 + seed).unwrap();
            let mut prev = 0.0;
            let u: Vec<f64> = path
                .positions
                .iter()
                .map(|&t| {
                    let c = rate.cumulative_intensity(t).unwrap();
                    let d = c - prev;
                    prev = c;
                    d
                })
                .collect();
            ks_exponential_test(&u).unwrap().1
        })
        .collect();
    let distance = ks_statistic(&p_values, |x| x.clamp(0.0, 1.0));
    assert!(distance < 0.08, "distance to uniform {distance}");
}

#[test]
fn alpha_hat_bias_matches_failure_truncated_shape() {
    let summary = estimator_study(&PowerLawRate::new(1.2, 0.17).unwrap(), 18, 10_000, 2024, 0.95).unwrap();
    let expected = 18.0 / 16.0 * 1.2;
    println!(
        "m=18: mean alpha_hat {:.4} (MC s.e. {:.4}), expected {expected:.4}",
        summary.alpha_hat.mean, summary.alpha_hat.mean_std_error
    );
    assert!((summary.alpha_hat.mean - expected).abs() < 0.02);
    assert!(summary.alpha_hat.mean_std_error < 0.01);
}

#[test]
fn one_step_interval_coverage_at_m17() {
    let rate = PowerLawRate::new(1.2, 0.17).unwrap();
    let mut covered = 0;
    for seed in 0..2_000u64 {
        let path = simulate_first_m(&rate, 18, 500_000 + seed).unwrap();
        let fit = fit_mle(&RecordSequence::new(path.positions[..17].to_vec()).unwrap()).unwrap();
        let (lo, hi) = PredictionQuery::from_fit(&fit, 18).unwrap().prediction_interval(0.95).unwrap();
        if lo <= path.positions[17] && path.positions[17] <= hi {
            covered += 1;
        }
    }
    let coverage = covered as f64 / 2_000.0;
    println!("m=17 plug-in coverage {coverage:.4}");
    assert!((coverage - 0.95).abs() <= 0.02, "coverage {coverage}");
}

#[test]
fn large_m_coverage_is_nominal() {
    let summary = estimator_study(&PowerLawRate::new(1.2, 0.17).unwrap(), 50, 2_000, 7, 0.95).unwrap();
    assert!((0.93..=0.97).contains(&summary.coverage), "{}", summary.coverage);
}

#[test]
fn study_is_independent_of_thread_count() {
    let rate = PowerLawRate::new(1.2, 0.17).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimator_study(&rate, 12, 400, 31, 0.9).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn simulated_data_refits_close_to_truth() {
    let rate = PowerLawRate::new(1.2, 0.17).unwrap();
    let path = simulate_first_m(&rate, 2_000, 3).unwrap();
    let fit = fit_mle(&path.records().unwrap()).unwrap();
    assert!((fit.alpha() - 1.2).abs() < 0.1, "{}", fit.alpha());
}
