//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::Command;
use std::time::Instant;

use common::data::{PREFIX_FITS, FIELD_RECORDS};
use common::oracle;
use pipecorr_core::diagnostics::{exponential_transform, ks_exponential_test, ks_statistic, ks_two_sample};
use pipecorr_core::forecast::{backtest, PredictionQuery};
use pipecorr_core::inference::{fit_mle, sequential_fits, RecordSequence};
use pipecorr_core::simulation::{estimator_study, simulate_first_m, simulate_records_from_iid};
use pipecorr_core::PowerLawRate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn first17() -> RecordSequence {
    RecordSequence::new(FIELD_RECORDS[..17].to_vec()).unwrap()
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn mle_reproduction() -> Outcome {
    let fit = fit_mle(&first17()).unwrap();
    outcome(
        within(fit.alpha(), 1.1808, 5e-4) && within(fit.beta(), 0.1662, 5e-4),
        format!("alpha_hat {:.5}, beta_hat {:.5}", fit.alpha(), fit.beta()),
    )
}

fn sequential_fit_table() -> Outcome {
    let fits = sequential_fits(&first17()).unwrap();
    let mut worst: f64 = 0.0;
    for (fit, &(k, alpha, beta, _)) in fits.iter().zip(PREFIX_FITS.iter()) {
        assert_eq!(fit.m(), k);
        worst = worst.max((fit.alpha() - alpha).abs()).max((fit.beta() - beta).abs());
    }
    outcome(fits.len() == 16 && worst <= 0.002, format!("{} prefixes, max abs deviation {worst:.5}", fits.len()))
}

fn point_predictions() -> Outcome {
    let fit = fit_mle(&first17()).unwrap();
    let q = PredictionQuery::from_fit(&fit, 18).unwrap();
    let mean = q.predict_mean().unwrap();
    let median = q.predict_quantile(0.5).unwrap();
    let rows = backtest(&first17()).unwrap();
    let mut worst: f64 = 0.0;
    for (row, &(k, _, _, predicted)) in rows.iter().zip(PREFIX_FITS.iter()) {
        assert_eq!(row.k, k);
        if k <= 16 {
            worst = worst.max((row.predicted_next - predicted).abs() / predicted);
        }
    }
    let mean_ok = within(mean, 52.878, 0.01);
    let median_ok = within(median, 52.104, 0.01);
    outcome(
        mean_ok && median_ok && worst <= 0.005,
        format!(
            "mean {mean:.4} (target 52.878 +/- 0.01: {}), median {median:.4} ({}), backtest k=2..16 max rel dev {:.4}%",
            if mean_ok { "ok" } else { "off" },
            if median_ok { "ok" } else { "off" },
            worst * 100.0
        ),
    )
}

fn prediction_interval() -> Outcome {
    let fit = fit_mle(&first17()).unwrap();
    let (lo, hi) = PredictionQuery::from_fit(&fit, 18).unwrap().prediction_interval(0.95).unwrap();
    outcome(
        within(lo, 50.4336, 0.02) && within(hi, 59.4842, 0.02),
        format!("[{lo:.4}, {hi:.4}]"),
    )
}

fn goodness_of_fit() -> Outcome {
    let records = first17();
    let fit = fit_mle(&records).unwrap();
    let u = exponential_transform(&records, &fit).unwrap();
    let (d, p) = ks_exponential_test(&u).unwrap();
    let brute = oracle::ks_statistic_brute(&u, |x| 1.0 - (-x).exp());
    let fast = ks_statistic(&u, |x| 1.0 - (-x).exp());
    let stat_ok = (d - brute).abs() <= 1e-12 && (fast - brute).abs() <= 1e-12;
    outcome(
        stat_ok && (0.3..=0.8).contains(&p),
        format!("D {d:.6} (oracle diff {:.1e}), p-value {p:.4} (band [0.3, 0.8])", (d - brute).abs()),
    )
}

fn normalization() -> Outcome {
    let fit = fit_mle(&first17()).unwrap();
    let mut queries = vec![PredictionQuery::from_fit(&fit, 18).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    while queries.len() < 51 {
        let alpha = rng.gen_range(0.3..3.0);
        let beta = rng.gen_range(0.01..2.0);
        let m = rng.gen_range(2..40usize);
        let s = m + rng.gen_range(1..=5usize);
        let rate = PowerLawRate::new(alpha, beta).unwrap();
        let r_m = rate.inverse_cumulative_intensity(m as f64 * rng.gen_range(0.5..1.5)).unwrap();
        queries.push(PredictionQuery::new(rate, m, r_m, s).unwrap());
    }
    let worst = queries
        .iter()
        .map(|q| (oracle::integrate_semi_infinite(|y| q.conditional_density(y), q.r_m(), 1e-11) - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(worst <= 1e-6, format!("{} densities, max |integral - 1| {worst:.2e}", queries.len()))
}

fn simulation_consistency() -> Outcome {
    let start = Instant::now();
    let s = estimator_study(&PowerLawRate::new(1.2, 0.17).unwrap(), 50, 5_000, 20_250, 0.95).unwrap();
    let median_ok = within(s.alpha_hat.median, 1.2, 0.06);
    let coverage_ok = (0.93..=0.97).contains(&s.coverage);
    outcome(
        median_ok && coverage_ok,
        format!(
            "median alpha_hat {:.4}, coverage {:.4} (s.e. {:.4}), {:.1}s",
            s.alpha_hat.median,
            s.coverage,
            s.coverage_std_error,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn record_equivalence() -> Outcome {
    let rate = PowerLawRate::new(1.2, 0.17).unwrap();
    let n = 10_000u64;
    let process: Vec<Vec<f64>> = (0..n).map(|s| simulate_first_m(&rate, 3, s).unwrap().positions).collect();
    let records: Vec<Vec<f64>> =
        (0..n).map(|s| simulate_records_from_iid(&rate, 3, n + s).unwrap().positions).collect();
    let level = 0.01 / 3.0;
    let mut min_p: f64 = 1.0;
    for j in 0..3 {
        let a: Vec<f64> = process.iter().map(|p| p[j]).collect();
        let b: Vec<f64> = records.iter().map(|p| p[j]).collect();
        min_p = min_p.min(ks_two_sample(&a, &b).unwrap().1);
    }
    outcome(min_p > level, format!("smallest coordinate p-value {min_p:.4} (Bonferroni level {level:.4})"))
}

fn determinism() -> Outcome {
    let cli = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_pipecorr")).args(args).output().unwrap().stdout;
    let sim = ["simulate", "--alpha", "1.2", "--beta", "0.17", "--m", "40", "--seed", "17"];
    let same_sim = cli(&sim) == cli(&sim);
    let json = ["--json", "backtest", concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/field_records.csv")];
    let same_json = cli(&json) == cli(&json);
    let pooled = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| backtest(&RecordSequence::new(FIELD_RECORDS.to_vec()).unwrap()).unwrap())
    };
    let same_pool = pooled(1) == pooled(4);
    outcome(
        same_sim && same_json && same_pool,
        format!("simulate identical: {same_sim}, backtest json identical: {same_json}, 1 vs 4 threads identical: {same_pool}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("MLE reproduction", mle_reproduction),
        ("sequential fits", sequential_fit_table),
        ("point predictions", point_predictions),
        ("prediction interval", prediction_interval),
        ("goodness of fit", goodness_of_fit),
        ("normalization", normalization),
        ("simulation/estimation consistency", simulation_consistency),
        ("record/NHPP equivalence", record_equivalence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
