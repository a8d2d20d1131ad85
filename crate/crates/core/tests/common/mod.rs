#![allow(dead_code)]

pub mod data;
pub mod oracle;

use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand::SeedableRng;

use pipecorr_core::PowerLawRate;

/// Upper records found by scanning an iid sequence with
/// `F(x) = 1 − exp(−Λ(x))`, drawn by inversion. Gives up (returns `None`)
/// after `max_draws` observations.
pub fn records_by_scanning(rate: &PowerLawRate, m: usize, seed: u64, max_draws: usize) -> Option<Vec<f64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    let mut records: Vec<f64> = Vec::with_capacity(m);
    for _ in 0..max_draws {
        let u: f64 = rng.gen();
        let x = rate.inverse_cumulative_intensity(-(1.0 - u).ln()).unwrap();
        if records.last().map_or(true, |&r| x > r) {
            records.push(x);
            if records.len() == m {
                return Some(records);
            }
        }
    }
    None
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 0 {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    } else {
        v[n / 2]
    }
}
