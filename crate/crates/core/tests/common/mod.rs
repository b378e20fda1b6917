//! Naive reference implementations used as test oracles.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `K_q(tau)` by a direct double loop, no shared denominators, no fast paths.
pub fn naive_k(x: &[f64], q: f64, tau: usize) -> f64 {
    let mut num = 0.0;
    let mut count = 0usize;
    for t in 0..x.len() {
        for s in 0..x.len() {
            if s == t + tau {
                num += (x[s] - x[t]).abs().powf(q);
                count += 1;
            }
        }
    }
    let den: f64 = x.iter().map(|v| v.abs().powf(q)).sum::<f64>() / x.len() as f64;
    num / count as f64 / den
}

/// Textbook OLS slope `(n Sxy - Sx Sy) / (n Sxx - Sx^2)`.
pub fn naive_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(a, b)| a * b).sum();
    let sxx: f64 = xs.iter().map(|a| a * a).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

pub fn naive_fit_hurst(x: &[f64], q: f64, tau_max: usize) -> f64 {
    let xs: Vec<f64> = (1..=tau_max).map(|t| (t as f64).ln()).collect();
    let ys: Vec<f64> = (1..=tau_max).map(|t| naive_k(x, q, t).ln()).collect();
    naive_slope(&xs, &ys) / q
}

pub fn naive_detrend(x: &[f64]) -> Vec<f64> {
    let eta = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    x.iter().enumerate().map(|(t, v)| v - eta * t as f64).collect()
}

/// Random walk of the given length with uniform steps and a random offset.
pub fn random_walk(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut v = rng.random_range(-5.0..5.0);
    (0..len)
        .map(|_| {
            v += rng.random_range(-1.0..1.0);
            v
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
