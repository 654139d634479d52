//! Seeded samplers shared by the integration suites.
#![allow(dead_code)]

use capra_l0::{l0, subdiff_witness, PExponent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

/// One exponent per regime plus a few interior values.
pub fn regimes() -> Vec<PExponent> {
    vec![PExponent::ONE, p(1.5), p(2.0), p(3.0), PExponent::INFINITY]
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-radius..radius)).collect()
}

/// Entries on the quarter lattice in `[-3, 3]`, so ties and zeros occur.
pub fn lattice_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-12i32..=12) as f64 * 0.25).collect()
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Primal point with a random support and moderate magnitudes; biased
/// towards the subdifferential domain of `p`.
pub fn primal(rng: &mut ChaCha8Rng, d: usize, p: PExponent) -> Vec<f64> {
    if rng.random_bool(0.1) {
        return vec![0.0; d];
    }
    let mut x = vec![0.0; d];
    if p.is_one() && rng.random_bool(0.5) {
        x[rng.random_range(0..d)] = signed(rng, 0.1, 3.0);
        return x;
    }
    if p.is_infinite() && rng.random_bool(0.6) {
        let lambda = rng.random_range(0.2..5.0);
        for v in x.iter_mut() {
            *v = [-lambda, 0.0, lambda][rng.random_range(0..3)];
        }
    } else {
        for v in x.iter_mut() {
            if rng.random_bool(0.7) {
                *v = signed(rng, 0.1, 3.0);
            }
        }
    }
    if l0(&x) == 0 {
        x[rng.random_range(0..d)] = signed(rng, 0.1, 3.0);
    }
    x
}

/// Dual point either independent of `x` or built around a subgradient of
/// `x` (scaled, with perturbed off-support entries), so that both verdicts
/// occur often.
pub fn dual_for(rng: &mut ChaCha8Rng, x: &[f64], p: PExponent) -> Vec<f64> {
    let d = x.len();
    match (rng.random_range(0..10), subdiff_witness(x, p)) {
        (0..=2, _) | (_, Err(_)) => {
            (0..d).map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(-4.0..4.0) }).collect()
        }
        (3..=8, Ok(w)) if l0(x) > 0 => {
            let s = rng.random_range(0.3..3.0);
            let mut y: Vec<f64> = w.iter().map(|v| s * v).collect();
            let floor = x
                .iter()
                .zip(&y)
                .filter(|(a, _)| **a != 0.0)
                .map(|(_, b)| b.abs())
                .fold(f64::INFINITY, f64::min);
            let c = rng.random_range(0.0..1.4);
            for (j, v) in y.iter_mut().enumerate() {
                if x[j] == 0.0 {
                    *v = rng.random_range(-1.0..1.0) * c * floor;
                }
            }
            y
        }
        _ => (0..d).map(|_| rng.random_range(-1.5..1.5)).collect(),
    }
}
