#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thermo_core::RMat;

pub fn simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| -rng.random_range(1e-12f64..1.0).ln()).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

pub fn positive_d(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

/// Random d-stochastic matrix: product of partial β-swaps and relaxations toward d.
pub fn random_d_stochastic(rng: &mut ChaCha8Rng, d: &[f64]) -> RMat {
    let n = d.len();
    let mut a = RMat::identity(n, n);
    for _ in 0..rng.random_range(1..6) {
        let f = if rng.random_bool(0.3) {
            let lam = rng.random_range(0.0..1.0);
            let mut m = RMat::identity(n, n) * lam;
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += (1.0 - lam) * d[i];
                }
            }
            m
        } else {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n);
            while j == i {
                j = rng.random_range(0..n);
            }
            let (hi, lo) = if d[i] >= d[j] { (i, j) } else { (j, i) };
            let r = d[lo] / d[hi];
            let mut swap = RMat::identity(n, n);
            swap[(hi, hi)] = 1.0 - r;
            swap[(lo, hi)] = r;
            swap[(hi, lo)] = 1.0;
            swap[(lo, lo)] = 0.0;
            let lam = if rng.random_bool(0.5) { 1.0 } else { rng.random_range(0.0..1.0) };
            RMat::identity(n, n) * (1.0 - lam) + swap * lam
        };
        a = f * a;
    }
    a
}

pub fn apply(a: &RMat, y: &[f64]) -> Vec<f64> {
    (0..y.len())
        .map(|i| (0..y.len()).map(|j| a[(i, j)] * y[j]).sum())
        .collect()
}
