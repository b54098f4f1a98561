use serde::Serialize;
use thermo_core::{Error, Permutation, Result};

use crate::{Schedule, ToyGenerator};

#[derive(Debug, Clone, Serialize)]
pub struct SteerResult {
    /// Conjugated-generator segments `(π, dt)`, see [`Schedule::from_generator_sequence`].
    pub segments: Vec<(Vec<usize>, f64)>,
    pub final_state: Vec<f64>,
    pub distance: f64,
    pub time: f64,
}

impl SteerResult {
    pub fn schedule(&self, n: usize) -> Result<Schedule> {
        let segs = self
            .segments
            .iter()
            .map(|(p, dt)| Ok((Permutation::new(p.clone())?, *dt)))
            .collect::<Result<Vec<_>>>()?;
        Schedule::from_generator_sequence(n, &segs)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Feedback steering toward `target`: each segment picks the conjugated flow
/// `σ e^{−dt B} σ⁻¹` and duration that bring the state closest to the target.
///
/// Durations are searched on a halving grid below `max_dt`. Stops at `tol`, at
/// the time budget, or when no segment improves the distance.
pub fn greedy_steer(
    x0: &[f64],
    g: &ToyGenerator,
    target: &[f64],
    tol: f64,
    time_budget: f64,
    max_dt: f64,
) -> Result<SteerResult> {
    let n = g.dim();
    if x0.len() != n || target.len() != n {
        return Err(Error::invalid("dimension mismatch"));
    }
    let perms = Permutation::all(n);
    let mut x = x0.to_vec();
    let mut time = 0.0;
    let mut segments = Vec::new();
    let mut d = dist(&x, target);
    while d > tol && time < time_budget {
        let mut best: Option<(f64, usize, f64, Vec<f64>)> = None;
        let mut dt = max_dt.min(time_budget - time);
        while dt > 1e-14 {
            let f = g.flow(dt);
            for (k, s) in perms.iter().enumerate() {
                let y = s.inverse().apply(&x);
                let fy: Vec<f64> = (0..n).map(|i| (0..n).map(|j| f[(i, j)] * y[j]).sum()).collect();
                let cand = s.apply(&fy);
                let dc = dist(&cand, target);
                if best.as_ref().is_none_or(|b| dc < b.0) {
                    best = Some((dc, k, dt, cand));
                }
            }
            dt *= 0.5;
        }
        match best {
            Some((dc, k, dt, cand)) if dc < d => {
                segments.push((perms[k].image().to_vec(), dt));
                x = cand;
                time += dt;
                d = dc;
            }
            _ => break,
        }
    }
    Ok(SteerResult {
        segments,
        final_state: x,
        distance: d,
        time,
    })
}

/// Palindromic sweep over all conjugations `σBσ⁻¹`, each for `h/2`, repeated
/// `cycles` times. Approximates the flow of the averaged generator to `O(h²)`.
pub fn chattering_schedule(n: usize, h: f64, cycles: usize) -> Result<Schedule> {
    let perms = Permutation::all(n);
    let mut segs: Vec<(Permutation, f64)> = Vec::with_capacity(cycles * perms.len());
    for _ in 0..cycles {
        for p in perms.iter().chain(perms.iter().rev()) {
            match segs.last_mut() {
                Some((q, dt)) if q == p => *dt += h / 2.0,
                _ => segs.push((p.clone(), h / 2.0)),
            }
        }
    }
    Schedule::from_generator_sequence(n, &segs)
}
