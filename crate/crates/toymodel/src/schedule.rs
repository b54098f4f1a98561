use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thermo_core::{Error, Permutation, RMat, Result};

use crate::ToyGenerator;

/// Apply `perm`, then flow for `dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub perm: Permutation,
    pub dt: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule {
    pub steps: Vec<Step>,
}

impl Schedule {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let s = Self { steps };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.steps.first().map(|s| s.perm.len());
        for (k, s) in self.steps.iter().enumerate() {
            if !(s.dt >= 0.0 && s.dt.is_finite()) {
                return Err(Error::invalid(format!("step {k}: duration must be finite and ≥ 0")));
            }
            if Some(s.perm.len()) != n {
                return Err(Error::invalid(format!("step {k}: permutation size differs")));
            }
        }
        Ok(())
    }

    /// A single flow without switching.
    pub fn relax(n: usize, dt: f64) -> Self {
        Self {
            steps: vec![Step {
                perm: Permutation::identity(n),
                dt,
            }],
        }
    }

    pub fn duration(&self) -> f64 {
        self.steps.iter().map(|s| s.dt).sum()
    }

    /// Schedule whose flow segments run under conjugated generators `πBπ⁻¹`.
    ///
    /// Each `(π, dt)` flows `x ↦ π e^{−dt B} π⁻¹ x`. Consecutive permutations are
    /// merged, and a final zero-length step undoes the last one.
    pub fn from_generator_sequence(n: usize, segments: &[(Permutation, f64)]) -> Result<Self> {
        let mut steps = Vec::with_capacity(segments.len() + 1);
        // frame maps model coordinates to lab coordinates
        let mut frame = Permutation::identity(n);
        for (pi, dt) in segments {
            if pi.len() != n {
                return Err(Error::invalid("permutation size differs"));
            }
            // lab state x, want π e^{−dt B} π⁻¹ x; the model state is frame⁻¹ x
            let jump = pi.inverse().compose(&frame);
            steps.push(Step { perm: jump, dt: *dt });
            frame = pi.clone();
        }
        steps.push(Step {
            perm: frame,
            dt: 0.0,
        });
        Self::new(steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Output spacing inside each flow segment, `None` records only switch points.
    pub dense_dt: Option<f64>,
    /// Extra relaxation after the last step.
    pub tail: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            dense_dt: Some(0.01),
            tail: 0.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    fn push(&mut self, t: f64, x: &[f64]) {
        self.times.push(t);
        self.states.push(x.to_vec());
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory starts with x0")
    }
}

/// Flow matrices keyed by exact duration.
#[derive(Debug)]
pub struct FlowCache<'g> {
    gen: &'g ToyGenerator,
    map: HashMap<u64, RMat>,
}

impl<'g> FlowCache<'g> {
    pub fn new(gen: &'g ToyGenerator) -> Self {
        Self {
            gen,
            map: HashMap::new(),
        }
    }

    pub fn get(&mut self, dt: f64) -> &RMat {
        self.map.entry(dt.to_bits()).or_insert_with(|| self.gen.flow(dt))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn mul(m: &RMat, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)] * x[j]).sum()).collect()
}

fn check_start(x0: &[f64], g: &ToyGenerator, s: &Schedule) -> Result<()> {
    if x0.len() != g.dim() {
        return Err(Error::invalid("x0 and generator differ in dimension"));
    }
    if s.steps.first().is_some_and(|st| st.perm.len() != g.dim()) {
        return Err(Error::invalid("schedule and generator differ in dimension"));
    }
    s.validate()
}

/// Piecewise trajectory with instantaneous permutations at the switch times.
/// A switch is recorded twice, before and after the jump, at the same time.
pub fn simulate(x0: &[f64], g: &ToyGenerator, s: &Schedule, opts: &SimOptions) -> Result<Trajectory> {
    check_start(x0, g, s)?;
    let mut cache = FlowCache::new(g);
    let mut traj = Trajectory::default();
    let mut x = x0.to_vec();
    let mut t = 0.0;
    traj.push(t, &x);
    let identity = Permutation::identity(g.dim());
    let tail = Step {
        perm: identity,
        dt: opts.tail.max(0.0),
    };
    let steps = s.steps.iter().chain((opts.tail > 0.0).then_some(&tail));
    for step in steps {
        if !step.perm.is_identity() {
            x = step.perm.apply(&x);
            traj.push(t, &x);
        }
        match opts.dense_dt {
            Some(h) if h > 0.0 => {
                let k = (step.dt / h + 1e-9).floor() as usize;
                for _ in 0..k {
                    x = mul(cache.get(h), &x);
                    t += h;
                    traj.push(t, &x);
                }
                let r = step.dt - k as f64 * h;
                if r > 1e-12 {
                    x = mul(&g.flow(r), &x);
                    t += r;
                    traj.push(t, &x);
                }
            }
            _ => {
                if step.dt > 0.0 {
                    x = mul(cache.get(step.dt), &x);
                    t += step.dt;
                    traj.push(t, &x);
                }
            }
        }
    }
    Ok(traj)
}

/// End state only, reusing `cache` across calls.
pub fn final_state(x0: &[f64], s: &Schedule, cache: &mut FlowCache) -> Result<Vec<f64>> {
    check_start(x0, cache.gen, s)?;
    let mut x = x0.to_vec();
    for step in &s.steps {
        if !step.perm.is_identity() {
            x = step.perm.apply(&x);
        }
        if step.dt > 0.0 {
            x = mul(cache.get(step.dt), &x);
        }
    }
    Ok(x)
}

/// `1 + Geometric(0.2)` steps with uniform permutations and `Exp(1)` durations.
pub fn random_schedule<R: Rng>(rng: &mut R, n: usize) -> Schedule {
    let len = 1 + Geometric::new(0.2).expect("valid p").sample(rng) as usize;
    let steps = (0..len)
        .map(|_| {
            let mut image: Vec<usize> = (0..n).collect();
            image.shuffle(rng);
            let dt: f64 = Exp1.sample(rng);
            Step {
                perm: Permutation::new(image).expect("shuffle of identity"),
                dt,
            }
        })
        .collect();
    Schedule { steps }
}

/// Dense trajectories for seeds `seed, seed + 1, …`, in seed order.
pub fn monte_carlo_cloud(
    x0: &[f64],
    g: &ToyGenerator,
    count: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<Vec<Trajectory>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            simulate(x0, g, &random_schedule(&mut rng, g.dim()), opts)
        })
        .collect()
}

/// Smallest value of `slack` over all dense samples of `count` random trajectories.
pub fn containment_sweep<F>(
    x0: &[f64],
    g: &ToyGenerator,
    count: usize,
    seed: u64,
    dense_dt: f64,
    slack: F,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if x0.len() != g.dim() {
        return Err(Error::invalid("x0 and generator differ in dimension"));
    }
    let step = g.flow(dense_dt);
    let res = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            let s = random_schedule(&mut rng, g.dim());
            let mut x = x0.to_vec();
            let mut worst = slack(&x);
            for st in &s.steps {
                x = st.perm.apply(&x);
                worst = worst.min(slack(&x));
                let k = (st.dt / dense_dt).floor() as usize;
                for _ in 0..k {
                    x = mul(&step, &x);
                    worst = worst.min(slack(&x));
                }
                let r = st.dt - k as f64 * dense_dt;
                if r > 0.0 {
                    x = mul(&g.flow(r), &x);
                    worst = worst.min(slack(&x));
                }
            }
            worst
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(res)
}
