use serde::Serialize;
use thermo_core::{Error, Result};
use toymodel::ToyGenerator;

use crate::cone::{extremal_field, Side};
use crate::embed::embed;

/// Predicate on barycentric points that ends an integration when it holds.
pub type StopSet<'a> = &'a (dyn Fn(&[f64; 3]) -> bool + Sync);

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtremalOptions {
    pub step: f64,
    /// Smallest step before the integration is declared failed.
    pub min_step: f64,
    pub max_time: f64,
    pub max_steps: usize,
    /// Width of the final bisection bracket, in time.
    pub event_tol: f64,
    /// Relative norm change or direction change (radians) that triggers halving.
    pub jump: f64,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        Self {
            step: 1e-3,
            min_step: 1e-9,
            max_time: 1e3,
            max_steps: 2_000_000,
            event_tol: 1e-10,
            jump: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    /// Reached `x_i = x_j`, with `i` above `j` in the chamber order.
    Wall { i: usize, j: usize },
    /// Entered the caller's stop set.
    EnteredSet,
    /// The derivative cone stopped being pointed.
    Stabilisable,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddedCurve {
    pub side: Side,
    pub times: Vec<f64>,
    pub points: Vec<[f64; 3]>,
    pub termination: Termination,
    /// Coordinate order of the Weyl chamber the curve was confined to.
    pub chamber: [usize; 3],
}

impl EmbeddedCurve {
    pub fn embedded(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| embed(p)).collect()
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn end(&self) -> [f64; 3] {
        *self.points.last().expect("curve has its start point")
    }
}

/// Chamber order of `x`, ties broken by the order of `d`.
pub fn chamber_order(x: &[f64], d: &[f64]) -> [usize; 3] {
    let mut o = [0, 1, 2];
    o.sort_by(|&i, &j| {
        x[j].partial_cmp(&x[i])
            .unwrap()
            .then(d[j].partial_cmp(&d[i]).unwrap())
            .then(i.cmp(&j))
    });
    o
}

fn field(x: &[f64; 3], g: &ToyGenerator, side: Side) -> Option<[f64; 3]> {
    extremal_field(x, g, side).ok().map(|e| e.velocity)
}

fn axpy(x: &[f64; 3], h: f64, v: &[f64; 3]) -> [f64; 3] {
    [x[0] + h * v[0], x[1] + h * v[1], x[2] + h * v[2]]
}

struct Stage {
    next: [f64; 3],
    k1: [f64; 3],
    k4: [f64; 3],
}

fn rk4(x: &[f64; 3], h: f64, g: &ToyGenerator, side: Side) -> Option<Stage> {
    let k1 = field(x, g, side)?;
    let k2 = field(&axpy(x, h / 2.0, &k1), g, side)?;
    let k3 = field(&axpy(x, h / 2.0, &k2), g, side)?;
    let k4 = field(&axpy(x, h, &k3), g, side)?;
    let mut next = *x;
    for i in 0..3 {
        next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Some(Stage { next, k1, k4 })
}

fn norm(v: &[f64; 3]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn jumped(a: &[f64; 3], b: &[f64; 3], tol: f64) -> bool {
    let (na, nb) = (norm(a), norm(b));
    if (na - nb).abs() > tol * na.max(nb) {
        return true;
    }
    let cos = a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>() / (na * nb).max(1e-300);
    cos.clamp(-1.0, 1.0).acos() > tol
}

/// Integrates the left or right extremal field from `x0` until it meets a wall
/// of its Weyl chamber, enters `stop`, or reaches a stabilisable point.
///
/// RK4 with the configured step, halved while consecutive stage velocities
/// jump. Events are bracketed by the last two accepted states and bisected.
pub fn integrate_extremal_with(
    x0: &[f64],
    g: &ToyGenerator,
    side: Side,
    opts: &ExtremalOptions,
    stop: Option<StopSet>,
) -> Result<EmbeddedCurve> {
    if g.dim() != 3 || x0.len() != 3 {
        return Err(Error::invalid("qutrit geometry needs n = 3"));
    }
    let chamber = chamber_order(x0, g.fixed_point());
    let walls = [(chamber[0], chamber[1]), (chamber[1], chamber[2])];
    let start = [x0[0], x0[1], x0[2]];
    if field(&start, g, side).is_none() {
        return Err(Error::domain(format!("{x0:?} is stabilisable; no extremal field")));
    }
    let mut times = vec![0.0];
    let mut points = vec![start];
    let fail = |reason: String, points: &[[f64; 3]]| Error::Integration {
        reason,
        partial: points.iter().map(|p| p.to_vec()).collect(),
    };
    // what ends the step from x at size h, if anything
    let event = |y: &[f64; 3]| -> Option<Termination> {
        for &(i, j) in &walls {
            if y[i] - y[j] < 0.0 {
                return Some(Termination::Wall { i, j });
            }
        }
        if stop.is_some_and(|f| f(y)) {
            return Some(Termination::EnteredSet);
        }
        None
    };
    let mut x = start;
    let mut t = 0.0;
    let mut h = opts.step;
    for _ in 0..opts.max_steps {
        if t > opts.max_time {
            return Err(fail(format!("no termination before t = {}", opts.max_time), &points));
        }
        let stage = rk4(&x, h, g, side);
        let outcome = match &stage {
            None => Some(Termination::Stabilisable),
            Some(s) => {
                if h > opts.min_step && jumped(&s.k1, &s.k4, opts.jump) {
                    h = (h / 2.0).max(opts.min_step);
                    continue;
                }
                event(&s.next)
            }
        };
        match outcome {
            None => {
                let s = stage.expect("no event means the step succeeded");
                x = s.next;
                t += h;
                times.push(t);
                points.push(x);
                h = (2.0 * h).min(opts.step);
            }
            Some(term) => {
                // largest fraction of the step with no event
                let (mut lo, mut hi) = (0.0, 1.0);
                let mut best = x;
                while (hi - lo) * h > opts.event_tol {
                    let mid = 0.5 * (lo + hi);
                    match rk4(&x, mid * h, g, side) {
                        Some(s) if event(&s.next).is_none() => {
                            lo = mid;
                            best = s.next;
                        }
                        _ => hi = mid,
                    }
                }
                if let Termination::Wall { i, j } = term {
                    let m = 0.5 * (best[i] + best[j]);
                    best[i] = m;
                    best[j] = m;
                }
                if lo > 0.0 || matches!(term, Termination::Wall { .. }) {
                    t += lo * h;
                    times.push(t);
                    points.push(best);
                }
                return Ok(EmbeddedCurve {
                    side,
                    times,
                    points,
                    termination: term,
                    chamber,
                });
            }
        }
    }
    Err(fail(format!("step budget of {} exhausted", opts.max_steps), &points))
}

/// [`integrate_extremal_with`] using the default options and no stop set.
pub fn integrate_extremal(x0: &[f64], g: &ToyGenerator, side: Side) -> Result<EmbeddedCurve> {
    integrate_extremal_with(x0, g, side, &ExtremalOptions::default(), None)
}
