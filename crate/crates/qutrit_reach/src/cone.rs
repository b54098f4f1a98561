use rayon::prelude::*;
use serde::Serialize;
use thermo_core::lp::{Cmp, LinearProgram, LpOutcome};
use thermo_core::{Error, Permutation, Result};
use toymodel::ToyGenerator;

use crate::embed::{embed, unembed_dir};
use std::f64::consts::{PI, TAU};

/// Angular tolerance on the half-plane test.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// The six velocities `−πBπ⁻¹x` at a point.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeCone {
    pub base: [f64; 3],
    pub rays: Vec<[f64; 3]>,
    pub embedded: Vec<[f64; 2]>,
    /// Some ray vanishes (the base is a permutation of the fixed point).
    pub zero_ray: bool,
    /// Widest angular gap between consecutive nonzero rays.
    pub max_gap: f64,
    /// The nonzero rays lie in an open half-plane.
    pub pointed: bool,
    /// Counterclockwise-most nonzero ray when pointed.
    pub left: Option<usize>,
    /// Clockwise-most nonzero ray when pointed.
    pub right: Option<usize>,
}

impl DerivativeCone {
    /// `0 ∈ conv(rays)`.
    pub fn contains_zero(&self) -> bool {
        self.zero_ray || !self.pointed
    }

    /// Unit bisector of the pointed cone in the plane.
    pub fn bisector(&self) -> Option<[f64; 2]> {
        let (l, r) = (self.left?, self.right?);
        let al = angle(self.embedded[l]);
        let ar = angle(self.embedded[r]);
        let width = (al - ar).rem_euclid(TAU);
        let mid = ar + width / 2.0;
        Some([mid.cos(), mid.sin()])
    }
}

fn angle(v: [f64; 2]) -> f64 {
    v[1].atan2(v[0])
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn check_dim(g: &ToyGenerator, x: &[f64]) -> Result<()> {
    if g.dim() != 3 || x.len() != 3 {
        return Err(Error::invalid("qutrit geometry needs n = 3"));
    }
    Ok(())
}

pub fn derv_cone(x: &[f64], g: &ToyGenerator) -> Result<DerivativeCone> {
    check_dim(g, x)?;
    let mut rays = Vec::with_capacity(6);
    for sigma in Permutation::all(3) {
        let v = sigma.apply(&g.velocity(&sigma.inverse().apply(x)));
        rays.push([v[0], v[1], v[2]]);
    }
    let embedded: Vec<[f64; 2]> = rays.iter().map(|r| embed(r)).collect();
    let scale = embedded.iter().map(|&e| norm2(e)).fold(0.0, f64::max).max(1e-300);
    let nonzero: Vec<usize> = (0..6).filter(|&k| norm2(embedded[k]) > 1e-12 * scale.max(1.0)).collect();
    let zero_ray = nonzero.len() < 6;
    let mut angs: Vec<(f64, usize)> = nonzero.iter().map(|&k| (angle(embedded[k]), k)).collect();
    angs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (mut max_gap, mut at) = (0.0, 0);
    let m = angs.len();
    for k in 0..m {
        let gap = if m == 1 {
            TAU
        } else {
            (angs[(k + 1) % m].0 - angs[k].0).rem_euclid(TAU)
        };
        if gap > max_gap {
            max_gap = gap;
            at = k;
        }
    }
    let pointed = m > 0 && max_gap > PI + ANGLE_TOL;
    let (left, right) = if pointed {
        (Some(angs[at].1), Some(angs[(at + 1) % m].1))
    } else {
        (None, None)
    };
    Ok(DerivativeCone {
        base: [x[0], x[1], x[2]],
        rays,
        embedded,
        zero_ray,
        max_gap,
        pointed,
        left,
        right,
    })
}

#[derive(Debug, Clone, Serialize)]
pub enum Stabilisability {
    /// Convex weights over the six permutations (lexicographic order) with `Σ w_π r_π = 0`.
    Stabilisable { weights: Vec<f64> },
    /// Functional `α` with `α(r_π) ≤ margin < 0` for every ray.
    NotStabilisable { alpha: [f64; 3], margin: f64 },
}

impl Stabilisability {
    pub fn holds(&self) -> bool {
        matches!(self, Stabilisability::Stabilisable { .. })
    }
}

/// LP certificate for `0 ∈ conv(derv(x))`.
pub fn is_stabilisable(x: &[f64], g: &ToyGenerator) -> Result<Stabilisability> {
    let cone = derv_cone(x, g)?;
    let mut lp = LinearProgram::new(6);
    lp.constrain(vec![1.0; 6], Cmp::Eq, 1.0);
    for c in 0..2 {
        lp.constrain(cone.embedded.iter().map(|e| e[c]).collect(), Cmp::Eq, 0.0);
    }
    match lp.solve()? {
        LpOutcome::Optimal { x: w, .. } => Ok(Stabilisability::Stabilisable { weights: w }),
        _ => {
            let b = cone.bisector().ok_or_else(|| {
                Error::Internal("LP infeasible although the derivative cone is not pointed".into())
            })?;
            let alpha = unembed_dir([-b[0], -b[1]]);
            let margin = cone
                .rays
                .iter()
                .filter(|r| r.iter().any(|v| v.abs() > 0.0))
                .map(|r| alpha.iter().zip(r).map(|(a, v)| a * v).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(Stabilisability::NotStabilisable { alpha, margin })
        }
    }
}

/// Barycentric grid `(i, j, k)/resolution` with `i + j + k = resolution`,
/// classified in parallel.
pub fn stab_grid(g: &ToyGenerator, resolution: usize) -> Result<Vec<([f64; 3], bool)>> {
    let m = resolution.max(1);
    let pts: Vec<[f64; 3]> = (0..=m)
        .flat_map(|i| (0..=m - i).map(move |j| [i, j, m - i - j].map(|v| v as f64 / m as f64)))
        .collect();
    pts.into_par_iter()
        .map(|p| Ok((p, is_stabilisable(&p, g)?.holds())))
        .collect()
}

/// Boundary ray of the pointed derivative cone.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtremalVelocity {
    pub velocity: [f64; 3],
    pub embedded: [f64; 2],
    /// Base point is a permutation of the fixed point; the zero ray was skipped.
    pub degenerate: bool,
}

/// Left (counterclockwise-most) or right ray of the cone at `x`.
pub fn extremal_field(x: &[f64], g: &ToyGenerator, side: Side) -> Result<ExtremalVelocity> {
    let cone = derv_cone(x, g)?;
    if !cone.pointed {
        return Err(Error::domain(format!(
            "derivative cone at {x:?} is not pointed (widest gap {:.6})",
            cone.max_gap
        )));
    }
    let k = match side {
        Side::Left => cone.left,
        Side::Right => cone.right,
    }
    .expect("pointed cone has boundary rays");
    Ok(ExtremalVelocity {
        velocity: cone.rays[k],
        embedded: cone.embedded[k],
        degenerate: cone.zero_ray,
    })
}
