use serde::Serialize;
use thermo_core::{Error, Permutation, Result};

use crate::embed::{embed, unembed};
use crate::polygon::Polygon;

/// Below this distance from ¼ the parabolic formulas are used.
pub const PARABOLIC_TOL: f64 = 1e-9;

const SQRT_2_3: f64 = 0.816_496_580_927_726;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConicCase {
    Parabolic,
    Elliptic,
    Hyperbolic,
    /// `a = 1`: the stabilisable set is the centroid alone.
    DegenerateUnital,
}

/// One arc of the stabilisable boundary.
///
/// The unrotated arc joins the embedded `d_b = (1, b, b²)/Z` and `τ₂₃ d_b`,
/// where `b` is `a` or `1/a`. `rotation` is a cyclic coordinate shift applied
/// after the formula.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryConic {
    pub case: ConicCase,
    pub b: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    /// The arc is `λ` from `−lambda_max` to `lambda_max`; a negative value
    /// means it is traversed with decreasing `λ`.
    pub lambda_max: f64,
    pub rotation: Vec<usize>,
    pub start: [f64; 2],
    pub end: [f64; 2],
}

fn classify(b: f64) -> ConicCase {
    if (b - 0.25).abs() < PARABOLIC_TOL {
        ConicCase::Parabolic
    } else if b < 0.25 {
        ConicCase::Elliptic
    } else {
        ConicCase::Hyperbolic
    }
}

fn gibbs3(b: f64) -> [f64; 3] {
    let z = 1.0 + b + b * b;
    [1.0 / z, b / z, b * b / z]
}

impl BoundaryConic {
    fn new(b: f64, rotation: &Permutation) -> Result<Self> {
        let case = classify(b);
        let (mut u, mut v, mut w) = (0.0, 0.0, 0.0);
        if case != ConicCase::Parabolic {
            let u_plus_v = SQRT_2_3 * (1.0 - b) / (1.0 - 4.0 * b);
            let v_minus_u = SQRT_2_3 * (1.0 - b) / (1.0 + 2.0 * b);
            v = 0.5 * (u_plus_v + v_minus_u);
            u = 0.5 * (u_plus_v - v_minus_u);
            w = std::f64::consts::SQRT_2 * (1.0 - b) * b
                / ((1.0 + 2.0 * b) * (3.0 + 2.0 * b) * (1.0 - 4.0 * b)).abs().sqrt();
        }
        let mut c = Self {
            case,
            b,
            u,
            v,
            w,
            lambda_max: 0.0,
            rotation: rotation.image().to_vec(),
            start: [0.0; 2],
            end: [0.0; 2],
        };
        let target = embed(&gibbs3(b))[0].abs();
        c.lambda_max = match case {
            ConicCase::Parabolic => target * std::f64::consts::SQRT_2,
            _ => {
                let f = |l: f64| c.raw(l)[0].abs() - target;
                let (mut lo, mut hi) = (0.0, 1.0 - 1e-15);
                if f(hi) < 0.0 {
                    return Err(Error::Internal(format!("no endpoint on the b = {b} arc")));
                }
                while hi - lo > 1e-13 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        };
        c.start = c.point(-c.lambda_max);
        c.end = c.point(c.lambda_max);
        Ok(c)
    }

    /// Formula value before rotation.
    fn raw(&self, l: f64) -> [f64; 2] {
        match self.case {
            ConicCase::Parabolic => [
                l / std::f64::consts::SQRT_2,
                (1.0 + 14.0 * l * l) / 6f64.sqrt(),
            ],
            ConicCase::Elliptic => {
                let q = l * l + 1.0;
                [self.w * 2.0 * l / q, self.u * (l * l - 1.0) / q + self.v]
            }
            ConicCase::Hyperbolic => {
                let q = l * l - 1.0;
                [-self.w * 2.0 * l / q, self.u * (l * l + 1.0) / q + self.v]
            }
            ConicCase::DegenerateUnital => [0.0, 0.0],
        }
    }

    /// Embedded point at parameter `λ`.
    pub fn point(&self, l: f64) -> [f64; 2] {
        let x = unembed(self.raw(l));
        let rot = Permutation::new(self.rotation.clone()).expect("stored permutation");
        embed(&rot.apply(&x))
    }

    /// `k + 1` points with equally spaced parameters, start to end.
    pub fn sample(&self, k: usize) -> Vec<[f64; 2]> {
        (0..=k)
            .map(|i| self.point(self.lambda_max * (2.0 * i as f64 / k as f64 - 1.0)))
            .collect()
    }
}

/// The six arcs bounding the stabilisable set.
#[derive(Debug, Clone, Serialize)]
pub struct StabBoundary {
    pub a: f64,
    pub case: ConicCase,
    /// Empty when degenerate. Otherwise ordered so that each arc starts where
    /// the previous one ends.
    pub arcs: Vec<BoundaryConic>,
}

pub fn stab_boundary(a: f64) -> Result<StabBoundary> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::invalid("a must be positive"));
    }
    if (a - 1.0).abs() < 1e-12 {
        return Ok(StabBoundary {
            a,
            case: ConicCase::DegenerateUnital,
            arcs: Vec::new(),
        });
    }
    let id = Permutation::identity(3);
    let c = Permutation::new(vec![1, 2, 0])?;
    let c2 = c.compose(&c);
    let mut pool = Vec::with_capacity(6);
    for r in [&id, &c, &c2] {
        pool.push(BoundaryConic::new(a, r)?);
        pool.push(BoundaryConic::new(1.0 / a, r)?);
    }
    let arcs = chain(pool)?;
    Ok(StabBoundary {
        a,
        case: classify(a),
        arcs,
    })
}

fn close(p: [f64; 2], q: [f64; 2]) -> bool {
    (p[0] - q[0]).hypot(p[1] - q[1]) < 1e-9
}

/// Orders arcs head to tail, reversing parameters where needed.
fn chain(mut pool: Vec<BoundaryConic>) -> Result<Vec<BoundaryConic>> {
    let mut out = vec![pool.remove(0)];
    while !pool.is_empty() {
        let tail = out.last().unwrap().end;
        let k = pool
            .iter()
            .position(|c| close(c.start, tail) || close(c.end, tail))
            .ok_or_else(|| Error::Internal("boundary arcs do not close up".into()))?;
        let mut next = pool.remove(k);
        if !close(next.start, tail) {
            next = next.reversed();
        }
        out.push(next);
    }
    if !close(out.last().unwrap().end, out[0].start) {
        return Err(Error::Internal("boundary arcs do not close up".into()));
    }
    Ok(out)
}

impl BoundaryConic {
    fn reversed(mut self) -> Self {
        std::mem::swap(&mut self.start, &mut self.end);
        self.lambda_max = -self.lambda_max;
        self
    }
}

impl StabBoundary {
    pub fn is_degenerate(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Closed polygon through `per_arc` chords on each arc.
    pub fn polygon(&self, per_arc: usize) -> Polygon {
        if self.is_degenerate() {
            return Polygon::new(vec![[0.0, 0.0]]);
        }
        let mut pts = Vec::with_capacity(6 * per_arc);
        for arc in &self.arcs {
            let s = arc.sample(per_arc);
            pts.extend_from_slice(&s[..per_arc]);
        }
        Polygon::new(pts)
    }

    /// Barycentric points spread along the boundary.
    pub fn sample_points(&self, per_arc: usize) -> Vec<[f64; 3]> {
        self.polygon(per_arc).vertices.iter().map(|&p| unembed(p)).collect()
    }
}

/// `ker α_id ∩ ker α_{τ₂₃} ∩ Δ²` for the functional `α = −(½+L)e₃ − (½−L)e₂`,
/// with `L = λ` at `a = ¼` and `L = ½√(1+2a) |(3+2a)(1−4a)|^{−1/2} λ` otherwise.
///
/// The result lies on the unrotated `b = a` arc at the same `λ`.
pub fn kernel_intersection_point(a: f64, lambda: f64) -> Result<[f64; 3]> {
    if !(a > 0.0 && a.is_finite()) || (a - 1.0).abs() < 1e-12 {
        return Err(Error::invalid("need a > 0 and a ≠ 1"));
    }
    let arc = BoundaryConic::new(a, &Permutation::identity(3))?;
    if lambda.is_nan() || lambda.abs() > arc.lambda_max + 1e-12 {
        return Err(Error::domain(format!(
            "λ = {lambda} outside [−{m}, {m}]",
            m = arc.lambda_max
        )));
    }
    let s = match arc.case {
        ConicCase::Parabolic => 1.0,
        _ => 0.5 * (1.0 + 2.0 * a).sqrt() / ((3.0 + 2.0 * a) * (1.0 - 4.0 * a)).abs().sqrt(),
    };
    let l = s * lambda;
    let alpha = [0.0, -(0.5 - l), -(0.5 + l)];
    // −B for the ladder qutrit, and its τ₂₃ conjugate
    let k = 2.0 / (1.0 + a);
    let mb = [
        [-a * k, k, 0.0],
        [a * k, -(1.0 + a) * k, k],
        [0.0, a * k, -k],
    ];
    let t = [0, 2, 1];
    let mut n1 = [0.0; 3];
    let mut n2 = [0.0; 3];
    for j in 0..3 {
        for i in 0..3 {
            n1[j] += alpha[i] * mb[i][j];
            n2[j] += alpha[i] * mb[t[i]][t[j]];
        }
    }
    let c = [
        n1[1] * n2[2] - n1[2] * n2[1],
        n1[2] * n2[0] - n1[0] * n2[2],
        n1[0] * n2[1] - n1[1] * n2[0],
    ];
    let s: f64 = c.iter().sum();
    if s.abs() < 1e-300 {
        return Err(Error::Internal("kernel intersection is parallel to the simplex".into()));
    }
    Ok(c.map(|v| v / s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabolic_vertex() {
        let arc = BoundaryConic::new(0.25, &Permutation::identity(3)).unwrap();
        let p = arc.point(0.0);
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        assert!((arc.lambda_max - 1.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn arcs_close_through_permutations_of_d() {
        for a in [0.1, 0.2, 0.25, 0.3, 0.5, 0.9, 2.0] {
            let sb = stab_boundary(a).unwrap();
            assert_eq!(sb.arcs.len(), 6);
            let d = gibbs3(a);
            for arc in &sb.arcs {
                let hit = Permutation::all(3)
                    .iter()
                    .any(|p| close(embed(&p.apply(&d)), arc.start));
                assert!(hit, "a = {a}");
            }
        }
        assert!(stab_boundary(1.0).unwrap().is_degenerate());
        assert!(stab_boundary(0.0).is_err());
    }

    #[test]
    fn kernel_point_at_quarter() {
        let p = kernel_intersection_point(0.25, 0.0).unwrap();
        for (v, w) in p.iter().zip([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]) {
            assert!((v - w).abs() < 1e-14);
        }
        assert!(matches!(kernel_intersection_point(0.25, 0.2), Err(Error::Domain(_))));
    }
}
