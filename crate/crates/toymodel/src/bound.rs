use serde::Serialize;
use thermo_core::lp::{Cmp, LinearProgram, LpOutcome};
use thermo_core::perm::argsort_desc;
use thermo_core::{Error, Permutation, Result};
use thermomaj::max_corner;

use crate::ToyGenerator;

const TIE_SLACK: f64 = 1e-9;

fn sorted_desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// The z minimising `‖z − d‖₁` over `{z : x0 ≺ z, z/d ordered like d}`.
///
/// Solved as an LP in the chamber where `d` is decreasing. The optimum is a face
/// in general; a second LP picks its point closest in 1-norm to the max corner
/// of `M_d(x0)`.
pub fn ordered_past_cone_z(x0: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if x0.len() != n || n == 0 {
        return Err(Error::invalid("x0 and d differ in length"));
    }
    if d.iter().any(|&v| v.is_nan() || v <= 0.0) || x0.iter().any(|&v| v < -1e-12) {
        return Err(Error::invalid("need d > 0 and x0 ≥ 0"));
    }
    let order = argsort_desc(d);
    let ds: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let xs = sorted_desc(x0);
    let total: f64 = x0.iter().sum();
    let corner = max_corner(d, x0)?;
    let cs: Vec<f64> = order.iter().map(|&i| corner[i]).collect();

    // variables: z (n), s (n) with s ≥ |z − d|, u (n) with u ≥ |z − corner|
    let nv = 3 * n;
    let row = |entries: &[(usize, f64)]| {
        let mut r = vec![0.0; nv];
        for &(k, v) in entries {
            r[k] += v;
        }
        r
    };
    let mut lp = LinearProgram::new(nv);
    lp.constrain(row(&(0..n).map(|k| (k, 1.0)).collect::<Vec<_>>()), Cmp::Eq, total);
    for k in 0..n.saturating_sub(1) {
        lp.constrain(row(&[(k, ds[k + 1]), (k + 1, -ds[k])]), Cmp::Ge, 0.0);
        let head: f64 = xs[..=k].iter().sum();
        lp.constrain(row(&(0..=k).map(|i| (i, 1.0)).collect::<Vec<_>>()), Cmp::Ge, head);
    }
    for k in 0..n {
        lp.constrain(row(&[(n + k, 1.0), (k, -1.0)]), Cmp::Ge, -ds[k]);
        lp.constrain(row(&[(n + k, 1.0), (k, 1.0)]), Cmp::Ge, ds[k]);
        lp.constrain(row(&[(2 * n + k, 1.0), (k, -1.0)]), Cmp::Ge, -cs[k]);
        lp.constrain(row(&[(2 * n + k, 1.0), (k, 1.0)]), Cmp::Ge, cs[k]);
    }
    let dist_row = row(&(n..2 * n).map(|k| (k, 1.0)).collect::<Vec<_>>());
    lp.minimize(dist_row.clone());
    let best = match lp.solve()? {
        LpOutcome::Optimal { value, .. } => value,
        other => {
            return Err(Error::Internal(format!(
                "ordered past cone LP should be feasible and bounded, got {other:?}"
            )))
        }
    };
    lp.constrain(dist_row, Cmp::Le, best + TIE_SLACK);
    lp.minimize(row(&(2 * n..3 * n).map(|k| (k, 1.0)).collect::<Vec<_>>()));
    let sol = match lp.solve()? {
        LpOutcome::Optimal { x, .. } => x,
        other => {
            return Err(Error::Internal(format!("tie-break LP failed: {other:?}")));
        }
    };
    let mut z = vec![0.0; n];
    for (k, &i) in order.iter().enumerate() {
        z[i] = sol[k].max(0.0);
    }
    Ok(z)
}

/// `conv{π(z)}`, the classical majorisation polytope of `z`.
#[derive(Debug, Clone, Serialize)]
pub struct ReachBound {
    pub z: Vec<f64>,
    pub vertices: Vec<Vec<f64>>,
    #[serde(skip)]
    head_sums: Vec<f64>,
}

impl ReachBound {
    pub fn new(z: Vec<f64>) -> Self {
        let zs = sorted_desc(&z);
        let head_sums = zs
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        let mut vertices: Vec<Vec<f64>> = Permutation::all(z.len())
            .iter()
            .map(|p| p.apply(&z))
            .collect();
        vertices.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vertices.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-15));
        Self {
            z,
            vertices,
            head_sums,
        }
    }

    /// Minimum over `k < n` of `Σ_{i≤k} z↓_i − Σ_{i≤k} x↓_i`; the total is not checked.
    pub fn slack(&self, x: &[f64]) -> f64 {
        let xs = sorted_desc(x);
        let mut acc = 0.0;
        let mut worst = f64::INFINITY;
        for (v, h) in xs.iter().zip(&self.head_sums).take(xs.len().saturating_sub(1)) {
            acc += v;
            worst = worst.min(h - acc);
        }
        worst
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let total: f64 = x.iter().sum();
        (total - self.head_sums.last().copied().unwrap_or(0.0)).abs() <= tol
            && self.slack(x) >= -tol
    }
}

pub fn reach_bound(x0: &[f64], g: &ToyGenerator) -> Result<ReachBound> {
    Ok(ReachBound::new(ordered_past_cone_z(x0, g.fixed_point())?))
}

#[derive(Debug, Clone, Serialize)]
pub struct InwardReport {
    pub inward: bool,
    /// Largest `1_Sᵀ v` over vertices, conjugated generators and active subsets `S`.
    pub worst: f64,
}

/// At each vertex `π(z)` and for each `σ`, the velocity `−σBσ⁻¹ π(z)` must not
/// increase any active constraint `Σ_{i∈S} x_i ≤ Σ_{top |S|} z`.
pub fn vectorfield_inward_check(z: &[f64], g: &ToyGenerator, tol: f64) -> Result<InwardReport> {
    let n = g.dim();
    if z.len() != n {
        return Err(Error::invalid("z and generator differ in dimension"));
    }
    let bound = ReachBound::new(z.to_vec());
    let perms = Permutation::all(n);
    let mut worst = f64::NEG_INFINITY;
    for v in &bound.vertices {
        for sigma in &perms {
            let y = sigma.inverse().apply(v);
            let vel = sigma.apply(&g.velocity(&y));
            for mask in 1u32..(1 << n) - 1 {
                let size = mask.count_ones() as usize;
                let (s_v, s_vel) = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .fold((0.0, 0.0), |(a, b), i| (a + v[i], b + vel[i]));
                if (bound.head_sums[size - 1] - s_v).abs() <= 1e-12 {
                    worst = worst.max(s_vel);
                }
            }
        }
    }
    Ok(InwardReport {
        inward: worst <= tol,
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_of_d_is_d() {
        let g = ToyGenerator::ladder(0.4, 3).unwrap();
        let d = g.fixed_point();
        let z = ordered_past_cone_z(d, d).unwrap();
        assert!(z.iter().zip(d).all(|(a, b)| (a - b).abs() < 1e-9));
        let u = vec![1.0 / 3.0; 3];
        let z = ordered_past_cone_z(&u, d).unwrap();
        assert!(z.iter().zip(d).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn ordered_start_is_its_own_bound() {
        let d = [0.5, 0.3, 0.2];
        let x0 = [0.7, 0.2, 0.1];
        let z = ordered_past_cone_z(&x0, &d).unwrap();
        assert!(z.iter().zip(x0).all(|(a, b)| (a - b).abs() < 1e-9), "{z:?}");
    }

    #[test]
    fn bound_vertices_and_membership() {
        let b = ReachBound::new(vec![0.6, 0.3, 0.1]);
        assert_eq!(b.vertices.len(), 6);
        assert!(b.contains(&[0.3, 0.3, 0.4], 1e-12));
        assert!(!b.contains(&[0.7, 0.2, 0.1], 1e-12));
        assert_eq!(ReachBound::new(vec![0.5, 0.25, 0.25]).vertices.len(), 3);
    }
}
