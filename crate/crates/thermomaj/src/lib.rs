//! Thermomajorisation: curves, d-majorisation tests, polytopes, extreme points
//! and transition matrices.
//!
//! Throughout, `x ≺_d y` ("x is d-majorised by y") means some d-stochastic
//! matrix maps `y` to `x`.

use serde::Serialize;
use thermo_core::lp::{Cmp, LinearProgram, LpOutcome};
use thermo_core::perm::argsort_desc;
use thermo_core::{Error, RMat, Result};

mod curve;

pub use curve::{curve_min_formula, ThermoCurve};

pub const DEFAULT_TOL: f64 = 1e-9;

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite entry"));
    }
    Ok(())
}

pub(crate) fn check_d(d: &[f64]) -> Result<()> {
    if d.is_empty() {
        return Err(Error::invalid("empty d"));
    }
    if let Some(i) = d.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::invalid(format!("d[{i}] = {} must be positive", d[i])));
    }
    Ok(())
}

fn check_nonneg(y: &[f64]) -> Result<()> {
    if let Some(i) = y.iter().position(|v| *v < 0.0) {
        return Err(Error::invalid(format!("y[{i}] = {} is negative", y[i])));
    }
    Ok(())
}

/// Why a majorisation test failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Totals `𝟙ᵀx` and `𝟙ᵀy` differ.
    Total,
    /// The inequality with this index fails.
    Index(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MajVerdict {
    pub holds: bool,
    pub violated: Option<Violation>,
}

impl MajVerdict {
    fn ok() -> Self {
        Self {
            holds: true,
            violated: None,
        }
    }

    fn fail(v: Violation) -> Self {
        Self {
            holds: false,
            violated: Some(v),
        }
    }
}

fn totals_match(x: &[f64], y: &[f64], tol: f64) -> bool {
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    (sx - sy).abs() <= tol * (1.0 + sy.abs())
}

/// `x ≺_d y` through the n one-norm inequalities
/// `‖d_i x − y_i d‖₁ ≤ ‖d_i y − y_i d‖₁`.
///
/// These are the inequalities `‖x − t d‖₁ ≤ ‖y − t d‖₁` at the kinks `t = y_i / d_i`
/// of the right-hand side, which suffice once the totals agree.
pub fn is_d_majorised(x: &[f64], y: &[f64], d: &[f64], tol: f64) -> Result<MajVerdict> {
    check_pair(x, y)?;
    check_pair(x, d)?;
    check_d(d)?;
    if !totals_match(x, y, tol) {
        return Ok(MajVerdict::fail(Violation::Total));
    }
    let l1 = |v: &[f64], i: usize| -> f64 {
        v.iter()
            .zip(d)
            .map(|(vj, dj)| (d[i] * vj - y[i] * dj).abs())
            .sum()
    };
    for i in 0..d.len() {
        let (lx, ly) = (l1(x, i), l1(y, i));
        if lx > ly + tol * (1.0 + ly) {
            return Ok(MajVerdict::fail(Violation::Index(i)));
        }
    }
    Ok(MajVerdict::ok())
}

/// `x ≺_d y` by comparing curves at `samples` equispaced abscissas.
pub fn is_d_majorised_sampled(
    x: &[f64],
    y: &[f64],
    d: &[f64],
    samples: usize,
    tol: f64,
) -> Result<MajVerdict> {
    check_pair(x, y)?;
    if !totals_match(x, y, tol) {
        return Ok(MajVerdict::fail(Violation::Total));
    }
    let cx = ThermoCurve::new(d, x)?;
    let cy = ThermoCurve::new(d, y)?;
    let total = cx.total_d();
    let k = samples.max(2);
    for s in 0..k {
        let c = total * s as f64 / (k - 1) as f64;
        if cx.eval(c) > cy.eval(c) + tol {
            return Ok(MajVerdict::fail(Violation::Index(s)));
        }
    }
    Ok(MajVerdict::ok())
}

/// `x ≺_d y` by comparing curves at the elbows of `x`'s curve.
///
/// Enough because `x`'s curve is linear between its elbows and `y`'s is concave.
pub fn is_d_majorised_elbows(x: &[f64], y: &[f64], d: &[f64], tol: f64) -> Result<MajVerdict> {
    check_pair(x, y)?;
    if !totals_match(x, y, tol) {
        return Ok(MajVerdict::fail(Violation::Total));
    }
    let cx = ThermoCurve::new(d, x)?;
    let cy = ThermoCurve::new(d, y)?;
    for (k, (c, v)) in cx.elbows().into_iter().enumerate() {
        if v > cy.eval(c) + tol {
            return Ok(MajVerdict::fail(Violation::Index(k)));
        }
    }
    Ok(MajVerdict::ok())
}

/// Classical majorisation `x ≺ y` via sorted partial sums.
pub fn is_majorised(x: &[f64], y: &[f64], tol: f64) -> Result<MajVerdict> {
    check_pair(x, y)?;
    if !totals_match(x, y, tol) {
        return Ok(MajVerdict::fail(Violation::Total));
    }
    let sort = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    };
    let (sx, sy) = (sort(x), sort(y));
    let (mut px, mut py) = (0.0, 0.0);
    for k in 0..x.len().saturating_sub(1) {
        px += sx[k];
        py += sy[k];
        if px > py + tol {
            return Ok(MajVerdict::fail(Violation::Index(k)));
        }
    }
    Ok(MajVerdict::ok())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Halfspace {
    /// 0/1 normal.
    pub m: Vec<u8>,
    pub bound: f64,
}

/// `M_d(y) = {x : 𝟙ᵀx = 𝟙ᵀy, mᵀx ≤ th_{d,y}(mᵀd)}` for all nontrivial 0/1 vectors `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajPolytope {
    pub halfspaces: Vec<Halfspace>,
    pub total: f64,
    d: Vec<f64>,
    y: Vec<f64>,
}

pub fn polytope(d: &[f64], y: &[f64]) -> Result<MajPolytope> {
    check_pair(d, y)?;
    check_d(d)?;
    check_nonneg(y)?;
    let n = d.len();
    if n > 20 {
        return Err(Error::invalid("polytope limited to n ≤ 20"));
    }
    let curve = ThermoCurve::new(d, y)?;
    let mut halfspaces = Vec::with_capacity((1usize << n) - 2);
    for mask in 1..(1u32 << n) - 1 {
        let m: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
        let c: f64 = (0..n).filter(|&i| m[i] == 1).map(|i| d[i]).sum();
        halfspaces.push(Halfspace {
            m,
            bound: curve.eval(c),
        });
    }
    Ok(MajPolytope {
        halfspaces,
        total: y.iter().sum(),
        d: d.to_vec(),
        y: y.to_vec(),
    })
}

impl MajPolytope {
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Smallest slack `bound − mᵀx`; negative means outside.
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| {
                let mx: f64 = h.m.iter().zip(x).filter(|(m, _)| **m == 1).map(|(_, v)| v).sum();
                h.bound - mx
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && (x.iter().sum::<f64>() - self.total).abs() <= tol
            && self.slack(x) >= -tol
    }

    /// Halfspaces tight at `x` within `tol`.
    pub fn active(&self, x: &[f64], tol: f64) -> Vec<&Halfspace> {
        self.halfspaces
            .iter()
            .filter(|h| {
                let mx: f64 = h.m.iter().zip(x).filter(|(m, _)| **m == 1).map(|(_, v)| v).sum();
                (h.bound - mx).abs() <= tol
            })
            .collect()
    }

    /// Distinct extreme points `E_{d,y}(σ)` over all orderings σ.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for p in thermo_core::Permutation::all(self.dim()) {
            let v = extreme_point(&self.d, &self.y, p.image()).expect("validated inputs");
            let dup = out
                .iter()
                .any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12));
            if !dup {
                out.push(v);
            }
        }
        out
    }
}

/// Extreme point for the ordering `order` (a list of indices, first filled first):
/// entry `order[k]` is the curve increment over `[D_{k-1}, D_k]` with
/// `D_k = d_{order[0]} + … + d_{order[k]}`.
pub fn extreme_point(d: &[f64], y: &[f64], order: &[usize]) -> Result<Vec<f64>> {
    check_pair(d, y)?;
    check_d(d)?;
    check_nonneg(y)?;
    if order.len() != d.len() {
        return Err(Error::invalid("ordering has wrong length"));
    }
    thermo_core::Permutation::new(order.to_vec())?;
    let curve = ThermoCurve::new(d, y)?;
    let mut out = vec![0.0; d.len()];
    let mut c = 0.0;
    let mut prev = 0.0;
    for &i in order {
        c += d[i];
        let v = curve.eval(c);
        out[i] = v - prev;
        prev = v;
    }
    Ok(out)
}

/// The extreme point for the ordering that sorts `d` decreasingly.
pub fn max_corner(d: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_d(d)?;
    extreme_point(d, y, &argsort_desc(d))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Transition {
    Feasible {
        /// d-stochastic with `A y = x`.
        a: RMat,
        max_residual: f64,
        warning: Option<String>,
    },
    Infeasible {
        /// Failing one-norm inequality, if that test also fails.
        violated: Option<Violation>,
    },
}

impl Transition {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Transition::Feasible { .. })
    }
}

/// Residual of the transition conditions for `a`.
pub fn transition_residual(a: &RMat, d: &[f64], y: &[f64], x: &[f64]) -> f64 {
    let n = d.len();
    let mut r: f64 = a.iter().map(|v| (-v).max(0.0)).fold(0.0, f64::max);
    for j in 0..n {
        r = r.max((a.column(j).sum() - 1.0).abs());
    }
    for i in 0..n {
        let ad: f64 = (0..n).map(|j| a[(i, j)] * d[j]).sum();
        let ay: f64 = (0..n).map(|j| a[(i, j)] * y[j]).sum();
        r = r.max((ad - d[i]).abs()).max((ay - x[i]).abs());
    }
    r
}

/// Find a d-stochastic `A` with `A y = x` by phase-one simplex.
pub fn find_transition_matrix(d: &[f64], y: &[f64], x: &[f64]) -> Result<Transition> {
    check_pair(d, y)?;
    check_pair(d, x)?;
    check_d(d)?;
    let n = d.len();
    let var = |i: usize, j: usize| i * n + j;
    let mut lp = LinearProgram::new(n * n);
    for j in 0..n {
        let mut row = vec![0.0; n * n];
        (0..n).for_each(|i| row[var(i, j)] = 1.0);
        lp.constrain(row, Cmp::Eq, 1.0);
    }
    for i in 0..n {
        let mut rd = vec![0.0; n * n];
        let mut ry = vec![0.0; n * n];
        for j in 0..n {
            rd[var(i, j)] = d[j];
            ry[var(i, j)] = y[j];
        }
        lp.constrain(rd, Cmp::Eq, d[i]);
        lp.constrain(ry, Cmp::Eq, x[i]);
    }
    match lp.solve()? {
        LpOutcome::Optimal { x: sol, .. } => {
            let a = RMat::from_fn(n, n, |i, j| sol[var(i, j)]);
            let max_residual = transition_residual(&a, d, y, x);
            let warning = (max_residual > 1e-10)
                .then(|| format!("ill-conditioned solve: residual {max_residual:.2e}"));
            Ok(Transition::Feasible {
                a,
                max_residual,
                warning,
            })
        }
        LpOutcome::Infeasible { .. } => Ok(Transition::Infeasible {
            violated: is_d_majorised(x, y, d, DEFAULT_TOL)?.violated,
        }),
        LpOutcome::Unbounded => Err(Error::Internal("feasibility LP reported unbounded".into())),
    }
}
