//! Dense two-phase simplex with Bland's rule.
//!
//! Sized for the small problems in this workspace (a few dozen variables), so
//! the tableau is a plain `Vec<Vec<f64>>`.

use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const MAX_ITERS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible { residual: f64 },
    Unbounded,
}

impl LpOutcome {
    pub fn solution(&self) -> Option<&[f64]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// `minimize cᵀx` subject to linear rows and `x ≥ 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    n_vars: usize,
    rows: Vec<(Vec<f64>, Cmp, f64)>,
    objective: Vec<f64>,
    feas_tol: f64,
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            rows: Vec::new(),
            objective: vec![0.0; n_vars],
            feas_tol: 1e-9,
        }
    }

    /// Tolerance on the phase-one objective, relative to `1 + ‖b‖₁`.
    pub fn with_feasibility_tol(mut self, tol: f64) -> Self {
        self.feas_tol = tol;
        self
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, cmp: Cmp, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.n_vars, "row length");
        self.rows.push((coeffs, cmp, rhs));
        self
    }

    pub fn minimize(&mut self, c: Vec<f64>) -> &mut Self {
        assert_eq!(c.len(), self.n_vars, "objective length");
        self.objective = c;
        self
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Tableau::build(self).run(&self.objective, self.feas_tol)
    }
}

struct Tableau {
    // rows of [coefficients | rhs]
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_orig: usize,
    n_cols: usize,
    first_art: usize,
    b_norm: f64,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.n_vars;
        let n_slack = lp.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let m = lp.rows.len();
        let first_art = n + n_slack;
        let n_cols = first_art + m;
        let mut t = vec![vec![0.0; n_cols + 1]; m];
        let mut basis = vec![0; m];
        let mut slack = n;
        let mut b_norm = 0.0;
        for (r, (coeffs, cmp, rhs)) in lp.rows.iter().enumerate() {
            let flip = if *rhs < 0.0 { -1.0 } else { 1.0 };
            for (j, v) in coeffs.iter().enumerate() {
                t[r][j] = v * flip;
            }
            let cmp = match (cmp, flip < 0.0) {
                (Cmp::Le, true) => Cmp::Ge,
                (Cmp::Ge, true) => Cmp::Le,
                (c, _) => *c,
            };
            match cmp {
                Cmp::Le => {
                    t[r][slack] = 1.0;
                    slack += 1;
                }
                Cmp::Ge => {
                    t[r][slack] = -1.0;
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            t[r][first_art + r] = 1.0;
            basis[r] = first_art + r;
            t[r][n_cols] = rhs * flip;
            b_norm += rhs.abs();
        }
        Self {
            t,
            basis,
            n_orig: n,
            n_cols,
            first_art,
            b_norm,
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.t[r][col];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Simplex iterations on cost `cost` restricted to columns `< allowed`.
    fn optimise(&mut self, cost: &[f64], allowed: usize) -> Result<bool> {
        let rhs = self.n_cols;
        for _ in 0..MAX_ITERS {
            // reduced costs c_j - c_Bᵀ B⁻¹ a_j; Bland: first improving column
            let mut enter = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j];
                for (i, row) in self.t.iter().enumerate() {
                    rc -= cost[self.basis[i]] * row[j];
                }
                if rc < -PIVOT_EPS {
                    enter = Some(j);
                    break;
                }
            }
            let Some(col) = enter else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[col] > PIVOT_EPS {
                    let ratio = row[rhs] / row[col];
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - 1e-14
                                || (ratio <= best + 1e-14 && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, col);
        }
        Err(Error::Internal("simplex iteration limit reached".into()))
    }

    fn run(mut self, objective: &[f64], feas_tol: f64) -> Result<LpOutcome> {
        let rhs = self.n_cols;
        let mut phase1 = vec![0.0; self.n_cols];
        for v in phase1.iter_mut().skip(self.first_art) {
            *v = 1.0;
        }
        self.optimise(&phase1, self.n_cols)?;
        let residual: f64 = self
            .basis
            .iter()
            .zip(&self.t)
            .filter(|(b, _)| **b >= self.first_art)
            .map(|(_, row)| row[rhs])
            .sum();
        if residual > feas_tol * (1.0 + self.b_norm) {
            return Ok(LpOutcome::Infeasible { residual });
        }
        // drive artificials out of the basis or drop their redundant rows
        let mut r = 0;
        while r < self.t.len() {
            if self.basis[r] >= self.first_art {
                let col = (0..self.first_art).find(|&j| self.t[r][j].abs() > 1e-9);
                match col {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.t.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        let mut cost = vec![0.0; self.n_cols];
        cost[..self.n_orig].copy_from_slice(objective);
        if !self.optimise(&cost, self.first_art)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; self.n_orig];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_orig {
                x[b] = self.t[i][rhs].max(0.0);
            }
        }
        let value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        Ok(LpOutcome::Optimal { x, value })
    }
}
