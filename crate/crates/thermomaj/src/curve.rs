use serde::Serialize;
use thermo_core::{Error, Result};

use crate::check_d;

/// Piecewise-linear thermomajorisation curve of `(d, y)`.
///
/// Elbows sit at partial sums of `d` and `y` taken in decreasing order of `y_i / d_i`
/// (ties keep index order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermoCurve {
    abscissas: Vec<f64>,
    ordinates: Vec<f64>,
    order: Vec<usize>,
    d: Vec<f64>,
    y: Vec<f64>,
}

impl ThermoCurve {
    pub fn new(d: &[f64], y: &[f64]) -> Result<Self> {
        check_d(d)?;
        if d.len() != y.len() {
            return Err(Error::invalid("d and y differ in length"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite entry in y"));
        }
        let ratio: Vec<f64> = y.iter().zip(d).map(|(a, b)| a / b).collect();
        let order = thermo_core::perm::argsort_desc(&ratio);
        let mut abscissas = vec![0.0];
        let mut ordinates = vec![0.0];
        let (mut c, mut v) = (0.0, 0.0);
        for &i in &order {
            c += d[i];
            v += y[i];
            abscissas.push(c);
            ordinates.push(v);
        }
        Ok(Self {
            abscissas,
            ordinates,
            order,
            d: d.to_vec(),
            y: y.to_vec(),
        })
    }

    pub fn elbows(&self) -> Vec<(f64, f64)> {
        self.abscissas
            .iter()
            .cloned()
            .zip(self.ordinates.iter().cloned())
            .collect()
    }

    /// Slopes `y_i / d_i` in elbow order.
    pub fn slopes(&self) -> Vec<f64> {
        self.order.iter().map(|&i| self.y[i] / self.d[i]).collect()
    }

    /// Index order used to build the elbows.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn total_d(&self) -> f64 {
        *self.abscissas.last().unwrap()
    }

    pub fn total_y(&self) -> f64 {
        *self.ordinates.last().unwrap()
    }

    /// Value at `c`, clamped to `[0, 𝟙ᵀd]`.
    pub fn eval(&self, c: f64) -> f64 {
        let c = c.clamp(0.0, self.total_d());
        let k = self.abscissas.partition_point(|&a| a < c);
        if k == 0 {
            return self.ordinates[0];
        }
        if k >= self.abscissas.len() {
            return self.total_y();
        }
        let i = self.order[k - 1];
        self.ordinates[k - 1] + (c - self.abscissas[k - 1]) * self.y[i] / self.d[i]
    }

    /// `samples` equispaced points merged with the elbows, sorted by abscissa.
    pub fn sample(&self, samples: usize) -> Vec<(f64, f64)> {
        let total = self.total_d();
        let mut cs: Vec<f64> = (0..samples)
            .map(|s| {
                if samples < 2 {
                    0.0
                } else {
                    total * s as f64 / (samples - 1) as f64
                }
            })
            .collect();
        cs.extend(self.abscissas.iter().cloned());
        cs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cs.into_iter().map(|c| (c, self.eval(c))).collect()
    }
}

/// Closed-form value as a minimum of the supporting lines of the curve.
pub fn curve_min_formula(d: &[f64], y: &[f64], c: f64) -> f64 {
    (0..d.len())
        .map(|i| {
            let s = y[i] / d[i];
            let head: f64 = y.iter().zip(d).map(|(yj, dj)| (yj - s * dj).max(0.0)).sum();
            head + s * c
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_lorenz_curve() {
        let c = ThermoCurve::new(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!(c.elbows(), vec![(0.0, 0.0), (0.5, 1.0), (1.0, 1.0)]);
        assert_eq!(c.eval(0.25), 0.5);
        assert_eq!(c.eval(2.0), 1.0);
    }

    #[test]
    fn uniform_d_gives_partial_sums() {
        let y = [0.5, 0.3, 0.15, 0.05];
        let c = ThermoCurve::new(&[0.25; 4], &y).unwrap();
        let mut s = 0.0;
        for (k, (_, v)) in c.elbows().into_iter().enumerate().skip(1) {
            s += y[k - 1];
            assert!((v - s).abs() < 1e-15);
        }
    }

    #[test]
    fn slopes_non_increasing_and_endpoints() {
        let d = [0.1, 0.4, 0.2, 0.3];
        let y = [0.3, 0.1, 0.5, 0.1];
        let c = ThermoCurve::new(&d, &y).unwrap();
        assert!(c.slopes().windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(c.eval(0.0), 0.0);
        assert!((c.eval(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ties_resolved_by_index() {
        let c = ThermoCurve::new(&[0.25, 0.25, 0.5], &[0.25, 0.25, 0.5]).unwrap();
        assert_eq!(c.order(), &[0, 1, 2]);
    }

    #[test]
    fn min_formula_agrees_on_grid() {
        let d = [0.3, 0.1, 0.6];
        let y = [0.2, 0.5, 0.3];
        let c = ThermoCurve::new(&d, &y).unwrap();
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            assert!((c.eval(x) - curve_min_formula(&d, &y, x)).abs() < 1e-14);
        }
    }

    #[test]
    fn sample_merges_elbows() {
        let c = ThermoCurve::new(&[0.5, 0.3, 0.2], &[0.7, 0.2, 0.1]).unwrap();
        assert_eq!(c.sample(100).len(), 104);
    }
}
