//! Randomised search for a system–bath coupling that reproduces a given
//! wedge generator.
//!
//! This only explores. A small residual is evidence that the target is
//! reachable by the construction in [`crate::markov_to_generator`], a large one
//! is not a proof of the opposite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thermo_core::{diag_c, CMat, Complex64, Error, Result, Superoperator};

use crate::{markov_to_generator, ThermalSetup};

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 4000,
            initial_step: 0.5,
            min_step: 1e-8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    /// Frobenius distance between target and best fitted generator.
    pub residual: f64,
    pub parameters: Vec<f64>,
    pub evaluations: usize,
}

/// Real coordinates on Hermitian matrices commuting with a diagonal matrix `k`.
struct CommutantBasis {
    dim: usize,
    elems: Vec<CMat>,
}

impl CommutantBasis {
    fn new(k: &[f64], tol: f64) -> Self {
        let dim = k.len();
        let mut elems = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                if (k[i] - k[j]).abs() > tol {
                    continue;
                }
                let mut m = CMat::zeros(dim, dim);
                m[(i, j)] = Complex64::new(1.0, 0.0);
                m[(j, i)] = Complex64::new(1.0, 0.0);
                elems.push(m);
                if i != j {
                    let mut m = CMat::zeros(dim, dim);
                    m[(i, j)] = Complex64::new(0.0, 1.0);
                    m[(j, i)] = Complex64::new(0.0, -1.0);
                    elems.push(m);
                }
            }
        }
        Self { dim, elems }
    }

    fn build(&self, p: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (e, &w) in self.elems.iter().zip(p) {
            m += e * Complex64::new(w, 0.0);
        }
        m
    }
}

/// Fit `target ≈ markov_to_generator(H_tot, diag(bath_energies), H, setup)` over
/// `H_tot` in the commutant of `H0 ⊗ 1 + 1 ⊗ H_B` and diagonal `H`.
///
/// Compass search with random restarts. Deterministic for a fixed seed.
pub fn fit_markov_generator(
    target: &Superoperator,
    setup: &ThermalSetup,
    bath_energies: &[f64],
    opts: &SearchOptions,
) -> Result<FitReport> {
    let n = setup.dim();
    let m = bath_energies.len();
    if target.dim() != n {
        return Err(Error::invalid("target and setup differ in dimension"));
    }
    if m == 0 || m > 8 {
        return Err(Error::invalid("bath dimension must be between 1 and 8"));
    }
    let total: Vec<f64> = setup
        .h0_diag()
        .iter()
        .flat_map(|&e| bath_energies.iter().map(move |&b| e + b))
        .collect();
    let basis = CommutantBasis::new(&total, 1e-12);
    let h_b = diag_c(bath_energies);
    let nh = basis.elems.len();
    let dim = nh + n;

    let mut evaluations = 0usize;
    let mut objective = |p: &[f64]| -> f64 {
        evaluations += 1;
        let h_tot = basis.build(&p[..nh]);
        let h = diag_c(&p[nh..]);
        match markov_to_generator(&h_tot, &h_b, &h, setup) {
            Ok(g) => g.generator.superoperator().sub(target).norm(),
            Err(_) => f64::INFINITY,
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let scale = target.norm().sqrt().max(1e-3);
    let mut best = (f64::INFINITY, vec![0.0; dim]);
    for _ in 0..opts.restarts.max(1) {
        let mut p: Vec<f64> = (0..dim).map(|_| rng.random_range(-scale..scale)).collect();
        let mut f = objective(&p);
        let mut step = opts.initial_step * scale;
        let mut iters = 0;
        while step > opts.min_step && iters < opts.max_iters {
            iters += 1;
            let mut improved = false;
            for k in 0..dim {
                for sgn in [1.0, -1.0] {
                    p[k] += sgn * step;
                    let g = objective(&p);
                    if g < f {
                        f = g;
                        improved = true;
                        break;
                    }
                    p[k] -= sgn * step;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if f < best.0 {
            best = (f, p);
        }
    }
    Ok(FitReport {
        residual: best.0,
        parameters: best.1,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ladder_htot, ladder_ops, dissipator};
    use thermo_core::GibbsVector;

    #[test]
    fn recovers_qubit_ladder_generator() {
        let t = 1.5;
        let setup = ThermalSetup::new(vec![0.0, 1.0], t).unwrap();
        let d = GibbsVector::geometric((-1.0 / t).exp(), 2).unwrap();
        let (p, m) = ladder_ops(&d, 2).unwrap();
        let target = dissipator(&[p, m]).unwrap().scale_re(-1.0);
        assert!(ladder_htot(2, 1.0, t).is_ok());
        let opts = SearchOptions {
            restarts: 4,
            ..Default::default()
        };
        let rep = fit_markov_generator(&target, &setup, &[0.0, 1.0], &opts).unwrap();
        assert!(rep.residual < 1e-5, "residual {}", rep.residual);
    }
}
