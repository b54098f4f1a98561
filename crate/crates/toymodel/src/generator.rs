use gksl_thermal::{dissipator, ladder_ops};
use serde::Serialize;
use thermo_core::{expm_real, Error, GibbsVector, RMat, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GeneratorSource {
    /// Population block of the ladder dissipator at Boltzmann ratio `a`.
    Ladder { a: f64 },
    Custom,
}

/// Spectral data of `S = D^{−1/2} B D^{1/2}` when `B` satisfies detailed balance.
#[derive(Debug, Clone)]
struct Spectral {
    sqrt_d: Vec<f64>,
    eigvals: Vec<f64>,
    eigvecs: RMat,
}

/// `B` with `−B` a rate matrix and unique stationary vector `d > 0`.
#[derive(Debug, Clone)]
pub struct ToyGenerator {
    b: RMat,
    d: Vec<f64>,
    source: GeneratorSource,
    spectral: Option<Spectral>,
}

impl ToyGenerator {
    /// `B` from the ladder operators at `d = (1, a, a², …)/Z`.
    pub fn ladder(a: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::invalid("a must lie in (0, 1]"));
        }
        if n < 2 {
            return Err(Error::invalid("need n ≥ 2"));
        }
        let d = GibbsVector::geometric(a, n)?;
        let (p, m) = ladder_ops(&d, n)?;
        let b = dissipator(&[p, m])?.population_block().map(|z| z.re);
        let mut g = Self::custom(b)?;
        g.source = GeneratorSource::Ladder { a };
        Ok(g)
    }

    /// Validates the rate-matrix structure and finds the stationary vector.
    pub fn custom(b: RMat) -> Result<Self> {
        let n = b.nrows();
        if n < 2 || b.ncols() != n || b.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("B must be a finite square matrix, n ≥ 2"));
        }
        let scale = b.amax().max(1e-300);
        for j in 0..n {
            for i in 0..n {
                if i != j && b[(i, j)] > 1e-12 * scale {
                    return Err(Error::invalid(format!("−B has a negative off-diagonal at ({i}, {j})")));
                }
            }
            let s: f64 = b.column(j).sum();
            if s.abs() > 1e-12 * scale * n as f64 {
                return Err(Error::invalid(format!("column {j} of B does not sum to zero")));
            }
        }
        let svd = b.clone().svd(false, true);
        let sv = &svd.singular_values;
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| sv[i].partial_cmp(&sv[j]).unwrap());
        if sv[idx[1]] <= 1e-10 * scale {
            return Err(Error::invalid("stationary vector is not unique"));
        }
        let v_t = svd.v_t.expect("requested");
        let v: Vec<f64> = v_t.row(idx[0]).iter().cloned().collect();
        let s: f64 = v.iter().sum();
        let d: Vec<f64> = v.iter().map(|x| x / s).collect();
        if d.iter().any(|&x| x <= 0.0) {
            return Err(Error::invalid("stationary vector is not strictly positive"));
        }
        let spectral = spectral_form(&b, &d);
        Ok(Self {
            b,
            d,
            source: GeneratorSource::Custom,
            spectral,
        })
    }

    pub fn b(&self) -> &RMat {
        &self.b
    }

    pub fn fixed_point(&self) -> &[f64] {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn source(&self) -> GeneratorSource {
        self.source
    }

    /// `e^{−tB}`.
    pub fn flow(&self, t: f64) -> RMat {
        match &self.spectral {
            Some(s) => {
                let n = self.dim();
                let mut e = s.eigvecs.clone();
                for k in 0..n {
                    let w = (-t * s.eigvals[k]).exp();
                    e.column_mut(k).scale_mut(w);
                }
                let mut m = e * s.eigvecs.transpose();
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] *= s.sqrt_d[i] / s.sqrt_d[j];
                    }
                }
                m
            }
            None => expm_real(&(&self.b * -t)).expect("finite generator"),
        }
    }

    /// `−B x`.
    pub fn velocity(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| -(0..n).map(|j| self.b[(i, j)] * x[j]).sum::<f64>())
            .collect()
    }
}

fn spectral_form(b: &RMat, d: &[f64]) -> Option<Spectral> {
    let n = d.len();
    let sqrt_d: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
    let s = RMat::from_fn(n, n, |i, j| b[(i, j)] * sqrt_d[j] / sqrt_d[i]);
    if (&s - s.transpose()).amax() > 1e-12 * b.amax() {
        return None;
    }
    let sym = (&s + s.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    Some(Spectral {
        sqrt_d,
        eigvals: eig.eigenvalues.iter().cloned().collect(),
        eigvecs: eig.eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unital_qutrit() {
        let g = ToyGenerator::ladder(1.0, 3).unwrap();
        let want = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.b()[(i, j)] - want[i][j]).abs() < 1e-14);
            }
        }
        assert!(g.fixed_point().iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-14));
    }

    #[test]
    fn quarter_ratio_qutrit() {
        let g = ToyGenerator::ladder(0.25, 3).unwrap();
        let want = [[-0.25, 1.0, 0.0], [0.25, -1.25, 1.0], [0.0, 0.25, -1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((-g.b()[(i, j)] - 1.6 * want[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn spectral_flow_matches_expm() {
        let g = ToyGenerator::ladder(0.3, 4).unwrap();
        assert!(g.spectral.is_some());
        for t in [0.0, 0.1, 1.0, 7.0] {
            let e = expm_real(&(g.b() * -t)).unwrap();
            assert!((g.flow(t) - e).amax() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_rate_matrices() {
        assert!(ToyGenerator::ladder(0.0, 3).is_err());
        let b = RMat::from_row_slice(2, 2, &[1.0, 1.0, -1.0, -1.0]);
        assert!(ToyGenerator::custom(b).is_err());
        let b = RMat::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(ToyGenerator::custom(b).is_err());
    }

    #[test]
    fn non_reversible_generator_uses_expm() {
        // cyclic rates 0→1→2→0
        let b = RMat::from_row_slice(3, 3, &[1.0, 0.0, -1.0, -1.0, 1.0, 0.0, 0.0, -1.0, 1.0]);
        let g = ToyGenerator::custom(b).unwrap();
        assert!(g.spectral.is_none());
        let f = g.flow(2.0);
        for j in 0..3 {
            assert!((f.column(j).sum() - 1.0).abs() < 1e-13);
        }
    }
}
