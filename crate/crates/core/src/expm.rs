//! Matrix exponential.
//!
//! General inputs go through nalgebra's Padé scaling-and-squaring. Normal inputs
//! are split into commuting Hermitian and anti-Hermitian parts, each exponentiated
//! through an eigendecomposition.

use nalgebra::SymmetricEigen;

use crate::{c, CMat, Complex64, Error, RMat, Result};

const NORMAL_TOL: f64 = 1e-13;

fn check_finite<'a>(mut it: impl Iterator<Item = &'a f64>) -> Result<()> {
    if it.any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    Ok(())
}

fn herm_exp(h: &CMat, phase: Complex64) -> CMat {
    // exp(phase * h) for Hermitian h
    let eig = SymmetricEigen::new(h.clone());
    let f = eig.eigenvalues.map(|l| (phase * l).exp());
    let u = &eig.eigenvectors;
    let mut scaled = u.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= f[j];
    }
    scaled * u.adjoint()
}

pub fn expm(m: &CMat) -> Result<CMat> {
    if !m.is_square() {
        return Err(Error::invalid("expm needs a square matrix"));
    }
    check_finite(m.iter().flat_map(|z| [&z.re, &z.im]))?;
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let scale = m.norm().max(1e-300);
    let adj = m.adjoint();
    if (m * &adj - &adj * m).norm() <= NORMAL_TOL * scale * scale {
        let herm = (m + &adj) * c(0.5, 0.0);
        let anti = (m - &adj) * c(0.5, 0.0);
        let tiny = NORMAL_TOL * scale;
        if anti.norm() <= tiny {
            return Ok(herm_exp(&herm, c(1.0, 0.0)));
        }
        // anti = i K with K Hermitian
        let k = &anti * c(0.0, -1.0);
        let rot = herm_exp(&k, c(0.0, 1.0));
        if herm.norm() <= tiny {
            return Ok(rot);
        }
        return Ok(herm_exp(&herm, c(1.0, 0.0)) * rot);
    }
    Ok(m.exp())
}

pub fn expm_real(m: &RMat) -> Result<RMat> {
    if !m.is_square() {
        return Err(Error::invalid("expm needs a square matrix"));
    }
    check_finite(m.iter())?;
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    if (m - m.transpose()).norm() <= NORMAL_TOL * m.norm().max(1e-300) {
        let sym = (m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let f = eig.eigenvalues.map(f64::exp);
        let u = &eig.eigenvectors;
        let mut scaled = u.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f[j];
        }
        return Ok(scaled * u.transpose());
    }
    Ok(m.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag_c;

    #[test]
    fn zero_gives_identity() {
        let e = expm(&CMat::zeros(3, 3)).unwrap();
        assert!((e - CMat::identity(3, 3)).norm() < 1e-15);
        let r = expm_real(&RMat::zeros(4, 4)).unwrap();
        assert!((r - RMat::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_exponentiates_entrywise() {
        let l = [-3.0, 0.5, 2.0];
        let e = expm(&diag_c(&l)).unwrap();
        for (i, v) in l.iter().enumerate() {
            assert!((e[(i, i)].re - v.exp()).abs() < 1e-13 * v.exp());
        }
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, -t], [t, 0]]) is a rotation by t
        let t = 0.7;
        let m = RMat::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm_real(&m).unwrap();
        let want = RMat::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!((e - want).norm() < 1e-14);
    }

    #[test]
    fn non_normal_jordan_block() {
        let m = RMat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let e = expm_real(&m).unwrap();
        let want = RMat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]) * std::f64::consts::E;
        assert!((e - want).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = RMat::zeros(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(expm_real(&m).is_err());
    }
}
