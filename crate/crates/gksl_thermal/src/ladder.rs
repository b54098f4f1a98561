use thermo_core::{CMat, Complex64, Error, GibbsVector, Result};

/// `θ_k = arccos((1 + d_{k+1}/d_k)^{−1/2})`, one angle per neighbouring pair.
pub fn thermal_angles(d: &GibbsVector) -> Vec<f64> {
    d.entries()
        .windows(2)
        .map(|w| (1.0 + w[1] / w[0]).powf(-0.5).acos())
        .collect()
}

/// Temperature-deformed raising and lowering operators `(σ₊^d, σ₋^d)`:
/// `σ₊^d = Σ_k √(k(n−k)) cos θ_k |k⟩⟨k+1|`, `σ₋^d = Σ_k √(k(n−k)) sin θ_k |k+1⟩⟨k|`.
pub fn ladder_ops(d: &GibbsVector, n: usize) -> Result<(CMat, CMat)> {
    if n < 2 || d.len() != n {
        return Err(Error::invalid(format!(
            "need n ≥ 2 and a Gibbs vector of length n (n = {n}, len = {})",
            d.len()
        )));
    }
    let theta = thermal_angles(d);
    let mut plus = CMat::zeros(n, n);
    let mut minus = CMat::zeros(n, n);
    for k in 1..n {
        let w = ((k * (n - k)) as f64).sqrt();
        let th = theta[k - 1];
        plus[(k - 1, k)] = Complex64::new(w * th.cos(), 0.0);
        minus[(k, k - 1)] = Complex64::new(w * th.sin(), 0.0);
    }
    Ok((plus, minus))
}

/// Two-level bath coupling `Σ_j √(j(n−j)/(1+e^{−ΔE/T})) (|j⟩⟨j+1| ⊗ |2⟩⟨1| + h.c.)`.
///
/// It commutes with `H0 ⊗ 1 + 1 ⊗ H_B` for `H0 = diag(0, …, n−1)·ΔE` and
/// `H_B = diag(0, 1)·ΔE`.
pub fn ladder_htot(n: usize, delta_e: f64, temperature: f64) -> Result<CMat> {
    if n < 2 {
        return Err(Error::invalid("need n ≥ 2"));
    }
    if !(delta_e > 0.0 && delta_e.is_finite()) {
        return Err(Error::invalid("energy gap must be positive"));
    }
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::invalid("temperature must be positive"));
    }
    let a = (-delta_e / temperature).exp();
    let mut h = CMat::zeros(2 * n, 2 * n);
    for j in 1..n {
        let w = Complex64::new(((j * (n - j)) as f64 / (1.0 + a)).sqrt(), 0.0);
        // system |j⟩⟨j+1| (0-based j−1, j), bath |2⟩⟨1| (0-based 1, 0)
        let (r, c) = ((j - 1) * 2 + 1, j * 2);
        h[(r, c)] = w;
        h[(c, r)] = w;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn uniform_angles_are_quarter_pi() {
        let d = GibbsVector::geometric(1.0, 5).unwrap();
        assert!(thermal_angles(&d).iter().all(|t| (t - FRAC_PI_4).abs() < 1e-15));
    }

    #[test]
    fn equidistant_angles_are_constant() {
        let a: f64 = 0.3;
        let d = GibbsVector::geometric(a, 4).unwrap();
        let want = (1.0 / (1.0 + a).sqrt()).acos();
        assert!(thermal_angles(&d).iter().all(|t| (t - want).abs() < 1e-14));
    }

    #[test]
    fn quarter_ratio_angle() {
        let d = GibbsVector::geometric(0.25, 3).unwrap();
        for t in thermal_angles(&d) {
            assert!((t - 0.463_647_609).abs() < 1e-8);
        }
    }

    #[test]
    fn qubit_infinite_temperature_ops() {
        let d = GibbsVector::geometric(1.0, 2).unwrap();
        let (p, m) = ladder_ops(&d, 2).unwrap();
        let s = 0.5f64.sqrt();
        assert!((p[(0, 1)].re - s).abs() < 1e-15);
        assert!((m[(1, 0)].re - s).abs() < 1e-15);
        assert_eq!(p[(1, 0)].norm() + m[(0, 1)].norm(), 0.0);
    }

    #[test]
    fn low_temperature_limit() {
        let d = GibbsVector::geometric(1e-12, 3).unwrap();
        let (p, m) = ladder_ops(&d, 3).unwrap();
        assert!((p[(0, 1)].re - 2f64.sqrt()).abs() < 1e-6);
        assert!((p[(1, 2)].re - 2f64.sqrt()).abs() < 1e-6);
        assert!(m.norm() < 1e-5);
    }

    #[test]
    fn two_level_htot() {
        let h = ladder_htot(2, 1.0, 2.0).unwrap();
        let w = (1.0 / (1.0 + (-0.5f64).exp())).sqrt();
        assert!((h[(1, 2)].re - w).abs() < 1e-15 && (h[(2, 1)].re - w).abs() < 1e-15);
        assert!((h.norm() - w * 2f64.sqrt()).abs() < 1e-15);
    }
}
