use nalgebra::SymmetricEigen;
use serde::Serialize;
use thermo_core::{ad, commutator, is_hermitian, CMat, Complex64, Error, Result, Superoperator};

use crate::ThermalSetup;

const EIG_FLOOR: f64 = 1e-9;
const CHECK_TOL: f64 = 1e-9;

fn min_eig(m: &CMat) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.min()
}

/// Smallest eigenvalue of `P C P`, `C` the normalised Choi matrix of `l` and
/// `P = 1 − |Ω⟩⟨Ω|` with `Ω = Σ_i |ii⟩/√n`.
pub fn compressed_choi_min_eig(l: &Superoperator) -> Result<(f64, f64)> {
    if !l.is_hermiticity_preserving(CHECK_TOL) {
        return Err(Error::invalid("map does not preserve Hermiticity"));
    }
    let n = l.dim();
    let c = l.choi();
    let mut p = CMat::identity(n * n, n * n);
    let w = Complex64::new(1.0 / n as f64, 0.0);
    for i in 0..n {
        for j in 0..n {
            p[(i * n + i, j * n + j)] -= w;
        }
    }
    let pcp = &p * &c * &p;
    Ok((min_eig(&pcp), c.norm()))
}

/// Conditional complete positivity: the compressed Choi matrix is PSD within
/// an eigenvalue floor of `−1e-9·‖C‖`.
pub fn cond_cp(l: &Superoperator) -> Result<bool> {
    let (lo, norm) = compressed_choi_min_eig(l)?;
    Ok(lo >= -EIG_FLOOR * norm - 1e-15)
}

/// Trace preserving with PSD Choi matrix.
pub fn is_cptp(phi: &Superoperator, tol: f64) -> bool {
    if !phi.is_trace_preserving(tol) || !phi.is_hermiticity_preserving(tol) {
        return false;
    }
    let c = phi.choi();
    min_eig(&c) >= -EIG_FLOOR * c.norm() - 1e-15
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntoReport {
    pub hermiticity_preserving: bool,
    pub trace_annihilating: bool,
    pub cond_cp: bool,
    pub gibbs_fixed: bool,
    pub covariant: bool,
    /// `‖[L, ad_{H0}]‖`.
    pub covariance_norm: f64,
    /// `‖L(ρ_Gibbs)‖`.
    pub gibbs_residual: f64,
}

impl EntoReport {
    pub fn all(&self) -> bool {
        self.hermiticity_preserving
            && self.trace_annihilating
            && self.cond_cp
            && self.gibbs_fixed
            && self.covariant
    }
}

/// Membership checks for the generator wedge of Gibbs-preserving covariant maps.
pub fn is_ento_generator(l: &Superoperator, setup: &ThermalSetup) -> Result<EntoReport> {
    if l.dim() != setup.dim() {
        return Err(Error::invalid("generator and setup differ in dimension"));
    }
    let scale = l.norm().max(1.0);
    let hermiticity_preserving = l.is_hermiticity_preserving(CHECK_TOL);
    let trace_annihilating = l.is_trace_annihilating(CHECK_TOL * scale);
    let cond_cp = hermiticity_preserving && cond_cp(l)?;
    let gibbs_residual = l.apply(&setup.gibbs_state()).norm();
    let ad_h0 = ad(&setup.h0())?;
    let covariance_norm = l.commutator(&ad_h0).norm();
    Ok(EntoReport {
        hermiticity_preserving,
        trace_annihilating,
        cond_cp,
        gibbs_fixed: gibbs_residual <= CHECK_TOL * scale,
        covariant: covariance_norm <= CHECK_TOL * scale * ad_h0.norm().max(1.0),
        covariance_norm,
        gibbs_residual,
    })
}

/// Whether `−i·ad_H` lies in the edge: `H` Hermitian and `[H, H0] = 0`.
pub fn is_edge_generator(h: &CMat, setup: &ThermalSetup, tol: f64) -> bool {
    h.nrows() == setup.dim()
        && is_hermitian(h, tol)
        && commutator(h, &setup.h0()).norm() <= tol * h.norm().max(1.0)
}
