//! GKSL generators for thermal dynamics.
//!
//! A generator is `L = −i·ad_H − Γ` with dissipator
//! `Γ(ρ) = Σ_k ½(V_k†V_k ρ + ρ V_k†V_k) − V_k ρ V_k†`.

use nalgebra::SymmetricEigen;
use serde::Serialize;
use thermo_core::{
    ad, commutator, diag_c, gibbs_vector, is_hermitian, kron, partial_trace_wrt, CMat, Complex64,
    Error, GibbsVector, Result, Superoperator, ALG_TOL,
};

mod checks;
mod ladder;
pub mod search;

pub use checks::{
    compressed_choi_min_eig, cond_cp, is_cptp, is_edge_generator, is_ento_generator, EntoReport,
};
pub use ladder::{ladder_htot, ladder_ops, thermal_angles};

/// Relative tolerance on the commutator preconditions.
pub const COMMUTATOR_TOL: f64 = 1e-10;

/// Dissipator superoperator `Γ` of the given Lindblad operators.
pub fn dissipator(vs: &[CMat]) -> Result<Superoperator> {
    let n = vs
        .first()
        .map(|v| v.nrows())
        .ok_or_else(|| Error::invalid("no Lindblad operators"))?;
    let id = CMat::identity(n, n);
    let mut m = CMat::zeros(n * n, n * n);
    for v in vs {
        if v.nrows() != n || v.ncols() != n {
            return Err(Error::invalid("Lindblad operators differ in dimension"));
        }
        let vv = v.adjoint() * v;
        m += (kron(&id, &vv) + kron(&vv.transpose(), &id)) * Complex64::new(0.5, 0.0);
        m -= kron(&v.conjugate(), v);
    }
    Superoperator::from_matrix(m)
}

/// `−i·ad_H − Γ` with `H` Hermitian.
#[derive(Debug, Clone)]
pub struct GKSLGenerator {
    hamiltonian: CMat,
    lindblad_ops: Vec<CMat>,
    superop: Superoperator,
}

impl GKSLGenerator {
    pub fn new(hamiltonian: CMat, lindblad_ops: Vec<CMat>) -> Result<Self> {
        let n = hamiltonian.nrows();
        let mut superop = ad(&hamiltonian)?.scale(Complex64::new(0.0, -1.0));
        if !lindblad_ops.is_empty() {
            if lindblad_ops[0].nrows() != n {
                return Err(Error::invalid("Hamiltonian and Lindblad operators differ in size"));
            }
            superop = superop.sub(&dissipator(&lindblad_ops)?);
        }
        Ok(Self {
            hamiltonian,
            lindblad_ops,
            superop,
        })
    }

    pub fn superoperator(&self) -> &Superoperator {
        &self.superop
    }

    pub fn hamiltonian(&self) -> &CMat {
        &self.hamiltonian
    }

    pub fn lindblad_ops(&self) -> &[CMat] {
        &self.lindblad_ops
    }
}

/// Diagonal system Hamiltonian at a temperature.
#[derive(Debug, Clone, Serialize)]
pub struct ThermalSetup {
    h0_diag: Vec<f64>,
    /// `f64::INFINITY` allowed.
    temperature: f64,
    #[serde(skip)]
    gibbs: GibbsVector,
}

impl ThermalSetup {
    pub fn new(h0_diag: Vec<f64>, temperature: f64) -> Result<Self> {
        let gibbs = gibbs_vector(&h0_diag, temperature)?;
        Ok(Self {
            h0_diag,
            temperature,
            gibbs,
        })
    }

    pub fn dim(&self) -> usize {
        self.h0_diag.len()
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn h0_diag(&self) -> &[f64] {
        &self.h0_diag
    }

    pub fn h0(&self) -> CMat {
        diag_c(&self.h0_diag)
    }

    pub fn gibbs(&self) -> &GibbsVector {
        &self.gibbs
    }

    /// `e^{−H0/T} / tr`.
    pub fn gibbs_state(&self) -> CMat {
        diag_c(self.gibbs.entries())
    }
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending and ties
/// broken by the index at which the solver returned them.
pub fn sorted_eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(h.clone());
    let mut idx: Vec<usize> = (0..h.nrows()).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(h.nrows(), h.nrows(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

fn outer(a: &CMat, b: &CMat, i: usize, j: usize) -> CMat {
    // |a_i⟩⟨b_j| from columns
    a.column(i) * b.column(j).adjoint()
}

/// First and second order terms of `t ↦ tr_B(e^{−itH}(· ⊗ ω)e^{itH})` at `t = 0`,
/// so the channel is `id + t·order1 + (t²/2)·order2 + O(t³)`.
#[derive(Debug, Clone)]
pub struct TaylorTerms {
    pub order1: Superoperator,
    pub order2: Superoperator,
}

/// `order1 = −i·ad_{tr_ω H}`, `order2 = −Σ_{jk} Γ_{√(2 r_k) ⟨g_j|H|g_k⟩}` where
/// `ω = Σ r_k |g_k⟩⟨g_k|`.
pub fn stinespring_taylor(h: &CMat, omega: &CMat) -> Result<TaylorTerms> {
    let m = omega.nrows();
    if !is_hermitian(omega, ALG_TOL) {
        return Err(Error::invalid("ω is not Hermitian"));
    }
    if (omega.trace().re - 1.0).abs() > ALG_TOL {
        return Err(Error::invalid("ω does not have unit trace"));
    }
    if !is_hermitian(h, ALG_TOL) {
        return Err(Error::invalid("H is not Hermitian"));
    }
    if m == 0 || !h.nrows().is_multiple_of(m) {
        return Err(Error::invalid("H does not factor through ω"));
    }
    let (r, g) = sorted_eigh(omega);
    if r.iter().any(|&v| v < -ALG_TOL) {
        return Err(Error::invalid("ω is not positive semidefinite"));
    }
    let h_eff = partial_trace_wrt(omega, h)?;
    let h_eff = (&h_eff + h_eff.adjoint()) * Complex64::new(0.5, 0.0);
    let order1 = ad(&h_eff)?.scale(Complex64::new(0.0, -1.0));
    let mut ops = Vec::new();
    for (k, &rk) in r.iter().enumerate() {
        if rk <= 0.0 {
            continue;
        }
        for j in 0..m {
            let block = partial_trace_wrt(&outer(&g, &g, k, j), h)?;
            ops.push(block * Complex64::new((2.0 * rk).sqrt(), 0.0));
        }
    }
    let n = h.nrows() / m;
    let order2 = if ops.is_empty() {
        Superoperator::zeros(n)
    } else {
        dissipator(&ops)?.scale_re(-1.0)
    };
    Ok(TaylorTerms { order1, order2 })
}

/// Output of [`markov_to_generator`].
#[derive(Debug, Clone)]
pub struct MarkovGenerator {
    pub generator: GKSLGenerator,
    /// `v[p][q] = e^{−(E'_p − E'_0)/(2T)} ⟨g_q|H_tot|g_p⟩`.
    pub v: Vec<Vec<CMat>>,
    /// Bath energies, ascending.
    pub bath_energies: Vec<f64>,
}

fn check_commutes(a: &CMat, b: &CMat, what: &str) -> Result<()> {
    let norm = commutator(a, b).norm();
    if norm > COMMUTATOR_TOL * (a.norm() * b.norm()).max(1.0) {
        return Err(Error::Precondition {
            what: what.to_string(),
            norm,
        });
    }
    Ok(())
}

/// Generator `−i·ad_H − Σ_{pq} Γ_{V_pq}` of a Markovian thermal semigroup from an
/// energy-preserving coupling `H_tot` of system and bath.
///
/// Bath energies are measured from the bath ground level, so the weights are
/// `e^{−(E'_p − E'_0)/(2T)}`. Shifting `H_B` by a constant therefore leaves the
/// generator unchanged.
pub fn markov_to_generator(
    h_tot: &CMat,
    h_b: &CMat,
    h: &CMat,
    setup: &ThermalSetup,
) -> Result<MarkovGenerator> {
    let n = setup.dim();
    let m = h_b.nrows();
    if h.nrows() != n || h_tot.nrows() != n * m {
        return Err(Error::invalid(format!(
            "sizes: H is {}, H_B is {m}, H_tot is {}, system is {n}",
            h.nrows(),
            h_tot.nrows()
        )));
    }
    for (mat, name) in [(h_tot, "H_tot"), (h_b, "H_B"), (h, "H")] {
        if !is_hermitian(mat, ALG_TOL) {
            return Err(Error::invalid(format!("{name} is not Hermitian")));
        }
    }
    let h0 = setup.h0();
    let total = kron(&h0, &CMat::identity(m, m)) + kron(&CMat::identity(n, n), h_b);
    check_commutes(h_tot, &total, "[H_tot, H0⊗1 + 1⊗H_B]")?;
    check_commutes(h, &h0, "[H, H0]")?;
    let (energies, g) = sorted_eigh(h_b);
    let t = setup.temperature();
    let weights: Vec<f64> = energies
        .iter()
        .map(|e| {
            if t.is_infinite() {
                1.0
            } else {
                (-(e - energies[0]) / (2.0 * t)).exp()
            }
        })
        .collect();
    let mut v = vec![Vec::with_capacity(m); m];
    let mut flat = Vec::with_capacity(m * m);
    for p in 0..m {
        for q in 0..m {
            let op = partial_trace_wrt(&outer(&g, &g, p, q), h_tot)? * Complex64::new(weights[p], 0.0);
            flat.push(op.clone());
            v[p].push(op);
        }
    }
    let generator = GKSLGenerator::new(h.clone(), flat)?;
    Ok(MarkovGenerator {
        generator,
        v,
        bath_energies: energies,
    })
}
