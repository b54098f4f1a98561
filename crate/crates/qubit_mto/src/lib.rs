//! Thermal operations on a single qubit with `H0 = diag(−½, ½)`.
//!
//! Every such map is fixed by `(μ, ε, c)`: `μ` is the population moved from the
//! excited level to the ground level, `ε = e^{−1/T}` and `c` multiplies the
//! coherence `ρ₁₂`. In column-stacked form the superoperator is
//!
//! ```text
//! [ 1−εμ  0  0   μ  ]
//! [  0    c̄  0   0  ]
//! [  0    0  c   0  ]
//! [  εμ   0  0  1−μ ]
//! ```

use gksl_thermal::{markov_to_generator, MarkovGenerator, ThermalSetup};
use serde::{Deserialize, Serialize};
use thermo_core::{diag_c, CMat, Complex64, Error, Result, Superoperator};

/// Absolute tolerance on the region inequalities.
pub const BOUNDARY_TOL: f64 = 1e-9;

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    mu: f64,
    eps: f64,
    c_re: f64,
    #[serde(default)]
    c_im: f64,
}

/// `(μ, ε, c)` of a covariant Gibbs-preserving qubit map. No region check is made
/// on construction; use [`classify`] or [`superoperator_of`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawParams", from = "RawParams")]
pub struct QubitThermalParams {
    pub mu: f64,
    pub eps: f64,
    pub c: Complex64,
}

impl From<QubitThermalParams> for RawParams {
    fn from(p: QubitThermalParams) -> Self {
        RawParams {
            mu: p.mu,
            eps: p.eps,
            c_re: p.c.re,
            c_im: p.c.im,
        }
    }
}

impl From<RawParams> for QubitThermalParams {
    fn from(r: RawParams) -> Self {
        QubitThermalParams::new(r.mu, r.eps, cz(r.c_re, r.c_im))
    }
}

impl QubitThermalParams {
    pub fn new(mu: f64, eps: f64, c: Complex64) -> Self {
        Self { mu, eps, c }
    }

    pub fn identity(eps: f64) -> Self {
        Self::new(0.0, eps, cz(1.0, 0.0))
    }

    /// Replaces every state by the Gibbs state.
    pub fn thermal_reset(eps: f64) -> Self {
        Self::new(1.0 / (1.0 + eps), eps, cz(0.0, 0.0))
    }

    pub fn beta_swap(eps: f64) -> Self {
        Self::new(1.0, eps, cz(0.0, 0.0))
    }

    /// `(1−εμ)(1−μ) − |c|²`, nonnegative inside the thermal region.
    pub fn thermal_residual(&self) -> f64 {
        (1.0 - self.eps * self.mu) * (1.0 - self.mu) - self.c.norm_sqr()
    }

    /// `(1/(1+ε) − μ, 1 − μ(1+ε) − |c|²)`, both nonnegative inside the Markovian region.
    pub fn markov_residuals(&self) -> (f64, f64) {
        let slack = (1.0 - self.mu) - self.mu * self.eps;
        (slack / (1.0 + self.eps), slack - self.c.norm_sqr())
    }

    /// Action on the populations `(ρ₁₁, ρ₂₂)`.
    pub fn population_matrix(&self) -> [[f64; 2]; 2] {
        let (m, e) = (self.mu, self.eps);
        [[1.0 - e * m, m], [e * m, 1.0 - m]]
    }

    /// `(x, ω)` with `c = e^{−x} e^{iω}`; `ω` in `(−π, π]`.
    pub fn decay_and_phase(&self) -> (f64, f64) {
        (-self.c.norm().ln(), self.c.arg())
    }

    fn in_ranges(&self) -> bool {
        (-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&self.mu)
            && (-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&self.eps)
            && self.c.re.is_finite()
            && self.c.im.is_finite()
    }
}

/// Superoperator of a thermal parameter triple.
pub fn superoperator_of(p: &QubitThermalParams) -> Result<Superoperator> {
    if !p.in_ranges() || p.thermal_residual() < -BOUNDARY_TOL {
        return Err(Error::invalid(format!(
            "not a thermal qubit map: μ = {}, ε = {}, |c| = {}",
            p.mu,
            p.eps,
            p.c.norm()
        )));
    }
    Ok(superoperator_unchecked(p))
}

/// Same matrix without the region check, e.g. for composites across temperatures.
pub fn superoperator_unchecked(p: &QubitThermalParams) -> Superoperator {
    let (m, e) = (p.mu, p.eps);
    let mut s = CMat::zeros(4, 4);
    s[(0, 0)] = cz(1.0 - e * m, 0.0);
    s[(0, 3)] = cz(m, 0.0);
    s[(3, 0)] = cz(e * m, 0.0);
    s[(3, 3)] = cz(1.0 - m, 0.0);
    s[(1, 1)] = p.c.conj();
    s[(2, 2)] = p.c;
    Superoperator::from_matrix(s).expect("square")
}

/// Rates `(u, x, ω)` of a covariant Gibbs-preserving qubit semigroup at `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupParams {
    pub u: f64,
    pub x: f64,
    pub omega: f64,
    pub eps: f64,
}

impl SemigroupParams {
    /// Checks `u ≥ 0`, `ε ∈ [0, 1]` and `2x ≥ u(1+ε)`.
    pub fn new(u: f64, x: f64, omega: f64, eps: f64) -> Result<Self> {
        let sp = Self { u, x, omega, eps };
        if !(u >= 0.0 && (0.0..=1.0).contains(&eps) && x.is_finite() && omega.is_finite()) {
            return Err(Error::invalid("need u ≥ 0, ε ∈ [0, 1] and finite x, ω"));
        }
        if 2.0 * x < u * (1.0 + eps) - BOUNDARY_TOL {
            return Err(Error::invalid(format!(
                "2x = {} is below u(1+ε) = {}",
                2.0 * x,
                u * (1.0 + eps)
            )));
        }
        Ok(sp)
    }
}

/// Generator with `ρ₁₁' = u(ρ₂₂ − ερ₁₁)` and `ρ₁₂' = (−x + iω)ρ₁₂`.
pub fn generator(sp: &SemigroupParams) -> Superoperator {
    let (u, e) = (sp.u, sp.eps);
    let mut l = CMat::zeros(4, 4);
    l[(0, 0)] = cz(-e * u, 0.0);
    l[(0, 3)] = cz(u, 0.0);
    l[(3, 0)] = cz(e * u, 0.0);
    l[(3, 3)] = cz(-u, 0.0);
    l[(1, 1)] = cz(-sp.x, -sp.omega);
    l[(2, 2)] = cz(-sp.x, sp.omega);
    Superoperator::from_matrix(l).expect("square")
}

/// `e^{tL}` in closed form: `μ_t = (1 − e^{−tu(1+ε)})/(1+ε)`, `c_t = e^{−xt} e^{iωt}`.
pub fn semigroup_element(sp: &SemigroupParams, t: f64) -> Result<QubitThermalParams> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::invalid("time must be nonnegative"));
    }
    let k = 1.0 + sp.eps;
    let mu = if t.is_infinite() {
        1.0 / k
    } else {
        -(-t * sp.u * k).exp_m1() / k
    };
    let c = if t.is_infinite() {
        cz(0.0, 0.0)
    } else {
        Complex64::from_polar((-sp.x * t).exp(), sp.omega * t)
    };
    Ok(QubitThermalParams::new(mu, sp.eps, c))
}

/// Coupling `H_tot` on qubit ⊗ qubit bath that realises [`generator`] through
/// [`gksl_thermal::markov_to_generator`] with `H_B = H0`.
pub fn worked_example_htot(u: f64, x: f64, eps: f64) -> Result<CMat> {
    let sp = SemigroupParams::new(u, x, 0.0, eps)?;
    let s = (2.0 * sp.x - sp.u * (1.0 + sp.eps)).max(0.0).sqrt() / 2.0;
    let mut h = CMat::zeros(4, 4);
    h[(0, 0)] = cz(s, 0.0);
    h[(2, 2)] = cz(-s, 0.0);
    h[(1, 2)] = cz(u.sqrt(), 0.0);
    h[(2, 1)] = cz(u.sqrt(), 0.0);
    Ok(h)
}

/// Temperature with `e^{−1/T} = ε`.
pub fn temperature_of(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::invalid("ε must lie in (0, 1]"));
    }
    Ok(if eps == 1.0 { f64::INFINITY } else { -1.0 / eps.ln() })
}

/// Semigroup generator built from [`worked_example_htot`] and the rotation
/// `H = diag(−ω, ω)/2`.
pub fn worked_example_generator(sp: &SemigroupParams) -> Result<MarkovGenerator> {
    let setup = ThermalSetup::new(vec![-0.5, 0.5], temperature_of(sp.eps)?)?;
    let h_tot = worked_example_htot(sp.u, sp.x, sp.eps)?;
    markov_to_generator(
        &h_tot,
        &diag_c(&[-0.5, 0.5]),
        &diag_c(&[-sp.omega / 2.0, sp.omega / 2.0]),
        &setup,
    )
}

/// Result of [`compose`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Composite {
    pub params: QubitThermalParams,
    /// `μ₃ = 0`, so `ε₃` is not determined and was copied from the second factor.
    pub degenerate: bool,
}

/// Parameters of `Φ₁ ∘ Φ₂` (first apply `p2`, then `p1`), temperatures may differ.
pub fn compose(p1: &QubitThermalParams, p2: &QubitThermalParams) -> Composite {
    let (m1, e1, m2, e2) = (p1.mu, p1.eps, p2.mu, p2.eps);
    let mu = m1 + m2 - m1 * m2 * (1.0 + e1);
    let eps_mu = e1 * m1 + e2 * m2 - m1 * m2 * (1.0 + e1) * e2;
    let degenerate = mu.abs() <= 1e-15;
    let eps = if degenerate { e2 } else { eps_mu / mu };
    Composite {
        params: QubitThermalParams::new(mu, eps, p1.c * p2.c),
        degenerate,
    }
}

/// `Φ ↦ (⟨e₁|Φ(|e₂⟩⟨e₂|)|e₁⟩, ⟨e₁|Φ(|e₁⟩⟨e₂|)|e₂⟩)`.
pub fn psi_map(phi: &Superoperator) -> Result<(f64, Complex64)> {
    if phi.dim() != 2 {
        return Err(Error::invalid("expected a qubit superoperator"));
    }
    let m = phi.matrix();
    Ok((m[(0, 3)].re, m[(2, 2)]))
}

/// `(μ₁, c₁) ∘ (μ₂, c₂) = (μ₁ + μ₂ − μ₁μ₂(1+ε), c₁c₂)`.
pub fn circ(eps: f64, a: (f64, Complex64), b: (f64, Complex64)) -> (f64, Complex64) {
    (a.0 + b.0 - a.0 * b.0 * (1.0 + eps), a.1 * b.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    NonThermal,
    ThermalNonMarkovian,
    Markovian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub region: Region,
    /// Some deciding inequality holds with equality up to [`BOUNDARY_TOL`].
    pub boundary: bool,
}

pub fn classify(p: &QubitThermalParams) -> Classification {
    let tol = BOUNDARY_TOL;
    if !p.in_ranges() {
        return Classification {
            region: Region::NonThermal,
            boundary: false,
        };
    }
    let th = p.thermal_residual();
    let (m1, m2) = p.markov_residuals();
    let near = |r: f64| r.abs() <= tol;
    if th < -tol {
        return Classification {
            region: Region::NonThermal,
            boundary: false,
        };
    }
    if m1 >= -tol && m2 >= -tol {
        Classification {
            region: Region::Markovian,
            boundary: near(th) || near(m1) || near(m2),
        }
    } else {
        Classification {
            region: Region::ThermalNonMarkovian,
            boundary: near(th) || near(m1) || near(m2),
        }
    }
}

/// Largest `|c|` of a Markovian map with the given `μ`, `None` past `1/(1+ε)`.
pub fn markov_radius(mu: f64, eps: f64) -> Option<f64> {
    let r2 = 1.0 - mu * (1.0 + eps);
    (mu >= 0.0 && r2 >= -BOUNDARY_TOL).then(|| r2.max(0.0).sqrt())
}

/// Largest `|c|` of a thermal map with the given `μ ∈ [0, 1]`.
pub fn thermal_radius(mu: f64, eps: f64) -> f64 {
    ((1.0 - eps * mu) * (1.0 - mu)).max(0.0).sqrt()
}

/// Time `t` with `μ_t = μ` for unit rate, `−ln(1 − μ(1+ε))/(1+ε)`, on the principal
/// branch. Past `μ = 1/(1+ε)` the imaginary part is `−π/(1+ε)`; its conjugate is
/// the other branch.
pub fn complex_time(mu: f64, eps: f64) -> Complex64 {
    let k = 1.0 + eps;
    -cz(1.0 - mu * k, 0.0).ln() / k
}

/// Points `(μ, Re c, Im c)` on the boundary surfaces of both regions.
#[derive(Debug, Clone, Serialize)]
pub struct RegionSample {
    pub eps: f64,
    pub markovian: Vec<[f64; 3]>,
    pub thermal: Vec<[f64; 3]>,
}

pub fn mto_region_sample(eps: f64, resolution: usize) -> Result<RegionSample> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("ε must lie in (0, 1)"));
    }
    let res = resolution.max(2);
    let mut markovian = Vec::with_capacity(res * res);
    let mut thermal = Vec::with_capacity(res * res);
    let mu_star = 1.0 / (1.0 + eps);
    for i in 0..res {
        let s = i as f64 / (res - 1) as f64;
        for k in 0..res {
            let phi = std::f64::consts::TAU * k as f64 / res as f64;
            let (cs, sn) = (phi.cos(), phi.sin());
            let mu = s * mu_star;
            let r = markov_radius(mu, eps).unwrap_or(0.0);
            markovian.push([mu, r * cs, r * sn]);
            let r = thermal_radius(s, eps);
            thermal.push([s, r * cs, r * sn]);
        }
    }
    Ok(RegionSample {
        eps,
        markovian,
        thermal,
    })
}

fn dist_to_markov_region(mu: f64, r: f64, eps: f64, resolution: usize) -> f64 {
    let mu_star = 1.0 / (1.0 + eps);
    if mu <= mu_star && markov_radius(mu, eps).is_some_and(|m| r <= m) {
        return 0.0;
    }
    let curve = |s: f64| (s, markov_radius(s, eps).unwrap_or(0.0));
    let d2 = |s: f64| {
        let (a, b) = curve(s);
        (a - mu).powi(2) + (b - r).powi(2)
    };
    let n = resolution.max(16);
    let mut best = (f64::INFINITY, 0usize);
    for k in 0..=n {
        let v = d2(mu_star * k as f64 / n as f64);
        if v < best.0 {
            best = (v, k);
        }
    }
    // golden section on the bracketing cell pair
    let h = mu_star / n as f64;
    let (mut lo, mut hi) = (
        (best.1 as f64 - 1.0).max(0.0) * h,
        (best.1 as f64 + 1.0).min(n as f64) * h,
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if d2(a) < d2(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    best.0.min(d2(0.5 * (lo + hi))).sqrt()
}

/// Largest distance, in `(μ, |c|)`, from a thermal map to the Markovian region.
pub fn hausdorff_gap(eps: f64, resolution: usize) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("ε must lie in (0, 1)"));
    }
    let n = resolution.max(16);
    // the farthest points lie on the outer thermal boundary
    Ok((0..=n)
        .map(|k| {
            let mu = k as f64 / n as f64;
            dist_to_markov_region(mu, thermal_radius(mu, eps), eps, n)
        })
        .fold(0.0, f64::max))
}
