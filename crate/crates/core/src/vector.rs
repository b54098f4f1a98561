use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, ALG_TOL};

/// Point of the standard simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    entries: Vec<f64>,
    tol: f64,
}

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        Self::with_tol(entries, ALG_TOL)
    }

    /// Entries in `[-tol, 0)` are clamped to zero and the result is renormalised.
    /// Anything more negative, or a sum further than `tol` from one, is rejected.
    pub fn with_tol(mut entries: Vec<f64>, tol: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("empty probability vector"));
        }
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::invalid(format!("bad tolerance {tol}")));
        }
        for (i, v) in entries.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::invalid(format!("entry {i} is not finite")));
            }
            if *v < -tol {
                return Err(Error::invalid(format!("entry {i} = {v} is negative")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let s: f64 = entries.iter().sum();
        if (s - 1.0).abs() > tol {
            return Err(Error::invalid(format!("entries sum to {s}, not 1")));
        }
        entries.iter_mut().for_each(|v| *v /= s);
        Ok(Self { entries, tol })
    }

    /// Scale a nonnegative vector onto the simplex.
    pub fn normalized(entries: Vec<f64>) -> Result<Self> {
        let s: f64 = entries.iter().sum();
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid("cannot normalise: sum is not positive"));
        }
        Self::new(entries.into_iter().map(|v| v / s).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            entries: vec![1.0 / n as f64; n],
            tol: ALG_TOL,
        }
    }

    /// Standard basis vector `e_i`.
    pub fn vertex(n: usize, i: usize) -> Self {
        let mut entries = vec![0.0; n];
        entries[i] = 1.0;
        Self {
            entries,
            tol: ALG_TOL,
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l1_distance(&self, other: &[f64]) -> f64 {
        self.entries
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

impl Serialize for ProbVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProbVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        ProbVector::new(v).map_err(serde::de::Error::custom)
    }
}

/// Normalised Boltzmann weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsVector {
    entries: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energies: Option<Vec<f64>>,
    /// `f64::INFINITY` for the uniform vector; absent when built from raw weights.
    #[serde(skip_serializing_if = "Option::is_none")]
    temperature: Option<f64>,
}

/// `d_k ∝ exp(-E_k / T)`; `T = ∞` gives the uniform vector.
pub fn gibbs_vector(energies: &[f64], temperature: f64) -> Result<GibbsVector> {
    if energies.is_empty() {
        return Err(Error::invalid("no energies"));
    }
    if let Some(i) = energies.iter().position(|e| !e.is_finite()) {
        return Err(Error::invalid(format!("energy {i} is not finite")));
    }
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::invalid(format!("temperature {temperature} must be positive")));
    }
    let n = energies.len();
    let entries = if temperature.is_infinite() {
        vec![1.0 / n as f64; n]
    } else {
        let emin = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = energies
            .iter()
            .map(|e| (-(e - emin) / temperature).exp())
            .collect();
        let z: f64 = w.iter().sum();
        let w: Vec<f64> = w.into_iter().map(|v| v / z).collect();
        if w.iter().any(|&v| v <= 0.0) {
            return Err(Error::domain("temperature too low: Gibbs weight underflows to zero"));
        }
        w
    };
    Ok(GibbsVector {
        entries,
        energies: Some(energies.to_vec()),
        temperature: Some(temperature),
    })
}

impl GibbsVector {
    /// Normalise strictly positive weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("no weights"));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid(format!(
                "weight {i} = {} must be positive and finite",
                weights[i]
            )));
        }
        let z: f64 = weights.iter().sum();
        Ok(Self {
            entries: weights.iter().map(|w| w / z).collect(),
            energies: None,
            temperature: None,
        })
    }

    /// `(1, a, a², …)/Z` for an equidistant spectrum with unit gap, `a = exp(-1/T)`.
    pub fn geometric(a: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!("ratio a = {a} must be positive")));
        }
        if n == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let w: Vec<f64> = (0..n).map(|k| a.powi(k as i32)).collect();
        let z: f64 = w.iter().sum();
        let temperature = if a == 1.0 {
            f64::INFINITY
        } else {
            -1.0 / a.ln()
        };
        Ok(Self {
            entries: w.iter().map(|v| v / z).collect(),
            energies: Some((0..n).map(|k| k as f64).collect()),
            temperature: (temperature > 0.0).then_some(temperature),
        })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn energies(&self) -> Option<&[f64]> {
        self.energies.as_deref()
    }

    pub fn temperature(&self) -> Option<f64> {
        self.temperature
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_prob(&self) -> ProbVector {
        ProbVector {
            entries: self.entries.clone(),
            tol: ALG_TOL,
        }
    }
}

impl std::ops::Index<usize> for GibbsVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}
