use qubit_mto::QubitThermalParams;
use serde::Deserialize;
use thermo_core::json::{rmat_from_rows, ComplexMatrixJson};
use thermo_core::{CMat, Error, Result};
use toymodel::{Schedule, ToyGenerator};

/// Input document; every section is optional and unknown keys are rejected.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub thermal: Option<ThermalSection>,
    pub toy: Option<ToySection>,
    pub qubit: Option<QubitSection>,
    pub schedule: Option<Schedule>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSection {
    #[serde(rename = "H0_diag")]
    pub h0_diag: Vec<f64>,
    #[serde(rename = "T")]
    pub temperature: f64,
    /// Hamiltonian part of a generator to check; zero when absent.
    #[serde(rename = "H", default)]
    pub h: Option<ComplexMatrixJson>,
    /// Lindblad operators; the ladder pair when absent.
    #[serde(rename = "V", default)]
    pub v: Option<Vec<ComplexMatrixJson>>,
    /// System-bath Hamiltonian, system index major; needs `H_B`.
    #[serde(rename = "H_tot", default)]
    pub h_tot: Option<ComplexMatrixJson>,
    #[serde(rename = "H_B", default)]
    pub h_b: Option<ComplexMatrixJson>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToySection {
    pub a: Option<f64>,
    pub n: Option<usize>,
    #[serde(rename = "B")]
    pub b: Option<Vec<Vec<f64>>>,
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitSection {
    /// Maps in application order.
    pub maps: Vec<QubitThermalParams>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("problem file: {e}")))
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("reading {path}: {e}")))?;
        Self::parse(&text).map_err(|e| match e {
            Error::InvalidInput(m) => Error::invalid(format!("{path}: {m}")),
            other => other,
        })
    }
}

impl ToySection {
    pub fn generator(&self) -> Result<ToyGenerator> {
        match (self.a, &self.b) {
            (Some(a), None) => ToyGenerator::ladder(a, self.n.unwrap_or(3)),
            (None, Some(rows)) => ToyGenerator::custom(rmat_from_rows(rows)?),
            _ => Err(Error::invalid("toy section needs exactly one of \"a\" and \"B\"")),
        }
    }
}

pub fn cmat(j: &ComplexMatrixJson) -> Result<CMat> {
    CMat::try_from(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_located() {
        let err = ProblemFile::parse(r#"{"toy": {"a": 0.3, "bogus": 1}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus") && msg.contains("line 1"), "{msg}");
        assert!(ProblemFile::parse(r#"{"extra": {}}"#).is_err());
    }

    #[test]
    fn sections_parse() {
        let p = ProblemFile::parse(
            r#"{"thermal": {"H0_diag": [0, 1], "T": 2},
                "toy": {"a": 0.3},
                "qubit": {"maps": [{"mu": 0.2, "eps": 0.5, "c_re": 0.7}]},
                "schedule": [{"perm": [1, 0, 2], "dt": 0.1}]}"#,
        )
        .unwrap();
        assert_eq!(p.toy.unwrap().generator().unwrap().dim(), 3);
        assert_eq!(p.qubit.unwrap().maps[0].mu, 0.2);
        assert_eq!(p.schedule.unwrap().steps.len(), 1);
        let both = ToySection { a: Some(0.3), n: None, b: Some(vec![]), x0: None };
        assert!(both.generator().is_err());
    }
}
