//! JSON forms: complex matrices as `{"re": [[…]], "im": [[…]]}`, real ones as row arrays.

use serde::{Deserialize, Serialize};

use crate::{CMat, Complex64, Error, RMat, Result, Superoperator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl From<&CMat> for ComplexMatrixJson {
    fn from(m: &CMat) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: Some(rows(|z| z.im)),
        }
    }
}

impl TryFrom<&ComplexMatrixJson> for CMat {
    type Error = Error;
    fn try_from(j: &ComplexMatrixJson) -> Result<CMat> {
        let re = rmat_from_rows(&j.re)?;
        let im = match &j.im {
            Some(im) => rmat_from_rows(im)?,
            None => RMat::zeros(re.nrows(), re.ncols()),
        };
        if im.shape() != re.shape() {
            return Err(Error::invalid("re and im parts differ in shape"));
        }
        Ok(CMat::from_fn(re.nrows(), re.ncols(), |i, k| {
            Complex64::new(re[(i, k)], im[(i, k)])
        }))
    }
}

pub fn cmat_to_json(m: &CMat) -> serde_json::Value {
    serde_json::to_value(ComplexMatrixJson::from(m)).expect("plain numbers serialise")
}

pub fn cmat_from_json(v: &serde_json::Value) -> Result<CMat> {
    let j: ComplexMatrixJson =
        serde_json::from_value(v.clone()).map_err(|e| Error::invalid(e.to_string()))?;
    CMat::try_from(&j)
}

pub fn rmat_to_rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn rmat_from_rows(rows: &[Vec<f64>]) -> Result<RMat> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::invalid("ragged matrix rows"));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite matrix entry"));
    }
    Ok(RMat::from_fn(nr, nc, |i, j| rows[i][j]))
}

impl Serialize for Superoperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexMatrixJson::from(self.matrix()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Superoperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ComplexMatrixJson::deserialize(d)?;
        let m = CMat::try_from(&j).map_err(serde::de::Error::custom)?;
        Superoperator::from_matrix(m).map_err(serde::de::Error::custom)
    }
}
