//! The JSON arrangement file.
//!
//! ```json
//! {
//!   "variables": ["x", "y"],
//!   "hyperplanes": [["1", "0"], ["0", "1"], [1, 1]],
//!   "labels": ["x", "y", "x+y"],
//!   "weights": ["1/3", "1/3", "1/3"],
//!   "factorization": [[1, 2], [3]]
//! }
//! ```
//!
//! Coefficients and weights are rational strings; plain JSON integers are
//! accepted for coefficients. Factorization blocks use one-based indices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, Rational};
use crate::arrangement::Arrangement;
use crate::bsideals::Factorization;
use crate::error::{Error, Result};
use crate::weights::WeightVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Integer(i64),
    Text(String),
}

impl Scalar {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Scalar::Integer(v) => Ok(Rational::from_integer((*v).into())),
            Scalar::Text(s) => parse_rational(s),
        }
    }
}

impl From<&Rational> for Scalar {
    fn from(r: &Rational) -> Self {
        Scalar::Text(r.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub variables: Vec<String>,
    pub hyperplanes: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<Vec<Vec<usize>>>,
}

impl ArrangementFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("arrangement files always serialize")
    }

    /// Validated arrangement with canonical forms.
    pub fn arrangement(&self) -> Result<Arrangement> {
        let rows = self
            .hyperplanes
            .iter()
            .map(|row| {
                row.iter()
                    .map(Scalar::to_rational)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(Some(self.variables.clone()), rows, self.labels.clone())
    }

    /// Weights from the file, checked against the hyperplane count.
    pub fn weights(&self) -> Result<Option<WeightVector>> {
        self.weights
            .as_ref()
            .map(|w| {
                let w = WeightVector::parse(w)?;
                if w.len() != self.hyperplanes.len() {
                    return Err(Error::WeightCount {
                        expected: self.hyperplanes.len(),
                        found: w.len(),
                    });
                }
                Ok(w)
            })
            .transpose()
    }

    pub fn factorization(&self) -> Result<Option<Factorization>> {
        self.factorization
            .as_ref()
            .map(|b| Factorization::from_one_based(self.hyperplanes.len(), b))
            .transpose()
    }

    pub fn from_arrangement(arr: &Arrangement) -> Self {
        ArrangementFile {
            variables: arr.variables().to_vec(),
            hyperplanes: arr
                .forms()
                .iter()
                .map(|l| l.coeffs().iter().map(Scalar::from).collect())
                .collect(),
            labels: Some(arr.labels().to_vec()),
            weights: None,
            factorization: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_LINES: &str = r#"{
        "variables": ["x", "y"],
        "hyperplanes": [["1", "0"], [0, 1], ["1/2", "1/2"]],
        "weights": ["1/3", "1/3", "-2/3"],
        "factorization": [[1, 2], [3]]
    }"#;

    #[test]
    fn parses_mixed_scalars() {
        let f = ArrangementFile::from_json(THREE_LINES).unwrap();
        let a = f.arrangement().unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.labels()[2], "x + y");
        assert_eq!(
            f.weights().unwrap().unwrap().total(),
            &Rational::from_integer(0.into())
        );
        assert_eq!(
            f.factorization().unwrap().unwrap().blocks(),
            &[vec![0, 1], vec![2]]
        );
    }

    #[test]
    fn rejects_bad_input() {
        let short = r#"{"variables": ["x", "y"], "hyperplanes": [["1"]]}"#;
        let f = ArrangementFile::from_json(short).unwrap();
        assert!(matches!(f.arrangement(), Err(Error::WrongLength { .. })));
        let w = r#"{"variables": ["x"], "hyperplanes": [["1"]], "weights": ["1", "2"]}"#;
        let f = ArrangementFile::from_json(w).unwrap();
        assert!(matches!(
            f.weights(),
            Err(Error::WeightCount {
                expected: 1,
                found: 2
            })
        ));
        assert!(ArrangementFile::from_json(r#"{"variables": []}"#).is_err());
        assert!(
            ArrangementFile::from_json(r#"{"variables": [], "hyperplanes": [], "extra": 1}"#)
                .is_err()
        );
    }

    #[test]
    fn roundtrip_through_arrangement() {
        let a = ArrangementFile::from_json(THREE_LINES)
            .unwrap()
            .arrangement()
            .unwrap();
        let f = ArrangementFile::from_arrangement(&a);
        let b = ArrangementFile::from_json(&f.to_json())
            .unwrap()
            .arrangement()
            .unwrap();
        assert_eq!(a, b);
    }
}
