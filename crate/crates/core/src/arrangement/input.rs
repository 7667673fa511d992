use serde::{Deserialize, Serialize};

use super::{default_vars, Multiarrangement};
use crate::error::Error;

/// JSON description of a multiarrangement, either as a defining polynomial
/// (`{"dim": 3, "vars": ["x","y","z"], "poly": "x^2y^2z(x+y+z)(x-y+z)"}`) or
/// as an explicit list (`{"hyperplanes": [{"coeffs": [1,0], "mult": 3}]}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArrangementInput {
    Poly {
        #[serde(default)]
        dim: Option<usize>,
        #[serde(default)]
        vars: Option<Vec<String>>,
        poly: String,
    },
    Explicit {
        #[serde(default)]
        dim: Option<usize>,
        hyperplanes: Vec<HyperplaneEntry>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneEntry {
    pub coeffs: Vec<i64>,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

impl ArrangementInput {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("input JSON: {}", e)))
    }

    /// Variable names in effect for this input.
    pub fn vars(&self) -> Result<Vec<String>, Error> {
        match self {
            ArrangementInput::Poly { dim, vars, .. } => match (dim, vars) {
                (Some(d), Some(v)) if v.len() != *d => {
                    Err(Error::Invalid(format!("`dim` is {} but {} variables are listed", d, v.len())))
                }
                (_, Some(v)) => Ok(v.clone()),
                (Some(d), None) => Ok(default_vars(*d)),
                (None, None) => Err(Error::Invalid("polynomial input needs `dim` or `vars`".into())),
            },
            ArrangementInput::Explicit { .. } => Ok(default_vars(self.dim()?)),
        }
    }

    fn dim(&self) -> Result<usize, Error> {
        match self {
            ArrangementInput::Poly { .. } => Ok(self.vars()?.len()),
            ArrangementInput::Explicit { dim, hyperplanes } => match (dim, hyperplanes.first()) {
                (Some(d), _) => Ok(*d),
                (None, Some(h)) => Ok(h.coeffs.len()),
                (None, None) => Err(Error::Invalid("empty hyperplane list needs `dim`".into())),
            },
        }
    }

    pub fn build(&self) -> Result<Multiarrangement, Error> {
        match self {
            ArrangementInput::Poly { poly, .. } => Multiarrangement::parse(poly, &self.vars()?),
            ArrangementInput::Explicit { hyperplanes, .. } => {
                Multiarrangement::new(self.dim()?, hyperplanes.iter().map(|h| (h.coeffs.clone(), h.mult)))
            }
        }
    }

    pub fn from_arrangement(a: &Multiarrangement) -> Self {
        ArrangementInput::Explicit {
            dim: Some(a.dim()),
            hyperplanes: a
                .hyperplanes()
                .iter()
                .map(|(f, m)| HyperplaneEntry { coeffs: f.coeffs().to_vec(), mult: *m })
                .collect(),
        }
    }
}
