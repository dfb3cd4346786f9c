//! JSON-facing isotropy descriptions.

use serde::{Deserialize, Serialize};

use super::{FormSpec, IsotropySpec};
use crate::error::{Error, Result};
use crate::rational::{self, QVec, Q};
use crate::rootsys::{parse_simple_root_label, RootSystem};

/// A rational written either as a JSON integer or as a string such as
/// `"-3/2"` or `"0.25"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Int(i64),
    Text(String),
}

impl RationalInput {
    pub fn value(&self) -> Result<Q> {
        match self {
            RationalInput::Int(n) => Ok(rational::q(*n)),
            RationalInput::Text(s) => rational::parse_q(s),
        }
    }
}

impl From<i64> for RationalInput {
    fn from(n: i64) -> Self {
        RationalInput::Int(n)
    }
}

fn vector(xs: &[RationalInput]) -> Result<QVec> {
    xs.iter().map(RationalInput::value).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IsotropyInput {
    /// Union of the walls `Ker α`, `α ∈ θ`, labels like `"alpha2"`.
    WallUnion { theta: Vec<String> },
    /// `W`-orbit of `Ker φ₀`; exactly one of the three fields is given.
    Hyperplane {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_coeffs: Option<Vec<RationalInput>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        root_coeffs: Option<Vec<RationalInput>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coords: Option<Vec<RationalInput>>,
    },
    /// `W`-orbit of the span of `basis` (ambient coordinates).
    Subspace { basis: Vec<Vec<RationalInput>> },
}

impl IsotropyInput {
    pub fn resolve(&self, sys: &RootSystem) -> Result<IsotropySpec> {
        match self {
            IsotropyInput::WallUnion { theta } => {
                let idx = theta.iter().map(|l| parse_simple_root_label(l, sys.rank())).collect::<Result<Vec<_>>>()?;
                Ok(IsotropySpec::WallUnion(idx))
            }
            IsotropyInput::Hyperplane { omega_coeffs, root_coeffs, coords } => {
                let form = match (omega_coeffs, root_coeffs, coords) {
                    (Some(t), None, None) => FormSpec::OmegaCoeffs(vector(t)?),
                    (None, Some(c), None) => FormSpec::RootCoeffs(vector(c)?),
                    (None, None, Some(v)) => FormSpec::Coords(vector(v)?),
                    _ => {
                        return Err(Error::InvalidIsotropy(
                            "hyperplane needs exactly one of omega_coeffs, root_coeffs, coords".into(),
                        ))
                    }
                };
                Ok(IsotropySpec::Hyperplane(form))
            }
            IsotropyInput::Subspace { basis } => {
                Ok(IsotropySpec::Subspace(basis.iter().map(|v| vector(v)).collect::<Result<_>>()?))
            }
        }
    }
}
