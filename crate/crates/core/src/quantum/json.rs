//! JSON form of a channel:
//!
//! ```json
//! {"kind":"unitary_mixture","terms":[{"p":0.9,"u":"H"},{"p":0.1,"u":[[[1,0],[0,0]],[[0,0],[1,0]]]}]}
//! {"kind":"gamma","r_x":0.05,"r_z":0.03,"r_xz":0.02}
//! {"kind":"kraus","ops":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}
//! ```
//!
//! Matrices are row-major with each entry written as `[re, im]`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Channel, Mat2, NamedUnitary, QuantumError};

pub type MatrixSpec = [[[f64; 2]; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    UnitaryMixture { terms: Vec<MixtureTerm> },
    Gamma { r_x: f64, r_z: f64, r_xz: f64 },
    Kraus { ops: Vec<MatrixSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureTerm {
    pub p: f64,
    pub u: UnitarySpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitarySpec {
    Named(String),
    Matrix(MatrixSpec),
}

fn to_mat(spec: &MatrixSpec) -> Mat2<f64> {
    let c = |e: [f64; 2]| Complex::new(e[0], e[1]);
    Mat2::new([
        [c(spec[0][0]), c(spec[0][1])],
        [c(spec[1][0]), c(spec[1][1])],
    ])
}

fn from_mat(m: &Mat2<f64>) -> MatrixSpec {
    let e = |z: Complex<f64>| [z.re, z.im];
    [
        [e(m.m[0][0]), e(m.m[0][1])],
        [e(m.m[1][0]), e(m.m[1][1])],
    ]
}

impl UnitarySpec {
    pub fn matrix(&self) -> Result<Mat2<f64>, QuantumError> {
        match self {
            UnitarySpec::Named(name) => Ok(name.parse::<NamedUnitary>()?.matrix()),
            UnitarySpec::Matrix(m) => Ok(to_mat(m)),
        }
    }
}

impl ChannelSpec {
    pub fn named_mixture(terms: &[(f64, NamedUnitary)]) -> Self {
        ChannelSpec::UnitaryMixture {
            terms: terms
                .iter()
                .map(|&(p, u)| MixtureTerm {
                    p,
                    u: UnitarySpec::Named(u.name().to_string()),
                })
                .collect(),
        }
    }

    /// Validated channel.
    pub fn to_channel(&self) -> Result<Channel<f64>, QuantumError> {
        match self {
            ChannelSpec::UnitaryMixture { terms } => Channel::unitary_mixture(
                terms
                    .iter()
                    .map(|t| Ok((t.p, t.u.matrix()?)))
                    .collect::<Result<_, QuantumError>>()?,
            ),
            ChannelSpec::Gamma { r_x, r_z, r_xz } => Channel::gamma(*r_x, *r_z, *r_xz),
            ChannelSpec::Kraus { ops } => Channel::kraus(ops.iter().map(to_mat).collect()),
        }
    }

    /// Spec for an existing channel; unitaries are written as explicit matrices.
    pub fn from_channel(ch: &Channel<f64>) -> Self {
        match ch {
            Channel::UnitaryMixture(terms) => ChannelSpec::UnitaryMixture {
                terms: terms
                    .iter()
                    .map(|(p, u)| MixtureTerm {
                        p: *p,
                        u: UnitarySpec::Matrix(from_mat(u)),
                    })
                    .collect(),
            },
            Channel::Gamma { r_x, r_z, r_xz } => ChannelSpec::Gamma {
                r_x: *r_x,
                r_z: *r_z,
                r_xz: *r_xz,
            },
            Channel::Kraus(ops) => ChannelSpec::Kraus {
                ops: ops.iter().map(from_mat).collect(),
            },
        }
    }

    pub fn parse(json: &str) -> Result<Channel<f64>, QuantumError> {
        let spec: ChannelSpec =
            serde_json::from_str(json).map_err(|e| QuantumError::Json(e.to_string()))?;
        spec.to_channel()
    }
}
