//! Single-qubit states, gates, channels and measurement.

mod channel;
mod json;
mod mat2;
mod state;

pub use channel::{
    apply_channel, random_channel, random_density, random_pure_state, sample_measurement,
    sample_outcome, Channel,
};
pub use json::{ChannelSpec, MatrixSpec, MixtureTerm, UnitarySpec};
pub use mat2::Mat2;
pub use state::{born_probability, Basis, DensityOperator, NamedUnitary, PureState};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("matrix has negative eigenvalue {0}")]
    NotPositive(f64),
    #[error("probabilities must be nonnegative and sum to 1")]
    BadProbabilities,
    #[error("mixture term {0} is not unitary")]
    NotUnitary(usize),
    #[error("Kraus operators do not sum to the identity")]
    NotTracePreserving,
    #[error("unknown unitary name {0:?}")]
    UnknownUnitary(String),
    #[error("invalid channel JSON: {0}")]
    Json(String),
}
