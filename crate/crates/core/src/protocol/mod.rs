//! The mismatched-basis BB84 pipeline.
//!
//! Alice sends random BB84 states, Bob measures in random bases, and after the
//! basis announcement the qubits fall into four buckets. Key is distilled from
//! the mismatched buckets: a disclosed sample gives the bit-error estimate of
//! each, Alice's syndrome lets Bob correct his remaining bits (negating them
//! first when the estimate exceeds one half), and the coset of a random
//! subcode `C2 ⊆ C1` becomes the final key. The matched buckets can be run
//! through the same machinery as standard BB84.

mod amplify;
mod estimate;
mod reconcile;
mod session;
mod sifting;

pub use amplify::{choose_subcode, privacy_amplify, subcode_dimension};
pub use estimate::{estimate, EstimationResult};
pub use reconcile::{reconcile, Reconciliation, ReconciliationCode};
pub use session::{
    run_session, CodeSpec, CodeSummary, KeyExtraction, MatchedResult, SessionConfig,
    SessionResult,
};
pub use sifting::{sift, transmit, BitPair, ChannelResponse, SiftedBatches, TransmissionRecord};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::Gf2Error;

/// Why a session produced no key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AbortReason {
    RateNonpositive,
    EstimateAtHalf,
    DecodeFailure,
    InsufficientBits,
}

impl AbortReason {
    pub fn as_str(self) -> &'static str {
        match self {
            AbortReason::RateNonpositive => "RateNonpositive",
            AbortReason::EstimateAtHalf => "EstimateAtHalf",
            AbortReason::DecodeFailure => "DecodeFailure",
            AbortReason::InsufficientBits => "InsufficientBits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("protocol aborted: {}", .0.as_str())]
    Abort(AbortReason),
    #[error("need {needed} bits, only {available} available")]
    InsufficientBits { needed: usize, available: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Code(#[from] Gf2Error),
}
