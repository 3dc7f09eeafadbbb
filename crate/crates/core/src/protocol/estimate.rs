use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BitPair, ProtocolError};
use crate::gf2::Gf2Vector;

/// Disclosed sample, the error rate measured on it, and the undisclosed rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub q_hat: f64,
    /// Positions within the bucket, ascending.
    pub sample_indices: Vec<usize>,
    pub remaining_alice: Gf2Vector,
    pub remaining_bob: Gf2Vector,
}

impl EstimationResult {
    pub fn sample_size(&self) -> usize {
        self.sample_indices.len()
    }
}

/// Discloses `round(fraction · len)` uniformly chosen pairs and returns their
/// disagreement rate. The remaining pairs keep their relative order.
pub fn estimate<R: Rng + ?Sized>(
    bucket: &[BitPair],
    sample_fraction: f64,
    rng: &mut R,
) -> Result<EstimationResult, ProtocolError> {
    if !(sample_fraction > 0.0 && sample_fraction < 1.0) {
        return Err(ProtocolError::InvalidConfig(format!(
            "sample_fraction must lie in (0, 1), got {sample_fraction}"
        )));
    }
    let len = bucket.len();
    if len < 2 {
        return Err(ProtocolError::InsufficientBits {
            needed: 2,
            available: len,
        });
    }
    let size = ((sample_fraction * len as f64).round() as usize).clamp(1, len - 1);
    let mut sample_indices = index::sample(rng, len, size).into_vec();
    sample_indices.sort_unstable();

    let mut disclosed = vec![false; len];
    for &i in &sample_indices {
        disclosed[i] = true;
    }
    let errors = sample_indices.iter().filter(|&&i| bucket[i].differs()).count();
    let kept = || bucket.iter().zip(&disclosed).filter(|(_, &d)| !d).map(|(p, _)| p);
    Ok(EstimationResult {
        q_hat: errors as f64 / size as f64,
        sample_indices,
        remaining_alice: Gf2Vector::from_bits(kept().map(|p| p.alice as u64)),
        remaining_bob: Gf2Vector::from_bits(kept().map(|p| p.bob as u64)),
    })
}
