use rand::Rng;

use super::{AbortReason, ProtocolError};
use crate::bounds::binary_entropy;
use crate::gf2::{coset_label, sample_subcode, Gf2Vector, LinearCode};

/// `min(dim C1, ⌈n · h(q)⌉)`; rounding up discards the extra fraction of a bit.
pub fn subcode_dimension(c1: &LinearCode, q_hat_other: f64) -> usize {
    let n = c1.len() as f64;
    let want = (n * binary_entropy(q_hat_other.clamp(0.0, 1.0))).ceil();
    (want.max(0.0) as usize).min(c1.dim())
}

/// Picks a random `C2 ⊆ C1` sized by the phase-error estimate. Aborts with
/// `RateNonpositive` when nothing would be left for the key.
pub fn choose_subcode<R: Rng + ?Sized>(
    c1: &LinearCode,
    q_hat_other: f64,
    rng: &mut R,
) -> Result<LinearCode, ProtocolError> {
    let dim2 = subcode_dimension(c1, q_hat_other);
    if c1.dim() <= dim2 {
        return Err(ProtocolError::Abort(AbortReason::RateNonpositive));
    }
    Ok(sample_subcode(c1, dim2, rng)?)
}

/// Final key: the label of the coset `a + C2`, for `a ∈ C1`.
pub fn privacy_amplify<R: Rng + ?Sized>(
    a: &Gf2Vector,
    c1: &LinearCode,
    q_hat_other: f64,
    rng: &mut R,
) -> Result<(LinearCode, Gf2Vector), ProtocolError> {
    let c2 = choose_subcode(c1, q_hat_other, rng)?;
    let key = coset_label(a, c1, &c2)?;
    Ok((c2, key))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn zero_phase_error_keeps_everything() {
        let c1 = LinearCode::hamming_7_4();
        let a = c1.codewords().nth(9).unwrap();
        let (c2, key) = privacy_amplify(&a, &c1, 0.0, &mut stream(1)).unwrap();
        assert_eq!(c2.dim(), 0);
        assert_eq!(key.len(), 4);
        // With C2 = {0} the label is the full coordinate vector of a.
        assert_eq!(c1.encode(&key).unwrap(), a);
    }

    #[test]
    fn half_phase_error_aborts() {
        let c1 = LinearCode::hamming_7_4();
        assert_eq!(subcode_dimension(&c1, 0.5), 4);
        assert!(matches!(
            privacy_amplify(&Gf2Vector::zeros(7), &c1, 0.5, &mut stream(2)),
            Err(ProtocolError::Abort(AbortReason::RateNonpositive))
        ));
    }

    #[test]
    fn hamming_at_five_percent() {
        // 7 · h(0.05) = 2.0049 → 3.
        let c1 = LinearCode::hamming_7_4();
        assert_eq!(subcode_dimension(&c1, 0.05), 3);
        let a = c1.codewords().nth(3).unwrap();
        let (c2, key) = privacy_amplify(&a, &c1, 0.05, &mut stream(3)).unwrap();
        assert_eq!(c2.dim(), 3);
        assert_eq!(key.len(), 1);
        assert!(c2.is_subcode_of(&c1));
    }

    #[test]
    fn rejects_vectors_outside_c1() {
        let c1 = LinearCode::hamming_7_4();
        assert!(matches!(
            privacy_amplify(&Gf2Vector::unit(7, 2), &c1, 0.0, &mut stream(4)),
            Err(ProtocolError::Code(_))
        ));
    }
}
