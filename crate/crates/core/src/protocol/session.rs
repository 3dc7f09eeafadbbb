use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    choose_subcode, estimate, reconcile, sift, transmit, AbortReason, EstimationResult,
    ProtocolError, ReconciliationCode,
};
use crate::bounds::binary_entropy;
use crate::gf2::{CosetLabeler, Gf2Vector, LinearCode};
use crate::quantum::Channel;

fn default_fraction() -> f64 {
    0.5
}

fn default_block_len() -> usize {
    16
}

fn default_margin() -> f64 {
    0.05
}

/// Choice of the reconciliation code C1. Every option is a short block code
/// tiled over the undisclosed bits; `blocks: None` uses as many whole blocks
/// as fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSpec {
    /// Hamming [7,4].
    Hamming {
        #[serde(default)]
        blocks: Option<usize>,
    },
    /// Random linear block code. Its dimension is `round(block_len · rate)`
    /// when `rate` is given, else `⌊block_len · (1 − h(q̂) − margin)⌋` for the
    /// bit-error estimate `q̂`.
    Random {
        #[serde(default = "default_block_len")]
        block_len: usize,
        #[serde(default)]
        rate: Option<f64>,
        #[serde(default = "default_margin")]
        margin: f64,
        #[serde(default)]
        blocks: Option<usize>,
    },
    Repetition {
        block_len: usize,
        #[serde(default)]
        blocks: Option<usize>,
    },
}

impl Default for CodeSpec {
    fn default() -> Self {
        CodeSpec::Random {
            block_len: default_block_len(),
            rate: None,
            margin: default_margin(),
            blocks: None,
        }
    }
}

impl CodeSpec {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        let bad = |m: String| Err(ProtocolError::InvalidConfig(m));
        match self {
            CodeSpec::Hamming { blocks } | CodeSpec::Repetition { blocks, .. }
                if *blocks == Some(0) =>
            {
                bad("code.blocks must be at least 1".into())
            }
            CodeSpec::Repetition { block_len: 0, .. } => {
                bad("code.block_len must be at least 1".into())
            }
            CodeSpec::Random {
                block_len,
                rate,
                margin,
                blocks,
            } => {
                if *block_len == 0 || *block_len > 64 {
                    return bad(format!("code.block_len must lie in 1..=64, got {block_len}"));
                }
                if let Some(r) = rate {
                    if !(0.0..=1.0).contains(r) {
                        return bad(format!("code.rate must lie in [0, 1], got {r}"));
                    }
                }
                if !margin.is_finite() {
                    return bad("code.margin must be finite".into());
                }
                if *blocks == Some(0) {
                    return bad("code.blocks must be at least 1".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn block_len(&self) -> usize {
        match self {
            CodeSpec::Hamming { .. } => 7,
            CodeSpec::Random { block_len, .. } | CodeSpec::Repetition { block_len, .. } => {
                *block_len
            }
        }
    }

    fn blocks(&self) -> Option<usize> {
        match self {
            CodeSpec::Hamming { blocks }
            | CodeSpec::Random { blocks, .. }
            | CodeSpec::Repetition { blocks, .. } => *blocks,
        }
    }

    /// Builds C1 for `available` undisclosed bits and bit-error estimate `q_hat`.
    pub fn build<R: Rng + ?Sized>(
        &self,
        q_hat: f64,
        available: usize,
        rng: &mut R,
    ) -> Result<ReconciliationCode, ProtocolError> {
        let bl = self.block_len();
        let blocks = match self.blocks() {
            Some(b) => b,
            None => available / bl,
        };
        if blocks == 0 || blocks * bl > available {
            return Err(ProtocolError::InsufficientBits {
                needed: bl * blocks.max(1),
                available,
            });
        }
        let block = match self {
            CodeSpec::Hamming { .. } => LinearCode::hamming_7_4(),
            CodeSpec::Repetition { block_len, .. } => LinearCode::repetition(*block_len),
            CodeSpec::Random {
                block_len,
                rate,
                margin,
                ..
            } => {
                let n = *block_len as f64;
                let k = match rate {
                    Some(r) => (n * r).round(),
                    None => (n * (1.0 - binary_entropy(q_hat.clamp(0.0, 1.0)) - margin)).floor(),
                };
                let k = k.clamp(0.0, n) as usize;
                LinearCode::random(*block_len, k, rng)?
            }
        };
        Ok(ReconciliationCode::new(block, blocks)?)
    }
}

/// Parameters of one protocol run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    /// Qubits Alice sends.
    pub count: usize,
    /// Fraction of each bucket disclosed for error estimation.
    #[serde(default = "default_fraction")]
    pub sample_fraction: f64,
    /// Abort when an estimate is closer than this to 1/2. Defaults to
    /// `1/√(sample size)` per estimate.
    #[serde(default)]
    pub guard_band: Option<f64>,
    #[serde(default)]
    pub code: CodeSpec,
    #[serde(default)]
    pub seed: u64,
    /// Also run standard BB84 on the matched buckets.
    #[serde(default)]
    pub process_matched: bool,
    /// Also extract key from the X-sent, Z-measured bucket.
    #[serde(default)]
    pub process_alphabeta: bool,
}

impl SessionConfig {
    pub fn new(count: usize, code: CodeSpec) -> Self {
        Self {
            count,
            sample_fraction: default_fraction(),
            guard_band: None,
            code,
            seed: 0,
            process_matched: false,
            process_alphabeta: false,
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.count == 0 {
            return Err(ProtocolError::InvalidConfig("count must be at least 1".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction < 1.0) {
            return Err(ProtocolError::InvalidConfig(format!(
                "sample_fraction must lie in (0, 1), got {}",
                self.sample_fraction
            )));
        }
        if let Some(g) = self.guard_band {
            if g.is_nan() || g < 0.0 {
                return Err(ProtocolError::InvalidConfig(format!(
                    "guard_band must be nonnegative, got {g}"
                )));
            }
        }
        self.code.validate()
    }

    fn guard_band_for(&self, sample_size: usize) -> f64 {
        self.guard_band
            .unwrap_or_else(|| 1.0 / (sample_size.max(1) as f64).sqrt())
    }
}

/// Size and decoding statistics of the codes used for one key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSummary {
    /// Raw key length.
    pub n: usize,
    pub dim_c1: usize,
    pub dim_c2: usize,
    pub blocks: usize,
    pub blocks_decoded: usize,
}

/// Key extraction from one bucket: reconcile with the bit-error estimate,
/// compress with the phase-error estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyExtraction {
    #[serde(with = "nan_as_null")]
    pub q_hat_bit: f64,
    #[serde(with = "nan_as_null")]
    pub q_hat_phase: f64,
    pub flip_applied: bool,
    pub syndrome: Gf2Vector,
    pub decode_success: bool,
    pub alice_key: Option<Gf2Vector>,
    pub bob_key: Option<Gf2Vector>,
    pub abort_reason: Option<AbortReason>,
    pub code: Option<CodeSummary>,
}

impl KeyExtraction {
    fn aborted(q_hat_bit: f64, q_hat_phase: f64, reason: AbortReason) -> Self {
        Self {
            q_hat_bit,
            q_hat_phase,
            flip_applied: false,
            syndrome: Gf2Vector::zeros(0),
            decode_success: false,
            alice_key: None,
            bob_key: None,
            abort_reason: Some(reason),
            code: None,
        }
    }

    pub fn key_length(&self) -> usize {
        self.alice_key.as_ref().map_or(0, Gf2Vector::len)
    }
}

/// Standard BB84 on the matched buckets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedResult {
    #[serde(with = "nan_as_null")]
    pub p_hat_x: f64,
    #[serde(with = "nan_as_null")]
    pub p_hat_z: f64,
    /// Key from Z-sent, Z-measured qubits.
    pub z_basis: KeyExtraction,
    /// Key from X-sent, X-measured qubits.
    pub x_basis: KeyExtraction,
}

/// Transcript of one run. The top-level fields describe the key distilled
/// from the Z-sent, X-measured bucket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionResult {
    #[serde(with = "nan_as_null")]
    pub q_hat_x: f64,
    #[serde(with = "nan_as_null")]
    pub q_hat_z: f64,
    pub flip_applied: bool,
    pub syndrome: Gf2Vector,
    pub decode_success: bool,
    pub alice_key: Option<Gf2Vector>,
    pub bob_key: Option<Gf2Vector>,
    pub abort_reason: Option<AbortReason>,
    pub key_length: usize,
    pub code: Option<CodeSummary>,
    /// Key from the X-sent, Z-measured bucket, roles of the estimates swapped.
    pub alphabeta: Option<KeyExtraction>,
    pub matched: Option<MatchedResult>,
}

impl SessionResult {
    fn from_primary(q_hat_x: f64, q_hat_z: f64, ab: KeyExtraction) -> Self {
        Self {
            q_hat_x,
            q_hat_z,
            flip_applied: ab.flip_applied,
            key_length: ab.key_length(),
            syndrome: ab.syndrome,
            decode_success: ab.decode_success,
            alice_key: ab.alice_key,
            bob_key: ab.bob_key,
            abort_reason: ab.abort_reason,
            code: ab.code,
            alphabeta: None,
            matched: None,
        }
    }
}

/// Estimation outcome for one bucket, or the reason it could not be estimated.
type Estimate = Result<EstimationResult, AbortReason>;

fn estimate_bucket<R: Rng + ?Sized>(
    bucket: &[super::BitPair],
    cfg: &SessionConfig,
    rng: &mut R,
) -> Result<Estimate, ProtocolError> {
    match estimate(bucket, cfg.sample_fraction, rng) {
        Ok(e) => Ok(Ok(e)),
        Err(ProtocolError::InsufficientBits { .. }) => Ok(Err(AbortReason::InsufficientBits)),
        Err(e) => Err(e),
    }
}

fn q_of(e: &Estimate) -> f64 {
    e.as_ref().map_or(f64::NAN, |e| e.q_hat)
}

fn extract_key<R: Rng + ?Sized>(
    bit: &Estimate,
    phase: &Estimate,
    cfg: &SessionConfig,
    rng: &mut R,
) -> Result<KeyExtraction, ProtocolError> {
    let (q_bit, q_phase) = (q_of(bit), q_of(phase));
    let (bit, phase) = match (bit, phase) {
        (Ok(b), Ok(p)) => (b, p),
        _ => {
            return Ok(KeyExtraction::aborted(
                q_bit,
                q_phase,
                AbortReason::InsufficientBits,
            ))
        }
    };
    for est in [bit, phase] {
        if (est.q_hat - 0.5).abs() < cfg.guard_band_for(est.sample_size()) {
            return Ok(KeyExtraction::aborted(q_bit, q_phase, AbortReason::EstimateAtHalf));
        }
    }
    if 1.0 - binary_entropy(q_bit) - binary_entropy(q_phase) <= 0.0 {
        return Ok(KeyExtraction::aborted(q_bit, q_phase, AbortReason::RateNonpositive));
    }

    let code = match cfg.code.build(q_bit, bit.remaining_alice.len(), rng) {
        Ok(c) => c,
        Err(ProtocolError::InsufficientBits { .. }) => {
            return Ok(KeyExtraction::aborted(q_bit, q_phase, AbortReason::InsufficientBits))
        }
        Err(e) => return Err(e),
    };
    let n = code.len();
    let alice = bit.remaining_alice.slice(0, n);
    let bob = bit.remaining_bob.slice(0, n);
    let rec = reconcile(&alice, &bob, q_bit, &code)?;

    let c1 = code.full_code();
    let mut summary = CodeSummary {
        n,
        dim_c1: c1.dim(),
        dim_c2: 0,
        blocks: rec.blocks,
        blocks_decoded: rec.blocks_decoded,
    };
    let mut out = KeyExtraction {
        q_hat_bit: q_bit,
        q_hat_phase: q_phase,
        flip_applied: rec.flip_applied,
        syndrome: rec.syndrome.clone(),
        decode_success: rec.decode_success,
        alice_key: None,
        bob_key: None,
        abort_reason: None,
        code: None,
    };
    let c2 = match choose_subcode(&c1, q_phase, rng) {
        Ok(c2) => c2,
        Err(ProtocolError::Abort(reason)) => {
            out.abort_reason = Some(reason);
            out.code = Some(summary);
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    summary.dim_c2 = c2.dim();
    out.code = Some(summary);
    if !rec.decode_success {
        out.abort_reason = Some(AbortReason::DecodeFailure);
        return Ok(out);
    }
    // Shift both strings into C1 by the public coset leader of Alice's syndrome.
    let offset = code.coset_leader(&rec.syndrome)?;
    let labeler = CosetLabeler::new(&c1, &c2)?;
    out.alice_key = Some(labeler.label(&(&alice + &offset))?);
    out.bob_key = Some(labeler.label(&(&rec.corrected_bob + &offset))?);
    Ok(out)
}

/// Runs the full protocol: transmit, sift, estimate both mismatched buckets,
/// then reconcile and privacy-amplify the Z-sent/X-measured remainder.
pub fn run_session<R: Rng + ?Sized>(
    ch: &Channel<f64>,
    cfg: &SessionConfig,
    rng: &mut R,
) -> Result<SessionResult, ProtocolError> {
    cfg.validate()?;
    let records = transmit(ch, cfg.count, rng);
    let sifted = sift(&records);

    let est_x = estimate_bucket(&sifted.mismatched_ab, cfg, rng)?;
    let est_z = estimate_bucket(&sifted.mismatched_alphabeta, cfg, rng)?;
    let matched_est = if cfg.process_matched {
        Some((
            estimate_bucket(&sifted.matched_x, cfg, rng)?,
            estimate_bucket(&sifted.matched_z, cfg, rng)?,
        ))
    } else {
        None
    };

    let ab = extract_key(&est_x, &est_z, cfg, rng)?;
    let mut result = SessionResult::from_primary(q_of(&est_x), q_of(&est_z), ab);
    if cfg.process_alphabeta {
        result.alphabeta = Some(extract_key(&est_z, &est_x, cfg, rng)?);
    }
    if let Some((est_px, est_pz)) = matched_est {
        let z_basis = extract_key(&est_pz, &est_px, cfg, rng)?;
        let x_basis = extract_key(&est_px, &est_pz, cfg, rng)?;
        result.matched = Some(MatchedResult {
            p_hat_x: q_of(&est_px),
            p_hat_z: q_of(&est_pz),
            z_basis,
            x_basis,
        });
    }
    Ok(result)
}

/// Writes NaN as JSON `null` and reads `null` back as NaN.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}
