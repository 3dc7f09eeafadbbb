use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quantum::{sample_outcome, Basis, Channel, PureState};

/// One qubit as prepared by Alice and measured by Bob.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransmissionRecord {
    pub index: usize,
    pub alice_basis: Basis,
    pub alice_bit: u8,
    pub bob_basis: Basis,
    /// 0 for `|0⟩` / `|+⟩`, 1 for `|1⟩` / `|−⟩`.
    pub bob_outcome: u8,
}

impl TransmissionRecord {
    pub fn alice_state(&self) -> PureState<f64> {
        PureState::basis_vector(self.alice_basis, self.alice_bit)
    }
}

/// Outcome probabilities of the four BB84 states in both bases, cached so a
/// long transmission evaluates the channel only eight times.
#[derive(Clone, Copy, Debug)]
pub struct ChannelResponse {
    // [sent basis][sent bit][measured basis] -> P(outcome 0)
    p_zero: [[[f64; 2]; 2]; 2],
}

fn basis_slot(b: Basis) -> usize {
    match b {
        Basis::Z => 0,
        Basis::X => 1,
    }
}

impl ChannelResponse {
    pub fn new(ch: &Channel<f64>) -> Self {
        let mut p_zero = [[[0.0; 2]; 2]; 2];
        for sent in Basis::BOTH {
            for bit in 0..2u8 {
                let state = PureState::basis_vector(sent, bit);
                for meas in Basis::BOTH {
                    p_zero[basis_slot(sent)][bit as usize][basis_slot(meas)] =
                        ch.outcome_zero_probability(&state, meas);
                }
            }
        }
        Self { p_zero }
    }

    pub fn outcome_zero_probability(&self, sent: Basis, bit: u8, measured: Basis) -> f64 {
        self.p_zero[basis_slot(sent)][bit as usize & 1][basis_slot(measured)]
    }
}

fn random_basis<R: Rng + ?Sized>(rng: &mut R) -> Basis {
    if rng.random::<bool>() {
        Basis::X
    } else {
        Basis::Z
    }
}

/// Alice sends `count` uniformly random BB84 states through `ch`; Bob measures
/// each in a uniformly random basis.
pub fn transmit<R: Rng + ?Sized>(
    ch: &Channel<f64>,
    count: usize,
    rng: &mut R,
) -> Vec<TransmissionRecord> {
    let response = ChannelResponse::new(ch);
    (0..count)
        .map(|index| {
            let alice_basis = random_basis(rng);
            let alice_bit = rng.random::<bool>() as u8;
            let bob_basis = random_basis(rng);
            let p0 = response.outcome_zero_probability(alice_basis, alice_bit, bob_basis);
            TransmissionRecord {
                index,
                alice_basis,
                alice_bit,
                bob_basis,
                bob_outcome: sample_outcome(p0, rng),
            }
        })
        .collect()
}

/// Alice's and Bob's bit for one sifted qubit, with its transmission index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitPair {
    pub index: usize,
    pub alice: u8,
    pub bob: u8,
}

impl BitPair {
    pub fn differs(&self) -> bool {
        self.alice != self.bob
    }
}

/// Records split by announced bases. Nothing is discarded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiftedBatches {
    pub matched_z: Vec<BitPair>,
    pub matched_x: Vec<BitPair>,
    /// Sent in Z, measured in X: `a_i = 0` for `|0⟩`, `b_i = 0` for `|+⟩`.
    pub mismatched_ab: Vec<BitPair>,
    /// Sent in X, measured in Z: `α_i = 0` for `|+⟩`, `β_i = 0` for `|0⟩`.
    pub mismatched_alphabeta: Vec<BitPair>,
}

impl SiftedBatches {
    pub fn total(&self) -> usize {
        self.matched_z.len()
            + self.matched_x.len()
            + self.mismatched_ab.len()
            + self.mismatched_alphabeta.len()
    }
}

pub fn sift(records: &[TransmissionRecord]) -> SiftedBatches {
    let mut out = SiftedBatches::default();
    for r in records {
        let pair = BitPair {
            index: r.index,
            alice: r.alice_bit,
            bob: r.bob_outcome,
        };
        let bucket = match (r.alice_basis, r.bob_basis) {
            (Basis::Z, Basis::Z) => &mut out.matched_z,
            (Basis::X, Basis::X) => &mut out.matched_x,
            (Basis::Z, Basis::X) => &mut out.mismatched_ab,
            (Basis::X, Basis::Z) => &mut out.mismatched_alphabeta,
        };
        bucket.push(pair);
    }
    out
}
