//! Linear algebra over GF(2): vectors, matrices, linear codes, coset
//! labeling and minimum-weight syndrome decoding.

mod code;
mod decode;
mod matrix;
mod vector;

pub use code::{coset_label, sample_subcode, CosetLabeler, LinearCode};
pub use decode::{coset_leader_decode, CosetLeaderTable, DEFAULT_TABLE_BITS};
pub use matrix::{Echelon, Gf2Matrix};
pub use vector::Gf2Vector;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix rows are dependent: {rows} rows but rank {rank}")]
    RankDeficient { rows: usize, rank: usize },
    #[error("requested dimension {requested} exceeds {max}")]
    DimensionOutOfRange { requested: usize, max: usize },
    #[error("vector is not a codeword")]
    NotInCode,
    #[error("subcode is not contained in the outer code")]
    NotNested,
    #[error(
        "coset-leader table for {redundancy} syndrome bits over length {block_len} exceeds the {limit}-bit capacity"
    )]
    Capacity {
        redundancy: usize,
        block_len: usize,
        limit: usize,
    },
    #[error("syndrome is not in the image of the parity-check matrix")]
    UnreachableSyndrome,
}
