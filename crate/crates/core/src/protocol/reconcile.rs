use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::gf2::{CosetLeaderTable, Gf2Error, Gf2Vector, LinearCode};

/// The reconciliation code C1: a short block code repeated over the raw key,
/// decoded block by block with an exact coset-leader table.
#[derive(Clone, Debug)]
pub struct ReconciliationCode {
    block: LinearCode,
    blocks: usize,
    table: CosetLeaderTable,
}

impl ReconciliationCode {
    pub fn new(block: LinearCode, blocks: usize) -> Result<Self, Gf2Error> {
        let table = CosetLeaderTable::new(block.parity_check())?;
        Ok(Self {
            block,
            blocks,
            table,
        })
    }

    pub fn block(&self) -> &LinearCode {
        &self.block
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Total length `n`.
    pub fn len(&self) -> usize {
        self.block.len() * self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.block.dim() * self.blocks
    }

    /// The full code as a single (block-diagonal) linear code.
    pub fn full_code(&self) -> LinearCode {
        self.block.tiled(self.blocks)
    }

    fn split<'a>(&self, v: &'a Gf2Vector) -> impl Iterator<Item = Gf2Vector> + 'a {
        let bl = self.block.len();
        (0..self.blocks).map(move |b| v.slice(b * bl, (b + 1) * bl))
    }

    fn check(&self, v: &Gf2Vector) -> Result<(), ProtocolError> {
        if v.len() != self.len() {
            return Err(ProtocolError::LengthMismatch {
                expected: self.len(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `H1 · v`, the block syndromes concatenated.
    pub fn syndrome(&self, v: &Gf2Vector) -> Result<Gf2Vector, ProtocolError> {
        self.check(v)?;
        let parts = self
            .split(v)
            .map(|b| self.block.syndrome(&b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Gf2Vector::concat(&parts))
    }

    /// Minimum-weight vector with the given syndrome, block by block.
    pub fn coset_leader(&self, syndrome: &Gf2Vector) -> Result<Gf2Vector, ProtocolError> {
        let r = self.table.redundancy();
        if syndrome.len() != r * self.blocks {
            return Err(ProtocolError::LengthMismatch {
                expected: r * self.blocks,
                found: syndrome.len(),
            });
        }
        let parts = (0..self.blocks)
            .map(|b| self.table.decode(&syndrome.slice(b * r, (b + 1) * r)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Gf2Vector::concat(&parts))
    }

    /// Number of blocks on which `a` and `b` agree exactly.
    pub fn matching_blocks(&self, a: &Gf2Vector, b: &Gf2Vector) -> usize {
        self.split(a).zip(self.split(b)).filter(|(x, y)| x == y).count()
    }
}

/// Outcome of syndrome-based error correction on one raw key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reconciliation {
    /// Alice's announced `H1 · a`.
    pub syndrome: Gf2Vector,
    /// Bob's `b − f` (after the optional negation).
    pub corrected_bob: Gf2Vector,
    /// Omniscient check that `corrected_bob == a`.
    pub decode_success: bool,
    pub flip_applied: bool,
    pub blocks: usize,
    pub blocks_decoded: usize,
}

/// Alice announces `H1·a`; Bob negates his bits if `q_hat > 0.5`, decodes the
/// syndrome difference to `f`, and replaces `b` with `b − f`.
pub fn reconcile(
    alice: &Gf2Vector,
    bob: &Gf2Vector,
    q_hat: f64,
    code: &ReconciliationCode,
) -> Result<Reconciliation, ProtocolError> {
    code.check(alice)?;
    code.check(bob)?;
    let flip_applied = q_hat > 0.5;
    let bob = if flip_applied { bob.negated() } else { bob.clone() };
    let syndrome = code.syndrome(alice)?;
    let difference = &code.syndrome(&bob)? + &syndrome;
    let f = code.coset_leader(&difference)?;
    let corrected_bob = &bob + &f;
    Ok(Reconciliation {
        decode_success: corrected_bob == *alice,
        blocks: code.blocks(),
        blocks_decoded: code.matching_blocks(alice, &corrected_bob),
        syndrome,
        corrected_bob,
        flip_applied,
    })
}
