use super::{Gf2Error, Gf2Matrix, Gf2Vector};

/// Default cap on the number of syndrome bits a lookup table may index.
pub const DEFAULT_TABLE_BITS: usize = 24;

/// Exact syndrome → minimum-weight error lookup for a parity-check matrix.
///
/// Among equal-weight errors the lexicographically smallest bit sequence
/// (entry 0 compared first) wins, so the table is a deterministic function of
/// the matrix.
#[derive(Clone, Debug)]
pub struct CosetLeaderTable {
    n: usize,
    redundancy: usize,
    leaders: Vec<Option<u64>>,
}

impl CosetLeaderTable {
    pub fn new(h: &Gf2Matrix) -> Result<Self, Gf2Error> {
        Self::with_limit(h, DEFAULT_TABLE_BITS)
    }

    pub fn with_limit(h: &Gf2Matrix, max_bits: usize) -> Result<Self, Gf2Error> {
        let n = h.ncols();
        let redundancy = h.nrows();
        if redundancy > max_bits || n > 64 {
            return Err(Gf2Error::Capacity {
                redundancy,
                block_len: n,
                limit: max_bits,
            });
        }
        let columns: Vec<u64> = (0..n)
            .map(|j| {
                (0..redundancy).fold(0u64, |acc, i| acc | ((h.get(i, j) as u64) << i))
            })
            .collect();
        let size = 1usize << redundancy;
        let mut leaders: Vec<Option<u64>> = vec![None; size];
        leaders[0] = Some(0);
        let mut filled = 1;
        for w in 1..=n {
            if filled == size {
                break;
            }
            let mut fresh: Vec<Option<u64>> = vec![None; size];
            for e in masks_of_weight(n, w) {
                let s = columns
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| (e >> j) & 1 == 1)
                    .fold(0u64, |acc, (_, c)| acc ^ c) as usize;
                if leaders[s].is_some() {
                    continue;
                }
                match fresh[s] {
                    Some(cur) if !lex_less(e, cur) => {}
                    _ => fresh[s] = Some(e),
                }
            }
            for (slot, cand) in leaders.iter_mut().zip(fresh) {
                if slot.is_none() && cand.is_some() {
                    *slot = cand;
                    filled += 1;
                }
            }
        }
        Ok(Self {
            n,
            redundancy,
            leaders,
        })
    }

    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn redundancy(&self) -> usize {
        self.redundancy
    }

    /// Minimum-weight `f` with `h · f = syndrome`.
    pub fn decode(&self, syndrome: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if syndrome.len() != self.redundancy {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.redundancy,
                found: syndrome.len(),
            });
        }
        let idx = syndrome.to_mask() as usize;
        self.leaders[idx]
            .map(|e| Gf2Vector::from_mask(self.n, e))
            .ok_or(Gf2Error::UnreachableSyndrome)
    }
}

/// One-shot decode; builds a fresh table. Prefer [`CosetLeaderTable`] when
/// decoding many syndromes against the same matrix.
pub fn coset_leader_decode(h: &Gf2Matrix, syndrome: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
    CosetLeaderTable::new(h)?.decode(syndrome)
}

// Sequence order with entry 0 first: at the lowest differing bit, the smaller
// sequence holds a zero.
fn lex_less(a: u64, b: u64) -> bool {
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) == 0
}

/// All `n`-bit masks of popcount `w`, in increasing numeric order (Gosper).
fn masks_of_weight(n: usize, w: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut next: Option<u128> = (w <= n).then(|| (1u128 << w) - 1);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as u64)
    })
}
