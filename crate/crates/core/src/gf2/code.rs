use rand::Rng;

use super::{Gf2Error, Gf2Matrix, Gf2Vector};

/// Binary linear code given by a full-rank generator and parity-check pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: Gf2Matrix,
    parity_check: Gf2Matrix,
}

impl LinearCode {
    /// Code spanned by the rows of `generator`, which must be linearly independent.
    pub fn from_generator(generator: Gf2Matrix) -> Result<Self, Gf2Error> {
        let k = generator.nrows();
        let rank = generator.rank();
        if rank != k {
            return Err(Gf2Error::RankDeficient { rows: k, rank });
        }
        let parity_check = generator.nullspace();
        Ok(Self {
            generator,
            parity_check,
        })
    }

    /// Kernel of `parity_check`, whose rows must be linearly independent.
    pub fn from_parity_check(parity_check: Gf2Matrix) -> Result<Self, Gf2Error> {
        let r = parity_check.nrows();
        let rank = parity_check.rank();
        if rank != r {
            return Err(Gf2Error::RankDeficient { rows: r, rank });
        }
        let generator = parity_check.nullspace();
        Ok(Self {
            generator,
            parity_check,
        })
    }

    /// The code `{0}` of length `n`.
    pub fn zero(n: usize) -> Self {
        Self {
            generator: Gf2Matrix::zeros(0, n),
            parity_check: Gf2Matrix::identity(n),
        }
    }

    /// The whole space F₂ⁿ.
    pub fn full(n: usize) -> Self {
        Self {
            generator: Gf2Matrix::identity(n),
            parity_check: Gf2Matrix::zeros(0, n),
        }
    }

    /// Hamming [7,4,3] code. Column `j` of the parity check is `j + 1` in
    /// binary, so a single error at position `j` has syndrome `j + 1`.
    pub fn hamming_7_4() -> Self {
        let h = Gf2Matrix::from_bit_rows(&[
            &[1, 0, 1, 0, 1, 0, 1],
            &[0, 1, 1, 0, 0, 1, 1],
            &[0, 0, 0, 1, 1, 1, 1],
        ]);
        Self::from_parity_check(h).expect("Hamming parity check has full rank")
    }

    /// Repetition code of length `n` (`n >= 1`).
    pub fn repetition(n: usize) -> Self {
        assert!(n >= 1, "repetition code needs n >= 1");
        Self::from_generator(Gf2Matrix::from_rows(n, vec![Gf2Vector::ones(n)]))
            .expect("single nonzero row")
    }

    /// Uniformly random full-rank generator of dimension `k`, redrawn until full rank.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self, Gf2Error> {
        if k > n {
            return Err(Gf2Error::DimensionOutOfRange { requested: k, max: n });
        }
        loop {
            let g = Gf2Matrix::random(k, n, rng);
            if g.rank() == k {
                return Self::from_generator(g);
            }
        }
    }

    /// Direct sum of `blocks` copies of this code on consecutive coordinates.
    pub fn tiled(&self, blocks: usize) -> Self {
        Self {
            generator: self.generator.block_diagonal(blocks),
            parity_check: self.parity_check.block_diagonal(blocks),
        }
    }

    /// Block length.
    pub fn len(&self) -> usize {
        self.generator.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Gf2Matrix {
        &self.parity_check
    }

    pub fn syndrome(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        self.parity_check.mul_vec(v)
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        v.len() == self.len() && self.parity_check.mul_vec(v).is_ok_and(|s| s.is_zero())
    }

    /// Encodes `message` (length `dim`) as a combination of generator rows.
    pub fn encode(&self, message: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        self.generator.combine_rows(message)
    }

    /// Whether every codeword of `self` is a codeword of `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.len() == other.len() && self.generator.rows().iter().all(|g| other.contains(g))
    }

    /// All `2^dim` codewords. Intended for small codes only.
    pub fn codewords(&self) -> impl Iterator<Item = Gf2Vector> + '_ {
        let k = self.dim();
        assert!(k < 32, "refusing to enumerate 2^{k} codewords");
        (0..(1u64 << k)).map(move |m| {
            self.encode(&Gf2Vector::from_mask(k, m))
                .expect("message length equals dimension")
        })
    }
}

/// Random subcode of `c1` with dimension `dim2`.
///
/// Draws `dim2` random combinations of the generator rows of `c1` and redraws
/// until they are independent.
pub fn sample_subcode<R: Rng + ?Sized>(
    c1: &LinearCode,
    dim2: usize,
    rng: &mut R,
) -> Result<LinearCode, Gf2Error> {
    let k = c1.dim();
    if dim2 > k {
        return Err(Gf2Error::DimensionOutOfRange {
            requested: dim2,
            max: k,
        });
    }
    if dim2 == 0 {
        return Ok(LinearCode::zero(c1.len()));
    }
    loop {
        let coeffs = Gf2Matrix::random(dim2, k, rng);
        if coeffs.rank() == dim2 {
            let g = coeffs.mul(c1.generator())?;
            return LinearCode::from_generator(g);
        }
    }
}

/// Labels cosets of `c2` inside `c1`.
///
/// The basis of `c2` is extended greedily by generator rows of `c1`, taken in
/// row order; the label of `a ∈ c1` is the coordinate vector of `a` on those
/// complement rows. Both parties derive the same labeling from public data.
#[derive(Clone, Debug)]
pub struct CosetLabeler {
    n: usize,
    dim2: usize,
    complement_len: usize,
    // Transpose of the stacked basis [C2 rows; complement rows].
    basis_t: Gf2Matrix,
}

impl CosetLabeler {
    pub fn new(c1: &LinearCode, c2: &LinearCode) -> Result<Self, Gf2Error> {
        if c1.len() != c2.len() {
            return Err(Gf2Error::DimensionMismatch {
                expected: c1.len(),
                found: c2.len(),
            });
        }
        if !c2.is_subcode_of(c1) {
            return Err(Gf2Error::NotNested);
        }
        let mut reducer = RowReducer::default();
        let mut basis: Vec<Gf2Vector> = Vec::with_capacity(c1.dim());
        for g in c2.generator().rows() {
            reducer.insert(g.clone());
            basis.push(g.clone());
        }
        for g in c1.generator().rows() {
            if basis.len() == c1.dim() {
                break;
            }
            if reducer.insert(g.clone()) {
                basis.push(g.clone());
            }
        }
        let basis = Gf2Matrix::from_rows(c1.len(), basis);
        Ok(Self {
            n: c1.len(),
            dim2: c2.dim(),
            complement_len: c1.dim() - c2.dim(),
            basis_t: basis.transpose(),
        })
    }

    /// Label length, `dim C1 − dim C2`.
    pub fn label_len(&self) -> usize {
        self.complement_len
    }

    pub fn label(&self, a: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if a.len() != self.n {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.n,
                found: a.len(),
            });
        }
        let coords = self.basis_t.solve(a)?.ok_or(Gf2Error::NotInCode)?;
        Ok(coords.slice(self.dim2, self.dim2 + self.complement_len))
    }
}

/// Incremental independence test: stored rows are reduced against all
/// earlier rows, so reducing in insertion order clears every pivot.
#[derive(Default)]
struct RowReducer {
    rows: Vec<(usize, Gf2Vector)>,
}

impl RowReducer {
    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Gf2Vector) -> bool {
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.xor_assign(r);
            }
        }
        match v.first_one() {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

/// Label of the coset `a + C2` within `C1`; see [`CosetLabeler`].
pub fn coset_label(
    a: &Gf2Vector,
    c1: &LinearCode,
    c2: &LinearCode,
) -> Result<Gf2Vector, Gf2Error> {
    CosetLabeler::new(c1, c2)?.label(a)
}
