use std::fmt;

use rand::Rng;

use super::{Gf2Error, Gf2Vector};

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Gf2Matrix,
    pub pivots: Vec<usize>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![Gf2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| Gf2Vector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from its rows. All rows must share `cols` as length.
    pub fn from_rows(cols: usize, rows: Vec<Gf2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length {} != column count {cols}", r.len());
        }
        Self { cols, rows }
    }

    /// Convenience constructor from nested 0/1 literals.
    pub fn from_bit_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| Gf2Vector::from_bits(r.iter().map(|&b| b as u64)))
                .collect(),
        )
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self {
            cols,
            rows: (0..rows).map(|_| Gf2Vector::random(cols, rng)).collect(),
        }
    }

    /// Block-diagonal matrix with `blocks` copies of `self`.
    pub fn block_diagonal(&self, blocks: usize) -> Self {
        let cols = self.cols * blocks;
        let mut rows = Vec::with_capacity(self.nrows() * blocks);
        for b in 0..blocks {
            for r in &self.rows {
                let mut row = Gf2Vector::zeros(cols);
                for (j, bit) in r.iter().enumerate() {
                    if bit {
                        row.set(b * self.cols + j, true);
                    }
                }
                rows.push(row);
            }
        }
        Self { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if row.get(j) {
                    t.rows[j].set(i, true);
                }
            }
        }
        t
    }

    /// `self · x`; each output bit is the inner product of a row with `x`.
    pub fn mul_vec(&self, x: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(Gf2Vector::from_bits(
            self.rows.iter().map(|r| r.dot(x) as u64),
        ))
    }

    /// `xᵀ · self`, the combination of rows selected by `x`.
    pub fn combine_rows(&self, x: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if x.len() != self.nrows() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.nrows(),
                found: x.len(),
            });
        }
        let mut out = Gf2Vector::zeros(self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            if x.get(i) {
                out.xor_assign(r);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if other.nrows() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.combine_rows(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            cols: other.cols,
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Gf2Vector::is_zero)
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
                continue;
            };
            m.swap(r, p);
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon {
            reduced: Self {
                cols: self.cols,
                rows: m,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Some `x` with `self · x = y`, free variables set to zero; `None` when
    /// the system is inconsistent.
    pub fn solve(&self, y: &Gf2Vector) -> Result<Option<Gf2Vector>, Gf2Error> {
        if y.len() != self.nrows() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.nrows(),
                found: y.len(),
            });
        }
        // Eliminate on [self | y].
        let augmented = Self {
            cols: self.cols + 1,
            rows: self
                .rows
                .iter()
                .zip(y.iter())
                .map(|(r, yb)| {
                    let mut row = r.clone();
                    row.push(yb);
                    row
                })
                .collect(),
        };
        let ech = augmented.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = Gf2Vector::zeros(self.cols);
        for (i, &c) in ech.pivots.iter().enumerate() {
            if ech.reduced.rows[i].get(self.cols) {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }

    /// Basis of `{x : self · x = 0}`, one basis vector per row of the result.
    pub fn nullspace(&self) -> Gf2Matrix {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let rows = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = Gf2Vector::unit(self.cols, f);
                for (i, &c) in ech.pivots.iter().enumerate() {
                    if ech.reduced.rows[i].get(f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect();
        Self {
            cols: self.cols,
            rows,
        }
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &Gf2Vector) -> bool {
        self.transpose()
            .solve(v)
            .map(|x| x.is_some())
            .unwrap_or(false)
    }

    pub fn stack(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self {
            cols: self.cols,
            rows,
        }
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}
