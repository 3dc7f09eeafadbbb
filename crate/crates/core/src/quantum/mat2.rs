use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::Real;

/// 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Mat2<T> {
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Self {
        Self { m }
    }

    /// Real-entried matrix.
    pub fn real(a: T, b: T, c: T, d: T) -> Self {
        let z = T::zero();
        Self::new([
            [Complex::new(a, z), Complex::new(b, z)],
            [Complex::new(c, z), Complex::new(d, z)],
        ])
    }

    pub fn zero() -> Self {
        let z = T::zero();
        Self::real(z, z, z, z)
    }

    pub fn identity() -> Self {
        let (z, o) = (T::zero(), T::one());
        Self::real(o, z, z, o)
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &[Complex<T>; 2], b: &[Complex<T>; 2]) -> Self {
        let mut m = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i] * b[j].conj();
            }
        }
        Self::new(m)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Mat2<T>) -> Self {
        *u * *self * u.adjoint()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Mat2<T>) -> T {
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> [T; 2] {
        let two = T::lit(2.0);
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = (self.m[0][1] + self.m[1][0].conj()) / two;
        let mean = (a + d) / two;
        let half_gap = ((a - d) / two).hypot(b.norm());
        [mean - half_gap, mean + half_gap]
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        Self::new(m)
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-T::one())
    }
}
