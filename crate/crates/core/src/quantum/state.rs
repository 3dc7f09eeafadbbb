use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Mat2, QuantumError};
use crate::Real;

/// Measurement / preparation basis of a BB84 qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Computational basis {|0⟩, |1⟩}.
    Z,
    /// Hadamard basis {|+⟩, |−⟩}.
    X,
}

impl Basis {
    pub const BOTH: [Basis; 2] = [Basis::Z, Basis::X];

    pub fn other(self) -> Basis {
        match self {
            Basis::Z => Basis::X,
            Basis::X => Basis::Z,
        }
    }
}

/// Unit vector in C².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState<T> {
    amps: [Complex<T>; 2],
}

impl<T: Real> PureState<T> {
    pub fn new(a0: Complex<T>, a1: Complex<T>) -> Result<Self, QuantumError> {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if (norm - T::one()).abs() > T::INVARIANT_TOL {
            return Err(QuantumError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { amps: [a0, a1] })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(a0: Complex<T>, a1: Complex<T>) -> Self {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        Self {
            amps: [a0 / norm, a1 / norm],
        }
    }

    /// The basis vector labelled by `outcome`: Z → |0⟩,|1⟩; X → |+⟩,|−⟩.
    pub fn basis_vector(basis: Basis, outcome: u8) -> Self {
        let (z, o) = (T::zero(), T::one());
        let s = T::FRAC_1_SQRT_2();
        let c = |x: T| Complex::new(x, z);
        let amps = match (basis, outcome & 1) {
            (Basis::Z, 0) => [c(o), c(z)],
            (Basis::Z, _) => [c(z), c(o)],
            (Basis::X, 0) => [c(s), c(s)],
            (Basis::X, _) => [c(s), c(-s)],
        };
        Self { amps }
    }

    pub fn zero() -> Self {
        Self::basis_vector(Basis::Z, 0)
    }

    pub fn one() -> Self {
        Self::basis_vector(Basis::Z, 1)
    }

    pub fn plus() -> Self {
        Self::basis_vector(Basis::X, 0)
    }

    pub fn minus() -> Self {
        Self::basis_vector(Basis::X, 1)
    }

    pub fn amplitudes(&self) -> &[Complex<T>; 2] {
        &self.amps
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &Self) -> T {
        (self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]).norm()
    }

    pub fn apply(&self, u: &Mat2<T>) -> Self {
        Self { amps: u.apply(&self.amps) }
    }

    pub fn density(&self) -> DensityOperator<T> {
        DensityOperator {
            m: Mat2::outer(&self.amps, &self.amps),
        }
    }
}

/// Single-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityOperator<T> {
    m: Mat2<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates the matrix against the density-operator invariants.
    pub fn new(m: Mat2<T>) -> Result<Self, QuantumError> {
        let tol = T::INVARIANT_TOL;
        if !m.is_hermitian(tol) {
            return Err(QuantumError::NotHermitian);
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(QuantumError::BadTrace(tr.re.to_f64().unwrap_or(f64::NAN)));
        }
        let [lo, _] = m.hermitian_eigenvalues();
        if lo < -tol {
            return Err(QuantumError::NotPositive(lo.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { m })
    }

    // Symmetrizes away rounding asymmetry; callers guarantee the invariants.
    pub(crate) fn from_trusted(m: Mat2<T>) -> Self {
        let half = T::lit(0.5);
        Self {
            m: (m + m.adjoint()).scale(half),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Mat2::identity().scale(T::lit(0.5)),
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(T, DensityOperator<T>)]) -> Result<Self, QuantumError> {
        let total = terms.iter().fold(T::zero(), |acc, (w, _)| acc + *w);
        if terms.iter().any(|(w, _)| *w < T::zero()) || (total - T::one()).abs() > T::INVARIANT_TOL {
            return Err(QuantumError::BadProbabilities);
        }
        let m = terms
            .iter()
            .fold(Mat2::zero(), |acc, (w, rho)| acc + rho.m.scale(*w));
        Self::new(m)
    }

    pub fn matrix(&self) -> &Mat2<T> {
        &self.m
    }

    pub fn eigenvalues(&self) -> [T; 2] {
        self.m.hermitian_eigenvalues()
    }

    pub fn trace(&self) -> T {
        self.m.trace().re
    }

    /// Trace distance `½ Σ|λᵢ|` of the difference.
    pub fn trace_distance(&self, other: &Self) -> T {
        let [a, b] = (self.m - other.m).hermitian_eigenvalues();
        (a.abs() + b.abs()) * T::lit(0.5)
    }

    /// Whether all invariants hold at tolerance `tol`.
    pub fn is_valid(&self, tol: T) -> bool {
        let tr = self.m.trace();
        self.m.is_hermitian(tol)
            && (tr.re - T::one()).abs() <= tol
            && tr.im.abs() <= tol
            && self.eigenvalues()[0] >= -tol
    }
}

/// `⟨φ|ρ|φ⟩` for the basis vector of `outcome`, clamped to [0, 1].
pub fn born_probability<T: Real>(rho: &DensityOperator<T>, basis: Basis, outcome: u8) -> T {
    let phi = PureState::<T>::basis_vector(basis, outcome);
    let a = phi.amplitudes();
    let m = rho.matrix();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..2 {
        for j in 0..2 {
            acc += a[i].conj() * m.m[i][j] * a[j];
        }
    }
    acc.re.max(T::zero()).min(T::one())
}

/// The single-qubit gates the protocol and its channels are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedUnitary {
    I,
    X,
    Z,
    XZ,
    H,
    HX,
    HZ,
    HXZ,
}

impl NamedUnitary {
    pub const ALL: [NamedUnitary; 8] = [
        NamedUnitary::I,
        NamedUnitary::X,
        NamedUnitary::Z,
        NamedUnitary::XZ,
        NamedUnitary::H,
        NamedUnitary::HX,
        NamedUnitary::HZ,
        NamedUnitary::HXZ,
    ];

    /// Exact matrix; composite names multiply left to right (`HX = H·X`).
    pub fn matrix<T: Real>(self) -> Mat2<T> {
        let (z, o) = (T::zero(), T::one());
        let s = T::FRAC_1_SQRT_2();
        let x = Mat2::real(z, o, o, z);
        let zz = Mat2::real(o, z, z, -o);
        let h = Mat2::real(s, s, s, -s);
        match self {
            NamedUnitary::I => Mat2::identity(),
            NamedUnitary::X => x,
            NamedUnitary::Z => zz,
            NamedUnitary::XZ => x * zz,
            NamedUnitary::H => h,
            NamedUnitary::HX => h * x,
            NamedUnitary::HZ => h * zz,
            NamedUnitary::HXZ => h * x * zz,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedUnitary::I => "I",
            NamedUnitary::X => "X",
            NamedUnitary::Z => "Z",
            NamedUnitary::XZ => "XZ",
            NamedUnitary::H => "H",
            NamedUnitary::HX => "HX",
            NamedUnitary::HZ => "HZ",
            NamedUnitary::HXZ => "HXZ",
        }
    }
}

impl fmt::Display for NamedUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedUnitary {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|u| u.name() == s)
            .ok_or_else(|| QuantumError::UnknownUnitary(s.to_string()))
    }
}
