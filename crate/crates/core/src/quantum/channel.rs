use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{born_probability, Basis, DensityOperator, Mat2, NamedUnitary, PureState, QuantumError};
use crate::Real;

/// Memoryless single-qubit channel.
#[derive(Clone, Debug, PartialEq)]
pub enum Channel<T> {
    /// `ρ ↦ Σ pᵢ Uᵢ ρ Uᵢ†`.
    UnitaryMixture(Vec<(T, Mat2<T>)>),
    /// Hadamard followed by a Pauli error: `HX` w.p. `r_x`, `HZ` w.p. `r_z`,
    /// `HXZ` w.p. `r_xz`, plain `H` otherwise.
    Gamma { r_x: T, r_z: T, r_xz: T },
    /// `ρ ↦ Σ K ρ K†`.
    Kraus(Vec<Mat2<T>>),
}

impl<T: Real> Channel<T> {
    pub fn identity() -> Self {
        Channel::UnitaryMixture(vec![(T::one(), Mat2::identity())])
    }

    pub fn hadamard() -> Self {
        Channel::Gamma {
            r_x: T::zero(),
            r_z: T::zero(),
            r_xz: T::zero(),
        }
    }

    pub fn unitary_mixture(terms: Vec<(T, Mat2<T>)>) -> Result<Self, QuantumError> {
        let ch = Channel::UnitaryMixture(terms);
        ch.validate()?;
        Ok(ch)
    }

    pub fn named_mixture(terms: &[(T, NamedUnitary)]) -> Result<Self, QuantumError> {
        Self::unitary_mixture(terms.iter().map(|&(p, u)| (p, u.matrix())).collect())
    }

    pub fn gamma(r_x: T, r_z: T, r_xz: T) -> Result<Self, QuantumError> {
        let ch = Channel::Gamma { r_x, r_z, r_xz };
        ch.validate()?;
        Ok(ch)
    }

    pub fn kraus(ops: Vec<Mat2<T>>) -> Result<Self, QuantumError> {
        let ch = Channel::Kraus(ops);
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<(), QuantumError> {
        let tol = T::INVARIANT_TOL;
        match self {
            Channel::UnitaryMixture(terms) => {
                let total = terms.iter().fold(T::zero(), |acc, (p, _)| acc + *p);
                if terms.is_empty()
                    || terms.iter().any(|(p, _)| p.is_nan() || *p < T::zero())
                    || (total - T::one()).abs() > tol
                {
                    return Err(QuantumError::BadProbabilities);
                }
                if let Some(i) = terms.iter().position(|(_, u)| !u.is_unitary(tol)) {
                    return Err(QuantumError::NotUnitary(i));
                }
            }
            Channel::Gamma { r_x, r_z, r_xz } => {
                let rs = [*r_x, *r_z, *r_xz];
                let total = rs.iter().fold(T::zero(), |a, r| a + *r);
                if rs.iter().any(|r| r.is_nan() || *r < T::zero()) || total > T::one() + tol {
                    return Err(QuantumError::BadProbabilities);
                }
            }
            Channel::Kraus(ops) => {
                let sum = ops
                    .iter()
                    .fold(Mat2::zero(), |acc, k| acc + k.adjoint() * *k);
                if ops.is_empty() || sum.max_abs_diff(&Mat2::identity()) > tol {
                    return Err(QuantumError::NotTracePreserving);
                }
            }
        }
        Ok(())
    }

    /// Gamma expanded into its four unitary branches; other kinds unchanged.
    pub fn to_unitary_mixture(&self) -> Option<Vec<(T, Mat2<T>)>> {
        match self {
            Channel::UnitaryMixture(terms) => Some(terms.clone()),
            Channel::Gamma { r_x, r_z, r_xz } => Some(vec![
                (*r_x, NamedUnitary::HX.matrix()),
                (*r_z, NamedUnitary::HZ.matrix()),
                (*r_xz, NamedUnitary::HXZ.matrix()),
                (
                    (T::one() - *r_x - *r_z - *r_xz).max(T::zero()),
                    NamedUnitary::H.matrix(),
                ),
            ]),
            Channel::Kraus(_) => None,
        }
    }

    /// Kraus representation; unitary branches become `√pᵢ Uᵢ`.
    pub fn to_kraus(&self) -> Vec<Mat2<T>> {
        match self {
            Channel::Kraus(ops) => ops.clone(),
            _ => self
                .to_unitary_mixture()
                .expect("non-Kraus channels expand to unitary mixtures")
                .into_iter()
                .map(|(p, u)| u.scale(p.sqrt()))
                .collect(),
        }
    }

    pub fn apply(&self, rho: &DensityOperator<T>) -> DensityOperator<T> {
        let m = rho.matrix();
        let out = match self.to_unitary_mixture() {
            Some(terms) => terms
                .iter()
                .fold(Mat2::zero(), |acc, (p, u)| acc + m.conjugate_by(u).scale(*p)),
            None => self
                .to_kraus()
                .iter()
                .fold(Mat2::zero(), |acc, k| acc + m.conjugate_by(k)),
        };
        DensityOperator::from_trusted(out)
    }

    /// Probability of outcome 0 when `input` is sent and measured in `basis`.
    pub fn outcome_zero_probability(&self, input: &PureState<T>, basis: Basis) -> T {
        born_probability(&self.apply(&input.density()), basis, 0)
    }
}

pub fn apply_channel<T: Real>(ch: &Channel<T>, rho: &DensityOperator<T>) -> DensityOperator<T> {
    ch.apply(rho)
}

/// Draws 0 with probability `p_zero` using one uniform variate.
pub fn sample_outcome<T: Real, R: Rng + ?Sized>(p_zero: T, rng: &mut R) -> u8 {
    let u = T::lit(rng.random::<f64>());
    if u < p_zero {
        0
    } else {
        1
    }
}

/// Sends `input` through `ch` and measures in `basis`.
pub fn sample_measurement<T: Real, R: Rng + ?Sized>(
    ch: &Channel<T>,
    input: &PureState<T>,
    basis: Basis,
    rng: &mut R,
) -> u8 {
    sample_outcome(ch.outcome_zero_probability(input, basis), rng)
}

fn gaussian_complex<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random pure state.
pub fn random_pure_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> PureState<T> {
    loop {
        let a = gaussian_complex::<T, R>(rng);
        let b = gaussian_complex::<T, R>(rng);
        if a.norm_sqr() + b.norm_sqr() > T::lit(1e-12) {
            return PureState::normalized(a, b);
        }
    }
}

/// Mixture of one to four random pure states with random weights.
pub fn random_density<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityOperator<T> {
    let count = rng.random_range(1..=4);
    let weights: Vec<f64> = (0..count)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    let m = weights.iter().fold(Mat2::zero(), |acc, w| {
        acc + random_pure_state::<T, R>(rng)
            .density()
            .matrix()
            .scale(T::lit(w / total))
    });
    DensityOperator::from_trusted(m)
}

/// Random channel from a random isometry C² → C² ⊗ C^d, `d ∈ {2, 3, 4}`,
/// with the environment traced out. Kraus operator `e` is the block of the
/// isometry that lands on environment state `e`.
pub fn random_channel<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Channel<T> {
    let env = rng.random_range(2..=4usize);
    let rows = 2 * env;
    // Two orthonormal columns by Gram-Schmidt on complex Gaussian vectors.
    let zero = Complex::new(T::zero(), T::zero());
    let norm = |v: &[Complex<T>]| v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    let mut c0: Vec<Complex<T>> = (0..rows).map(|_| gaussian_complex(rng)).collect();
    let n0 = norm(&c0);
    c0.iter_mut().for_each(|z| *z /= n0);
    let mut c1: Vec<Complex<T>> = (0..rows).map(|_| gaussian_complex(rng)).collect();
    // Two passes of projection keep orthogonality at rounding level.
    for _ in 0..2 {
        let proj = c0
            .iter()
            .zip(&c1)
            .fold(zero, |a, (u, v)| a + u.conj() * *v);
        c1.iter_mut().zip(&c0).for_each(|(v, u)| *v -= *u * proj);
    }
    let n1 = norm(&c1);
    c1.iter_mut().for_each(|z| *z /= n1);

    let ops = (0..env)
        .map(|e| {
            Mat2::new([
                [c0[e], c1[e]],
                [c0[env + e], c1[env + e]],
            ])
        })
        .collect();
    Channel::Kraus(ops)
}
