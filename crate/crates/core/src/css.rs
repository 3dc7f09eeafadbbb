//! Statevector CSS codewords and the two averaging identities that connect
//! the mismatched-basis protocol to CSS error correction:
//!
//! * averaging a parameterized codeword over every phase parameter `z`
//!   leaves the uniform mixture over the coset `x + v + C2`;
//! * averaging that mixture over every shift `x` and every `v ∈ C1` leaves
//!   the maximally mixed state on `n` qubits.
//!
//! Basis state `|v⟩` sits at index `Σ vᵢ 2^(n−1−i)`, so entry 0 of a binary
//! vector is the leftmost qubit.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::gf2::{Gf2Vector, LinearCode};
use crate::linalg::hermitian_eigenvalues;
use crate::Real;

pub const MAX_STATEVECTOR_QUBITS: usize = 12;
pub const MAX_DENSITY_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CssError {
    #[error("{n} qubits exceeds the limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("C2 is not a subcode of C1")]
    NotNested,
    #[error("vector {0} is not a codeword of C1")]
    NotInC1(String),
    #[error("vector length {found} differs from block length {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

fn basis_index(v: &Gf2Vector) -> usize {
    v.iter().fold(0usize, |acc, b| (acc << 1) | b as usize)
}

fn index_vector(n: usize, idx: usize) -> Gf2Vector {
    Gf2Vector::from_bits((0..n).map(|i| ((idx >> (n - 1 - i)) & 1) as u64))
}

/// Every vector of F₂ⁿ.
fn all_vectors(n: usize) -> impl Iterator<Item = Gf2Vector> {
    (0..1usize << n).map(move |i| index_vector(n, i))
}

/// `n`-qubit pure state with `2ⁿ` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// Amplitude of the computational basis state `|v⟩`.
    pub fn amplitude(&self, v: &Gf2Vector) -> Complex<T> {
        self.amps[basis_index(v)]
    }

    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |a, (x, y)| a + x.conj() * y)
    }

    pub fn density(&self) -> MultiQubitDensity<T> {
        let mut rho = MultiQubitDensity::zeros(self.n);
        rho.add_outer(&self.amps, T::one());
        rho
    }
}

/// `2ⁿ × 2ⁿ` density matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiQubitDensity<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> MultiQubitDensity<T> {
    fn zeros(n: usize) -> Self {
        let d = 1 << n;
        Self {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); d * d],
        }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let mut m = Self::zeros(n);
        let d = m.dim();
        let w = T::one() / T::from_usize(d).expect("dimension fits the scalar");
        for i in 0..d {
            m.data[i * d + i] = Complex::new(w, T::zero());
        }
        m
    }

    /// `|v⟩⟨v|` for a computational basis vector.
    pub fn basis_projector(v: &Gf2Vector) -> Self {
        let mut m = Self::zeros(v.len());
        let d = m.dim();
        let i = basis_index(v);
        m.data[i * d + i] = Complex::new(T::one(), T::zero());
        m
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> Complex<T> {
        let d = self.dim();
        (0..d).fold(Complex::new(T::zero(), T::zero()), |a, i| a + self.data[i * d + i])
    }

    fn add_outer(&mut self, psi: &[Complex<T>], weight: T) {
        let d = self.dim();
        for (i, a) in psi.iter().enumerate() {
            if a.norm_sqr() == T::zero() {
                continue;
            }
            for (j, b) in psi.iter().enumerate() {
                self.data[i * d + j] += *a * b.conj() * weight;
            }
        }
    }

    fn add_scaled(&mut self, other: &Self, weight: T) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += *y * weight;
        }
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.data, self.dim())
    }

    /// `½ Σ |λᵢ(self − other)|`.
    pub fn trace_distance(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n, "qubit counts differ");
        let diff: Vec<Complex<T>> = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a - *b)
            .collect();
        hermitian_eigenvalues(&diff, self.dim())
            .into_iter()
            .fold(T::zero(), |a, l| a + l.abs())
            * T::lit(0.5)
    }

    /// Hermitian, unit trace and eigenvalues ≥ `−tol`.
    pub fn is_valid(&self, tol: T) -> bool {
        let d = self.dim();
        let hermitian = (0..d).all(|i| {
            (0..d).all(|j| (self.data[i * d + j] - self.data[j * d + i].conj()).norm() <= tol)
        });
        let tr = self.trace();
        hermitian
            && (tr.re - T::one()).abs() <= tol
            && tr.im.abs() <= tol
            && self.eigenvalues().iter().all(|&l| l >= -tol)
    }
}

fn check_codes(c1: &LinearCode, c2: &LinearCode, max: usize) -> Result<(), CssError> {
    let n = c1.len();
    if n > max {
        return Err(CssError::TooManyQubits { n, max });
    }
    if c2.len() != n {
        return Err(CssError::LengthMismatch {
            expected: n,
            found: c2.len(),
        });
    }
    if !c2.is_subcode_of(c1) {
        return Err(CssError::NotNested);
    }
    Ok(())
}

fn check_len(n: usize, v: &Gf2Vector) -> Result<(), CssError> {
    if v.len() != n {
        return Err(CssError::LengthMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

fn check_member(c1: &LinearCode, v: &Gf2Vector) -> Result<(), CssError> {
    check_len(c1.len(), v)?;
    if !c1.contains(v) {
        return Err(CssError::NotInC1(v.to_string()));
    }
    Ok(())
}

fn inv_sqrt_size<T: Real>(c2: &LinearCode) -> T {
    T::one() / T::from_u64(1u64 << c2.dim()).expect("code size fits the scalar").sqrt()
}

/// `(1/√|C2|) Σ_{w∈C2} |v + w⟩`.
pub fn css_codeword<T: Real>(
    c1: &LinearCode,
    c2: &LinearCode,
    v: &Gf2Vector,
) -> Result<StateVector<T>, CssError> {
    parameterized_css_codeword(c1, c2, v, &Gf2Vector::zeros(c1.len()), &Gf2Vector::zeros(c1.len()))
}

/// `(1/√|C2|) Σ_{w∈C2} (−1)^{(z,w)} |x + v + w⟩`.
pub fn parameterized_css_codeword<T: Real>(
    c1: &LinearCode,
    c2: &LinearCode,
    v: &Gf2Vector,
    x: &Gf2Vector,
    z: &Gf2Vector,
) -> Result<StateVector<T>, CssError> {
    check_codes(c1, c2, MAX_STATEVECTOR_QUBITS)?;
    check_member(c1, v)?;
    check_len(c1.len(), x)?;
    check_len(c1.len(), z)?;
    Ok(parameterized_unchecked(c2, v, x, z))
}

fn parameterized_unchecked<T: Real>(
    c2: &LinearCode,
    v: &Gf2Vector,
    x: &Gf2Vector,
    z: &Gf2Vector,
) -> StateVector<T> {
    let n = v.len();
    let norm = inv_sqrt_size::<T>(c2);
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
    let shift = x + v;
    for w in c2.codewords() {
        let sign = if z.dot(&w) { -norm } else { norm };
        let idx = basis_index(&(&shift + &w));
        amps[idx] += Complex::new(sign, T::zero());
    }
    StateVector { n, amps }
}

/// Uniform mixture `(1/|C2|) Σ_{w∈C2} |s + w⟩⟨s + w|` over one coset of C2.
pub fn coset_mixture<T: Real>(c2: &LinearCode, shift: &Gf2Vector) -> MultiQubitDensity<T> {
    let n = c2.len();
    let mut rho = MultiQubitDensity::zeros(n);
    let d = rho.dim();
    let w = T::one() / T::from_u64(1u64 << c2.dim()).expect("code size fits the scalar");
    for c in c2.codewords() {
        let i = basis_index(&(shift + &c));
        rho.data[i * d + i] += Complex::new(w, T::zero());
    }
    rho
}

/// `2^{−n} Σ_z |ψ_{x,v,z}⟩⟨ψ_{x,v,z}|` by direct summation over all `z`.
pub fn average_over_z<T: Real>(
    c1: &LinearCode,
    c2: &LinearCode,
    v: &Gf2Vector,
    x: &Gf2Vector,
) -> Result<MultiQubitDensity<T>, CssError> {
    check_codes(c1, c2, MAX_DENSITY_QUBITS)?;
    check_member(c1, v)?;
    check_len(c1.len(), x)?;
    let n = c1.len();
    let weight = T::one() / T::from_usize(1 << n).expect("dimension fits the scalar");
    let mut rho = MultiQubitDensity::zeros(n);
    for z in all_vectors(n) {
        let psi = parameterized_unchecked::<T>(c2, v, x, &z);
        rho.add_outer(&psi.amps, weight);
    }
    Ok(rho)
}

/// `(1/(2ⁿ|C1|)) Σ_x Σ_{v∈C1} ρ(x, v)` with `ρ(x, v)` the coset mixture of `x + v + C2`.
pub fn average_over_x_v<T: Real>(
    c1: &LinearCode,
    c2: &LinearCode,
) -> Result<MultiQubitDensity<T>, CssError> {
    check_codes(c1, c2, MAX_DENSITY_QUBITS)?;
    let n = c1.len();
    let count = (1u64 << n) * (1u64 << c1.dim());
    let weight = T::one() / T::from_u64(count).expect("count fits the scalar");
    let mut rho = MultiQubitDensity::zeros(n);
    for x in all_vectors(n) {
        for v in c1.codewords() {
            rho.add_scaled(&coset_mixture(c2, &(&x + &v)), weight);
        }
    }
    Ok(rho)
}

/// Worst-case deviations of both averaging identities for one code pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixtureReport {
    pub n: usize,
    pub dim_c1: usize,
    pub dim_c2: usize,
    /// Number of `(x, v)` pairs checked against the z-average identity.
    pub pairs_checked: usize,
    pub max_z_average_distance: f64,
    pub x_v_average_distance: f64,
}

impl MixtureReport {
    pub fn worst(&self) -> f64 {
        self.max_z_average_distance.max(self.x_v_average_distance)
    }
}

/// Checks both identities exhaustively over every `x ∈ F₂ⁿ` and `v ∈ C1`.
pub fn verify_mixture_identities(
    c1: &LinearCode,
    c2: &LinearCode,
) -> Result<MixtureReport, CssError> {
    check_codes(c1, c2, MAX_DENSITY_QUBITS)?;
    let n = c1.len();
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for x in all_vectors(n) {
        for v in c1.codewords() {
            let lhs = average_over_z::<f64>(c1, c2, &v, &x)?;
            let rhs = coset_mixture::<f64>(c2, &(&x + &v));
            worst = worst.max(lhs.trace_distance(&rhs));
            pairs += 1;
        }
    }
    let avg = average_over_x_v::<f64>(c1, c2)?;
    Ok(MixtureReport {
        n,
        dim_c1: c1.dim(),
        dim_c2: c2.dim(),
        pairs_checked: pairs,
        max_z_average_distance: worst,
        x_v_average_distance: avg.trace_distance(&MultiQubitDensity::maximally_mixed(n)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{sample_subcode, Gf2Matrix};
    use crate::rng::stream;

    fn bits(s: &str) -> Gf2Vector {
        s.parse().unwrap()
    }

    fn pair_code() -> (LinearCode, LinearCode) {
        let c1 = LinearCode::full(2);
        let c2 = LinearCode::from_generator(Gf2Matrix::from_bit_rows(&[&[1, 1]])).unwrap();
        (c1, c2)
    }

    #[test]
    fn trivial_c2_gives_basis_state() {
        let c1 = LinearCode::hamming_7_4();
        let c2 = LinearCode::zero(7);
        for v in c1.codewords() {
            let psi = css_codeword::<f64>(&c1, &c2, &v).unwrap();
            assert!((psi.amplitude(&v).re - 1.0).abs() < 1e-15);
            assert!((psi.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_like_codeword() {
        let (c1, c2) = pair_code();
        let psi = css_codeword::<f64>(&c1, &c2, &bits("00")).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let want = [s, 0.0, 0.0, s];
        for (a, w) in psi.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() < 1e-15 && a.im == 0.0);
        }
        let phased =
            parameterized_css_codeword::<f64>(&c1, &c2, &bits("00"), &bits("00"), &bits("10"))
                .unwrap();
        let want = [s, 0.0, 0.0, -s];
        for (a, w) in phased.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_parameters_match_plain_codeword() {
        let mut rng = stream(1);
        let c1 = LinearCode::random(5, 3, &mut rng).unwrap();
        let c2 = sample_subcode(&c1, 1, &mut rng).unwrap();
        let zero = Gf2Vector::zeros(5);
        for v in c1.codewords() {
            assert_eq!(
                css_codeword::<f64>(&c1, &c2, &v).unwrap(),
                parameterized_css_codeword(&c1, &c2, &v, &zero, &zero).unwrap()
            );
        }
    }

    #[test]
    fn shift_permutes_amplitudes() {
        let mut rng = stream(2);
        let c1 = LinearCode::random(6, 4, &mut rng).unwrap();
        let c2 = sample_subcode(&c1, 2, &mut rng).unwrap();
        let v = c1.codewords().nth(5).unwrap();
        let z = Gf2Vector::random(6, &mut rng);
        let base = parameterized_css_codeword::<f64>(&c1, &c2, &v, &Gf2Vector::zeros(6), &z).unwrap();
        let x = Gf2Vector::random(6, &mut rng);
        let shifted = parameterized_css_codeword::<f64>(&c1, &c2, &v, &x, &z).unwrap();
        for u in all_vectors(6) {
            assert_eq!(shifted.amplitude(&(&u + &x)), base.amplitude(&u));
        }
    }

    #[test]
    fn distinct_cosets_are_orthogonal() {
        let mut rng = stream(3);
        for _ in 0..5 {
            let c1 = LinearCode::random(6, 4, &mut rng).unwrap();
            let c2 = sample_subcode(&c1, 2, &mut rng).unwrap();
            let words: Vec<_> = c1.codewords().collect();
            for a in &words {
                for b in &words {
                    let ip = css_codeword::<f64>(&c1, &c2, a)
                        .unwrap()
                        .inner(&css_codeword(&c1, &c2, b).unwrap())
                        .norm();
                    if c2.contains(&(a + b)) {
                        assert!((ip - 1.0).abs() < 1e-12);
                    } else {
                        assert!(ip <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn membership_and_size_errors() {
        let c1 = LinearCode::hamming_7_4();
        let c2 = LinearCode::zero(7);
        assert!(matches!(
            css_codeword::<f64>(&c1, &c2, &Gf2Vector::unit(7, 0)),
            Err(CssError::NotInC1(_))
        ));
        assert!(matches!(
            average_over_z::<f64>(&c1, &c2, &Gf2Vector::zeros(7), &Gf2Vector::zeros(7)),
            Err(CssError::TooManyQubits { n: 7, max: 6 })
        ));
        let (p1, p2) = pair_code();
        assert!(matches!(
            css_codeword::<f64>(&p2, &p1, &bits("11")),
            Err(CssError::NotNested)
        ));
        let big = LinearCode::full(13);
        assert!(matches!(
            css_codeword::<f64>(&big, &LinearCode::zero(13), &Gf2Vector::zeros(13)),
            Err(CssError::TooManyQubits { n: 13, max: 12 })
        ));
    }

    #[test]
    fn z_average_examples() {
        let c1 = LinearCode::full(3);
        let c2 = LinearCode::zero(3);
        let v = bits("101");
        let x = bits("011");
        let rho = average_over_z::<f64>(&c1, &c2, &v, &x).unwrap();
        let want = MultiQubitDensity::basis_projector(&bits("110"));
        assert!(rho.trace_distance(&want) < 1e-12);

        let (p1, p2) = pair_code();
        let rho = average_over_z::<f64>(&p1, &p2, &bits("00"), &bits("00")).unwrap();
        let mut want = MultiQubitDensity::<f64>::basis_projector(&bits("00"));
        want.add_scaled(&MultiQubitDensity::basis_projector(&bits("11")), 1.0);
        want.data.iter_mut().for_each(|z| *z *= 0.5);
        assert!(rho.trace_distance(&want) < 1e-12);
    }

    #[test]
    fn z_average_three_qubits_is_diagonal_half_half() {
        // C2 = span{110}; with v = 001, x = 100 the coset is {101, 011}.
        let c1 = LinearCode::from_generator(Gf2Matrix::from_bit_rows(&[&[1, 1, 0], &[0, 0, 1]])).unwrap();
        let c2 = LinearCode::from_generator(Gf2Matrix::from_bit_rows(&[&[1, 1, 0]])).unwrap();
        let rho = average_over_z::<f64>(&c1, &c2, &bits("001"), &bits("100")).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j && (i == 0b101 || i == 0b011) { 0.5 } else { 0.0 };
                assert!((rho.get(i, j).re - want).abs() < 1e-12 && rho.get(i, j).im.abs() < 1e-12);
            }
        }
        assert!(rho.is_valid(1e-10));
    }

    #[test]
    fn x_v_average_examples() {
        let one = average_over_x_v::<f64>(&LinearCode::full(1), &LinearCode::zero(1)).unwrap();
        assert!(one.trace_distance(&MultiQubitDensity::maximally_mixed(1)) < 1e-12);
        let (p1, p2) = pair_code();
        let two = average_over_x_v::<f64>(&p1, &p2).unwrap();
        assert!(two.trace_distance(&MultiQubitDensity::maximally_mixed(2)) < 1e-12);
        let mut rng = stream(4);
        let c1 = LinearCode::random(3, 2, &mut rng).unwrap();
        let c2 = sample_subcode(&c1, 1, &mut rng).unwrap();
        let three = average_over_x_v::<f64>(&c1, &c2).unwrap();
        assert!(three.trace_distance(&MultiQubitDensity::maximally_mixed(3)) < 1e-10);
    }

    #[test]
    fn identities_hold_exhaustively_up_to_four_qubits() {
        let mut rng = stream(5);
        for n in 1..=4 {
            for k1 in 0..=n {
                for k2 in 0..=k1 {
                    let c1 = LinearCode::random(n, k1, &mut rng).unwrap();
                    let c2 = sample_subcode(&c1, k2, &mut rng).unwrap();
                    let rep = verify_mixture_identities(&c1, &c2).unwrap();
                    assert!(rep.worst() <= 1e-10, "{rep:?}");
                    assert_eq!(rep.pairs_checked, (1 << n) * (1 << k1));
                }
            }
        }
    }

    #[test]
    fn single_precision_codeword() {
        let (c1, c2) = pair_code();
        let psi = css_codeword::<f32>(&c1, &c2, &bits("11")).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-6);
    }
}
