//! Eigenvalues of small dense Hermitian matrices.

use num_complex::Complex;

use crate::Real;

/// Eigenvalues (ascending) of the Hermitian `dim × dim` matrix stored
/// row-major in `m`.
///
/// `A + iB` is embedded as the real symmetric `[[A, −B], [B, A]]`, whose
/// spectrum is that of the original with every eigenvalue doubled; cyclic
/// Jacobi rotations diagonalize the embedding.
pub(crate) fn hermitian_eigenvalues<T: Real>(m: &[Complex<T>], dim: usize) -> Vec<T> {
    assert_eq!(m.len(), dim * dim);
    let n = 2 * dim;
    let mut a = vec![T::zero(); n * n];
    for i in 0..dim {
        for j in 0..dim {
            // Symmetrize against rounding in the input.
            let z = (m[i * dim + j] + m[j * dim + i].conj()) * T::lit(0.5);
            a[i * n + j] = z.re;
            a[(i + dim) * n + (j + dim)] = z.re;
            a[i * n + (j + dim)] = -z.im;
            a[(i + dim) * n + j] = z.im;
        }
    }
    let mut eig = jacobi_symmetric(&mut a, n);
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    // Pairs are equal up to rounding; keep one of each.
    eig.chunks(2).map(|p| (p[0] + p[1]) * T::lit(0.5)).collect()
}

fn jacobi_symmetric<T: Real>(a: &mut [T], n: usize) -> Vec<T> {
    let off = |a: &[T]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s
    };
    let scale = a.iter().fold(T::zero(), |acc, x| acc + *x * *x).max(T::min_positive_value());
    let eps = T::epsilon() * T::epsilon() * scale;
    for _sweep in 0..100 {
        if off(a) <= eps {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
