//! Small dense complex linear algebra helpers shared by the channel and
//! CP-region code: row-major vectorization, Kronecker products, Hermitian
//! spectra, and entrywise norms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVector = DVector<Complex64>;

/// Shorthand complex constructor.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Shorthand for a purely real complex number.
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Row-major vectorization: `vec(ρ) = (ρ_00, ρ_01, …, ρ_0,N-1, ρ_10, …)`.
///
/// This ordering is a crate-wide convention; the process matrix `A`, the
/// coherence matrix `M` and the reshuffle all assume it.
pub fn vec_row_major(m: &CMatrix) -> CVector {
    let (rows, cols) = m.shape();
    CVector::from_fn(rows * cols, |k, _| m[(k / cols, k % cols)])
}

/// Inverse of [`vec_row_major`] for square matrices of side `n`.
pub fn unvec_row_major(v: &CVector, n: usize) -> CMatrix {
    assert_eq!(v.len(), n * n, "vector length must be n^2");
    CMatrix::from_fn(n, n, |r, s| v[r * n + s])
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entrywise absolute value.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise absolute difference between two equally shaped matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Deviation from Hermiticity, `max |m - m†|`.
pub fn hermiticity_violation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi eigensolver for Hermitian matrices. Chosen over library
/// QL/QR tridiagonal solvers because the Choi matrices here are routinely
/// rank one (spectrum {N, 0, …, 0}) and the tridiagonal iterations were
/// observed to emit NaNs on exactly those inputs; Jacobi rotations have no
/// such failure mode and give the most accurate small-matrix spectra.
fn jacobi_hermitian(mut a: CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut vectors = want_vectors.then(|| CMatrix::identity(n, n));
    let scale = max_abs(&a);
    let tol = f64::EPSILON * scale;
    if scale > 0.0 {
        let rot_tol = tol * 1e-3;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            let mut off: f64 = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let g = apq.norm();
                    if g <= rot_tol {
                        continue;
                    }
                    let alpha = a[(p, p)].re;
                    let beta = a[(q, q)].re;
                    // Unitary 2x2 rotation zeroing a_pq: a real Jacobi
                    // angle with the phase of a_pq absorbed.
                    let phase = apq / g;
                    let t = if alpha == beta {
                        1.0
                    } else {
                        let tau = (beta - alpha) / (2.0 * g);
                        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                    };
                    let c_rot = 1.0 / (1.0 + t * t).sqrt();
                    let s_rot = phase * (t * c_rot);
                    // columns: A <- A·U
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * c_rot - akq * s_rot.conj();
                        a[(k, q)] = akp * s_rot + akq * c_rot;
                    }
                    // rows: A <- U†·A
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk * c_rot - aqk * s_rot;
                        a[(q, k)] = apk * s_rot.conj() + aqk * c_rot;
                    }
                    // analytically exact zeros and real diagonals
                    a[(p, q)] = cr(0.0);
                    a[(q, p)] = cr(0.0);
                    a[(p, p)] = cr(a[(p, p)].re);
                    a[(q, q)] = cr(a[(q, q)].re);
                    if let Some(v) = vectors.as_mut() {
                        for k in 0..n {
                            let vkp = v[(k, p)];
                            let vkq = v[(k, q)];
                            v[(k, p)] = vkp * c_rot - vkq * s_rot.conj();
                            v[(k, q)] = vkp * s_rot + vkq * c_rot;
                        }
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("diagonal stays finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = vectors.map(|v| CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]));
    (eigenvalues, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// as `(m + m†)/2` first so that float-level asymmetry cannot leak in.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    jacobi_hermitian(sym, false).0
}

/// Full Hermitian eigendecomposition; returns (ascending eigenvalues, matrix
/// of column eigenvectors in the same order).
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()).scale(0.5);
    let (eigenvalues, vectors) = jacobi_hermitian(sym, true);
    (eigenvalues, vectors.expect("vectors requested"))
}

/// Maximum absolute entry of the commutator `[a, b] = ab - ba`.
pub fn commutator_max_abs(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}
