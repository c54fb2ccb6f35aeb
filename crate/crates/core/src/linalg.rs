//! Small dense complex linear algebra: seeded Haar-ish random unitaries and
//! a Hermitian Jacobi eigensolver.
//!
//! Sizes here are tiny (orbit Gram matrices, a few dozen rows), so the
//! classical cyclic Jacobi iteration is plenty and keeps the crate free of
//! native BLAS/LAPACK dependencies. Everything is deterministic: fixed
//! operation order, and randomness only through explicit seeds.

// plane rotations touch two rows in lockstep, which reads best with indices
#![allow(clippy::needless_range_loop)]

use crate::poly::Matrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// Deterministic per-stream generator: one independent stream per
/// `(seed, stream)` pair, so parallel sample generation preserves the
/// stream-indexed order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&stream.to_le_bytes());
    bytes[16..24].copy_from_slice(&0x9e37_79b9_7f4a_7c15u64.to_le_bytes());
    ChaCha12Rng::from_seed(bytes)
}

fn complex_gaussian(rng: &mut ChaCha12Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) / 2f64.sqrt()
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian
/// matrix, with the positive-diagonal normalization of the triangular
/// factor.
pub fn random_unitary(n: usize, rng: &mut ChaCha12Rng) -> Matrix<Complex64> {
    let g = Matrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    // modified Gram-Schmidt on columns; r_jj > 0 makes the choice unique
    let mut q: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| *g.get(i, j)).collect())
        .collect();
    for j in 0..n {
        for i in 0..j {
            let proj: Complex64 = (0..n).map(|k| q[i][k].conj() * q[j][k]).sum();
            for k in 0..n {
                let delta = proj * q[i][k];
                q[j][k] -= delta;
            }
        }
        let norm: f64 = q[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut q[j] {
            *z /= norm;
        }
    }
    Matrix::from_fn(n, n, |i, j| q[j][i])
}

/// One-sided Jacobi (Hestenes) orthogonalization: plane-rotates the rows in
/// place until they are pairwise orthogonal. Afterwards the row norms are
/// the singular values of the original row matrix, with no squaring of the
/// conditioning, so rank thresholds at 1e-9 of the top singular value sit
/// far above the noise floor.
pub fn hestenes_orthogonalize(rows: &mut [Vec<Complex64>]) {
    let k = rows.len();
    if k < 2 {
        return;
    }
    let eps = 1e-14;
    for _sweep in 0..40 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let mut alpha = 0.0f64;
                let mut beta = 0.0f64;
                let mut gamma = Complex64::new(0.0, 0.0);
                for (up, vq) in rows[p].iter().zip(rows[q].iter()) {
                    alpha += up.norm_sqr();
                    beta += vq.norm_sqr();
                    gamma += up.conj() * vq;
                }
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / gamma.norm();
                let g = gamma.norm();
                let tau = (beta - alpha) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_c = phase.conj() * s;
                for idx in 0..rows[p].len() {
                    let up = rows[p][idx];
                    let vq = rows[q][idx];
                    rows[p][idx] = up * c - vq * s_c;
                    rows[q][idx] = up * s_c.conj() + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in decreasing order with the matching orthonormal
/// eigenvectors as columns.
pub fn hermitian_eig(a: &Matrix<Complex64>) -> (Vec<f64>, Matrix<Complex64>) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| *a.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();

    let scale: f64 = m
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let tol = 1e-30 * scale;

    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[p][q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.norm() <= tol / (n as f64) {
                    continue;
                }
                let app = m[p][p].re;
                let aqq = m[q][q].re;
                // phase that makes the pivot real, then a real rotation
                let phase = apq / apq.norm();
                let g = apq.norm();
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_c = phase.conj() * s;
                // rows, then columns, then the eigenvector accumulator
                for k in 0..n {
                    let mp = m[p][k];
                    let mq = m[q][k];
                    m[p][k] = mp * c - mq * s_c.conj();
                    m[q][k] = mp * s_c + mq * c;
                }
                for k in 0..n {
                    let mp = m[k][p];
                    let mq = m[k][q];
                    m[k][p] = mp * c - mq * s_c;
                    m[k][q] = mp * s_c.conj() + mq * c;
                }
                for k in 0..n {
                    let vp = v[k][p];
                    let vq = v[k][q];
                    v[k][p] = vp * c - vq * s_c;
                    v[k][q] = vp * s_c.conj() + vq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[j][j]
            .re
            .partial_cmp(&m[i][i].re)
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let eigvals: Vec<f64> = order.iter().map(|&i| m[i][i].re).collect();
    let eigvecs = Matrix::from_fn(n, n, |i, j| v[i][order[j]]);
    (eigvals, eigvecs)
}
