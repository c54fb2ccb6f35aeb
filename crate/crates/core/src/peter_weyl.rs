//! Numerical construction of the irreducible polynomial components and
//! their reproducing kernels.
//!
//! The component attached to a partition is the span of the unitary orbit
//! of its conical polynomial. This module grows that span from seeded
//! pseudo-random unitaries until the Fischer-Gram rank stabilizes, records
//! a stability certificate, and derives from the orthonormalized basis the
//! reproducing kernel, the orthogonal projection onto the component, and a
//! sampled verification of the determinant-shift kernel identities.
//!
//! Determinism contract: every randomized entry point takes an explicit
//! seed; sample `i` draws from an independent generator stream indexed by
//! `i`, so results are bit-identical for a fixed seed no matter how the
//! sample loop is scheduled.

use crate::exec;
use crate::kernel::{cconst, KernelError};
use crate::linalg::{hestenes_orthogonalize, random_unitary, stream_rng};
use crate::minors::{conical_poly, group_act, minor_poly, TriplePars};
use crate::partitions::{Part, Partition, PartitionError};
use crate::poly::{Matrix, MatrixPolynomial, Monomial, PolyError};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Hard cap on the dimension of the ambient degree block.
const DEGREE_BLOCK_CAP: usize = 10_000;

/// Number of consecutive non-growing samples that certifies the span.
const STABLE_WINDOW: usize = 5;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum PeterWeylError {
    #[error("degree block has dimension {block_dim}, above the cap {cap}")]
    DegreeBlockTooLarge { block_dim: usize, cap: usize },
    #[error("span rank did not stabilize within {samples} samples (rank history {history:?})")]
    NonConvergence { samples: usize, history: Vec<usize> },
    #[error("partition rank {partition_rank} does not match triple rank {triple_rank}")]
    RankMismatch {
        partition_rank: usize,
        triple_rank: usize,
    },
    #[error("shift by {n} needs every part of {lambda} to be at least {n}")]
    ShiftTooShort { lambda: String, n: Part },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Dimension of the space of degree-`n` polynomials in `d` variables.
pub fn degree_block_dim(d: usize, n: u32) -> usize {
    // C(d + n - 1, n) with a running product
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc * (d as u128 + k - 1) / k;
        if acc > DEGREE_BLOCK_CAP as u128 * 1000 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Reproducibility certificate of a span construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanCertificate {
    pub lambda: Partition,
    pub dim: usize,
    /// Largest below-threshold singular value, relative to the top one.
    pub residual: f64,
    pub samples_used: usize,
    pub stable_window: usize,
    pub tol: f64,
    pub seed: u64,
    pub block_dim: usize,
}

/// Fischer-orthonormal basis of one irreducible component, with the
/// stability certificate of the randomized construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentBasis {
    lambda: Partition,
    pars: TriplePars,
    basis: Vec<MatrixPolynomial<Complex64>>,
    certificate: SpanCertificate,
}

impl ComponentBasis {
    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn pars(&self) -> TriplePars {
        self.pars
    }

    /// Certified dimension of the component.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MatrixPolynomial<Complex64>] {
        &self.basis
    }

    pub fn certificate(&self) -> &SpanCertificate {
        &self.certificate
    }

    /// Reproducing kernel value `E(z, zeta) = sum phi_i(z) conj(phi_i(zeta))`.
    pub fn kernel_value(
        &self,
        z: &Matrix<Complex64>,
        zeta: &Matrix<Complex64>,
    ) -> Result<Complex64, PeterWeylError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for phi in &self.basis {
            acc += phi.eval(z)? * phi.eval(zeta)?.conj();
        }
        Ok(acc)
    }

    /// The kernel at a fixed second argument, as a polynomial in `z`.
    pub fn kernel_section(
        &self,
        zeta: &Matrix<Complex64>,
    ) -> Result<MatrixPolynomial<Complex64>, PeterWeylError> {
        let mut acc = MatrixPolynomial::zero(self.pars.rank(), self.pars.cols());
        for phi in &self.basis {
            let w = phi.eval(zeta)?.conj();
            acc = acc.try_add(&phi.scale(&w))?;
        }
        Ok(acc)
    }

    /// Fischer-orthogonal projection onto the component. Idempotent;
    /// annihilates every other component.
    pub fn project(
        &self,
        f: &MatrixPolynomial<Complex64>,
    ) -> Result<MatrixPolynomial<Complex64>, PeterWeylError> {
        let mut acc = MatrixPolynomial::zero(self.pars.rank(), self.pars.cols());
        for phi in &self.basis {
            let w = phi.fischer_inner(f)?;
            acc = acc.try_add(&phi.scale(&w))?;
        }
        Ok(acc)
    }
}

/// The monomials of one degree block, with their positions.
struct BlockIndex {
    monomials: Vec<Monomial>,
    positions: HashMap<Monomial, usize>,
}

fn block_index(nvars: usize, degree: u32) -> BlockIndex {
    let mut monomials = Vec::new();
    let mut exps = vec![0u32; nvars];
    fill_block(nvars, degree, 0, &mut exps, &mut monomials);
    let positions = monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    BlockIndex {
        monomials,
        positions,
    }
}

fn fill_block(
    nvars: usize,
    remaining: u32,
    var: usize,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if var + 1 == nvars {
        exps[var] = remaining;
        out.push(Monomial::from_exps(exps.clone()));
        exps[var] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[var] = e;
        fill_block(nvars, remaining - e, var + 1, exps, out);
    }
    exps[var] = 0;
}

/// Coefficient vector in the Fischer-orthonormal monomial frame
/// `z^alpha / sqrt(alpha!)`, so the Euclidean inner product of vectors is
/// the Fischer product of polynomials.
fn fischer_coords(p: &MatrixPolynomial<Complex64>, index: &BlockIndex) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); index.monomials.len()];
    for (m, c) in p.terms() {
        let pos = index.positions[m];
        let fac: Complex64 = m.factorial();
        v[pos] = *c * fac.re.sqrt();
    }
    v
}

fn poly_from_coords(
    v: &[Complex64],
    index: &BlockIndex,
    rows: usize,
    cols: usize,
) -> MatrixPolynomial<Complex64> {
    let mut acc = MatrixPolynomial::zero(rows, cols);
    for (pos, c) in v.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let m = &index.monomials[pos];
        let fac: Complex64 = m.factorial();
        let coeff = *c / fac.re.sqrt();
        let mut term = MatrixPolynomial::constant(coeff, rows, cols);
        for (var, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                let x = MatrixPolynomial::variable(var / cols, var % cols, rows, cols)
                    .expect("in grid");
                term = term.try_mul(&x.pow(e)).expect("same grid");
            }
        }
        acc = acc.try_add(&term).expect("same grid");
    }
    acc
}

/// Grows the unitary orbit of the conical polynomial of `lambda` until the
/// span rank is stable for five consecutive samples, then
/// orthonormalizes. Rank decisions use the relative singular-value
/// threshold `tol` (times the largest singular value); pass `1e-9` unless
/// there is a reason not to.
pub fn span_basis(
    lambda: &Partition,
    pars: TriplePars,
    seed: u64,
    tol: f64,
) -> Result<ComponentBasis, PeterWeylError> {
    if lambda.rank() != pars.rank() {
        return Err(PeterWeylError::RankMismatch {
            partition_rank: lambda.rank(),
            triple_rank: pars.rank(),
        });
    }
    let degree = lambda.weight() as u32;
    let block_dim = degree_block_dim(pars.dim(), degree);
    if block_dim > DEGREE_BLOCK_CAP {
        return Err(PeterWeylError::DegreeBlockTooLarge {
            block_dim,
            cap: DEGREE_BLOCK_CAP,
        });
    }
    let conical: MatrixPolynomial<Complex64> = conical_poly(lambda, pars)?;
    let index = block_index(pars.dim(), degree);
    let max_samples = block_dim + 4 * STABLE_WINDOW;

    let mut vectors: Vec<Vec<Complex64>> = Vec::new();
    // running orthonormal set for the cheap per-sample rank decision
    let mut onb: Vec<Vec<Complex64>> = Vec::new();
    let mut history: Vec<usize> = Vec::new();
    let mut top_norm = 0.0f64;
    let mut streak = 0usize;

    // Samples are generated in batches; each sample draws from its own
    // generator stream, so batch boundaries change only the wall time. The
    // stabilization rule consumes them strictly in stream order. Fan-out
    // only pays for itself once the degree block makes the orbit samples
    // expensive.
    let gen_sample = |idx: u64| {
        // the two unitary factors draw from disjoint streams of the seed
        let u = random_unitary(pars.rank(), &mut stream_rng(seed, 2 * idx));
        let v = random_unitary(pars.cols(), &mut stream_rng(seed, 2 * idx + 1));
        group_act(&conical, &u, &v).map(|sample| fischer_coords(&sample, &index))
    };
    let parallel_batches = block_dim >= 96;
    'grow: for batch_start in (0..max_samples).step_by(STABLE_WINDOW) {
        let batch_len = STABLE_WINDOW.min(max_samples - batch_start);
        let batch = if parallel_batches {
            exec::map_range(batch_len, |k| gen_sample((batch_start + k) as u64))
        } else {
            (0..batch_len)
                .map(|k| gen_sample((batch_start + k) as u64))
                .collect()
        };
        for vec in batch {
            let vec = vec?;
            let norm = vec_norm(&vec);
            top_norm = top_norm.max(norm);
            // twice-reorthogonalized Gram-Schmidt residual
            let mut res = vec.clone();
            for _ in 0..2 {
                for q in &onb {
                    let proj = dot(q, &res);
                    for (r, qk) in res.iter_mut().zip(q.iter()) {
                        *r -= proj * qk;
                    }
                }
            }
            let res_norm = vec_norm(&res);
            let grew = res_norm > tol * top_norm && top_norm > 0.0;
            if grew {
                let unit: Vec<Complex64> = res.iter().map(|z| z / res_norm).collect();
                onb.push(unit);
                streak = 0;
            } else {
                streak += 1;
            }
            vectors.push(vec);
            history.push(onb.len());
            if !onb.is_empty() && streak >= STABLE_WINDOW {
                break 'grow;
            }
        }
    }

    if streak < STABLE_WINDOW {
        return Err(PeterWeylError::NonConvergence {
            samples: vectors.len(),
            history,
        });
    }

    // certified singular values and basis from a one-sided Jacobi pass
    let mut rows = vectors.clone();
    hestenes_orthogonalize(&mut rows);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let norms: Vec<f64> = rows.iter().map(|r| vec_norm(r)).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .expect("finite norms")
            .then(i.cmp(&j))
    });
    let sigma_max = norms[order[0]].max(f64::MIN_POSITIVE);
    let rank = order
        .iter()
        .take_while(|&&i| norms[i] > tol * sigma_max)
        .count();
    let residual = if rank < order.len() {
        norms[order[rank]] / sigma_max
    } else {
        0.0
    };

    let reconstruct = |j: usize| {
        let i = order[j];
        let unit: Vec<Complex64> = rows[i].iter().map(|z| z / norms[i]).collect();
        poly_from_coords(&unit, &index, pars.rank(), pars.cols())
    };
    let basis = if parallel_batches {
        exec::map_range(rank, reconstruct)
    } else {
        (0..rank).map(reconstruct).collect()
    };

    Ok(ComponentBasis {
        lambda: lambda.clone(),
        pars,
        basis,
        certificate: SpanCertificate {
            lambda: lambda.clone(),
            dim: rank,
            residual,
            samples_used: vectors.len(),
            stable_window: STABLE_WINDOW,
            tol,
            seed,
            block_dim,
        },
    })
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Sampled residuals of the determinant-shift kernel identities.
///
/// `residual_factorization` checks the pointwise factorization of the
/// kernel of `lambda` into `C * N^n(z) conj(N(zeta))^n` times the kernel of
/// `lambda - n^(r)`; the two derivative residuals check the equivalent
/// identities where the determinant power acts as a constant-coefficient
/// differential operator in `z`, respectively an anti-holomorphic one in
/// `zeta`.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftIdentityReport {
    pub lambda: Partition,
    pub n: Part,
    pub c_constant: [String; 2],
    pub c_value: f64,
    pub d_lambda: usize,
    pub d_lambda_shifted: usize,
    pub residual_factorization: f64,
    pub residual_z_derivative: f64,
    pub residual_zeta_derivative: f64,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Random point of the matrix space with entries of the given scale, drawn
/// from one generator stream. With `cols_limit` set, trailing columns stay
/// zero (used to keep the second kernel argument inside the Peirce 2-space
/// of the maximal diagonal tripotent).
fn random_point(
    pars: TriplePars,
    scale: f64,
    cols_limit: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Matrix<Complex64> {
    use rand_distr::{Distribution, StandardNormal};
    Matrix::from_fn(pars.rank(), pars.cols(), |_, j| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        if j < cols_limit {
            Complex64::new(re, im) * scale / 2f64.sqrt()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn verify_shift_identity(
    lambda: &Partition,
    n: Part,
    pars: TriplePars,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ShiftIdentityReport, PeterWeylError> {
    if lambda.rank() != pars.rank() {
        return Err(PeterWeylError::RankMismatch {
            partition_rank: lambda.rank(),
            triple_rank: pars.rank(),
        });
    }
    let shifted = lambda
        .subtract_rect(n)
        .map_err(|_| PeterWeylError::ShiftTooShort {
            lambda: lambda.to_string(),
            n,
        })?;
    let rank = pars.rank();
    let a = BigRational::from_integer(BigInt::from(pars.mult_a()));
    let c_exact = cconst(rank, n, lambda, &a)?;
    let c_value = c_exact.magnitude()
        * if c_exact < BigRational::from_integer(BigInt::from(0)) {
            -1.0
        } else {
            1.0
        };
    let c = Complex64::new(c_value, 0.0);

    let basis = span_basis(lambda, pars, seed, tol)?;
    let basis_shifted = span_basis(&shifted, pars, seed, tol)?;
    let det: MatrixPolynomial<Complex64> = minor_poly(rank, pars)?;
    let det_n = det.pow(n as u32);

    // sample points: z anywhere, zeta restricted to the left r x r block
    let mut lhs_scale = 0.0f64;
    let mut dev20 = 0.0f64;
    let mut dev21 = 0.0f64;
    let mut dev22 = 0.0f64;
    for i in 0..samples {
        let mut rng = stream_rng(seed, 1_000_000 + i as u64);
        let z = random_point(pars, 0.8, pars.cols(), &mut rng);
        let zeta = random_point(pars, 0.8, pars.rank(), &mut rng);

        let lhs = basis.kernel_value(&z, &zeta)?;
        let det_z = det_n.eval(&z)?;
        let det_zeta_conj = det_n.eval(&zeta)?.conj();
        let rhs = c * det_z * det_zeta_conj * basis_shifted.kernel_value(&z, &zeta)?;
        lhs_scale = lhs_scale.max(lhs.norm());
        dev20 = dev20.max((lhs - rhs).norm());

        // derivative in z, applied to the section at fixed zeta
        let section = basis.kernel_section(&zeta)?;
        let section_shifted = basis_shifted.kernel_section(&zeta)?;
        let lhs_poly = MatrixPolynomial::apply_conj_diff(&det_n, &section)?;
        let rhs_poly = section_shifted.scale(&det_zeta_conj);
        dev21 = dev21.max(rel_fischer_dev(&lhs_poly, &rhs_poly)?);

        // anti-holomorphic derivative in zeta
        let mut lhs22 = MatrixPolynomial::zero(pars.rank(), pars.cols());
        for phi in basis.basis() {
            let derived = MatrixPolynomial::apply_conj_diff(&det_n, phi)?;
            let w = derived.eval(&zeta)?.conj();
            lhs22 = lhs22.try_add(&phi.scale(&w))?;
        }
        let rhs22 = det_n.try_mul(&section_shifted)?;
        dev22 = dev22.max(rel_fischer_dev(&lhs22, &rhs22)?);
    }
    let scale = lhs_scale.max(1e-300);

    Ok(ShiftIdentityReport {
        lambda: lambda.clone(),
        n,
        c_constant: [c_exact.numer().to_string(), c_exact.denom().to_string()],
        c_value,
        d_lambda: basis.dim(),
        d_lambda_shifted: basis_shifted.dim(),
        residual_factorization: dev20 / scale,
        residual_z_derivative: dev21,
        residual_zeta_derivative: dev22,
        samples,
        seed,
        tol,
    })
}

fn rel_fischer_dev(
    lhs: &MatrixPolynomial<Complex64>,
    rhs: &MatrixPolynomial<Complex64>,
) -> Result<f64, PeterWeylError> {
    let diff = lhs.try_sub(rhs)?;
    let denom = rhs.fischer_norm_sq().sqrt().max(1e-300);
    Ok(diff.fischer_norm_sq().sqrt() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_of_weight;

    fn p(parts: &[Part]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn pars22() -> TriplePars {
        TriplePars::new(2, 2).unwrap()
    }

    #[test]
    fn block_dims() {
        assert_eq!(degree_block_dim(4, 0), 1);
        assert_eq!(degree_block_dim(4, 2), 10);
        assert_eq!(degree_block_dim(4, 4), 35);
        assert_eq!(degree_block_dim(9, 4), 495);
    }

    #[test]
    fn linear_component_spans_the_dual_space() {
        let basis = span_basis(&p(&[1, 0]), pars22(), 1, 1e-9).unwrap();
        assert_eq!(basis.dim(), 4);
        assert!(basis.certificate().residual < 1e-9);
        // orthonormality
        for (i, a) in basis.basis().iter().enumerate() {
            for (j, b) in basis.basis().iter().enumerate() {
                let inner = a.fischer_inner(b).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner - Complex64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn determinant_component_is_a_line() {
        let basis = span_basis(&p(&[1, 1]), pars22(), 3, 1e-9).unwrap();
        assert_eq!(basis.dim(), 1);
    }

    #[test]
    fn rectangular_triple_components() {
        // s > r: the linear component is the full dual space, and the
        // kernel value at the maximal tripotent matches the Pochhammer
        // quotient d_lambda / (d/r)_lambda with d/r = 3
        let pars = TriplePars::new(2, 3).unwrap();
        let basis = span_basis(&p(&[1, 0]), pars, 19, 1e-9).unwrap();
        assert_eq!(basis.dim(), 6);
        let e = Matrix::from_fn(2, 3, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let value = basis.kernel_value(&e, &e).unwrap();
        assert!((value - Complex64::new(2.0, 0.0)).norm() < 1e-10, "{value}");
        // the determinant-like component of the left block has dimension 3
        let det_block = span_basis(&p(&[1, 1]), pars, 19, 1e-9).unwrap();
        assert_eq!(det_block.dim(), 3);
    }

    #[test]
    fn degree_two_splits_nine_plus_one() {
        let basis = span_basis(&p(&[2, 0]), pars22(), 5, 1e-9).unwrap();
        assert_eq!(basis.dim(), 9);
        // graded completeness at degree 2: 9 + 1 = dim of the block
        assert_eq!(9 + 1, degree_block_dim(4, 2));
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let b1 = span_basis(&p(&[2, 1]), pars22(), 17, 1e-9).unwrap();
        let b2 = span_basis(&p(&[2, 1]), pars22(), 17, 1e-9).unwrap();
        assert_eq!(b1, b2);
        let b3 = span_basis(&p(&[2, 1]), pars22(), 18, 1e-9).unwrap();
        assert_eq!(b1.dim(), b3.dim());
        assert_ne!(b1.basis(), b3.basis());
    }

    #[test]
    fn degree_guard_trips() {
        let pars = TriplePars::new(4, 25).unwrap();
        let lam = Partition::rectangle(3, 4, 4).unwrap();
        assert!(matches!(
            span_basis(&lam, pars, 1, 1e-9),
            Err(PeterWeylError::DegreeBlockTooLarge { .. })
        ));
    }

    #[test]
    fn rank_one_kernel_closed_form() {
        // r = s = 1: the kernel of (m) is (z conj(zeta))^m / m!
        let pars = TriplePars::new(1, 1).unwrap();
        for m in 0..=4u64 {
            let basis = span_basis(&p(&[m]), pars, 9, 1e-9).unwrap();
            assert_eq!(basis.dim(), 1);
            let z = Matrix::from_fn(1, 1, |_, _| Complex64::new(0.37, -0.21));
            let zeta = Matrix::from_fn(1, 1, |_, _| Complex64::new(-0.11, 0.53));
            let got = basis.kernel_value(&z, &zeta).unwrap();
            let base = *z.get(0, 0) * zeta.get(0, 0).conj();
            let mut want = Complex64::new(1.0, 0.0);
            for k in 1..=m {
                want = want * base / k as f64;
            }
            assert!((got - want).norm() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn kernel_reproduces_component_members() {
        let basis = span_basis(&p(&[2, 0]), pars22(), 23, 1e-9).unwrap();
        // a fixed member of the component
        let mut member = MatrixPolynomial::zero(2, 2);
        for (k, phi) in basis.basis().iter().enumerate() {
            let w = Complex64::new(0.3 + 0.1 * k as f64, -0.2 + 0.05 * k as f64);
            member = member.try_add(&phi.scale(&w)).unwrap();
        }
        let mut rng = stream_rng(23, 555);
        let zeta = random_point(pars22(), 0.9, 2, &mut rng);
        let section = basis.kernel_section(&zeta).unwrap();
        let got = section.fischer_inner(&member).unwrap();
        let want = member.eval(&zeta).unwrap();
        assert!(
            (got - want).norm() <= 1e-8 * member.fischer_norm_sq().sqrt(),
            "{got} vs {want}"
        );
    }

    #[test]
    fn projection_separates_components_of_equal_degree() {
        let basis = span_basis(&p(&[2, 0]), pars22(), 31, 1e-9).unwrap();
        let n20: MatrixPolynomial<Complex64> = conical_poly(&p(&[2, 0]), pars22()).unwrap();
        let n11: MatrixPolynomial<Complex64> = conical_poly(&p(&[1, 1]), pars22()).unwrap();
        let kept = basis.project(&n20).unwrap();
        let kept_dev = rel_fischer_dev(&kept, &n20).unwrap();
        assert!(
            kept_dev < 1e-9,
            "projection must fix members, dev {kept_dev}"
        );
        let killed = basis.project(&n11).unwrap();
        assert!(killed.fischer_norm_sq().sqrt() < 1e-9 * n11.fischer_norm_sq().sqrt());
        // different homogeneity degree dies exactly
        let n10: MatrixPolynomial<Complex64> = conical_poly(&p(&[1, 0]), pars22()).unwrap();
        assert!(basis.project(&n10).unwrap().is_zero());
        // idempotence on a mixed input
        let mixed = n20.try_add(&n11).unwrap().try_add(&n10).unwrap();
        let once = basis.project(&mixed).unwrap();
        let twice = basis.project(&once).unwrap();
        assert!(rel_fischer_dev(&twice, &once).unwrap() < 1e-10);
    }

    #[test]
    fn graded_completeness_through_degree_three() {
        for degree in 0..=3u64 {
            let mut total = 0usize;
            for lam in partitions_of_weight(2, degree) {
                total += span_basis(&lam, pars22(), 41, 1e-9).unwrap().dim();
            }
            assert_eq!(total, degree_block_dim(4, degree as u32), "degree {degree}");
        }
    }

    #[test]
    fn shift_identity_closed_form_at_rank_one() {
        // r = s = 1 reduces to the closed form; residuals are pure float
        // noise
        let pars = TriplePars::new(1, 1).unwrap();
        for (m, n) in [(3u64, 1u64), (4, 2), (2, 2)] {
            let report = verify_shift_identity(&p(&[m]), n, pars, 10, 5, 1e-9).unwrap();
            assert!(report.residual_factorization <= 1e-12, "{report:?}");
            assert!(report.residual_z_derivative <= 1e-12, "{report:?}");
            assert!(report.residual_zeta_derivative <= 1e-12, "{report:?}");
            // C_1^n((m)) = (m-n)!/m!
            let mut denom = 1u64;
            for k in (m - n + 1)..=m {
                denom *= k;
            }
            assert_eq!(report.c_constant, ["1".to_string(), denom.to_string()]);
        }
    }

    #[test]
    fn shift_identity_at_the_calibration_point() {
        let report = verify_shift_identity(&p(&[2, 1]), 1, pars22(), 20, 7, 1e-9).unwrap();
        assert_eq!(report.c_constant, ["1".to_string(), "3".to_string()]);
        assert!(report.residual_factorization <= 1e-8, "{report:?}");
        assert!(report.residual_z_derivative <= 1e-8, "{report:?}");
        assert!(report.residual_zeta_derivative <= 1e-8, "{report:?}");
        // rank-1 reduction: lambda = (1,1) shifts to the constants
        let report = verify_shift_identity(&p(&[1, 1]), 1, pars22(), 20, 7, 1e-9).unwrap();
        assert_eq!(report.d_lambda, 1);
        assert_eq!(report.d_lambda_shifted, 1);
        assert!(report.residual_factorization <= 1e-8);
        // too-short partitions are rejected
        assert!(matches!(
            verify_shift_identity(&p(&[1, 0]), 1, pars22(), 5, 7, 1e-9),
            Err(PeterWeylError::ShiftTooShort { .. })
        ));
    }
}
