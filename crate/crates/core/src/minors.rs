//! The matrix-triple layer of the polynomial engine: principal minors,
//! conical polynomials, Peirce normal projection, the exact vanishing-order
//! oracle, and the unitary group action.
//!
//! Conventions, fixed once: the frame consists of the diagonal matrix units
//! `E_ii`; the rank-`l` base tripotent is `e_[l] = E_11 + ... + E_ll`; its
//! Peirce 2-space is the top-left `l x l` block and its Peirce 0-space the
//! bottom-right `(r-l) x (s-l)` block. The pair `(u, v)` of unitaries acts
//! on polynomials by `(k.f)(z) = f(u* z v)`.

use crate::partitions::Partition;
use crate::poly::{Matrix, MatrixPolynomial, PolyError};
use crate::scalar::Scalar;
use num_complex::Complex64;
use serde::Serialize;

/// Shape constants of the rectangular matrix triple `C^{r x s}`, `s >= r`.
///
/// The characteristic multiplicities are `a = 2` and `b = s - r`; the
/// identity `d/r = 1 + (a/2)(r-1) + b` ties them to the dimension `d = r s`
/// and is checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TriplePars {
    r: usize,
    s: usize,
}

impl TriplePars {
    pub fn new(r: usize, s: usize) -> Result<Self, PolyError> {
        if r == 0 || s < r {
            return Err(PolyError::InvalidTriple { rows: r, cols: s });
        }
        let pars = TriplePars { r, s };
        // d/r = 1 + (a/2)(r-1) + b, exact in integers since a = 2
        assert_eq!(
            pars.dim(),
            pars.rank() * (1 + (pars.rank() - 1) + pars.mult_b()),
            "multiplicity identity"
        );
        Ok(pars)
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn cols(&self) -> usize {
        self.s
    }

    /// Complex dimension `d = r s`.
    pub fn dim(&self) -> usize {
        self.r * self.s
    }

    /// Characteristic multiplicity `a` (always 2 for rectangular matrices).
    pub fn mult_a(&self) -> u64 {
        2
    }

    /// Characteristic multiplicity `b = s - r`.
    pub fn mult_b(&self) -> usize {
        self.s - self.r
    }

    /// The triple of the Peirce 0-space of a rank-`level` tripotent.
    pub fn peirce_zero(&self, level: usize) -> Result<TriplePars, PolyError> {
        if level >= self.r {
            return Err(PolyError::ProjectionOutOfRange {
                level,
                rank: self.r,
            });
        }
        TriplePars::new(self.r - level, self.s - level)
    }
}

/// The diagonal tripotent `e_[level]` as a point of the matrix space.
pub fn diagonal_tripotent<C: Scalar>(level: usize, pars: TriplePars) -> Matrix<C> {
    Matrix::from_fn(pars.rank(), pars.cols(), |i, j| {
        if i == j && i < level {
            C::one()
        } else {
            C::zero()
        }
    })
}

/// A diagonal matrix embedded in the `r x s` grid.
pub fn diagonal_point<C: Scalar>(diag: &[C], pars: TriplePars) -> Matrix<C> {
    Matrix::from_fn(pars.rank(), pars.cols(), |i, j| {
        if i == j && i < diag.len() {
            diag[i].clone()
        } else {
            C::zero()
        }
    })
}

/// Leading principal `m x m` minor as an exact polynomial, homogeneous of
/// degree `m`. Expanded over permutations; `m` is at most the triple rank.
pub fn minor_poly<C: Scalar>(m: usize, pars: TriplePars) -> Result<MatrixPolynomial<C>, PolyError> {
    if m == 0 || m > pars.rank() {
        return Err(PolyError::MinorOutOfRange {
            m,
            rank: pars.rank(),
        });
    }
    let (r, s) = (pars.rank(), pars.cols());
    let mut acc = MatrixPolynomial::zero(r, s);
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        let mut term = MatrixPolynomial::constant(
            if permutation_sign(&perm) {
                C::one()
            } else {
                -C::one()
            },
            r,
            s,
        );
        for (i, &j) in perm.iter().enumerate() {
            term = term.try_mul(&MatrixPolynomial::variable(i, j, r, s)?)?;
        }
        acc = acc.try_add(&term)?;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(acc)
}

fn permutation_sign(perm: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Conical polynomial of a partition: the product of minor powers
/// `N_1^{l1-l2} N_2^{l2-l3} ... N_r^{lr}`. Homogeneous of degree
/// `|lambda|`; on a diagonal point it evaluates to the monomial
/// `prod_i zeta_i^{lambda_i}`.
pub fn conical_poly<C: Scalar>(
    lambda: &Partition,
    pars: TriplePars,
) -> Result<MatrixPolynomial<C>, PolyError> {
    if lambda.rank() != pars.rank() {
        return Err(PolyError::PartitionRankMismatch {
            partition_rank: lambda.rank(),
            triple_rank: pars.rank(),
        });
    }
    let r = pars.rank();
    let mut acc = MatrixPolynomial::one(pars.rank(), pars.cols());
    for m in 1..=r {
        let next = if m < r { lambda.part(m) } else { 0 };
        let exp = lambda.part(m - 1) - next;
        if exp > 0 {
            acc = acc.try_mul(&minor_poly::<C>(m, pars)?.pow(exp as u32))?;
        }
    }
    Ok(acc)
}

/// Normal projection to the Peirce 0-space of `e_[level]`: evaluates at
/// `e_[level] + w` with `w` supported on the bottom-right block, returning
/// a polynomial on the `(r-level) x (s-level)` grid.
pub fn normal_project<C: Scalar>(
    f: &MatrixPolynomial<C>,
    level: usize,
) -> Result<MatrixPolynomial<C>, PolyError> {
    let (r, s) = (f.rows(), f.cols());
    if level > r {
        return Err(PolyError::ProjectionOutOfRange { level, rank: r });
    }
    let (wr, wc) = (r - level, s - level);
    let mut out = MatrixPolynomial::zero(wr, wc);
    'term: for (m, c) in f.terms() {
        // top-left diagonal variables become 1, all other variables outside
        // the bottom-right block kill the term
        let mut w_exps = vec![0u32; wr * wc];
        for (v, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (i, j) = (v / s, v % s);
            if i < level && i == j {
                continue;
            }
            if i < level || j < level {
                continue 'term;
            }
            w_exps[(i - level) * wc + (j - level)] += e;
        }
        let mono = crate::poly::Monomial::from_exps(w_exps);
        let single = monomial_poly(mono, c.clone(), wr, wc);
        out = out.try_add(&single)?;
    }
    Ok(out)
}

fn monomial_poly<C: Scalar>(
    mono: crate::poly::Monomial,
    coeff: C,
    rows: usize,
    cols: usize,
) -> MatrixPolynomial<C> {
    let mut p = MatrixPolynomial::constant(coeff, rows, cols);
    for (v, &e) in mono.exps().to_vec().iter().enumerate() {
        if e > 0 {
            let var = MatrixPolynomial::variable(v / cols, v % cols, rows, cols).expect("in grid");
            p = p.try_mul(&var.pow(e)).expect("same grid");
        }
    }
    p
}

/// Exact order of vanishing of `f` at `point`: the minimal total degree in
/// the Taylor expansion `f(point + z)`. Zero iff `f(point) != 0`; the zero
/// polynomial is rejected.
pub fn vanishing_order<C: Scalar>(
    f: &MatrixPolynomial<C>,
    point: &Matrix<C>,
) -> Result<u32, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let shifted = f.shift(point)?;
    Ok(shifted
        .min_degree()
        .expect("shift of a nonzero polynomial is nonzero"))
}

/// Action of a pair of unitaries on a float-mode polynomial:
/// `(k.f)(z) = f(u* z v)`. Degree-preserving linear substitution.
pub fn group_act(
    f: &MatrixPolynomial<Complex64>,
    u: &Matrix<Complex64>,
    v: &Matrix<Complex64>,
) -> Result<MatrixPolynomial<Complex64>, PolyError> {
    let (r, s) = (f.rows(), f.cols());
    if u.rows() != u.cols() {
        return Err(PolyError::NonSquareFactor {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    if v.rows() != v.cols() {
        return Err(PolyError::NonSquareFactor {
            rows: v.rows(),
            cols: v.cols(),
        });
    }
    if u.rows() != r || v.rows() != s {
        return Err(PolyError::PointShapeMismatch {
            rows: u.rows(),
            cols: v.rows(),
            grid_rows: r,
            grid_cols: s,
        });
    }
    // image of z_ij is the (i,j) entry of u* z v, a linear form in z
    let mut images = Vec::with_capacity(r * s);
    for i in 0..r {
        for j in 0..s {
            let mut form = MatrixPolynomial::zero(r, s);
            for p in 0..r {
                for q in 0..s {
                    let coeff = u.get(p, i).conj() * *v.get(q, j);
                    if coeff.norm() > 0.0 {
                        let var = MatrixPolynomial::variable(p, q, r, s)?;
                        form = form.try_add(&var.scale(&coeff))?;
                    }
                }
            }
            images.push(form);
        }
    }
    f.substitute(&images)
}
