//! Sparse exact polynomials on the entries of a rectangular matrix space.
//!
//! Variables are the `rows x cols` matrix entries `z_ij`. Terms live in a
//! map keyed by graded-lexicographic monomials, so iteration visits terms
//! by total degree and the lowest-degree scan used by the vanishing-order
//! oracle is a single step. Coefficients are any [`Scalar`]; the exact
//! rational mode is the reference semantics and float mode exists for the
//! unitary-orbit machinery.

use crate::exec;
use crate::scalar::{factorial, Scalar};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PolyError {
    #[error("variable ({row},{col}) out of range for a {rows}x{cols} grid")]
    VariableOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("grid mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    GridMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("the zero polynomial has no vanishing order")]
    ZeroPolynomial,
    #[error("minor size {m} out of range 1..={rank}")]
    MinorOutOfRange { m: usize, rank: usize },
    #[error("partition rank {partition_rank} does not match triple rank {triple_rank}")]
    PartitionRankMismatch {
        partition_rank: usize,
        triple_rank: usize,
    },
    #[error("matrix triple needs cols >= rows >= 1, got {rows}x{cols}")]
    InvalidTriple { rows: usize, cols: usize },
    #[error("projection level {level} out of range for rank {rank}")]
    ProjectionOutOfRange { level: usize, rank: usize },
    #[error("group action needs square factors, got {rows}x{cols}")]
    NonSquareFactor { rows: usize, cols: usize },
    #[error("point shape {rows}x{cols} does not match polynomial grid {grid_rows}x{grid_cols}")]
    PointShapeMismatch {
        rows: usize,
        cols: usize,
        grid_rows: usize,
        grid_cols: usize,
    },
}

/// Exponent vector over the matrix entries, ordered by total degree first
/// and lexicographically within a degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial {
            degree: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { degree, exps }
    }

    pub fn variable(v: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[v] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Componentwise divisibility.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `alpha!` as a scalar.
    pub fn factorial<C: Scalar>(&self) -> C {
        let mut acc = C::one();
        for &e in &self.exps {
            acc = acc * factorial::<C>(e as u64);
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", self.exps)
    }
}

/// Dense rectangular matrix of scalars; doubles as a point of the matrix
/// space and as a small linear-algebra workhorse.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Matrix<C> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matmul(&self, other: &Matrix<C>) -> Matrix<C> {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = C::zero();
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix<C> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conjugate())
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl Matrix<BigRational> {
    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|q| q.to_complex())
    }
}

/// Finitely supported polynomial in the entries of a `rows x cols` matrix.
/// No zero coefficients are stored.
#[derive(Clone, PartialEq)]
pub struct MatrixPolynomial<C: Scalar> {
    rows: usize,
    cols: usize,
    terms: BTreeMap<Monomial, C>,
}

/// Parallel multiplication kicks in above this many left-hand terms.
const PAR_MUL_THRESHOLD: usize = 64;

impl<C: Scalar> MatrixPolynomial<C> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatrixPolynomial {
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(value: C, rows: usize, cols: usize) -> Self {
        let mut p = Self::zero(rows, cols);
        if !value.is_zero() {
            p.terms.insert(Monomial::unit(rows * cols), value);
        }
        p
    }

    pub fn one(rows: usize, cols: usize) -> Self {
        Self::constant(C::one(), rows, cols)
    }

    /// The coordinate `z_ij` (0-based indices).
    pub fn variable(row: usize, col: usize, rows: usize, cols: usize) -> Result<Self, PolyError> {
        if row >= rows || col >= cols {
            return Err(PolyError::VariableOutOfRange {
                row,
                col,
                rows,
                cols,
            });
        }
        let mut p = Self::zero(rows, cols);
        p.terms
            .insert(Monomial::variable(row * cols + col, rows * cols), C::one());
        Ok(p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Largest total degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Smallest total degree with a nonzero coefficient; one map lookup
    /// thanks to the graded key order.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    fn check_grid(&self, other: &Self) -> Result<(), PolyError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(PolyError::GridMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(())
    }

    fn insert_add(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, factor: &C) -> Self {
        if factor.is_zero() {
            return Self::zero(self.rows, self.cols);
        }
        let mut out = Self::zero(self.rows, self.cols);
        for (m, c) in &self.terms {
            let prod = c.clone() * factor.clone();
            if !prod.is_zero() {
                out.terms.insert(m.clone(), prod);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MatrixPolynomial<D> {
        let mut out = MatrixPolynomial::zero(self.rows, self.cols);
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_grid(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            Self::insert_add(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&other.neg())
    }

    /// Product, data-parallel over blocks of left-hand terms. Blocks are
    /// contiguous ranges of the graded key order and are merged in block
    /// order, so float results match the sequential loop bit for bit.
    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_grid(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.rows, self.cols));
        }
        let lhs: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        let rhs: Vec<(&Monomial, &C)> = other.terms.iter().collect();
        let out = if lhs.len() >= PAR_MUL_THRESHOLD {
            let nblocks = lhs.len().div_ceil(PAR_MUL_THRESHOLD / 2).min(64);
            let block = lhs.len().div_ceil(nblocks);
            let partials = exec::map_range(nblocks, |b| {
                let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
                for (ma, ca) in lhs.iter().skip(b * block).take(block) {
                    for (mb, cb) in &rhs {
                        Self::insert_add(&mut acc, ma.mul(mb), (*ca).clone() * (*cb).clone());
                    }
                }
                acc
            });
            let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
            for part in partials {
                for (m, c) in part {
                    Self::insert_add(&mut acc, m, c);
                }
            }
            acc
        } else {
            let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
            for (ma, ca) in &lhs {
                for (mb, cb) in &rhs {
                    Self::insert_add(&mut acc, ma.mul(mb), (*ca).clone() * (*cb).clone());
                }
            }
            acc
        };
        Ok(MatrixPolynomial {
            rows: self.rows,
            cols: self.cols,
            terms: out,
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.rows, self.cols);
        for _ in 0..n {
            acc = acc.try_mul(self).expect("same grid");
        }
        acc
    }

    /// Evaluates at a point of the matrix space.
    pub fn eval(&self, point: &Matrix<C>) -> Result<C, PolyError> {
        if point.rows() != self.rows || point.cols() != self.cols {
            return Err(PolyError::PointShapeMismatch {
                rows: point.rows(),
                cols: point.cols(),
                grid_rows: self.rows,
                grid_cols: self.cols,
            });
        }
        // per-variable power tables up to the needed exponent
        let nvars = self.nvars();
        let mut max_exp = vec![0u32; nvars];
        for m in self.terms.keys() {
            for (v, &e) in m.exps().iter().enumerate() {
                max_exp[v] = max_exp[v].max(e);
            }
        }
        let mut powers: Vec<Vec<C>> = Vec::with_capacity(nvars);
        for (base, &cap) in point.data.iter().zip(&max_exp) {
            let mut table = Vec::with_capacity(cap as usize + 1);
            table.push(C::one());
            for e in 1..=cap as usize {
                let prev = table[e - 1].clone();
                table.push(prev * base.clone());
            }
            powers.push(table);
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    term = term * powers[v][e as usize].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Substitutes each variable by the polynomial `images[v]`; all images
    /// must share one target grid.
    pub fn substitute(&self, images: &[MatrixPolynomial<C>]) -> Result<Self, PolyError> {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let (t_rows, t_cols) = match images.first() {
            Some(img) => (img.rows, img.cols),
            None => (self.rows, self.cols),
        };
        for img in images {
            if img.rows != t_rows || img.cols != t_cols {
                return Err(PolyError::GridMismatch {
                    left_rows: t_rows,
                    left_cols: t_cols,
                    right_rows: img.rows,
                    right_cols: img.cols,
                });
            }
        }
        let nvars = self.nvars();
        let mut max_exp = vec![0u32; nvars];
        for m in self.terms.keys() {
            for (v, &e) in m.exps().iter().enumerate() {
                max_exp[v] = max_exp[v].max(e);
            }
        }
        let mut powers: Vec<Vec<MatrixPolynomial<C>>> = Vec::with_capacity(nvars);
        for v in 0..nvars {
            let mut table = vec![MatrixPolynomial::one(t_rows, t_cols)];
            for e in 1..=max_exp[v] as usize {
                let next = table[e - 1].try_mul(&images[v])?;
                table.push(next);
            }
            powers.push(table);
        }
        let mut acc = MatrixPolynomial::zero(t_rows, t_cols);
        for (m, c) in &self.terms {
            let mut term = MatrixPolynomial::constant(c.clone(), t_rows, t_cols);
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    term = term.try_mul(&powers[v][e as usize])?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Taylor shift `z -> point + z` on the same grid.
    pub fn shift(&self, point: &Matrix<C>) -> Result<Self, PolyError> {
        if point.rows() != self.rows || point.cols() != self.cols {
            return Err(PolyError::PointShapeMismatch {
                rows: point.rows(),
                cols: point.cols(),
                grid_rows: self.rows,
                grid_cols: self.cols,
            });
        }
        let mut images = Vec::with_capacity(self.nvars());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let var = MatrixPolynomial::variable(i, j, self.rows, self.cols)?;
                let c = MatrixPolynomial::constant(point.get(i, j).clone(), self.rows, self.cols);
                images.push(var.try_add(&c)?);
            }
        }
        self.substitute(&images)
    }

    /// Fischer-Fock inner product: monomials are orthogonal with squared
    /// norm `alpha!`. Conjugate-linear in `self`.
    pub fn fischer_inner(&self, other: &Self) -> Result<C, PolyError> {
        self.check_grid(other)?;
        let mut acc = C::zero();
        // merge-join over the two sorted term maps
        let mut it_a = self.terms.iter().peekable();
        let mut it_b = other.terms.iter().peekable();
        while let (Some((ma, ca)), Some((mb, cb))) = (it_a.peek(), it_b.peek()) {
            match ma.cmp(mb) {
                Ordering::Less => {
                    it_a.next();
                }
                Ordering::Greater => {
                    it_b.next();
                }
                Ordering::Equal => {
                    let fac: C = ma.factorial();
                    acc = acc + ca.conjugate() * (*cb).clone() * fac;
                    it_a.next();
                    it_b.next();
                }
            }
        }
        Ok(acc)
    }

    pub fn fischer_norm_sq(&self) -> f64 {
        self.fischer_inner(self).expect("same grid").magnitude()
    }

    /// Applies the constant-coefficient differential operator obtained from
    /// `op` by conjugating its coefficients and replacing each variable by
    /// the corresponding partial derivative.
    pub fn apply_conj_diff(op: &Self, f: &Self) -> Result<Self, PolyError> {
        op.check_grid(f)?;
        let mut out = Self::zero(f.rows, f.cols);
        for (beta, c_op) in &op.terms {
            for (alpha, c_f) in &f.terms {
                if !beta.divides(alpha) {
                    continue;
                }
                // falling factorial alpha! / (alpha - beta)!
                let mut fall = C::one();
                let mut gamma = Vec::with_capacity(alpha.exps().len());
                for (a, b) in alpha.exps().iter().zip(beta.exps()) {
                    for k in 0..*b {
                        fall = fall * C::from_integer((a - k) as u64);
                    }
                    gamma.push(a - b);
                }
                let coeff = c_op.conjugate() * c_f.clone() * fall;
                Self::insert_add(&mut out.terms, Monomial::from_exps(gamma), coeff);
            }
        }
        Ok(out)
    }
}

impl MatrixPolynomial<BigRational> {
    /// Exact-to-float conversion; the reverse direction is deliberately
    /// not provided.
    pub fn to_complex(&self) -> MatrixPolynomial<Complex64> {
        self.map_coefficients(|q| q.to_complex())
    }
}

impl<C: Scalar> fmt::Debug for MatrixPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let (i, j) = (v / self.cols + 1, v % self.cols + 1);
                    write!(f, "*z{i}{j}")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Scalar> Add for &MatrixPolynomial<C> {
    type Output = MatrixPolynomial<C>;
    fn add(self, other: Self) -> MatrixPolynomial<C> {
        self.try_add(other).expect("grid mismatch")
    }
}

impl<C: Scalar> Sub for &MatrixPolynomial<C> {
    type Output = MatrixPolynomial<C>;
    fn sub(self, other: Self) -> MatrixPolynomial<C> {
        self.try_sub(other).expect("grid mismatch")
    }
}

impl<C: Scalar> Mul for &MatrixPolynomial<C> {
    type Output = MatrixPolynomial<C>;
    fn mul(self, other: Self) -> MatrixPolynomial<C> {
        self.try_mul(other).expect("grid mismatch")
    }
}

/// Coefficient JSON encodings: `[num, den]` for exact rationals, `[re, im]`
/// for complex floats.
pub trait CoeffRepr {
    fn coeff_json(&self) -> serde_json::Value;
}

impl CoeffRepr for BigRational {
    fn coeff_json(&self) -> serde_json::Value {
        let num = serde_json::Number::from_string_unchecked(self.numer().to_string());
        let den = serde_json::Number::from_string_unchecked(self.denom().to_string());
        serde_json::Value::Array(vec![num.into(), den.into()])
    }
}

impl CoeffRepr for Complex64 {
    fn coeff_json(&self) -> serde_json::Value {
        serde_json::json!([self.re, self.im])
    }
}

impl<C: Scalar + CoeffRepr> Serialize for MatrixPolynomial<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermRepr {
                cols: self.cols,
                monomial: m,
                coeff: c.coeff_json(),
            })?;
        }
        seq.end()
    }
}

struct TermRepr<'a> {
    cols: usize,
    monomial: &'a Monomial,
    coeff: serde_json::Value,
}

impl Serialize for TermRepr<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // exponents as [i, j, e] with 1-based matrix indices
        let exps: Vec<[u64; 3]> = self
            .monomial
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| {
                [
                    (v / self.cols + 1) as u64,
                    (v % self.cols + 1) as u64,
                    e as u64,
                ]
            })
            .collect();
        let mut st = serializer.serialize_struct("Term", 2)?;
        st.serialize_field("exponents", &exps)?;
        st.serialize_field("coeff", &self.coeff)?;
        st.end()
    }
}
