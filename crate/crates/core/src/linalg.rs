//! Dense exact linear algebra over the rationals.
//!
//! Every matrix in the crate (coefficients of a pencil, the vectors `u`
//! and `v`, transformation matrices, the word-problem system) is a
//! [`KMatrix`] of arbitrary-precision rationals. Elimination always pivots
//! on the first nonzero entry, scanning rows from the top, so results are
//! reproducible bit for bit.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The ground field.
pub type Scalar = BigRational;

/// Integer scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Rational scalar `n/d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a scalar as `p/q`, or `p` when the denominator is one.
pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

/// Parses `p/q` or `p` (optionally signed) into a canonical scalar.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational literal: {text:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::InvalidArgument(format!("zero denominator in {text:?}")));
            }
            Ok(Scalar::new(n, d))
        }
        None => Ok(Scalar::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// A dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: KMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Solution set of an affine system `A x = b`.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    /// One solution, with every free variable set to zero.
    pub particular: KMatrix,
    /// Basis of the kernel of `A`, one column vector per free variable.
    pub nullspace: Vec<KMatrix>,
}

impl KMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        KMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// The permutation matrix reversing the order of `n` coordinates.
    pub fn reversal(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, n - 1 - i)] = Scalar::one();
        }
        m
    }

    /// Unit row vector `e_i` of length `n` (0-based `i`).
    pub fn unit_row(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(1, n);
        m[(0, i)] = Scalar::one();
        m
    }

    /// Unit column vector `e_i` of length `n` (0-based `i`).
    pub fn unit_col(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m[(i, 0)] = Scalar::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(KMatrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(KMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Integer matrix literal, mostly for tests. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&x| int(x)).collect()).collect())
            .expect("ragged integer matrix literal")
    }

    pub fn col_vector(entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        KMatrix { rows: n, cols: 1, data: entries }
    }

    pub fn row_vector(entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        KMatrix { rows: 1, cols: n, data: entries }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        KMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Copy of the `rows x cols` block starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of range");
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    /// Overwrites the block at `(r0, c0)` with `block`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &KMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Rows picked (and reordered) by `idx`.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m[(k, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Columns picked (and reordered) by `idx`.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &KMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hstack {} vs {} rows", self.rows, other.rows)));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        Ok(m)
    }

    pub fn vstack(&self, other: &KMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vstack {} vs {} cols", self.cols, other.cols)));
        }
        let mut m = Self::zeros(self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        Ok(m)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Checked product.
    pub fn try_mul(&self, other: &KMatrix) -> Result<KMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form, first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        let rank = pivots.len();
        Rref { matrix: m, pivots, rank }
    }

    /// Reduces in place, only choosing pivots among the first `pivot_cols`
    /// columns. Returns the pivot columns.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].recip();
            for j in c..cols {
                let e = &self[(r, j)] * &inv;
                self[(r, j)] = e;
            }
            for i in 0..rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let d = &f * &self[(r, j)];
                    self[(i, j)] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solves `self · x = b` for a single right-hand side column.
    ///
    /// Returns `None` when `b` is not in the column space.
    pub fn solve_affine(&self, b: &KMatrix) -> Result<Option<AffineSolution>> {
        if b.rows != self.rows || b.cols != 1 {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side {}x{} for a {}x{} system",
                b.rows, b.cols, self.rows, self.cols
            )));
        }
        let n = self.cols;
        let mut aug = self.hstack(b)?;
        let pivots = aug.rref_in_place(n);
        // Inconsistent iff some zero row of A has a nonzero right-hand side.
        if (pivots.len()..aug.rows).any(|i| !aug[(i, n)].is_zero()) {
            return Ok(None);
        }
        let mut particular = KMatrix::zeros(n, 1);
        for (r, &c) in pivots.iter().enumerate() {
            particular[(c, 0)] = aug[(r, n)].clone();
        }
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let nullspace = (0..n)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = KMatrix::zeros(n, 1);
                v[(free, 0)] = Scalar::one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[(c, 0)] = -aug[(r, free)].clone();
                }
                v
            })
            .collect();
        Ok(Some(AffineSolution { particular, nullspace }))
    }

    /// Solves `self · X = rhs` for square nonsingular `self`; `None` if singular.
    pub fn solve(&self, rhs: &KMatrix) -> Result<Option<KMatrix>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("solve with {}x{} matrix", self.rows, self.cols)));
        }
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("right-hand side row count".into()));
        }
        let n = self.rows;
        let mut aug = self.hstack(rhs)?;
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Ok(None);
        }
        Ok(Some(aug.submatrix(0, n, n, rhs.cols)))
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn invert(&self) -> Result<Option<KMatrix>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("inverse of {}x{} matrix", self.rows, self.cols)));
        }
        self.solve(&KMatrix::identity(self.rows))
    }

    /// An invertible `n x n` matrix whose first row is the nonzero row vector
    /// `row`; the remaining rows are unit vectors.
    pub fn completion_with_first_row(row: &KMatrix) -> Result<KMatrix> {
        if row.rows != 1 {
            return Err(Error::DimensionMismatch("expected a row vector".into()));
        }
        let n = row.cols;
        let p = (0..n)
            .find(|&j| !row[(0, j)].is_zero())
            .ok_or_else(|| Error::InvalidArgument("zero row has no invertible completion".into()))?;
        let mut m = KMatrix::zeros(n, n);
        m.set_block(0, 0, row);
        for (r, j) in (0..n).filter(|&j| j != p).enumerate() {
            m[(r + 1, j)] = Scalar::one();
        }
        Ok(m)
    }
}

impl Index<(usize, usize)> for KMatrix {
    type Output = Scalar;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for KMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &KMatrix {
    type Output = KMatrix;
    /// Panics on incompatible shapes; use [`KMatrix::try_mul`] for a checked product.
    fn mul(self, rhs: &KMatrix) -> KMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &KMatrix {
    type Output = KMatrix;
    fn add(self, rhs: &KMatrix) -> KMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        KMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &KMatrix {
    type Output = KMatrix;
    fn sub(self, rhs: &KMatrix) -> KMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        KMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &KMatrix {
    type Output = KMatrix;
    fn neg(self) -> KMatrix {
        KMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows().iter().map(|r| r.iter().map(format_scalar).collect::<Vec<_>>())).finish()
    }
}

impl fmt::Display for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| if x.is_zero() { ".".to_string() } else { format_scalar(x) }).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Incrementally grown basis of a subspace of `K^n`, kept in echelon form
/// so membership tests cost one reduction.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    // (pivot column, normalized reduced vector)
    reduced: Vec<(usize, Vec<Scalar>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis { dim, reduced: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    pub fn is_full(&self) -> bool {
        self.reduced.len() == self.dim
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (p, b) in &self.reduced {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent of the current basis; reports whether it was added.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        // keep earlier vectors reduced at the new pivot
        for (_, b) in self.reduced.iter_mut() {
            if b[p].is_zero() {
                continue;
            }
            let f = b[p].clone();
            for (x, y) in b.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.reduced.push((p, w));
        true
    }
}
