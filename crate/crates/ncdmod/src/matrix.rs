//! Dense matrices over the exact rationals.
//!
//! Row-major storage; a matrix with `rows = r`, `cols = c` represents a
//! linear map from a `c`-dimensional space to an `r`-dimensional one.
//! Zero-dimensional matrices (`0×k`, `k×0`) are first-class values and
//! stand for maps to or from the zero space, so grid slices that happen
//! to be absent never need special-casing.
//!
//! Basis choices are deterministic: kernels come from the reduced row
//! echelon form with free columns in ascending order, and image bases
//! are the pivot columns of the original matrix in column order. This
//! keeps every downstream computation byte-stable.

use crate::rat::{rat, Rat};
use num::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    /// Two operators that were required to commute do not.
    NonCommuting,
    /// Polynomial factors required to be pairwise coprime are not.
    NotCoprime,
    /// The supplied polynomial does not annihilate the operator.
    NotAnnihilating,
    /// `U - id` is not nilpotent.
    NotUnipotent,
    /// A linear system `A·X = B` has no solution.
    Inconsistent,
    /// Matrix shapes do not match the operation.
    ShapeMismatch(&'static str),
    /// A square, invertible matrix was required.
    Singular,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NonCommuting => write!(f, "operators do not commute"),
            LinalgError::NotCoprime => write!(f, "polynomial factors are not pairwise coprime"),
            LinalgError::NotAnnihilating => {
                write!(f, "polynomial does not annihilate the operator")
            }
            LinalgError::NotUnipotent => write!(f, "matrix is not unipotent"),
            LinalgError::Inconsistent => write!(f, "linear system has no solution"),
            LinalgError::ShapeMismatch(what) => write!(f, "shape mismatch in {what}"),
            LinalgError::Singular => write!(f, "matrix is singular"),
        }
    }
}

impl std::error::Error for LinalgError {}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{})", self.rows, self.cols)?;
        if self.rows * self.cols > 0 {
            write!(f, " [")?;
            for r in 0..self.rows {
                write!(f, "[")?;
                for c in 0..self.cols {
                    if c > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", self.at(r, c))?;
                }
                write!(f, "]")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Matrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { Rat::one() } else { Rat::zero() })
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, value: &Rat) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { value.clone() } else { Rat::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix::new(rows, cols, entries)
    }

    /// Test helper: build from integer rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Matrix::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rat) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.at(r, c).is_one()
                    } else {
                        self.at(r, c).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn scale(&self, factor: &Rat) -> Matrix {
        Matrix::new(self.rows, self.cols, self.entries.iter().map(|x| x * factor).collect())
    }

    pub fn pow(&self, mut exp: usize) -> Matrix {
        assert!(self.is_square(), "pow needs a square matrix");
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn commutes_with(&self, other: &Matrix) -> bool {
        self * other == other * self
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |r, j| self.at(r, cols[j]).clone())
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        assert!(parts.iter().all(|p| p.rows == rows), "hstack row mismatch");
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for p in parts {
            for r in 0..rows {
                for c in 0..p.cols {
                    m.set(r, offset + c, p.at(r, c).clone());
                }
            }
            offset += p.cols;
        }
        m
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        assert!(parts.iter().all(|p| p.cols == cols), "vstack col mismatch");
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for p in parts {
            for r in 0..p.rows {
                for c in 0..cols {
                    m.set(offset + r, c, p.at(r, c).clone());
                }
            }
            offset += p.rows;
        }
        m
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for p in parts {
            for r in 0..p.rows {
                for c in 0..p.cols {
                    m.set(ro + r, co + c, p.at(r, c).clone());
                }
            }
            ro += p.rows;
            co += p.cols;
        }
        m
    }

    /// Writes `block` into `self` at the given offset, adding entries.
    pub fn add_block(&mut self, row: usize, col: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = self.at(row + r, col + c) + block.at(r, c);
                self.set(row + r, col + c, v);
            }
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pivot_row) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if pivot_row != row {
                for c in 0..m.cols {
                    let a = m.at(row, c).clone();
                    let b = m.at(pivot_row, c).clone();
                    m.set(row, c, b);
                    m.set(pivot_row, c, a);
                }
            }
            let inv = {
                let p = m.at(row, col).clone();
                Rat::one() / p
            };
            for c in col..m.cols {
                let v = m.at(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c) - &(m.at(row, c) * &factor);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one column per free variable, free columns in
    /// ascending order with a unit entry at the free position.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, Rat::one());
            for (pr, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, -r.at(pr, fc).clone());
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`, in order.
    pub fn image_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Solves `self · X = rhs` exactly. Free variables are set to zero, so
    /// the solution is deterministic; full-column-rank systems have their
    /// unique solution returned.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != rhs.rows {
            return Err(LinalgError::ShapeMismatch("solve"));
        }
        let aug = Matrix::hstack(&[self, rhs]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, r.at(pr, self.cols + c).clone());
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::ShapeMismatch("inverse"));
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        if (self * &x).is_identity() {
            Ok(x)
        } else {
            Err(LinalgError::Singular)
        }
    }

    /// Indices of standard basis vectors extending the column space of
    /// `self` to the whole ambient space, chosen greedily in index order.
    pub fn complement_columns(&self) -> Vec<usize> {
        let ambient = self.rows;
        let mut tracker = SpanTracker::new(ambient);
        for c in 0..self.cols {
            tracker.add(&self.column(c));
        }
        let mut chosen = Vec::new();
        for j in 0..ambient {
            let mut e = vec![Rat::zero(); ambient];
            e[j] = Rat::one();
            if tracker.add(&e) {
                chosen.push(j);
            }
        }
        chosen
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        let mut t = Rat::zero();
        for i in 0..self.rows {
            t += self.at(i, i).clone();
        }
        t
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows).is_zero()
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape");
        Matrix::new(
            self.rows,
            self.cols,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape");
        Matrix::new(
            self.rows,
            self.cols,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::new(self.rows, self.cols, self.entries.iter().map(|a| -a.clone()).collect())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul shape");
        let mut m = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = m.at(r, c) + &(a * b);
                    m.set(r, c, v);
                }
            }
        }
        m
    }
}

/// Incrementally tracked row space; used to pick deterministic
/// complements and cocycle representatives.
pub struct SpanTracker {
    dim: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl SpanTracker {
    pub fn new(dim: usize) -> Self {
        SpanTracker { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the tracked span; inserts and returns `true`
    /// when it is independent.
    pub fn add(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let factor = w[p].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi -= &factor * ri;
                }
            }
        }
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rat::one() / w[pivot].clone();
        for wi in w.iter_mut() {
            *wi *= &inv;
        }
        self.rows.push(w);
        self.pivots.push(pivot);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let factor = w[p].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi -= &factor * ri;
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }
}

/// Rank, kernel basis and image basis of a matrix in one call.
pub fn rank_kernel_image(m: &Matrix) -> (usize, Matrix, Matrix) {
    let (_, pivots) = m.rref();
    (pivots.len(), m.kernel_basis(), m.select_columns(&pivots))
}

/// Projection onto the cokernel of `f`: a `(rows - rank) × rows` matrix
/// `P` with `P·f = 0` whose restriction to the chosen standard-vector
/// complement is the identity. Returns the projection together with the
/// section made of those standard vectors.
pub fn cokernel_projection(f: &Matrix) -> (Matrix, Matrix) {
    let image = f.image_basis();
    let complement = f.complement_columns();
    let rank = image.cols();
    let ambient = f.rows();
    let section = Matrix::from_fn(ambient, complement.len(), |r, j| {
        if r == complement[j] {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    if ambient == 0 {
        return (Matrix::zeros(0, 0), section);
    }
    let basis = if rank == 0 { section.clone() } else { Matrix::hstack(&[&image, &section]) };
    let inv = basis.inverse().expect("image plus complement is a basis");
    let proj = Matrix::from_fn(complement.len(), ambient, |r, c| inv.at(rank + r, c).clone());
    (proj, section)
}
