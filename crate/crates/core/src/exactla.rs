//! Dense linear algebra over a prime field `F_p`.
//!
//! Every Hom, Ext and approximation computation in the crate reduces to row
//! reduction of small matrices here. Entries are stored as canonical
//! representatives `0..p`, row-major.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit;

/// Largest characteristic accepted by the engine.
pub const MAX_CHARACTERISTIC: u32 = 97;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("characteristic {0} is not a prime in 2..={MAX_CHARACTERISTIC}")]
    BadCharacteristic(u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
}

impl TryFrom<u32> for Field {
    type Error = LinalgError;
    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Field::new(p)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

impl Field {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !prime || p > MAX_CHARACTERISTIC {
            return Err(LinalgError::BadCharacteristic(p));
        }
        Ok(Field { p })
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    /// Canonical representative of an arbitrary integer.
    pub fn elem(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        // Fermat: a^(p-2)
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

/// A dense matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over F_{}]", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major integer entries, reducing them mod p.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| field.elem(x)).collect();
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so that
    /// `r x 0` and `0 x c` shapes survive serialization.
    pub fn from_rows_shaped(
        field: Field,
        rows: usize,
        cols: usize,
        entries: &[Vec<i64>],
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows || entries.iter().any(|row| row.len() != cols) {
            return Err(LinalgError::Shape(format!(
                "expected {rows}x{cols} entries"
            )));
        }
        let data = entries.iter().flatten().map(|&x| field.elem(x)).collect();
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        let data = data.into_iter().map(|x| x % field.p).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// A single column vector.
    pub fn column(field: Field, v: &[u32]) -> Self {
        Matrix::from_vec(field, v.len(), 1, v.to_vec())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field.p, other.field.p));
        }
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.field.p;
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b) % p;
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on shape mismatch (internal invariant).
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).expect("matrix product shape")
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix { data, ..*self }.with_field(f)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix { data, ..*self }.with_field(f)
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s % f.p)).collect();
        Matrix { data, ..*self }.with_field(f)
    }

    fn with_field(self, field: Field) -> Matrix {
        Matrix { field, ..self }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack_all(field: Field, rows: usize, blocks: &[Matrix]) -> Matrix {
        blocks
            .iter()
            .fold(Matrix::zeros(field, rows, 0), |acc, b| acc.hstack(b))
    }

    pub fn vstack_all(field: Field, cols: usize, blocks: &[Matrix]) -> Matrix {
        blocks
            .iter()
            .fold(Matrix::zeros(field, 0, cols), |acc, b| acc.vstack(b))
    }

    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if r != prow {
                for k in 0..m.cols {
                    m.data.swap(r * m.cols + k, prow * m.cols + k);
                }
            }
            let inv = f.inv(m.get(prow, c));
            for k in 0..m.cols {
                let v = f.mul(m.get(prow, k), inv);
                m.set(prow, k, v);
            }
            for r2 in 0..m.rows {
                if r2 == prow {
                    continue;
                }
                let factor = m.get(r2, c);
                if factor == 0 {
                    continue;
                }
                for k in 0..m.cols {
                    let v = f.sub(m.get(r2, k), f.mul(factor, m.get(prow, k)));
                    m.set(r2, k, v);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, as the columns of a `cols x k` matrix.
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let f = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            basis.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        audit::record(pivots.len() + free.len() == self.cols, "rank-nullity");
        basis
    }

    /// Whether the matrix is square and invertible.
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        solve(self, &Matrix::identity(self.field, self.rows))
    }

    /// `self^e` for square matrices.
    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Basis of the column space, as columns (in echelon order of the
    /// transpose).
    pub fn column_space(&self) -> Matrix {
        Subspace::from_rows(&self.transpose()).basis().transpose()
    }
}

/// Outcome of solving `A X = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub rank: usize,
    /// A particular solution, when the system is consistent.
    pub particular: Option<Matrix>,
    /// Basis of `{x : A x = 0}` as columns.
    pub nullspace: Matrix,
}

/// Solves `A X = B`, returning rank, a particular solution and the nullspace.
pub fn linear_system(a: &Matrix, b: &Matrix) -> Result<LinearSystem, LinalgError> {
    if a.rows != b.rows {
        return Err(LinalgError::Shape(format!(
            "A has {} rows but B has {}",
            a.rows, b.rows
        )));
    }
    if a.field != b.field {
        return Err(LinalgError::FieldMismatch(a.field.p, b.field.p));
    }
    let nullspace = a.nullspace();
    let (particular, rank) = solve_with_rank(a, b);
    audit::record(rank + nullspace.cols == a.cols, "rank-nullity");
    if let Some(x) = &particular {
        audit::record(a.mul(x) == *b, "particular solution");
    }
    Ok(LinearSystem {
        rank,
        particular,
        nullspace,
    })
}

/// A particular solution of `A X = B` (free variables set to zero), or
/// `None` when inconsistent.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    solve_with_rank(a, b).0
}

fn solve_with_rank(a: &Matrix, b: &Matrix) -> (Option<Matrix>, usize) {
    assert_eq!(a.rows, b.rows, "solve: row mismatch");
    let aug = a.hstack(b);
    let (r, pivots) = aug.rref();
    let rank_a = pivots.iter().filter(|&&c| c < a.cols).count();
    if pivots.iter().any(|&c| c >= a.cols) {
        return (None, rank_a);
    }
    let mut x = Matrix::zeros(a.field, a.cols, b.cols);
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(pc, j, r.get(i, a.cols + j));
        }
    }
    (Some(x), rank_a)
}

/// A subspace of `F_p^n`, held as the nonzero rows of its reduced row
/// echelon form. Two subspaces are equal iff their bases are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

/// A complement of a subspace inside an ambient space, together with the
/// projection onto quotient coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Rows are vectors of the ambient space whose classes form a basis of
    /// the quotient.
    pub representatives: Matrix,
    /// `q x n` matrix sending an ambient vector (column) to its quotient
    /// coordinates.
    pub projection: Matrix,
}

/// Result of [`subspace_ops`].
#[derive(Clone, Debug)]
pub struct SubspaceComparison {
    pub sum: Subspace,
    pub intersection: Subspace,
    /// Whether the first space is contained in the second.
    pub first_in_second: bool,
    /// `(first + second) / second`
    pub quotient: Quotient,
}

impl Subspace {
    /// Span of the rows of `m`.
    pub fn from_rows(m: &Matrix) -> Self {
        let (r, pivots) = m.rref();
        let basis = r.submatrix(0..pivots.len(), 0..m.cols);
        Subspace { basis, pivots }
    }

    /// Span of the columns of `m`.
    pub fn from_cols(m: &Matrix) -> Self {
        Subspace::from_rows(&m.transpose())
    }

    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient),
            pivots: vec![],
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    /// Echelon basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace (clears pivot positions).
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.basis.field;
        let mut out = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c != 0 {
                for (k, o) in out.iter_mut().enumerate() {
                    *o = f.sub(*o, f.mul(c, self.basis.get(i, k)));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|r| self.contains(other.basis.row(r)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_rows(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let stacked = self.basis.vstack(&other.basis);
        // (a, b) with a U + b W = 0, then a U spans the intersection.
        let left_null = stacked.transpose().nullspace();
        let a = left_null.submatrix(0..self.dim(), 0..left_null.cols);
        Subspace::from_rows(&a.transpose().mul(&self.basis))
    }

    /// Quotient of the ambient space by this subspace. Representatives are
    /// the standard basis vectors at non-pivot positions.
    pub fn ambient_quotient(&self) -> Quotient {
        let f = self.basis.field;
        let n = self.ambient();
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut reps = Matrix::zeros(f, free.len(), n);
        let mut proj = Matrix::zeros(f, free.len(), n);
        for (j, &c) in free.iter().enumerate() {
            reps.set(j, c, 1);
        }
        for c in 0..n {
            let mut e = vec![0; n];
            e[c] = 1;
            let red = self.reduce(&e);
            for (j, &fc) in free.iter().enumerate() {
                proj.set(j, c, red[fc]);
            }
        }
        Quotient {
            representatives: reps,
            projection: proj,
        }
    }

    /// Quotient `self / sub`, assuming `sub ⊆ self`.
    pub fn quotient_by(&self, sub: &Subspace) -> Quotient {
        let f = self.basis.field;
        let n = self.ambient();
        // Extend an echelon basis of `sub` greedily by rows of `self`.
        let mut current = sub.clone();
        let mut reps = Matrix::zeros(f, 0, n);
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            if !current.contains(row) {
                let m = Matrix::from_vec(f, 1, n, row.to_vec());
                reps = reps.vstack(&m);
                current = current.sum(&Subspace::from_rows(&m));
            }
        }
        // Projection: solve v = s + Σ c_j rep_j on vectors of `self`; for
        // vectors outside `self` the coordinates are those of the component
        // in `self` relative to `sub + reps`.
        let gens = sub.basis.vstack(&reps).transpose();
        let mut proj = Matrix::zeros(f, reps.rows, n);
        for c in 0..n {
            let mut e = vec![0; n];
            e[c] = 1;
            if let Some(x) = solve(&gens, &Matrix::column(f, &e)) {
                for j in 0..reps.rows {
                    proj.set(j, c, x.get(sub.dim() + j, 0));
                }
            }
        }
        Quotient {
            representatives: reps,
            projection: proj,
        }
    }
}

/// Sum, intersection, inclusion and quotient of two row-spanned subspaces.
pub fn subspace_ops(basis1: &Matrix, basis2: &Matrix) -> Result<SubspaceComparison, LinalgError> {
    if basis1.cols != basis2.cols {
        return Err(LinalgError::Shape(format!(
            "ambient dimensions differ: {} vs {}",
            basis1.cols, basis2.cols
        )));
    }
    let s1 = Subspace::from_rows(basis1);
    let s2 = Subspace::from_rows(basis2);
    let sum = s1.sum(&s2);
    let intersection = s1.intersection(&s2);
    audit::record(
        sum.dim() + intersection.dim() == s1.dim() + s2.dim(),
        "dimension formula for subspaces",
    );
    let quotient = sum.quotient_by(&s2);
    Ok(SubspaceComparison {
        first_in_second: s2.contains_space(&s1),
        sum,
        intersection,
        quotient,
    })
}
