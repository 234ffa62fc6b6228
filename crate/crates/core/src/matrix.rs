//! Dense matrices over `F_{p^h}` with exact Gaussian elimination.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FElem, FieldCtx};

/// Row-major dense matrix. Arithmetic needs the owning [`FieldCtx`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FElem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveError {
    /// The coefficient matrix has rank below the number of unknowns.
    Underdetermined { rank: usize, unknowns: usize },
    /// The right-hand side is outside the column space.
    Inconsistent,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FElem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<FElem>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [FElem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[FElem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    /// Submatrix keeping the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn left_mul(&self, ctx: &FieldCtx, v: &[FElem]) -> Vec<FElem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![FElem::ZERO; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = ctx.mul_add(*o, coef, g);
            }
        }
        out
    }

    /// `row[dst] -= factor * row[src]`, starting from column `from`.
    fn eliminate(&mut self, ctx: &FieldCtx, dst: usize, src: usize, factor: FElem, from: usize) {
        let neg = ctx.neg(factor);
        let cols = self.cols;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        for c in from..cols {
            if !b[c].is_zero() {
                a[c] = ctx.mul_add(a[c], neg, b[c]);
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, ctx: &FieldCtx, r: usize, factor: FElem, from: usize) {
        for v in &mut self.row_mut(r)[from..] {
            *v = ctx.mul(*v, factor);
        }
    }

    /// In-place reduction to reduced row echelon form; returns the pivot
    /// columns. The first `pivots.len()` rows are then a basis of the row
    /// space.
    pub fn rref(&mut self, ctx: &FieldCtx) -> Vec<usize> {
        self.rref_limited(ctx, self.cols)
    }

    /// Like [`Matrix::rref`] but only searches for pivots in the first
    /// `pivot_cols` columns (used for augmented systems).
    fn rref_limited(&mut self, ctx: &FieldCtx, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(found) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, found);
            let inv = ctx.inv(self.get(row, col)).expect("pivot is nonzero");
            self.scale_row(ctx, row, inv, col);
            for r in 0..self.rows {
                if r != row {
                    let f = self.get(r, col);
                    if !f.is_zero() {
                        self.eliminate(ctx, r, row, f, col);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            self.transpose().rank(ctx)
        } else {
            self.clone().rref(ctx).len()
        }
    }

    /// A basis of the row space, as a matrix with `rank` rows.
    pub fn row_basis(&self, ctx: &FieldCtx) -> Matrix {
        let mut m = self.clone();
        let rank = m.rref(ctx).len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    /// Solves `self * x = b` for the unique `x`.
    pub fn solve(&self, ctx: &FieldCtx, b: &[FElem]) -> Result<Vec<FElem>, SolveError> {
        assert_eq!(b.len(), self.rows);
        let unknowns = self.cols;
        let mut aug = Matrix::zeros(self.rows, unknowns + 1);
        for (r, &rhs) in b.iter().enumerate() {
            aug.row_mut(r)[..unknowns].copy_from_slice(self.row(r));
            aug.set(r, unknowns, rhs);
        }
        let pivots = aug.rref_limited(ctx, unknowns);
        if aug
            .iter_rows()
            .skip(pivots.len())
            .any(|r| !r[unknowns].is_zero())
        {
            return Err(SolveError::Inconsistent);
        }
        if pivots.len() < unknowns {
            return Err(SolveError::Underdetermined {
                rank: pivots.len(),
                unknowns,
            });
        }
        Ok((0..unknowns).map(|r| aug.get(r, unknowns)).collect())
    }
}
