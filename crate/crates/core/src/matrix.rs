//! Dense matrices over a prime field: echelon forms, rank, kernels, solving.

use std::fmt;

use crate::error::LinalgError;
use crate::field::PrimeField;

/// Row-major matrix with canonical residues.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    field: PrimeField,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
}

/// Result of [`DenseMatrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Particular solution with every free variable set to zero.
    pub x: Vec<u64>,
    pub null_dim: usize,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            field,
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from row-major data; entries are reduced modulo p.
    pub fn from_vec(
        field: PrimeField,
        rows: usize,
        cols: usize,
        data: Vec<u64>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let p = field.modulus();
        let data = data.into_iter().map(|v| v % p).collect();
        Ok(DenseMatrix {
            rows,
            cols,
            data,
            field,
        })
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {r} has the wrong length");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v % field.modulus());
            }
        }
        m
    }

    /// Build a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has the wrong length");
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v % field.modulus());
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < self.field.modulus());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> DenseMatrix {
        let mut m = Self::zeros(self.field, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            m.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> DenseMatrix {
        let mut m = Self::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (i, &c) in idx.iter().enumerate() {
                m.set(r, i, self.get(r, c));
            }
        }
        m
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Shape(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut m = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            let dst = &mut m.data[r * m.cols..(r + 1) * m.cols];
            dst[..self.cols].copy_from_slice(self.row(r));
            dst[self.cols..].copy_from_slice(other.row(r));
        }
        Ok(m)
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut m = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * m.cols + c;
                    m.data[idx] = f.mul_add(m.data[idx], a, other.get(k, c));
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows).map(|r| self.field.dot(self.row(r), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    ///
    /// Pivots are chosen as the first nonzero entry in each column scanning
    /// rows top to bottom, so the result is deterministic.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(found, pivot_row);
            let inv = f.inv(m.get(pivot_row, col));
            for c in col..m.cols {
                let v = m.get(pivot_row, c);
                m.set(pivot_row, c, f.mul(v, inv));
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                let cols = m.cols;
                let (src, dst) = if r < pivot_row {
                    let (lo, hi) = m.data.split_at_mut(pivot_row * cols);
                    (&hi[..cols], &mut lo[r * cols..(r + 1) * cols])
                } else {
                    let (lo, hi) = m.data.split_at_mut(r * cols);
                    (&lo[pivot_row * cols..(pivot_row + 1) * cols], &mut hi[..cols])
                };
                for c in col..cols {
                    if src[c] != 0 {
                        dst[c] = f.mul_add(dst[c], neg, src[c]);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space.
    ///
    /// One vector per free column, in increasing column order; the vector for
    /// free column `f` has a 1 in position `f`, zeros in the other free
    /// positions, and `-R[i][f]` in the position of the i-th pivot.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let Rref { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(r.get(i, free));
                }
                v
            })
            .collect()
    }

    /// Solve `self * x = b`.
    pub fn solve(&self, b: &[u64]) -> Result<Solution, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let column = DenseMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&column)?;
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(LinalgError::InconsistentSystem);
        }
        let mut x = vec![0; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols);
        }
        Ok(Solution {
            x,
            null_dim: self.cols - pivots.len(),
        })
    }

    /// Determinant by elimination. Square matrices only.
    pub fn determinant(&self) -> u64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = self.field;
        let mut m = self.clone();
        let mut det = 1;
        for col in 0..m.cols {
            let Some(found) = (col..m.rows).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if found != col {
                m.swap_rows(found, col);
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for r in col + 1..m.rows {
                let factor = f.mul(m.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Indices of columns that are pivots when scanned left to right, i.e. the
    /// greedy maximal independent subset of columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }
}
