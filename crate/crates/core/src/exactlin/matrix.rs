//! Dense exact matrices and Gaussian elimination.
//!
//! Matrices act on column vectors: an `r x c` matrix maps `k^c -> k^r`.
//! Zero-row and zero-column matrices are legal everywhere.

use serde::Serialize;
use std::fmt;

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>, // row-major
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: entries.len(),
                cols: 1,
            });
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from integer entries, row major.
    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, ints: &[i64]) -> Matrix {
        assert_eq!(ints.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            entries: ints.iter().map(|&n| field.from_i64(n)).collect(),
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidComplex("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.at(i, j).clone());
            }
        }
        m
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = self.field.mul(e, s);
        }
        m
    }

    pub fn neg(&self) -> Matrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = self.field.neg(e);
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (e, o) in m.entries.iter_mut().zip(&other.entries) {
            *e = self.field.add(e, o);
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    /// `self * other` (ordinary matrix product).
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = self.field;
        let mut m = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(m.at(i, j), &f.mul(a, other.at(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Apply to a column vector of length `cols`, producing length `rows`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    /// Stack `other` below `self` (same column count).
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Put `other` to the right of `self` (same row count).
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zero(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.at(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form together with the rank and pivot columns.
    pub fn rref(&self) -> (Matrix, usize, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(sel) = (pivot_row..m.rows).find(|&r| !f.is_zero(m.at(r, col))) else {
                continue;
            };
            if sel != pivot_row {
                for j in 0..m.cols {
                    let a = m.at(sel, j).clone();
                    let b = m.at(pivot_row, j).clone();
                    m.set(sel, j, b);
                    m.set(pivot_row, j, a);
                }
            }
            let inv = f.inv(m.at(pivot_row, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                let v = f.mul(m.at(pivot_row, j), &inv);
                m.set(pivot_row, j, v);
            }
            for r in 0..m.rows {
                if r == pivot_row || f.is_zero(m.at(r, col)) {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in col..m.cols {
                    let v = f.sub(m.at(r, j), &f.mul(&factor, m.at(pivot_row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots.len(), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Solve `self * x = b` for one solution (free variables set to zero).
    /// Returns `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let bmat = Matrix::new(f, self.rows, 1, b.to_vec()).unwrap();
        let (red, _, pivots) = self.hstack(&bmat).rref();
        // Inconsistent iff some pivot lands in the augmented column.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = red.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (red, _, pivots) = aug.rref();
        // Invertible iff the left block reduces to the identity, i.e. all
        // pivots land in the first n columns.
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(k, &c)| k != c) {
            return Err(Error::NotInvertible);
        }
        let mut inv = Matrix::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.at(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn to_string_rows(&self) -> String {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_string_rows())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rref_identity() {
        let f = gf(7);
        let id = Matrix::identity(f, 2);
        let (r, rank, pivots) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 2);
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let f = gf(5);
        let z = Matrix::zero(f, 3, 2);
        let (r, rank, pivots) = z.rref();
        assert_eq!(r, z);
        assert_eq!(rank, 0);
        assert!(pivots.is_empty());
    }

    #[test]
    fn rref_gf7_example() {
        // [[2,4],[1,2]] over GF(7) reduces to [[1,2],[0,0]].
        let f = gf(7);
        let m = Matrix::from_i64(f, 2, 2, &[2, 4, 1, 2]);
        let (r, rank, pivots) = m.rref();
        assert_eq!(r, Matrix::from_i64(f, 2, 2, &[1, 2, 0, 0]));
        assert_eq!(rank, 1);
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn solve_and_inverse() {
        let f = gf(7);
        let m = Matrix::from_i64(f, 2, 2, &[1, 1, 0, 1]);
        let x = m.solve(&[f.from_i64(3), f.from_i64(2)]).unwrap();
        assert_eq!(m.apply(&x), vec![f.from_i64(3), f.from_i64(2)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
        let singular = Matrix::from_i64(f, 2, 2, &[1, 2, 2, 4]);
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn one_by_one_inverse_gf7() {
        let f = gf(7);
        let m = Matrix::from_i64(f, 1, 1, &[3]);
        assert_eq!(m.inverse().unwrap(), Matrix::from_i64(f, 1, 1, &[5]));
    }

    #[test]
    fn zero_dimensional_shapes() {
        let f = gf(7);
        let a = Matrix::zero(f, 0, 3);
        let b = Matrix::zero(f, 3, 0);
        assert_eq!(a.mul(&b).rows(), 0);
        let prod = b.mul(&a); // 3x3 zero
        assert!(prod.is_zero());
        assert_eq!(a.rref().1, 0);
        assert!(Matrix::zero(f, 0, 0).inverse().is_ok());
    }

    #[test]
    fn rational_rref_matches_gf_rank() {
        let q = FieldSpec::rationals();
        let f = gf(101);
        let ints = [3, -2, 5, 1, 0, 4, 4, -2, 9];
        let a = Matrix::from_i64(q, 3, 3, &ints);
        let b = Matrix::from_i64(f, 3, 3, &ints);
        assert_eq!(a.rank(), b.rank());
    }
}
