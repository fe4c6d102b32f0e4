//! Subspaces of k^n with canonical RREF bases.
//!
//! The basis matrix is always in reduced row echelon form with no zero
//! rows, so two equal subspaces are structurally identical values. That
//! makes exactness checks plain equality tests.

use serde::Serialize;

use super::field::{FieldSpec, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subspace {
    ambient: usize,
    /// RREF basis, one vector per row; full row rank.
    basis: Matrix,
}

impl Subspace {
    /// Canonicalize a spanning set (rows of `spanning`).
    pub fn from_spanning(spanning: &Matrix) -> Subspace {
        let (red, rank, _) = spanning.rref();
        let mut rows = Vec::with_capacity(rank);
        for i in 0..rank {
            rows.push(red.row(i));
        }
        let basis = Matrix::from_rows(spanning.field(), rows)
            .unwrap_or_else(|_| Matrix::zero(spanning.field(), 0, spanning.cols()));
        // from_rows of an empty vec loses the column count; rebuild explicitly.
        let basis = if rank == 0 {
            Matrix::zero(spanning.field(), 0, spanning.cols())
        } else {
            basis
        };
        Subspace {
            ambient: spanning.cols(),
            basis,
        }
    }

    pub fn zero(field: FieldSpec, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(field, 0, ambient),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    /// Residue of `v` after elimination against the basis. Zero iff `v`
    /// lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field();
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            // Pivot column of basis row i is its first nonzero entry (value 1).
            let row = self.basis.row(i);
            let Some(p) = row.iter().position(|e| !f.is_zero(e)) else {
                continue;
            };
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = v[p].clone();
            for j in 0..self.ambient {
                v[j] = f.sub(&v[j], &f.mul(&factor, &row[j]));
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let f = self.field();
        self.reduce(v).iter().all(|e| f.is_zero(e))
    }

    /// True iff `other` is contained in `self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(Subspace::from_spanning(&self.basis.vstack(&other.basis)))
    }

    /// Intersection via the kernel of the stacked-basis coefficient system.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let f = self.field();
        let k = self.dim();
        let m = other.dim();
        if k == 0 || m == 0 {
            return Ok(Subspace::zero(f, self.ambient));
        }
        // Columns: u_1..u_k, -v_1..-v_m; kernel elements (a, b) satisfy
        // sum a_i u_i = sum b_j v_j.
        let coeff = self.basis.transpose().hstack(&other.basis.transpose().neg());
        let ker = kernel(&coeff);
        let mut spanning_rows = Vec::new();
        for kv in ker.basis_vectors() {
            let mut w = vec![f.zero(); self.ambient];
            for (i, a) in kv.iter().take(k).enumerate() {
                let u = self.basis.row(i);
                for j in 0..self.ambient {
                    w[j] = f.add(&w[j], &f.mul(a, &u[j]));
                }
            }
            spanning_rows.push(w);
        }
        if spanning_rows.is_empty() {
            return Ok(Subspace::zero(f, self.ambient));
        }
        Ok(Subspace::from_spanning(&Matrix::from_rows(
            f,
            spanning_rows,
        )?))
    }

    /// Image of the subspace under a matrix (basis rows times transpose).
    pub fn apply(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        if self.dim() == 0 {
            return Subspace::zero(self.field(), m.rows());
        }
        let rows: Vec<Vec<Scalar>> = self.basis_vectors().iter().map(|v| m.apply(v)).collect();
        Subspace::from_spanning(&Matrix::from_rows(self.field(), rows).unwrap())
    }
}

/// Kernel of a matrix, as a subspace of k^cols.
pub fn kernel(m: &Matrix) -> Subspace {
    let f = m.field();
    let n = m.cols();
    let (red, rank, pivots) = m.rref();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Subspace::zero(f, n);
    }
    let mut rows = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![f.zero(); n];
        v[fc] = f.one();
        for (r, &pc) in pivots.iter().enumerate().take(rank) {
            v[pc] = f.neg(red.at(r, fc));
        }
        rows.push(v);
    }
    Subspace::from_spanning(&Matrix::from_rows(f, rows).unwrap())
}

/// Image (column space) of a matrix, as a subspace of k^rows.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::from_spanning(&m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn kernel_image_trivials() {
        let f = gf(7);
        assert_eq!(kernel(&Matrix::zero(f, 2, 3)), Subspace::full(f, 3));
        assert_eq!(image(&Matrix::identity(f, 4)), Subspace::full(f, 4));
    }

    #[test]
    fn kernel_gf7_example() {
        let f = gf(7);
        let m = Matrix::from_i64(f, 2, 2, &[1, 0, 0, 0]);
        let k = kernel(&m);
        assert_eq!(k.dim(), 1);
        assert!(k.contains_vector(&[f.zero(), f.one()]));
    }

    #[test]
    fn sum_intersect_trivials() {
        let f = gf(5);
        let u = Subspace::from_spanning(&Matrix::from_i64(f, 1, 2, &[1, 3]));
        assert_eq!(u.sum(&Subspace::zero(f, 2)).unwrap(), u);
        assert_eq!(u.intersect(&Subspace::full(f, 2)).unwrap(), u);
        let e1 = Subspace::from_spanning(&Matrix::from_i64(f, 1, 2, &[1, 0]));
        let e2 = Subspace::from_spanning(&Matrix::from_i64(f, 1, 2, &[0, 1]));
        assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
    }

    #[test]
    fn sum_spans_plane_gf5() {
        let f = gf(5);
        let u = Subspace::from_spanning(&Matrix::from_i64(f, 1, 2, &[1, 1]));
        let v = Subspace::from_spanning(&Matrix::from_i64(f, 1, 2, &[1, 4]));
        assert_eq!(u.sum(&v).unwrap(), Subspace::full(f, 2));
    }

    #[test]
    fn canonical_equality() {
        let f = gf(7);
        // Same span, different spanning sets.
        let a = Subspace::from_spanning(&Matrix::from_i64(f, 2, 3, &[1, 2, 3, 2, 4, 6]));
        let b = Subspace::from_spanning(&Matrix::from_i64(f, 1, 3, &[3, 6, 9]));
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn ambient_mismatch_detected() {
        let f = gf(5);
        let u = Subspace::zero(f, 2);
        let v = Subspace::zero(f, 3);
        assert!(u.sum(&v).is_err());
        assert!(u.intersect(&v).is_err());
    }
}
