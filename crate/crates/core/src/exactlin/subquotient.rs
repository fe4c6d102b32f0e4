//! Subquotients X/Y of k^n and explicit matrices between them.
//!
//! A subquotient is a nested pair Y <= X of subspaces together with a
//! deterministic `coord_basis`: representatives in X completing Y to X.
//! Quotient coordinates of a vector are obtained by solving against the
//! combined (Y, coord) basis, so the coordinate map is linear with kernel Y.

use serde::Serialize;

use super::field::{FieldSpec, Scalar};
use super::matrix::Matrix;
use super::subspace::{image, kernel, Subspace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subquotient {
    ambient: usize,
    top: Subspace,
    bottom: Subspace,
    coord_basis: Vec<Vec<Scalar>>,
}

impl Subquotient {
    /// Build X/Y. Fails unless Y <= X.
    ///
    /// The coordinate basis is chosen deterministically: each RREF basis row
    /// of X is reduced modulo Y, and the reduction is kept whenever it
    /// extends the span of Y plus the vectors kept so far.
    pub fn new(top: Subspace, bottom: Subspace) -> Result<Subquotient> {
        if top.ambient() != bottom.ambient() {
            return Err(Error::AmbientMismatch(top.ambient(), bottom.ambient()));
        }
        if !top.contains(&bottom) {
            return Err(Error::NotNested(format!(
                "bottom (dim {}) not contained in top (dim {})",
                bottom.dim(),
                top.dim()
            )));
        }
        let f = top.field();
        let mut working = bottom.clone();
        let mut coord_basis = Vec::with_capacity(top.dim() - bottom.dim());
        for row in top.basis_vectors() {
            let reduced = bottom.reduce(&row);
            if reduced.iter().all(|e| f.is_zero(e)) {
                continue;
            }
            if working.contains_vector(&reduced) {
                continue;
            }
            working = working
                .sum(&Subspace::from_spanning(
                    &Matrix::from_rows(f, vec![reduced.clone()]).unwrap(),
                ))
                .expect("same ambient");
            coord_basis.push(reduced);
        }
        debug_assert_eq!(coord_basis.len(), top.dim() - bottom.dim());
        Ok(Subquotient {
            ambient: top.ambient(),
            top,
            bottom,
            coord_basis,
        })
    }

    /// The whole space k^n as a subquotient (full over zero).
    pub fn full_space(field: FieldSpec, ambient: usize) -> Subquotient {
        Subquotient::new(
            Subspace::full(field, ambient),
            Subspace::zero(field, ambient),
        )
        .unwrap()
    }

    pub fn zero_object(field: FieldSpec, ambient: usize) -> Subquotient {
        Subquotient::new(
            Subspace::zero(field, ambient),
            Subspace::zero(field, ambient),
        )
        .unwrap()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn top(&self) -> &Subspace {
        &self.top
    }
    pub fn bottom(&self) -> &Subspace {
        &self.bottom
    }
    pub fn dim(&self) -> usize {
        self.coord_basis.len()
    }
    pub fn field(&self) -> FieldSpec {
        self.top.field()
    }
    pub fn coord_basis(&self) -> &[Vec<Scalar>] {
        &self.coord_basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Quotient coordinates of an ambient vector lying in `top`.
    pub fn coords_of(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let f = self.field();
        if !self.top.contains_vector(v) {
            return Err(Error::NotWellDefined(
                "vector is not in the top subspace".into(),
            ));
        }
        // Solve in the combined basis (bottom rows, then coord rows); the
        // combined set is a basis of top, so the solution is unique.
        let nb = self.bottom.dim();
        let nc = self.dim();
        if nc == 0 {
            return Ok(Vec::new());
        }
        let mut cols = self.bottom.basis_vectors();
        cols.extend(self.coord_basis.iter().cloned());
        let system = Matrix::from_rows(f, cols).unwrap().transpose();
        let sol = system
            .solve(v)
            .ok_or_else(|| Error::NotWellDefined("inconsistent coordinate solve".into()))?;
        Ok(sol[nb..nb + nc].to_vec())
    }

    /// Ambient representative of a coordinate vector.
    pub fn lift(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim());
        let f = self.field();
        let mut v = vec![f.zero(); self.ambient];
        for (c, basis_vec) in coords.iter().zip(&self.coord_basis) {
            for j in 0..self.ambient {
                v[j] = f.add(&v[j], &f.mul(c, &basis_vec[j]));
            }
        }
        v
    }
}

/// A linear map between subquotients, as a matrix in canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubquotientMap {
    pub source: Subquotient,
    pub target: Subquotient,
    pub matrix: Matrix,
}

impl SubquotientMap {
    pub fn new(source: Subquotient, target: Subquotient, matrix: Matrix) -> Result<SubquotientMap> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::ShapeMismatch {
                expected_rows: target.dim(),
                expected_cols: source.dim(),
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(SubquotientMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(sq: &Subquotient) -> SubquotientMap {
        SubquotientMap {
            source: sq.clone(),
            target: sq.clone(),
            matrix: Matrix::identity(sq.field(), sq.dim()),
        }
    }

    pub fn zero(source: Subquotient, target: Subquotient) -> SubquotientMap {
        let m = Matrix::zero(source.field(), target.dim(), source.dim());
        SubquotientMap {
            source,
            target,
            matrix: m,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim() && self.matrix.rank() == self.source.dim()
    }

    pub fn invert(&self) -> Result<SubquotientMap> {
        if !self.is_iso() {
            return Err(Error::NotInvertible);
        }
        Ok(SubquotientMap {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: self.matrix.inverse()?,
        })
    }

    /// Kernel of the map, as a subspace of the source coordinate space.
    pub fn map_kernel(&self) -> Subspace {
        kernel(&self.matrix)
    }

    /// Image of the map, as a subspace of the target coordinate space.
    pub fn map_image(&self) -> Subspace {
        image(&self.matrix)
    }
}

/// Left-to-right composition: `compose(f, g)` is "f then g".
pub fn compose(f: &SubquotientMap, g: &SubquotientMap) -> Result<SubquotientMap> {
    if f.target != g.source {
        return Err(Error::SourceTargetMismatch);
    }
    Ok(SubquotientMap {
        source: f.source.clone(),
        target: g.target.clone(),
        matrix: g.matrix.mul(&f.matrix),
    })
}

/// The map induced by `ambient` between two subquotients. Checks that the
/// ambient matrix carries top into top and bottom into bottom; the error
/// names the containment that fails.
pub fn induced_map(
    ambient: &Matrix,
    source: &Subquotient,
    target: &Subquotient,
) -> Result<SubquotientMap> {
    if ambient.cols() != source.ambient() || ambient.rows() != target.ambient() {
        return Err(Error::ShapeMismatch {
            expected_rows: target.ambient(),
            expected_cols: source.ambient(),
            rows: ambient.rows(),
            cols: ambient.cols(),
        });
    }
    let top_image = source.top().apply(ambient);
    if !target.top().contains(&top_image) {
        return Err(Error::NotWellDefined(
            "image of source top is not contained in target top".into(),
        ));
    }
    let bottom_image = source.bottom().apply(ambient);
    if !target.bottom().contains(&bottom_image) {
        return Err(Error::NotWellDefined(
            "image of source bottom is not contained in target bottom".into(),
        ));
    }
    let f = source.field();
    let mut m = Matrix::zero(f, target.dim(), source.dim());
    for (j, v) in source.coord_basis().iter().enumerate() {
        let w = ambient.apply(v);
        let coords = target.coords_of(&w)?;
        for (i, c) in coords.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    SubquotientMap::new(source.clone(), target.clone(), m)
}

/// Exactness of the pair (f, g) at the middle object: image f = kernel g.
pub fn exact_at_middle(f: &SubquotientMap, g: &SubquotientMap) -> bool {
    debug_assert_eq!(f.target, g.source);
    f.map_image() == g.map_kernel()
}
