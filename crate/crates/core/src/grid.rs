//! The double-complex data model: a finite-support grid of dimensions with
//! vertical and horizontal differentials, plus validation and structural
//! transforms.
//!
//! Positions follow matrix indexing: the row index `i` increases downward,
//! the column index `r` to the right. `dv` maps A(i,r) -> A(i+1,r) and `dh`
//! maps A(i,r) -> A(i,r+1). Everything outside the stored support is the
//! zero object, and an absent matrix between supported positions is the
//! zero matrix.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::{image, kernel, FieldSpec, Matrix, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Position {
    pub i: i64,
    pub r: i64,
}

impl Position {
    pub fn new(i: i64, r: i64) -> Position {
        Position { i, r }
    }
    pub fn down(self) -> Position {
        Position::new(self.i + 1, self.r)
    }
    pub fn up(self) -> Position {
        Position::new(self.i - 1, self.r)
    }
    pub fn right(self) -> Position {
        Position::new(self.i, self.r + 1)
    }
    pub fn left(self) -> Position {
        Position::new(self.i, self.r - 1)
    }
    pub fn step(self, dir: Direction) -> Position {
        match dir {
            Direction::Horizontal => self.right(),
            Direction::Vertical => self.down(),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Horizontal => write!(f, "h"),
            Direction::Vertical => write!(f, "v"),
        }
    }
}

/// Which side of the window `complete_with_kercoker` extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleComplex {
    field: FieldSpec,
    dims: BTreeMap<Position, usize>,
    dv: BTreeMap<Position, Matrix>,
    dh: BTreeMap<Position, Matrix>,
    window: Option<(Position, Position)>, // (min corner, max corner)
}

impl DoubleComplex {
    pub fn new(
        field: FieldSpec,
        dims: BTreeMap<Position, usize>,
        dv: BTreeMap<Position, Matrix>,
        dh: BTreeMap<Position, Matrix>,
    ) -> Result<DoubleComplex> {
        let dims: BTreeMap<Position, usize> =
            dims.into_iter().filter(|&(_, d)| d > 0).collect();
        let dim_at = |p: &Position| dims.get(p).copied().unwrap_or(0);
        for (p, m) in &dv {
            let (er, ec) = (dim_at(&p.down()), dim_at(p));
            if m.rows() != er || m.cols() != ec {
                return Err(Error::ShapeMismatch {
                    expected_rows: er,
                    expected_cols: ec,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        for (p, m) in &dh {
            let (er, ec) = (dim_at(&p.right()), dim_at(p));
            if m.rows() != er || m.cols() != ec {
                return Err(Error::ShapeMismatch {
                    expected_rows: er,
                    expected_cols: ec,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        let dv = dv.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let dh = dh.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let mut c = DoubleComplex {
            field,
            dims,
            dv,
            dh,
            window: None,
        };
        c.recompute_window();
        Ok(c)
    }

    pub fn empty(field: FieldSpec) -> DoubleComplex {
        DoubleComplex {
            field,
            dims: BTreeMap::new(),
            dv: BTreeMap::new(),
            dh: BTreeMap::new(),
            window: None,
        }
    }

    fn recompute_window(&mut self) {
        let mut min = Position::new(i64::MAX, i64::MAX);
        let mut max = Position::new(i64::MIN, i64::MIN);
        let mut any = false;
        for p in self.dims.keys() {
            any = true;
            min.i = min.i.min(p.i);
            min.r = min.r.min(p.r);
            max.i = max.i.max(p.i);
            max.r = max.r.max(p.r);
        }
        self.window = if any { Some((min, max)) } else { None };
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self, p: Position) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    /// Support bounding box, if nonempty.
    pub fn window(&self) -> Option<(Position, Position)> {
        self.window
    }

    /// All positions in the support bounding box.
    pub fn positions(&self) -> Vec<Position> {
        let Some((min, max)) = self.window else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for i in min.i..=max.i {
            for r in min.r..=max.r {
                out.push(Position::new(i, r));
            }
        }
        out
    }

    /// Positions with nonzero dimension.
    pub fn support(&self) -> Vec<Position> {
        self.dims.keys().copied().collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.dims.values().sum()
    }

    /// Vertical differential out of `p` (zero matrix when absent).
    pub fn dv(&self, p: Position) -> Matrix {
        self.dv
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.field, self.dim(p.down()), self.dim(p)))
    }

    /// Horizontal differential out of `p` (zero matrix when absent).
    pub fn dh(&self, p: Position) -> Matrix {
        self.dh
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.field, self.dim(p.right()), self.dim(p)))
    }

    pub fn differential(&self, p: Position, dir: Direction) -> Matrix {
        match dir {
            Direction::Horizontal => self.dh(p),
            Direction::Vertical => self.dv(p),
        }
    }

    pub fn stored_dv(&self) -> &BTreeMap<Position, Matrix> {
        &self.dv
    }
    pub fn stored_dh(&self) -> &BTreeMap<Position, Matrix> {
        &self.dh
    }
    pub fn dims_map(&self) -> &BTreeMap<Position, usize> {
        &self.dims
    }

    /// Arrows with a nonzero source and target, for iteration.
    pub fn arrows(&self) -> Vec<(Position, Direction)> {
        let mut out = Vec::new();
        for &p in self.dims.keys() {
            if self.dim(p.right()) > 0 || self.dim(p) > 0 {
                out.push((p, Direction::Horizontal));
                out.push((p, Direction::Vertical));
            }
        }
        out
    }

    /// Violations of the complex axioms. Empty iff the complex is valid.
    /// With `anticommuting` set, squares are required to anticommute
    /// instead of commute.
    pub fn validate_signed(&self, anticommuting: bool) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for p in self.positions() {
            let vv = self.dv(p.down()).mul(&self.dv(p));
            if !vv.is_zero() {
                issues.push(ValidationIssue {
                    position: p,
                    kind: IssueKind::VerticalSquare,
                });
            }
            let hh = self.dh(p.right()).mul(&self.dh(p));
            if !hh.is_zero() {
                issues.push(ValidationIssue {
                    position: p,
                    kind: IssueKind::HorizontalSquare,
                });
            }
            let via_right = self.dv(p.right()).mul(&self.dh(p));
            let via_down = self.dh(p.down()).mul(&self.dv(p));
            let ok = if anticommuting {
                via_right.add(&via_down).is_zero()
            } else {
                via_right == via_down
            };
            if !ok {
                issues.push(ValidationIssue {
                    position: p,
                    kind: IssueKind::SquareCommutation,
                });
            }
        }
        issues
    }

    pub fn validate(&self) -> Vec<ValidationIssue> {
        self.validate_signed(false)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Negate the horizontal differentials in odd rows, converting between
    /// commuting and anticommuting conventions. Involutive.
    pub fn anticommute_toggle(&self) -> DoubleComplex {
        let mut dh = BTreeMap::new();
        for (p, m) in &self.dh {
            let m = if p.i.rem_euclid(2) == 1 { m.neg() } else { m.clone() };
            dh.insert(*p, m);
        }
        DoubleComplex {
            field: self.field,
            dims: self.dims.clone(),
            dv: self.dv.clone(),
            dh,
            window: self.window,
        }
    }

    /// Swap the roles of rows and columns: position (i,r) goes to (r,i).
    pub fn transpose(&self) -> DoubleComplex {
        let flip = |p: &Position| Position::new(p.r, p.i);
        let dims = self.dims.iter().map(|(p, &d)| (flip(p), d)).collect();
        let dv = self.dh.iter().map(|(p, m)| (flip(p), m.clone())).collect();
        let dh = self.dv.iter().map(|(p, m)| (flip(p), m.clone())).collect();
        let mut c = DoubleComplex {
            field: self.field,
            dims,
            dv,
            dh,
            window: None,
        };
        c.recompute_window();
        c
    }

    /// The dual complex: position (i,r) goes to (-i,-r) and every matrix is
    /// transposed, which reverses all arrows concretely via vector-space
    /// duality.
    pub fn reverse(&self) -> DoubleComplex {
        let dims = self
            .dims
            .iter()
            .map(|(p, &d)| (Position::new(-p.i, -p.r), d))
            .collect();
        // dv at (i,r): A(i,r) -> A(i+1,r) dualizes to an arrow placed at
        // (-i-1, -r) going down to (-i, -r).
        let dv = self
            .dv
            .iter()
            .map(|(p, m)| (Position::new(-p.i - 1, -p.r), m.transpose()))
            .collect();
        let dh = self
            .dh
            .iter()
            .map(|(p, m)| (Position::new(-p.i, -p.r - 1), m.transpose()))
            .collect();
        let mut c = DoubleComplex {
            field: self.field,
            dims,
            dv,
            dh,
            window: None,
        };
        c.recompute_window();
        c
    }

    /// Widen the window by `margin` of zero objects on all sides. The stored
    /// data does not change; only the bounding box grows.
    pub fn pad(&self, margin: i64) -> DoubleComplex {
        let mut c = self.clone();
        if let Some((min, max)) = c.window {
            c.window = Some((
                Position::new(min.i - margin, min.r - margin),
                Position::new(max.i + margin, max.r + margin),
            ));
        }
        c
    }

    /// Append a row or column of kernels (Top/Left) or cokernels
    /// (Bottom/Right) of the boundary arrows, with the inclusion or
    /// projection matrices, preserving validity.
    pub fn complete_with_kercoker(&self, side: Side) -> Result<DoubleComplex> {
        let Some((min, max)) = self.window else {
            return Ok(self.clone());
        };
        let f = self.field;
        let mut dims = self.dims.clone();
        let mut dv = self.dv.clone();
        let mut dh = self.dh.clone();
        match side {
            Side::Top => {
                let i0 = min.i;
                let mut kers: BTreeMap<i64, Subspace> = BTreeMap::new();
                for r in min.r..=max.r {
                    let p = Position::new(i0, r);
                    let k = kernel(&self.dv(p));
                    if k.dim() > 0 {
                        dims.insert(p.up(), k.dim());
                        // inclusion: columns are the kernel basis vectors
                        dv.insert(p.up(), k.basis().transpose());
                    }
                    kers.insert(r, k);
                }
                for r in min.r..=max.r {
                    let (Some(src), Some(tgt)) = (kers.get(&r), kers.get(&(r + 1))) else {
                        continue;
                    };
                    if src.dim() == 0 || tgt.dim() == 0 {
                        continue;
                    }
                    let p = Position::new(i0, r);
                    // dh restricted to kernels, written in the kernel bases.
                    let mut m = Matrix::zero(f, tgt.dim(), src.dim());
                    let tgt_cols = tgt.basis().transpose();
                    for (j, v) in src.basis_vectors().iter().enumerate() {
                        let w = self.dh(p).apply(v);
                        let sol = tgt_cols.solve(&w).ok_or_else(|| {
                            Error::InternalCheckFailed(
                                "kernel row is not closed under dh".into(),
                            )
                        })?;
                        for (i2, s) in sol.into_iter().enumerate() {
                            m.set(i2, j, s);
                        }
                    }
                    if !m.is_zero() {
                        dh.insert(Position::new(i0 - 1, r), m);
                    }
                }
            }
            Side::Bottom => {
                let i1 = max.i;
                let mut coks: BTreeMap<i64, crate::exactlin::Subquotient> = BTreeMap::new();
                for r in min.r..=max.r {
                    let p = Position::new(i1, r);
                    let n = self.dim(p);
                    let im = image(&self.dv(p.up()));
                    let cok =
                        crate::exactlin::Subquotient::new(Subspace::full(f, n), im)?;
                    if cok.dim() > 0 {
                        dims.insert(p.down(), cok.dim());
                        // projection: coordinates of each standard basis vector
                        let mut proj = Matrix::zero(f, cok.dim(), n);
                        for j in 0..n {
                            let mut e = vec![f.zero(); n];
                            e[j] = f.one();
                            let coords = cok.coords_of(&e)?;
                            for (i2, cval) in coords.into_iter().enumerate() {
                                proj.set(i2, j, cval);
                            }
                        }
                        dv.insert(p, proj);
                    }
                    coks.insert(r, cok);
                }
                for r in min.r..=max.r {
                    let (Some(src), Some(tgt)) = (coks.get(&r), coks.get(&(r + 1))) else {
                        continue;
                    };
                    if src.dim() == 0 || tgt.dim() == 0 {
                        continue;
                    }
                    let p = Position::new(i1, r);
                    let ind = crate::exactlin::induced_map(&self.dh(p), src, tgt)?;
                    if !ind.matrix.is_zero() {
                        dh.insert(Position::new(i1 + 1, r), ind.matrix);
                    }
                }
            }
            Side::Left | Side::Right => {
                let t = self.transpose();
                let side_t = if side == Side::Left { Side::Top } else { Side::Bottom };
                return Ok(t.complete_with_kercoker(side_t)?.transpose());
            }
        }
        DoubleComplex::new(f, dims, dv, dh)
    }

    /// Row exactness at `p`: the image of dh coming in equals the kernel of
    /// dh going out.
    pub fn row_exact_at(&self, p: Position) -> bool {
        image(&self.dh(p.left())) == kernel(&self.dh(p))
    }

    pub fn col_exact_at(&self, p: Position) -> bool {
        image(&self.dv(p.up())) == kernel(&self.dv(p))
    }

    pub fn exact_at(&self, p: Position, dir: Direction) -> bool {
        match dir {
            Direction::Horizontal => self.row_exact_at(p),
            Direction::Vertical => self.col_exact_at(p),
        }
    }

    /// Full row exactness across the window.
    pub fn row_exact(&self, i: i64) -> bool {
        self.positions()
            .into_iter()
            .filter(|p| p.i == i)
            .all(|p| self.row_exact_at(p))
    }

    pub fn col_exact(&self, r: i64) -> bool {
        self.positions()
            .into_iter()
            .filter(|p| p.r == r)
            .all(|p| self.col_exact_at(p))
    }

    pub fn exactness_profile(&self) -> ExactnessProfile {
        let mut row_exact = BTreeMap::new();
        let mut col_exact = BTreeMap::new();
        for p in self.positions() {
            row_exact.insert(p, self.row_exact_at(p));
            col_exact.insert(p, self.col_exact_at(p));
        }
        ExactnessProfile {
            row_exact,
            col_exact,
        }
    }

    /// Finite support always gives weak boundedness: along every
    /// antidiagonal through the window, a positive and a negative step
    /// reach positions whose donors and receptors vanish. The returned map
    /// records the witnessing offsets.
    pub fn weak_boundedness_witnesses(&self) -> BTreeMap<Position, (i64, i64)> {
        let mut out = BTreeMap::new();
        let Some((min, max)) = self.window else {
            return out;
        };
        for p in self.positions() {
            // positive n: (i-n, r+n) above the window
            let pos = (p.i - min.i + 1).max(1);
            // negative n: (i-n, r+n) below the window; n negative
            let neg = -((max.i - p.i + 1).max(1));
            out.insert(p, (pos, neg));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IssueKind {
    /// dv o dv != 0 starting at the position.
    VerticalSquare,
    /// dh o dh != 0 starting at the position.
    HorizontalSquare,
    /// The square with the position as top-left corner fails to commute
    /// (or anticommute, under that convention).
    SquareCommutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub position: Position,
    pub kind: IssueKind,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            IssueKind::VerticalSquare => "dv*dv != 0",
            IssueKind::HorizontalSquare => "dh*dh != 0",
            IssueKind::SquareCommutation => "square does not commute",
        };
        write!(f, "at {}: {}", self.position, what)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessProfile {
    pub row_exact: BTreeMap<Position, bool>,
    pub col_exact: BTreeMap<Position, bool>,
}

impl ExactnessProfile {
    pub fn all_rows_exact(&self) -> bool {
        self.row_exact.values().all(|&b| b)
    }
    pub fn all_cols_exact(&self) -> bool {
        self.col_exact.values().all(|&b| b)
    }
    /// Rows with at least one inexact position.
    pub fn inexact_rows(&self) -> Vec<i64> {
        let mut rows: Vec<i64> = self
            .row_exact
            .iter()
            .filter(|&(_, ok)| !ok)
            .map(|(p, _)| p.i)
            .collect();
        rows.dedup();
        rows
    }
    pub fn inexact_cols(&self) -> Vec<i64> {
        let mut cols: Vec<i64> = self
            .col_exact
            .iter()
            .filter(|&(_, ok)| !ok)
            .map(|(p, _)| p.r)
            .collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }
}

/// Convenience builder used by generators and tests.
#[derive(Debug, Clone)]
pub struct ComplexBuilder {
    field: FieldSpec,
    dims: BTreeMap<Position, usize>,
    dv: BTreeMap<Position, Matrix>,
    dh: BTreeMap<Position, Matrix>,
}

impl ComplexBuilder {
    pub fn new(field: FieldSpec) -> ComplexBuilder {
        ComplexBuilder {
            field,
            dims: BTreeMap::new(),
            dv: BTreeMap::new(),
            dh: BTreeMap::new(),
        }
    }

    pub fn object(mut self, i: i64, r: i64, dim: usize) -> ComplexBuilder {
        if dim > 0 {
            self.dims.insert(Position::new(i, r), dim);
        }
        self
    }

    pub fn dv(mut self, i: i64, r: i64, m: Matrix) -> ComplexBuilder {
        self.dv.insert(Position::new(i, r), m);
        self
    }

    pub fn dh(mut self, i: i64, r: i64, m: Matrix) -> ComplexBuilder {
        self.dh.insert(Position::new(i, r), m);
        self
    }

    pub fn build(self) -> Result<DoubleComplex> {
        DoubleComplex::new(self.field, self.dims, self.dv, self.dh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn elementary_block(f: FieldSpec, d: usize) -> DoubleComplex {
        let id = Matrix::identity(f, d);
        ComplexBuilder::new(f)
            .object(0, 0, d)
            .object(0, 1, d)
            .object(1, 0, d)
            .object(1, 1, d)
            .dh(0, 0, id.clone())
            .dh(1, 0, id.clone())
            .dv(0, 0, id.clone())
            .dv(0, 1, id)
            .build()
            .unwrap()
    }

    #[test]
    fn all_zero_complex_is_valid() {
        let c = DoubleComplex::empty(gf(7));
        assert!(c.is_valid());
        assert!(c.exactness_profile().all_rows_exact());
    }

    #[test]
    fn elementary_block_valid() {
        let c = elementary_block(gf(7), 2);
        assert!(c.is_valid());
    }

    #[test]
    fn anticommuting_square_detected() {
        // 1-dim objects with entries 1,1,1,-1: commutes only up to sign.
        let f = gf(7);
        let one = Matrix::from_i64(f, 1, 1, &[1]);
        let neg = Matrix::from_i64(f, 1, 1, &[-1]);
        let c = ComplexBuilder::new(f)
            .object(0, 0, 1)
            .object(0, 1, 1)
            .object(1, 0, 1)
            .object(1, 1, 1)
            .dh(0, 0, one.clone())
            .dh(1, 0, neg)
            .dv(0, 0, one.clone())
            .dv(0, 1, one)
            .build()
            .unwrap();
        let issues = c.validate();
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].position, Position::new(0, 0));
        assert_eq!(issues[0].kind, IssueKind::SquareCommutation);
        assert!(c.validate_signed(true).is_empty());
    }

    #[test]
    fn toggle_is_involutive() {
        let c = elementary_block(gf(7), 1);
        let shifted = DoubleComplex::new(
            c.field(),
            c.dims_map()
                .iter()
                .map(|(p, &d)| (Position::new(p.i + 1, p.r), d))
                .collect(),
            c.stored_dv()
                .iter()
                .map(|(p, m)| (Position::new(p.i + 1, p.r), m.clone()))
                .collect(),
            c.stored_dh()
                .iter()
                .map(|(p, m)| (Position::new(p.i + 1, p.r), m.clone()))
                .collect(),
        )
        .unwrap();
        let toggled = shifted.anticommute_toggle();
        assert!(toggled.validate_signed(true).is_empty());
        assert_eq!(toggled.anticommute_toggle(), shifted);
        let z = DoubleComplex::empty(gf(7));
        assert_eq!(z.anticommute_toggle(), z);
    }

    #[test]
    fn transpose_and_reverse_involutive() {
        let c = elementary_block(gf(7), 2);
        assert_eq!(c.transpose().transpose(), c);
        let rr = c.reverse().reverse();
        assert_eq!(rr, c);
        assert!(c.reverse().is_valid());
    }

    #[test]
    fn pad_grows_window_only() {
        let c = elementary_block(gf(7), 1).pad(2);
        assert_eq!(
            c.window(),
            Some((Position::new(-2, -2), Position::new(3, 3)))
        );
        assert!(c.is_valid());
        let z = DoubleComplex::empty(gf(7)).pad(3);
        assert_eq!(z.window(), None);
    }

    #[test]
    fn elementary_block_exact_after_padding() {
        let c = elementary_block(gf(7), 2).pad(1);
        let profile = c.exactness_profile();
        assert!(profile.all_rows_exact());
        assert!(profile.all_cols_exact());
    }

    #[test]
    fn completion_with_cokernel_of_surjection_is_zero() {
        // single surjective vertical arrow: cokernel completion adds nothing.
        let f = gf(7);
        let c = ComplexBuilder::new(f)
            .object(0, 0, 2)
            .object(1, 0, 1)
            .dv(0, 0, Matrix::from_i64(f, 1, 2, &[1, 0]))
            .build()
            .unwrap();
        let done = c.complete_with_kercoker(Side::Bottom).unwrap();
        assert_eq!(done.dim(Position::new(2, 0)), 0);
        // kernel completion on top adds the 1-dimensional kernel.
        let k = c.complete_with_kercoker(Side::Top).unwrap();
        assert_eq!(k.dim(Position::new(-1, 0)), 1);
        assert!(k.is_valid());
    }

    #[test]
    fn weak_boundedness_always_witnessed() {
        let c = elementary_block(gf(7), 1);
        let w = c.weak_boundedness_witnesses();
        assert!(!w.is_empty());
        for (_, (pos, neg)) in w {
            assert!(pos > 0);
            assert!(neg < 0);
        }
    }
}
