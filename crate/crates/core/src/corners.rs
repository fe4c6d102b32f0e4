//! The four local homology objects at each position of a double complex,
//! the intramural and extramural maps between them, the six-term exact
//! sequence attached to every arrow, and Lambek-style kernel/image ratios.
//!
//! With the local arrows around A labeled
//!
//! ```text
//!   .  --a--> .  --->  .
//!   |b        |c       |
//!   v         v        v
//!   .  --d--> A --e--> .
//!   |         |f       |g
//!   v         v        v
//!   .  --h--> .  --->  .
//! ```
//!
//! and p = c a = d b, q = g e = h f, the four objects are
//! horizontal `Ker e / Im d`, vertical `Ker f / Im c`, receptor
//! `(Ker e n Ker f) / Im p`, and donor `Ker q / (Im c + Im d)`.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::{
    compose, image, induced_map, kernel, Matrix, Subquotient, SubquotientMap,
};
use crate::grid::{Direction, DoubleComplex, Position};
use crate::report::{SequenceReport, SequenceTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CornerKind {
    Horizontal,
    Vertical,
    Donor,
    Receptor,
}

impl fmt::Display for CornerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CornerKind::Horizontal => write!(f, "hor"),
            CornerKind::Vertical => write!(f, "ver"),
            CornerKind::Donor => write!(f, "donor"),
            CornerKind::Receptor => write!(f, "receptor"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerObject {
    pub position: Position,
    pub kind: CornerKind,
    pub value: Subquotient,
}

impl CornerObject {
    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.position)
    }
    pub fn dim(&self) -> usize {
        self.value.dim()
    }
}

/// Composite of the two differentials out of `p` (diagonal q).
fn diag_out(c: &DoubleComplex, p: Position) -> Matrix {
    c.dv(p.right()).mul(&c.dh(p))
}

/// Composite of the two differentials into `p` from the upper-left (diagonal p).
fn diag_in(c: &DoubleComplex, p: Position) -> Matrix {
    c.dv(p.up()).mul(&c.dh(p.up().left()))
}

/// One of the four corner objects at a position. Positions outside the
/// support yield the zero object.
pub fn corner(c: &DoubleComplex, p: Position, kind: CornerKind) -> CornerObject {
    let value = match kind {
        CornerKind::Horizontal => Subquotient::new(kernel(&c.dh(p)), image(&c.dh(p.left()))),
        CornerKind::Vertical => Subquotient::new(kernel(&c.dv(p)), image(&c.dv(p.up()))),
        CornerKind::Receptor => {
            let top = kernel(&c.dh(p))
                .intersect(&kernel(&c.dv(p)))
                .expect("same ambient");
            Subquotient::new(top, image(&diag_in(c, p)))
        }
        CornerKind::Donor => {
            let bottom = image(&c.dv(p.up()))
                .sum(&image(&c.dh(p.left())))
                .expect("same ambient");
            Subquotient::new(kernel(&diag_out(c, p)), bottom)
        }
    }
    .expect("corner nesting holds on a valid complex");
    CornerObject {
        position: p,
        kind,
        value,
    }
}

/// The four intramural arrows at one position: receptor -> horizontal,
/// receptor -> vertical, horizontal -> donor, vertical -> donor. All are
/// induced by the identity of the ambient object.
pub fn intramural(
    c: &DoubleComplex,
    p: Position,
    from: CornerKind,
    to: CornerKind,
) -> Result<SubquotientMap> {
    use CornerKind::*;
    let ok = matches!(
        (from, to),
        (Receptor, Horizontal) | (Receptor, Vertical) | (Horizontal, Donor) | (Vertical, Donor)
    );
    if !ok {
        return Err(Error::InvalidPair(from.to_string(), to.to_string()));
    }
    let s = corner(c, p, from);
    let t = corner(c, p, to);
    let id = Matrix::identity(c.field(), c.dim(p));
    induced_map(&id, &s.value, &t.value)
}

/// The composite receptor -> donor at one position.
pub fn intramural_receptor_to_donor(c: &DoubleComplex, p: Position) -> Result<SubquotientMap> {
    let a = intramural(c, p, CornerKind::Receptor, CornerKind::Horizontal)?;
    let b = intramural(c, p, CornerKind::Horizontal, CornerKind::Donor)?;
    compose(&a, &b)
}

/// The extramural map donor(p) -> receptor(p + dir) induced by the
/// differential in that direction.
pub fn extramural(c: &DoubleComplex, p: Position, dir: Direction) -> Result<SubquotientMap> {
    let s = corner(c, p, CornerKind::Donor);
    let t = corner(c, p.step(dir), CornerKind::Receptor);
    induced_map(&c.differential(p, dir), &s.value, &t.value)
}

/// The induced map between classical homologies across an arrow: a
/// horizontal arrow induces vertical-homology -> vertical-homology, a
/// vertical arrow horizontal -> horizontal.
pub fn induced_homology_map(
    c: &DoubleComplex,
    p: Position,
    dir: Direction,
) -> Result<SubquotientMap> {
    let kind = match dir {
        Direction::Horizontal => CornerKind::Vertical,
        Direction::Vertical => CornerKind::Horizontal,
    };
    let s = corner(c, p, kind);
    let t = corner(c, p.step(dir), kind);
    induced_map(&c.differential(p, dir), &s.value, &t.value)
}

/// Same map, built as intramural . extramural . intramural. Equality with
/// [`induced_homology_map`] is the factorization property.
pub fn induced_homology_map_factored(
    c: &DoubleComplex,
    p: Position,
    dir: Direction,
) -> Result<SubquotientMap> {
    let kind = match dir {
        Direction::Horizontal => CornerKind::Vertical,
        Direction::Vertical => CornerKind::Horizontal,
    };
    let first = intramural(c, p, kind, CornerKind::Donor)?;
    let mid = extramural(c, p, dir)?;
    let last = intramural(c, p.step(dir), CornerKind::Receptor, kind)?;
    compose(&compose(&first, &mid)?, &last)
}

/// Which classical homology appears in the six-term sequence of an arrow:
/// the one perpendicular to the arrow.
fn salamander_kind(dir: Direction) -> CornerKind {
    match dir {
        Direction::Horizontal => CornerKind::Horizontal,
        Direction::Vertical => CornerKind::Vertical,
    }
}

fn flank_positions(p: Position, dir: Direction) -> (Position, Position) {
    match dir {
        // C above A, D below B for a horizontal arrow A -> B.
        Direction::Horizontal => (p.up(), p.right().down()),
        // C left of A, D right of B for a vertical arrow A -> B.
        Direction::Vertical => (p.left(), p.down().right()),
    }
}

fn flank_dir(dir: Direction) -> Direction {
    match dir {
        Direction::Horizontal => Direction::Vertical,
        Direction::Vertical => Direction::Horizontal,
    }
}

/// The six-term sequence attached to the arrow at `p` in direction `dir`:
///
/// ```text
/// donor(C) -> hom(A) -> donor(A) -> receptor(B) -> hom(B) -> receptor(D)
/// ```
///
/// where the outer maps are composites through receptor(A) and donor(B).
/// Exactness is verified at the four interior terms.
pub fn salamander(c: &DoubleComplex, p: Position, dir: Direction) -> Result<SequenceReport> {
    salamander_with_kind(c, p, dir, salamander_kind(dir))
}

/// The same shape built with the other homology kind. For a matching kind
/// this is the exact sequence; for the mismatched kind the middle three
/// maps compose to the induced homology map instead of zero.
pub fn salamander_with_kind(
    c: &DoubleComplex,
    p: Position,
    dir: Direction,
    kind: CornerKind,
) -> Result<SequenceReport> {
    let b = p.step(dir);
    let (cpos, dpos) = flank_positions(p, dir);
    let fdir = flank_dir(dir);

    let c_donor = corner(c, cpos, CornerKind::Donor);
    let a_hom = corner(c, p, kind);
    let a_donor = corner(c, p, CornerKind::Donor);
    let b_receptor = corner(c, b, CornerKind::Receptor);
    let b_hom = corner(c, b, kind);
    let d_receptor = corner(c, dpos, CornerKind::Receptor);

    // donor(C) -> receptor(A) -> hom(A)
    let m1 = compose(
        &extramural(c, cpos, fdir)?,
        &intramural(c, p, CornerKind::Receptor, kind)?,
    )?;
    let m2 = intramural(c, p, kind, CornerKind::Donor)?;
    let m3 = extramural(c, p, dir)?;
    let m4 = intramural(c, b, CornerKind::Receptor, kind)?;
    // hom(B) -> donor(B) -> receptor(D)
    let m5 = compose(
        &intramural(c, b, kind, CornerKind::Donor)?,
        &extramural(c, b, fdir)?,
    )?;

    let terms = vec![
        SequenceTerm::new(c_donor.label(), Some(cpos), c_donor.value),
        SequenceTerm::new(a_hom.label(), Some(p), a_hom.value),
        SequenceTerm::new(a_donor.label(), Some(p), a_donor.value),
        SequenceTerm::new(b_receptor.label(), Some(b), b_receptor.value),
        SequenceTerm::new(b_hom.label(), Some(b), b_hom.value),
        SequenceTerm::new(d_receptor.label(), Some(dpos), d_receptor.value),
    ];
    let trace = vec![
        format!("extramural {cpos} {fdir}, then intramural receptor->{kind} at {p}"),
        format!("intramural {kind}->donor at {p}"),
        format!("extramural {p} {dir}"),
        format!("intramural receptor->{kind} at {b}"),
        format!("intramural {kind}->donor at {b}, then extramural {b} {fdir}"),
    ];
    Ok(SequenceReport::assemble(
        format!("salamander {dir} at {p}"),
        terms,
        vec![m1, m2, m3, m4, m5],
        trace,
    ))
}

/// Kernel ratio of the commuting square with top-left corner `p`:
/// `Ker f / (Ker a + Ker b)` with f the diagonal composite.
pub fn kernel_ratio(c: &DoubleComplex, p: Position) -> Subquotient {
    let top = kernel(&diag_out(c, p));
    let bottom = kernel(&c.dh(p))
        .sum(&kernel(&c.dv(p)))
        .expect("same ambient");
    Subquotient::new(top, bottom).expect("kernels of the factors lie in the diagonal kernel")
}

/// Image ratio of the commuting square with bottom-right corner `p`:
/// `(Im c n Im d) / Im f`.
pub fn image_ratio(c: &DoubleComplex, p: Position) -> Subquotient {
    let top = image(&c.dv(p.up()))
        .intersect(&image(&c.dh(p.left())))
        .expect("same ambient");
    let bottom = image(&diag_in(c, p));
    Subquotient::new(top, bottom).expect("diagonal image lies in both single-step images")
}

/// All arrows of the complex whose six-term sequences are worth checking:
/// both directions out of every window position.
pub fn all_salamanders(c: &DoubleComplex) -> Result<Vec<SequenceReport>> {
    let mut out = Vec::new();
    for p in c.positions() {
        out.push(salamander(c, p, Direction::Horizontal)?);
        out.push(salamander(c, p, Direction::Vertical)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;
    use crate::grid::ComplexBuilder;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn elementary(f: FieldSpec, d: usize) -> DoubleComplex {
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

    /// Single vertical identity arrow B -> B', everything else zero.
    fn identity_vertical(f: FieldSpec, d: usize) -> DoubleComplex {
        ComplexBuilder::new(f)
            .object(0, 0, d)
            .object(1, 0, d)
            .dv(0, 0, Matrix::identity(f, d))
            .build()
            .unwrap()
    }

    #[test]
    fn zero_complex_corners_vanish() {
        let c = DoubleComplex::empty(gf(7));
        for kind in [
            CornerKind::Horizontal,
            CornerKind::Vertical,
            CornerKind::Donor,
            CornerKind::Receptor,
        ] {
            assert_eq!(corner(&c, Position::new(3, -2), kind).dim(), 0);
        }
    }

    #[test]
    fn elementary_block_corners_vanish() {
        let c = elementary(gf(7), 2);
        for p in c.pad(1).positions() {
            for kind in [
                CornerKind::Horizontal,
                CornerKind::Vertical,
                CornerKind::Donor,
                CornerKind::Receptor,
            ] {
                assert_eq!(corner(&c, p, kind).dim(), 0, "{kind} at {p}");
            }
        }
        // and every extramural map is 0 -> 0
        for p in c.positions() {
            assert_eq!(extramural(&c, p, Direction::Horizontal).unwrap().matrix.rows(), 0);
        }
    }

    #[test]
    fn identity_vertical_arrow_counterexample() {
        // Receptor at the source is 0, horizontal homology is all of B, and
        // the maps receptor->hor at B and ver->donor at B have the form 0 -> B.
        let f = gf(7);
        let d = 3;
        let c = identity_vertical(f, d);
        let b = Position::new(0, 0);
        assert_eq!(corner(&c, b, CornerKind::Receptor).dim(), 0);
        assert_eq!(corner(&c, b, CornerKind::Horizontal).dim(), d);
        let m1 = intramural(&c, b, CornerKind::Receptor, CornerKind::Horizontal).unwrap();
        assert_eq!(m1.source.dim(), 0);
        assert_eq!(m1.target.dim(), d);
        assert!(!m1.is_iso());
        let m2 = intramural(&c, b, CornerKind::Vertical, CornerKind::Donor).unwrap();
        assert_eq!(m2.source.dim(), 0);
        assert_eq!(m2.target.dim(), d);
    }

    #[test]
    fn invalid_intramural_pair_rejected() {
        let c = elementary(gf(7), 1);
        assert!(matches!(
            intramural(&c, Position::new(0, 0), CornerKind::Donor, CornerKind::Receptor),
            Err(Error::InvalidPair(_, _))
        ));
    }

    #[test]
    fn zero_complex_salamander_trivially_exact() {
        let c = DoubleComplex::empty(gf(7));
        let rep = salamander(&c, Position::new(0, 0), Direction::Horizontal).unwrap();
        assert!(rep.all_exact());
        assert!(rep.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn elementary_block_salamanders_exact() {
        let c = elementary(gf(7), 2);
        for rep in all_salamanders(&c).unwrap() {
            assert!(rep.all_exact(), "{rep}");
        }
    }

    #[test]
    fn mismatched_salamander_composes_to_induced_map() {
        // Horizontal identity arrow: the vertical-homology-shaped sequence is
        // not exact; its middle three maps compose to the nonzero induced map.
        let f = gf(7);
        let c = ComplexBuilder::new(f)
            .object(0, 0, 2)
            .object(0, 1, 2)
            .dh(0, 0, Matrix::identity(f, 2))
            .build()
            .unwrap();
        let p = Position::new(0, 0);
        let rep = salamander_with_kind(&c, p, Direction::Horizontal, CornerKind::Vertical).unwrap();
        let composite = compose(&compose(&rep.maps[1], &rep.maps[2]).unwrap(), &rep.maps[3]).unwrap();
        let induced = induced_homology_map(&c, p, Direction::Horizontal).unwrap();
        assert_eq!(composite.matrix, induced.matrix);
        assert!(!composite.is_zero());
        assert!(!rep.all_exact());
    }

    #[test]
    fn induced_map_across_identity_staircase_is_iso() {
        let f = gf(7);
        let c = ComplexBuilder::new(f)
            .object(0, 0, 2)
            .object(0, 1, 2)
            .dh(0, 0, Matrix::identity(f, 2))
            .build()
            .unwrap();
        let m = induced_homology_map(&c, Position::new(0, 0), Direction::Horizontal).unwrap();
        assert_eq!(m.source.dim(), 2);
        assert!(m.is_iso());
    }

    #[test]
    fn ratios_trivial_cases() {
        let f = gf(7);
        let z = DoubleComplex::empty(f);
        assert_eq!(kernel_ratio(&z, Position::new(0, 0)).dim(), 0);
        assert_eq!(image_ratio(&z, Position::new(0, 0)).dim(), 0);
        // identity square: both ratios vanish because the diagonal is an iso.
        let c = elementary(f, 2);
        assert_eq!(kernel_ratio(&c, Position::new(0, 0)).dim(), 0);
        assert_eq!(image_ratio(&c, Position::new(1, 1)).dim(), 0);
    }
}
