//! Triple complexes and the generalized down-set homology constructions,
//! with the double-complex case as a consistency reduction.
//!
//! A construction is indexed by a proper nonempty up-set S of {0,1}^n
//! (the reversed-order down-set of the cube): its value at a position is
//! the intersection of the kernels of the composites along the minimal
//! vectors of S, modulo the sum of the images of the composites along the
//! complements of the maximal vectors outside S. For n = 2 the four
//! up-sets reproduce the donor, receptor, and the two classical homology
//! objects; for n = 3 there are eighteen constructions forming eight
//! orbits under coordinate permutations.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{image, induced_map, kernel, FieldSpec, Matrix, Subquotient, SubquotientMap};
use crate::grid::{Direction, DoubleComplex, Position};

pub type Position3 = (i64, i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleComplex {
    field: FieldSpec,
    dims: BTreeMap<Position3, usize>,
    // maps[axis]: differential along that axis out of a position
    maps: [BTreeMap<Position3, Matrix>; 3],
}

fn step3(p: Position3, axis: usize) -> Position3 {
    let mut q = p;
    match axis {
        0 => q.0 += 1,
        1 => q.1 += 1,
        _ => q.2 += 1,
    }
    q
}

impl TripleComplex {
    pub fn new(
        field: FieldSpec,
        dims: BTreeMap<Position3, usize>,
        d1: BTreeMap<Position3, Matrix>,
        d2: BTreeMap<Position3, Matrix>,
        d3: BTreeMap<Position3, Matrix>,
    ) -> Result<TripleComplex> {
        let dims: BTreeMap<Position3, usize> = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        let dim_at = |p: &Position3| dims.get(p).copied().unwrap_or(0);
        let maps = [d1, d2, d3];
        for (axis, m) in maps.iter().enumerate() {
            for (p, mat) in m {
                let (er, ec) = (dim_at(&step3(*p, axis)), dim_at(p));
                if mat.rows() != er || mat.cols() != ec {
                    return Err(Error::ShapeMismatch {
                        expected_rows: er,
                        expected_cols: ec,
                        rows: mat.rows(),
                        cols: mat.cols(),
                    });
                }
            }
        }
        let maps = maps.map(|m| {
            m.into_iter()
                .filter(|(_, mat)| !mat.is_zero())
                .collect::<BTreeMap<_, _>>()
        });
        Ok(TripleComplex { field, dims, maps })
    }

    pub fn empty(field: FieldSpec) -> TripleComplex {
        TripleComplex {
            field,
            dims: BTreeMap::new(),
            maps: [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()],
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self, p: Position3) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Position3> {
        self.dims.keys().copied().collect()
    }

    pub fn differential(&self, p: Position3, axis: usize) -> Matrix {
        self.maps[axis].get(&p).cloned().unwrap_or_else(|| {
            Matrix::zero(self.field, self.dim(step3(p, axis)), self.dim(p))
        })
    }

    /// Every square-zero and pairwise-commutation condition over the
    /// padded support.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let mut check_positions: Vec<Position3> = Vec::new();
        for &p in self.dims.keys() {
            for di in -1..=1 {
                for dj in -1..=1 {
                    for dk in -1..=1 {
                        check_positions.push((p.0 + di, p.1 + dj, p.2 + dk));
                    }
                }
            }
        }
        check_positions.sort();
        check_positions.dedup();
        for p in check_positions {
            for axis in 0..3 {
                let twice = self
                    .differential(step3(p, axis), axis)
                    .mul(&self.differential(p, axis));
                if !twice.is_zero() {
                    issues.push(format!("d{}^2 != 0 at {:?}", axis + 1, p));
                }
            }
            for a in 0..3 {
                for b in a + 1..3 {
                    let ab = self
                        .differential(step3(p, b), a)
                        .mul(&self.differential(p, b));
                    let ba = self
                        .differential(step3(p, a), b)
                        .mul(&self.differential(p, a));
                    if ab != ba {
                        issues.push(format!("d{} d{} != d{} d{} at {:?}", a + 1, b + 1, b + 1, a + 1, p));
                    }
                }
            }
        }
        issues
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Exactness along one axis at a position.
    pub fn axis_exact_at(&self, p: Position3, axis: usize) -> bool {
        let prev = {
            let mut q = p;
            match axis {
                0 => q.0 -= 1,
                1 => q.1 -= 1,
                _ => q.2 -= 1,
            }
            q
        };
        image(&self.differential(prev, axis)) == kernel(&self.differential(p, axis))
    }

    /// Composite of the differentials along a 0/1 displacement vector,
    /// taking axes in increasing order (path independence holds on valid
    /// complexes).
    pub fn composite_along(&self, p: Position3, v: [u8; 3]) -> Matrix {
        let mut m = Matrix::identity(self.field, self.dim(p));
        let mut cur = p;
        for axis in 0..3 {
            if v[axis] == 1 {
                m = self.differential(cur, axis).mul(&m);
                cur = step3(cur, axis);
            }
        }
        m
    }
}

// ---------------------------------------------------------------------------
// down-sets of the n-cube (stored as up-sets in the componentwise order)

/// A generalized homology construction selector: a proper nonempty up-set
/// of {0,1}^n with the zero vector excluded. Members are stored as
/// bitmasks (bit k = coordinate along axis k + 1).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DownSet {
    pub n: u8,
    pub members: Vec<u8>,
}

impl DownSet {
    pub fn new(n: u8, mut members: Vec<u8>) -> Result<DownSet> {
        assert!(n == 2 || n == 3);
        members.sort_unstable();
        members.dedup();
        let full = 1u8 << n;
        if members.is_empty() {
            return Err(Error::PreconditionUnmet("empty selection".into()));
        }
        if members.iter().any(|&m| m == 0 || m >= full) {
            return Err(Error::PreconditionUnmet(
                "members must be nonzero vectors of the cube".into(),
            ));
        }
        // up-closed: every vector above a member is a member
        for &m in &members {
            for sup in m..full {
                if sup & m == m && !members.contains(&sup) {
                    return Err(Error::PreconditionUnmet(format!(
                        "not an up-set: {sup:0num$b} missing above {m:0num$b}",
                        num = n as usize
                    )));
                }
            }
        }
        Ok(DownSet { n, members })
    }

    /// Minimal members of the up-set.
    pub fn minimal(&self) -> Vec<u8> {
        self.members
            .iter()
            .copied()
            .filter(|&m| self.members.iter().all(|&o| o == m || o & m != o))
            .collect()
    }

    /// Maximal vectors of the complement (within the whole cube,
    /// including zero).
    pub fn complement_maximal(&self) -> Vec<u8> {
        let full = 1u8 << self.n;
        let comp: Vec<u8> = (0..full).filter(|m| !self.members.contains(m)).collect();
        comp.iter()
            .copied()
            .filter(|&m| comp.iter().all(|&o| o == m || o & m != m))
            .collect()
    }

    pub fn contains_set(&self, other: &DownSet) -> bool {
        other.members.iter().all(|m| self.members.contains(m))
    }

    fn apply_perm(&self, perm: &[usize]) -> DownSet {
        let members = self
            .members
            .iter()
            .map(|&m| {
                let mut out = 0u8;
                for (k, &pk) in perm.iter().enumerate() {
                    if m & (1 << k) != 0 {
                        out |= 1 << pk;
                    }
                }
                out
            })
            .collect();
        DownSet::new(self.n, members).expect("permutation preserves up-sets")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 2 {
        vec![vec![0, 1], vec![1, 0]]
    } else {
        vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ]
    }
}

/// All proper nonempty up-sets of the n-cube together with the orbit
/// partition under coordinate permutations.
pub fn enumerate_downsets(n: u8) -> (Vec<DownSet>, Vec<Vec<DownSet>>) {
    assert!(n == 2 || n == 3);
    let full = 1u8 << n;
    let vecs: Vec<u8> = (1..full).collect();
    let mut all = Vec::new();
    for mask in 1u32..(1 << vecs.len()) {
        let members: Vec<u8> = vecs
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask & (1 << k) != 0)
            .map(|(_, &v)| v)
            .collect();
        if let Ok(ds) = DownSet::new(n, members) {
            all.push(ds);
        }
    }
    all.sort();
    all.dedup();
    let perms = permutations(n as usize);
    let mut orbits: Vec<Vec<DownSet>> = Vec::new();
    let mut seen: Vec<DownSet> = Vec::new();
    for ds in &all {
        if seen.contains(ds) {
            continue;
        }
        let mut orbit: Vec<DownSet> = perms.iter().map(|p| ds.apply_perm(p)).collect();
        orbit.sort();
        orbit.dedup();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    (all, orbits)
}

// ---------------------------------------------------------------------------
// down-set homology

/// A uniform view of double and triple complexes for the down-set
/// machinery: what is needed is the composite along a 0/1 vector and the
/// local dimension.
pub enum NComplex<'a> {
    Double(&'a DoubleComplex),
    Triple(&'a TripleComplex),
}

impl NComplex<'_> {
    pub fn arity(&self) -> u8 {
        match self {
            NComplex::Double(_) => 2,
            NComplex::Triple(_) => 3,
        }
    }

    fn field(&self) -> FieldSpec {
        match self {
            NComplex::Double(c) => c.field(),
            NComplex::Triple(t) => t.field(),
        }
    }

    fn dim(&self, p: Position3) -> usize {
        match self {
            NComplex::Double(c) => c.dim(Position::new(p.0, p.1)),
            NComplex::Triple(t) => t.dim(p),
        }
    }

    /// Composite along a displacement vector (axis 1 = rows, axis 2 =
    /// columns for double complexes).
    fn composite(&self, p: Position3, v: u8) -> Matrix {
        match self {
            NComplex::Double(c) => {
                let pos = Position::new(p.0, p.1);
                let mut m = Matrix::identity(c.field(), c.dim(pos));
                let mut cur = pos;
                if v & 1 != 0 {
                    m = c.differential(cur, Direction::Vertical).mul(&m);
                    cur = cur.down();
                }
                if v & 2 != 0 {
                    m = c.differential(cur, Direction::Horizontal).mul(&m);
                }
                m
            }
            NComplex::Triple(t) => {
                let vv = [v & 1, (v >> 1) & 1, (v >> 2) & 1];
                t.composite_along(p, vv)
            }
        }
    }

    fn shift_back(&self, p: Position3, v: u8) -> Position3 {
        let mut q = p;
        if v & 1 != 0 {
            q.0 -= 1;
        }
        if v & 2 != 0 {
            q.1 -= 1;
        }
        if v & 4 != 0 {
            q.2 -= 1;
        }
        q
    }
}

/// Numerator and denominator of a down-set construction at a position.
pub fn downset_subquotient(c: &NComplex, p: Position3, s: &DownSet) -> Result<Subquotient> {
    assert_eq!(c.arity(), s.n);
    let f = c.field();
    let n = c.dim(p);
    let mut num = crate::exactlin::Subspace::full(f, n);
    for m in s.minimal() {
        num = num.intersect(&kernel(&c.composite(p, m)))?;
    }
    let full_mask = (1u8 << s.n) - 1;
    let mut den = crate::exactlin::Subspace::zero(f, n);
    for t in s.complement_maximal() {
        let u = full_mask & !t;
        let src = c.shift_back(p, u);
        let _ = src;
        den = den.sum(&image(&c.composite(c.shift_back(p, u), u)))?;
    }
    Subquotient::new(num, den).map_err(|_| {
        Error::InternalCheckFailed("denominator not contained in the numerator".into())
    })
}

pub fn downset_homology_double(
    c: &DoubleComplex,
    p: Position,
    s: &DownSet,
) -> Result<Subquotient> {
    downset_subquotient(&NComplex::Double(c), (p.i, p.r, 0), s)
}

pub fn downset_homology_triple(
    t: &TripleComplex,
    p: Position3,
    s: &DownSet,
) -> Result<Subquotient> {
    downset_subquotient(&NComplex::Triple(t), p, s)
}

/// The intramural map from the construction of the larger up-set to that
/// of the smaller one, induced by the identity.
pub fn downset_intramural(
    c: &NComplex,
    p: Position3,
    s: &DownSet,
    s2: &DownSet,
) -> Result<SubquotientMap> {
    if !s.contains_set(s2) {
        return Err(Error::PreconditionUnmet(
            "intramural maps go from a larger up-set to a smaller one".into(),
        ));
    }
    let source = downset_subquotient(c, p, s)?;
    let target = downset_subquotient(c, p, s2)?;
    let id = Matrix::identity(c.field(), c.dim(p));
    induced_map(&id, &source, &target)
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingProbe {
    pub positions_checked: usize,
    pub nonzero: Vec<(Position3, DownSet, usize)>,
}

/// Evaluate all constructions at all positions of a triply exact finite
/// complex and report any nonzero value.
pub fn triple_vanishing_probe(t: &TripleComplex) -> Result<VanishingProbe> {
    // exactness along all three axes at every padded position
    let mut padded: Vec<Position3> = Vec::new();
    for &p in t.dims.keys() {
        for di in -1..=1i64 {
            for dj in -1..=1i64 {
                for dk in -1..=1i64 {
                    padded.push((p.0 + di, p.1 + dj, p.2 + dk));
                }
            }
        }
    }
    padded.sort();
    padded.dedup();
    for &p in &padded {
        for axis in 0..3 {
            if !t.axis_exact_at(p, axis) {
                return Err(Error::NotTriplyExact(format!(
                    "axis {} at {:?}",
                    axis + 1,
                    p
                )));
            }
        }
    }
    let (all, _) = enumerate_downsets(3);
    let view = NComplex::Triple(t);
    let mut nonzero = Vec::new();
    let mut checked = 0;
    for &p in &padded {
        for s in &all {
            let sq = downset_subquotient(&view, p, s)?;
            checked += 1;
            if sq.dim() > 0 {
                nonzero.push((p, s.clone(), sq.dim()));
            }
        }
    }
    Ok(VanishingProbe {
        positions_checked: checked,
        nonzero,
    })
}

// ---------------------------------------------------------------------------
// triple-complex builders

/// Elementary triple block: eight copies of k^d on a unit cube with
/// identity maps.
pub fn elementary_triple(field: FieldSpec, anchor: Position3, d: usize) -> TripleComplex {
    if d == 0 {
        return TripleComplex::empty(field);
    }
    let mut dims = BTreeMap::new();
    let mut maps = [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
    for dx in 0..2i64 {
        for dy in 0..2i64 {
            for dz in 0..2i64 {
                let p = (anchor.0 + dx, anchor.1 + dy, anchor.2 + dz);
                dims.insert(p, d);
                let id = Matrix::identity(field, d);
                if dx == 0 {
                    maps[0].insert(p, id.clone());
                }
                if dy == 0 {
                    maps[1].insert(p, id.clone());
                }
                if dz == 0 {
                    maps[2].insert(p, id);
                }
            }
        }
    }
    TripleComplex::new(field, dims, maps[0].clone(), maps[1].clone(), maps[2].clone())
        .expect("cube shapes are consistent")
}

/// Random extension of two triple complexes, sampling the off-diagonal
/// blocks of all three differentials from the linear constraint system.
pub fn random_extension_triple(
    a: &TripleComplex,
    q: &TripleComplex,
    seed: u64,
) -> Result<TripleComplex> {
    use rand::SeedableRng;
    let f = a.field;
    if f != q.field {
        return Err(Error::PreconditionUnmet("extension fields differ".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<Position3> = a.support();
    positions.extend(q.support());
    positions.sort();
    positions.dedup();
    let mut all = positions.clone();
    for &p in &positions {
        for axis in 0..3 {
            all.push(step3(p, axis));
            for axis2 in 0..3 {
                all.push(step3(step3(p, axis), axis2));
            }
        }
    }
    all.sort();
    all.dedup();
    let mut unknown_positions = all.clone();
    for &p in &all {
        for axis in 0..3 {
            unknown_positions.push(step3(p, axis));
        }
    }
    unknown_positions.sort();
    unknown_positions.dedup();

    // unknowns X[axis][p]: q-part of p -> a-part of p+axis
    let mut sys = super_linear::LinearSystem::new(f);
    let mut ids: [BTreeMap<Position3, usize>; 3] =
        [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
    for &p in &unknown_positions {
        for axis in 0..3 {
            ids[axis].insert(p, sys.add_unknown(a.dim(step3(p, axis)), q.dim(p)));
        }
    }
    for &p in &all {
        for axis in 0..3 {
            // d^2 = 0
            let idq = Matrix::identity(f, q.dim(p));
            let il = Matrix::identity(f, a.dim(step3(step3(p, axis), axis)));
            sys.add_equation(&[
                (
                    ids[axis][&p],
                    a.differential(step3(p, axis), axis),
                    idq.clone(),
                    false,
                ),
                (ids[axis][&step3(p, axis)], il, q.differential(p, axis), false),
            ]);
        }
        for ax in 0..3 {
            for bx in ax + 1..3 {
                let idq = Matrix::identity(f, q.dim(p));
                let corner = Matrix::identity(f, a.dim(step3(step3(p, ax), bx)));
                sys.add_equation(&[
                    (
                        ids[bx][&p],
                        a.differential(step3(p, bx), ax),
                        idq.clone(),
                        false,
                    ),
                    (
                        ids[ax][&step3(p, bx)],
                        corner.clone(),
                        q.differential(p, bx),
                        false,
                    ),
                    (
                        ids[ax][&p],
                        a.differential(step3(p, ax), bx),
                        idq,
                        true,
                    ),
                    (
                        ids[bx][&step3(p, ax)],
                        corner,
                        q.differential(p, ax),
                        true,
                    ),
                ]);
            }
        }
    }
    let sols = sys.sample(&mut rng);
    let mut dims = BTreeMap::new();
    for &p in &positions {
        let d = a.dim(p) + q.dim(p);
        if d > 0 {
            dims.insert(p, d);
        }
    }
    let block = |da: Matrix, dq: Matrix, x: &Matrix| -> Matrix {
        let rows = da.rows() + dq.rows();
        let cols = da.cols() + dq.cols();
        let mut m = Matrix::zero(f, rows, cols);
        for i in 0..da.rows() {
            for j in 0..da.cols() {
                m.set(i, j, da.at(i, j).clone());
            }
            for j in 0..x.cols() {
                m.set(i, da.cols() + j, x.at(i, j).clone());
            }
        }
        for i in 0..dq.rows() {
            for j in 0..dq.cols() {
                m.set(da.rows() + i, da.cols() + j, dq.at(i, j).clone());
            }
        }
        m
    };
    let mut out = [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
    for &p in &positions {
        for axis in 0..3 {
            let m = block(
                a.differential(p, axis),
                q.differential(p, axis),
                &sols[ids[axis][&p]],
            );
            if !m.is_zero() {
                out[axis].insert(p, m);
            }
        }
    }
    TripleComplex::new(f, dims, out[0].clone(), out[1].clone(), out[2].clone())
}

/// Small reusable homogeneous linear system over unknown matrices; mirrors
/// the double-complex version, kept private to this module.
mod super_linear {
    use super::*;
    use crate::exactlin::Scalar;
    use rand::Rng;

    pub struct LinearSystem {
        f: FieldSpec,
        shapes: Vec<(usize, usize)>,
        offsets: Vec<usize>,
        total: usize,
        rows: Vec<Vec<Scalar>>,
    }

    impl LinearSystem {
        pub fn new(f: FieldSpec) -> Self {
            LinearSystem {
                f,
                shapes: Vec::new(),
                offsets: Vec::new(),
                total: 0,
                rows: Vec::new(),
            }
        }

        pub fn add_unknown(&mut self, rows: usize, cols: usize) -> usize {
            self.shapes.push((rows, cols));
            self.offsets.push(self.total);
            self.total += rows * cols;
            self.shapes.len() - 1
        }

        pub fn add_equation(&mut self, terms: &[(usize, Matrix, Matrix, bool)]) {
            if terms.is_empty() {
                return;
            }
            let (m, n) = (terms[0].1.rows(), terms[0].2.cols());
            for a in 0..m {
                for b in 0..n {
                    let mut row = vec![self.f.zero(); self.total];
                    for (id, l, r, neg) in terms {
                        let (xr, xc) = self.shapes[*id];
                        let off = self.offsets[*id];
                        for u in 0..xr {
                            let lu = l.at(a, u);
                            if self.f.is_zero(lu) {
                                continue;
                            }
                            for v in 0..xc {
                                let mut coeff = self.f.mul(lu, r.at(v, b));
                                if *neg {
                                    coeff = self.f.neg(&coeff);
                                }
                                let idx = off + u * xc + v;
                                row[idx] = self.f.add(&row[idx], &coeff);
                            }
                        }
                    }
                    if row.iter().any(|e| !self.f.is_zero(e)) {
                        self.rows.push(row);
                    }
                }
            }
        }

        pub fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<Matrix> {
            let f = self.f;
            let sol: Vec<Scalar> = if self.total == 0 {
                Vec::new()
            } else if self.rows.is_empty() {
                (0..self.total)
                    .map(|_| match f {
                        FieldSpec::Prime(p) => Scalar::Fp(rng.gen_range(0..p)),
                        FieldSpec::Rationals => f.from_i64(rng.gen_range(-3..=3)),
                    })
                    .collect()
            } else {
                let sys = Matrix::from_rows(f, self.rows.clone()).unwrap();
                let ker = kernel(&sys);
                let mut v = vec![f.zero(); self.total];
                for bv in ker.basis_vectors() {
                    let coeff = match f {
                        FieldSpec::Prime(p) => Scalar::Fp(rng.gen_range(0..p)),
                        FieldSpec::Rationals => f.from_i64(rng.gen_range(-3..=3)),
                    };
                    for (j, e) in bv.iter().enumerate() {
                        v[j] = f.add(&v[j], &f.mul(&coeff, e));
                    }
                }
                v
            };
            self.shapes
                .iter()
                .zip(&self.offsets)
                .map(|(&(r, c), &off)| Matrix::new(f, r, c, sol[off..off + r * c].to_vec()).unwrap())
                .collect()
        }
    }
}
