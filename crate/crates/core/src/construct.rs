//! Instance builders and decompositions: elementary exact blocks,
//! staircases with prescribed inexact lines, tensor complexes, chain-map
//! fills, random extensions, snake and sharp-3x3 inputs, and the peeling
//! of finite exact complexes into elementary blocks.
//!
//! Every builder is a deterministic function of its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{image, kernel, FieldSpec, Matrix, Scalar, Subquotient};
use crate::grid::{ComplexBuilder, DoubleComplex, Position};

// ---------------------------------------------------------------------------
// elementary blocks

/// An elementary exact block: four copies of k^d with identity maps,
/// anchored at its top-left position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ElementaryBlock {
    pub anchor: Position,
    pub dim: usize,
}

/// Build the four-copy identity block at `anchor`.
pub fn elementary(field: FieldSpec, anchor: Position, d: usize) -> DoubleComplex {
    if d == 0 {
        return DoubleComplex::empty(field);
    }
    let id = Matrix::identity(field, d);
    ComplexBuilder::new(field)
        .object(anchor.i, anchor.r, d)
        .object(anchor.i, anchor.r + 1, d)
        .object(anchor.i + 1, anchor.r, d)
        .object(anchor.i + 1, anchor.r + 1, d)
        .dh(anchor.i, anchor.r, id.clone())
        .dh(anchor.i + 1, anchor.r, id.clone())
        .dv(anchor.i, anchor.r, id.clone())
        .dv(anchor.i, anchor.r + 1, id)
        .build()
        .expect("elementary block shapes are consistent")
}

/// Positionwise direct sum of two complexes over the same field.
pub fn direct_sum(a: &DoubleComplex, b: &DoubleComplex) -> DoubleComplex {
    let f = a.field();
    assert_eq!(f, b.field());
    let mut dims = BTreeMap::new();
    let mut positions: Vec<Position> = a.support();
    positions.extend(b.support());
    positions.sort();
    positions.dedup();
    for &p in &positions {
        dims.insert(p, a.dim(p) + b.dim(p));
    }
    let block = |ma: Matrix, mb: Matrix| -> Matrix {
        let rows = ma.rows() + mb.rows();
        let cols = ma.cols() + mb.cols();
        let mut m = Matrix::zero(f, rows, cols);
        for i in 0..ma.rows() {
            for j in 0..ma.cols() {
                m.set(i, j, ma.at(i, j).clone());
            }
        }
        for i in 0..mb.rows() {
            for j in 0..mb.cols() {
                m.set(ma.rows() + i, ma.cols() + j, mb.at(i, j).clone());
            }
        }
        m
    };
    let mut dv = BTreeMap::new();
    let mut dh = BTreeMap::new();
    for &p in &positions {
        let mv = block(a.dv(p), b.dv(p));
        if !mv.is_zero() {
            dv.insert(p, mv);
        }
        let mh = block(a.dh(p), b.dh(p));
        if !mh.is_zero() {
            dh.insert(p, mh);
        }
    }
    DoubleComplex::new(f, dims, dv, dh).expect("blocks keep shapes consistent")
}

// ---------------------------------------------------------------------------
// randomness helpers

fn random_scalar(rng: &mut ChaCha8Rng, f: FieldSpec) -> Scalar {
    match f {
        FieldSpec::Prime(p) => Scalar::Fp(rng.gen_range(0..p)),
        FieldSpec::Rationals => f.from_i64(rng.gen_range(-3..=3)),
    }
}

pub(crate) fn random_matrix(rng: &mut ChaCha8Rng, f: FieldSpec, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols).map(|_| random_scalar(rng, f)).collect();
    Matrix::new(f, rows, cols, entries).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, f: FieldSpec, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, f, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// Conjugate every object by a random change of basis. Preserves validity
/// and all homological data up to isomorphism in each coordinate space.
pub fn conjugate(rng: &mut ChaCha8Rng, c: &DoubleComplex) -> DoubleComplex {
    let f = c.field();
    let mut basis: BTreeMap<Position, Matrix> = BTreeMap::new();
    for p in c.support() {
        basis.insert(p, random_invertible(rng, f, c.dim(p)));
    }
    let u = |p: Position| -> Matrix {
        basis
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::identity(f, c.dim(p)))
    };
    let mut dv = BTreeMap::new();
    let mut dh = BTreeMap::new();
    for p in c.support() {
        let inv = u(p).inverse().unwrap();
        let mv = u(p.down()).mul(&c.dv(p)).mul(&inv);
        if !mv.is_zero() {
            dv.insert(p, mv);
        }
        let mh = u(p.right()).mul(&c.dh(p)).mul(&inv);
        if !mh.is_zero() {
            dh.insert(p, mh);
        }
    }
    DoubleComplex::new(f, c.dims_map().clone(), dv, dh).expect("conjugation keeps shapes")
}

// ---------------------------------------------------------------------------
// linear constraint systems (for extensions, chain-map fills, commutants)

/// Homogeneous linear constraints over a family of unknown matrices, solved
/// by sampling a random element of the kernel.
struct LinearConstraints {
    f: FieldSpec,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
    rows: Vec<Vec<Scalar>>,
}

impl LinearConstraints {
    fn new(f: FieldSpec) -> LinearConstraints {
        LinearConstraints {
            f,
            shapes: Vec::new(),
            offsets: Vec::new(),
            total: 0,
            rows: Vec::new(),
        }
    }

    fn add_unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.shapes.push((rows, cols));
        self.offsets.push(self.total);
        self.total += rows * cols;
        self.shapes.len() - 1
    }

    /// Require `sum_k sign_k * L_k * X_{id_k} * R_k = 0`.
    fn add_equation(&mut self, terms: &[(usize, &Matrix, &Matrix, bool)]) {
        if terms.is_empty() {
            return;
        }
        let (m, n) = {
            let (_, l, r, _) = &terms[0];
            (l.rows(), r.cols())
        };
        for a in 0..m {
            for b in 0..n {
                let mut row = vec![self.f.zero(); self.total];
                for (id, l, r, negate) in terms {
                    let (xr, xc) = self.shapes[*id];
                    let off = self.offsets[*id];
                    debug_assert_eq!(l.cols(), xr);
                    debug_assert_eq!(r.rows(), xc);
                    for u in 0..xr {
                        let lu = l.at(a, u);
                        if self.f.is_zero(lu) {
                            continue;
                        }
                        for v in 0..xc {
                            let mut coeff = self.f.mul(lu, r.at(v, b));
                            if *negate {
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

    /// Sample a random solution (zero is always a solution).
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<Matrix> {
        let f = self.f;
        let sol: Vec<Scalar> = if self.total == 0 {
            Vec::new()
        } else if self.rows.is_empty() {
            (0..self.total).map(|_| random_scalar(rng, f)).collect()
        } else {
            let sys = Matrix::from_rows(f, self.rows.clone()).unwrap();
            let ker = kernel(&sys);
            let mut v = vec![f.zero(); self.total];
            for basis_vec in ker.basis_vectors() {
                let coeff = random_scalar(rng, f);
                for (j, e) in basis_vec.iter().enumerate() {
                    v[j] = f.add(&v[j], &f.mul(&coeff, e));
                }
            }
            v
        };
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| {
                Matrix::new(f, r, c, sol[off..off + r * c].to_vec()).unwrap()
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// staircases with prescribed inexact lines

/// One end of a staircase: the row or column whose exactness it breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LineBreak {
    Row(i64),
    Col(i64),
}

/// A finite staircase of identity maps running up-right. Exactness fails
/// exactly at its two ends: the upper-right end breaks `top`, the
/// lower-left end breaks `bottom`. `anchor` fixes the free coordinate
/// (the column of the top end for row breaks, the row for column breaks).
pub fn staircase(
    field: FieldSpec,
    d: usize,
    top: LineBreak,
    bottom: LineBreak,
    anchor: i64,
) -> Result<DoubleComplex> {
    if d == 0 {
        return Ok(DoubleComplex::empty(field));
    }
    // Sources S_t = (i0 + t, c0 - t). The top end is either a source with
    // only a vertical arrow (breaks its row) or an extra sink reached
    // horizontally (breaks its column); dually at the bottom.
    let (i0, c0, top_has_h) = match top {
        LineBreak::Row(i) => (i, anchor, false),
        LineBreak::Col(c) => (anchor, c - 1, true),
    };
    let (t_last, bottom_is_source) = match bottom {
        LineBreak::Row(j) => {
            if j <= i0 {
                return Err(Error::PreconditionUnmet(format!(
                    "staircase bottom row {j} must lie below the top row {i0}"
                )));
            }
            (j - i0 - 1, false)
        }
        LineBreak::Col(c) => {
            if c > c0 {
                return Err(Error::PreconditionUnmet(format!(
                    "staircase bottom column {c} must lie left of the top column"
                )));
            }
            (c0 - c, true)
        }
    };
    let id = || Matrix::identity(field, d);
    let mut b = ComplexBuilder::new(field);
    for t in 0..=t_last {
        let p = Position::new(i0 + t, c0 - t);
        b = b.object(p.i, p.r, d);
        let has_h = t > 0 || top_has_h;
        let has_v = t < t_last || !bottom_is_source;
        if has_h {
            b = b.object(p.i, p.r + 1, d).dh(p.i, p.r, id());
        }
        if has_v {
            b = b.object(p.i + 1, p.r, d).dv(p.i, p.r, id());
        }
    }
    b.build()
}

// ---------------------------------------------------------------------------
// chain complexes and tensor products

/// A finite chain complex: dims[t] objects with d: t -> t+1.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>, // maps[t]: dims[t] -> dims[t+1]
}

impl ChainComplex {
    pub fn is_complex(&self) -> bool {
        self.maps
            .windows(2)
            .all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn is_exact(&self) -> bool {
        let f = self.field;
        for t in 0..self.dims.len() {
            let din = if t == 0 {
                Matrix::zero(f, self.dims[0], 0)
            } else {
                self.maps[t - 1].clone()
            };
            let dout = if t + 1 == self.dims.len() {
                Matrix::zero(f, 0, self.dims[t])
            } else {
                self.maps[t].clone()
            };
            if image(&din) != kernel(&dout) {
                return false;
            }
        }
        true
    }
}

/// Random chain complex of the given length. Exact complexes are sums of
/// two-term identity blocks conjugated by random bases; general ones get
/// differentials sampled from the kernel of the composite-zero constraint.
pub fn random_chain(
    rng: &mut ChaCha8Rng,
    field: FieldSpec,
    len: usize,
    max_dim: usize,
    exact: bool,
) -> ChainComplex {
    assert!(len >= 1);
    if exact {
        // e[t] identity blocks spanning positions (t, t+1).
        let e: Vec<usize> = (0..len.saturating_sub(1))
            .map(|_| rng.gen_range(0..=max_dim.max(1).min(2)))
            .collect();
        let dim_at = |t: usize| -> usize {
            let from_prev = if t > 0 { e[t - 1] } else { 0 };
            let from_here = if t < e.len() { e[t] } else { 0 };
            from_prev + from_here
        };
        let dims: Vec<usize> = (0..len).map(dim_at).collect();
        let mut maps = Vec::new();
        for t in 0..len - 1 {
            // source ordering: (e[t-1] part, e[t] part); target: (e[t], e[t+1]).
            let mut m = Matrix::zero(field, dims[t + 1], dims[t]);
            let src_off = if t > 0 { e[t - 1] } else { 0 };
            for k in 0..e[t] {
                m.set(k, src_off + k, field.one());
            }
            maps.push(m);
        }
        let basis: Vec<Matrix> = dims
            .iter()
            .map(|&n| random_invertible(rng, field, n))
            .collect();
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(t, m)| {
                basis[t + 1]
                    .mul(&m)
                    .mul(&basis[t].inverse().unwrap())
            })
            .collect();
        ChainComplex { field, dims, maps }
    } else {
        let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
        let mut maps: Vec<Matrix> = Vec::new();
        for t in 0..len - 1 {
            let prev = if t == 0 {
                Matrix::zero(field, dims[0], 0)
            } else {
                maps[t - 1].clone()
            };
            // sample d with d * prev = 0
            let mut sys = LinearConstraints::new(field);
            let x = sys.add_unknown(dims[t + 1], dims[t]);
            let idl = Matrix::identity(field, dims[t + 1]);
            if prev.cols() > 0 {
                sys.add_equation(&[(x, &idl, &prev, false)]);
            }
            maps.push(sys.sample(rng).remove(x));
        }
        ChainComplex { field, dims, maps }
    }
}

fn kronecker(f: FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zero(f, a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.at(i, j);
            if f.is_zero(aij) {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    m.set(
                        i * b.rows() + k,
                        j * b.cols() + l,
                        f.mul(aij, b.at(k, l)),
                    );
                }
            }
        }
    }
    m
}

/// Tensor-product double complex: A(i,r) = P_i (x) Q_r with dv = dP (x) id
/// and dh = id (x) dQ. Exact P gives exact columns, exact Q exact rows.
pub fn tensor_complex(p: &ChainComplex, q: &ChainComplex) -> DoubleComplex {
    let f = p.field;
    let mut b = ComplexBuilder::new(f);
    for (i, &pi) in p.dims.iter().enumerate() {
        for (r, &qr) in q.dims.iter().enumerate() {
            b = b.object(i as i64, r as i64, pi * qr);
        }
    }
    for i in 0..p.dims.len() {
        for r in 0..q.dims.len() {
            if i + 1 < p.dims.len() {
                let m = kronecker(f, &p.maps[i], &Matrix::identity(f, q.dims[r]));
                if !m.is_zero() {
                    b = b.dv(i as i64, r as i64, m);
                }
            }
            if r + 1 < q.dims.len() {
                let m = kronecker(f, &Matrix::identity(f, p.dims[i]), &q.maps[r]);
                if !m.is_zero() {
                    b = b.dh(i as i64, r as i64, m);
                }
            }
        }
    }
    b.build().expect("tensor shapes are consistent")
}

// ---------------------------------------------------------------------------
// generator specs

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GeneratorMode {
    /// Tensor of two random chain complexes, each optionally exact.
    Tensor { rows_exact: bool, cols_exact: bool },
    /// Iterated random extensions of elementary blocks.
    ExExtensions { count: usize },
    /// Random row complexes joined by vertical chain maps sampled from the
    /// commuting / square-zero solution space.
    ChainMapFill,
    /// Two-row diagram shaped for the snake lemma.
    SnakeInstance,
    /// Three-row diagram shaped for the sharp 3x3 lemma (kernels on top of
    /// an epimorphic chain map between exact rows).
    Sharp3x3Instance,
    /// Sum of staircases and elementary blocks breaking exactly the listed
    /// rows and columns.
    NonexactLines { rows: Vec<i64>, cols: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub max_dim: usize,
    pub mode: GeneratorMode,
}

impl GeneratorSpec {
    pub fn new(seed: u64, rows: usize, cols: usize, max_dim: usize, mode: GeneratorMode) -> Self {
        GeneratorSpec {
            seed,
            rows,
            cols,
            max_dim,
            mode,
        }
    }
}

/// Deterministically generate a complex from a spec.
pub fn generate(field: FieldSpec, spec: &GeneratorSpec) -> Result<DoubleComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let c = match &spec.mode {
        GeneratorMode::Tensor {
            rows_exact,
            cols_exact,
        } => {
            let p = random_chain(&mut rng, field, spec.rows.max(1), spec.max_dim, *cols_exact);
            let q = random_chain(&mut rng, field, spec.cols.max(1), spec.max_dim, *rows_exact);
            tensor_complex(&p, &q)
        }
        GeneratorMode::ExExtensions { count } => {
            let mut acc = DoubleComplex::empty(field);
            for _ in 0..*count {
                let i = rng.gen_range(0..spec.rows.max(2) as i64 - 1);
                let r = rng.gen_range(0..spec.cols.max(2) as i64 - 1);
                let d = rng.gen_range(1..=spec.max_dim.max(1));
                let block = elementary(field, Position::new(i, r), d);
                acc = random_extension(&acc, &block, rng.gen())?;
            }
            acc
        }
        GeneratorMode::ChainMapFill => chain_map_fill(&mut rng, field, spec.rows, spec.cols, spec.max_dim)?,
        GeneratorMode::SnakeInstance => snake_instance(&mut rng, field, spec.max_dim),
        GeneratorMode::Sharp3x3Instance => sharp_instance(&mut rng, field, spec.max_dim),
        GeneratorMode::NonexactLines { rows, cols } => {
            nonexact_lines(&mut rng, field, rows, cols, spec.rows, spec.cols, spec.max_dim)?
        }
    };
    Ok(c)
}

fn chain_map_fill(
    rng: &mut ChaCha8Rng,
    field: FieldSpec,
    rows: usize,
    cols: usize,
    max_dim: usize,
) -> Result<DoubleComplex> {
    let rows = rows.max(1);
    let cols = cols.max(1);
    let row_complexes: Vec<ChainComplex> = (0..rows)
        .map(|_| random_chain(rng, field, cols, max_dim, false))
        .collect();
    let mut b = ComplexBuilder::new(field);
    for (i, rc) in row_complexes.iter().enumerate() {
        for (r, &d) in rc.dims.iter().enumerate() {
            b = b.object(i as i64, r as i64, d);
        }
        for (r, m) in rc.maps.iter().enumerate() {
            if !m.is_zero() {
                b = b.dh(i as i64, r as i64, m.clone());
            }
        }
    }
    // Sample verticals row by row: chain-map condition with the rows plus
    // composite-zero with the previous verticals. Both are linear.
    let mut prev: Vec<Matrix> = Vec::new();
    for i in 0..rows.saturating_sub(1) {
        let top = &row_complexes[i];
        let bot = &row_complexes[i + 1];
        let mut sys = LinearConstraints::new(field);
        let ids: Vec<usize> = (0..cols)
            .map(|r| sys.add_unknown(bot.dims[r], top.dims[r]))
            .collect();
        for r in 0..cols - 1 {
            // bot.d * v_r = v_{r+1} * top.d
            let idl = Matrix::identity(field, bot.dims[r + 1]);
            let idr = Matrix::identity(field, top.dims[r]);
            sys.add_equation(&[
                (ids[r], &bot.maps[r], &idr, false),
                (ids[r + 1], &idl, &top.maps[r], true),
            ]);
        }
        if !prev.is_empty() {
            for r in 0..cols {
                // v_r * prev_r = 0
                let idl = Matrix::identity(field, bot.dims[r]);
                if prev[r].cols() > 0 {
                    sys.add_equation(&[(ids[r], &idl, &prev[r], false)]);
                }
            }
        }
        let sols = sys.sample(rng);
        for (r, id) in ids.iter().enumerate() {
            let m = sols[*id].clone();
            if !m.is_zero() {
                b = b.dv(i as i64, r as i64, m);
            }
        }
        prev = sols;
    }
    b.build()
}

/// Exact row with the shape 0 -> X1 -> X2 -> X3 -> 0, exact at X2, X3
/// (X1 may carry homology).
fn snake_top_row(rng: &mut ChaCha8Rng, field: FieldSpec, max_dim: usize) -> ChainComplex {
    // identity blocks (X1->X2), (X2->X3) plus a free part at X1
    let a = rng.gen_range(0..=max_dim.max(1));
    let bsz = rng.gen_range(0..=max_dim.max(1));
    let free = rng.gen_range(0..=1usize);
    let dims = vec![a + free, a + bsz, bsz];
    let mut m0 = Matrix::zero(field, dims[1], dims[0]);
    for k in 0..a {
        m0.set(k, k, field.one());
    }
    let mut m1 = Matrix::zero(field, dims[2], dims[1]);
    for k in 0..bsz {
        m1.set(k, a + k, field.one());
    }
    let basis: Vec<Matrix> = dims.iter().map(|&n| random_invertible(rng, field, n)).collect();
    let maps = vec![
        basis[1].mul(&m0).mul(&basis[0].inverse().unwrap()),
        basis[2].mul(&m1).mul(&basis[1].inverse().unwrap()),
    ];
    ChainComplex { field, dims, maps }
}

/// Generate a snake input: top row exact at X2, X3 (with X2 -> X3 epi),
/// bottom row exact at Y1, Y2 (with Y1 -> Y2 mono), and random commuting
/// verticals. Rows 0 and 1, columns 0..3.
pub fn snake_instance(rng: &mut ChaCha8Rng, field: FieldSpec, max_dim: usize) -> DoubleComplex {
    let top = snake_top_row(rng, field, max_dim);
    // bottom: mirror image (mono at the left end, free part at Y3).
    let bot = {
        let b = rng.gen_range(0..=max_dim.max(1));
        let c = rng.gen_range(0..=max_dim.max(1));
        let free = rng.gen_range(0..=1usize);
        let dims = vec![b, b + c, c + free];
        let mut m0 = Matrix::zero(field, dims[1], dims[0]);
        for k in 0..b {
            m0.set(k, k, field.one());
        }
        let mut m1 = Matrix::zero(field, dims[2], dims[1]);
        for k in 0..c {
            m1.set(k, b + k, field.one());
        }
        let basis: Vec<Matrix> = dims.iter().map(|&n| random_invertible(rng, field, n)).collect();
        let maps = vec![
            basis[1].mul(&m0).mul(&basis[0].inverse().unwrap()),
            basis[2].mul(&m1).mul(&basis[1].inverse().unwrap()),
        ];
        ChainComplex {
            field,
            dims,
            maps,
        }
    };
    // verticals from the commutant
    let mut sys = LinearConstraints::new(field);
    let ids: Vec<usize> = (0..3)
        .map(|r| sys.add_unknown(bot.dims[r], top.dims[r]))
        .collect();
    for r in 0..2 {
        let idl = Matrix::identity(field, bot.dims[r + 1]);
        let idr = Matrix::identity(field, top.dims[r]);
        sys.add_equation(&[
            (ids[r], &bot.maps[r], &idr, false),
            (ids[r + 1], &idl, &top.maps[r], true),
        ]);
    }
    let sols = sys.sample(rng);
    let mut b = ComplexBuilder::new(field);
    for r in 0..3 {
        b = b.object(0, r as i64, top.dims[r]).object(1, r as i64, bot.dims[r]);
    }
    for r in 0..2 {
        if !top.maps[r].is_zero() {
            b = b.dh(0, r as i64, top.maps[r].clone());
        }
        if !bot.maps[r].is_zero() {
            b = b.dh(1, r as i64, bot.maps[r].clone());
        }
    }
    for r in 0..3 {
        if !sols[ids[r]].is_zero() {
            b = b.dv(0, r as i64, sols[ids[r]].clone());
        }
    }
    b.build().expect("snake instance shapes")
}

/// Generate a sharp 3x3 input: random short-exact rows 1 and 2 with an
/// epimorphic chain map between them, kernels appended on top as row 0.
pub fn sharp_instance(rng: &mut ChaCha8Rng, field: FieldSpec, max_dim: usize) -> DoubleComplex {
    // Short exact row template 0 -> A -> B -> C -> 0.
    let short_exact = |rng: &mut ChaCha8Rng| -> ChainComplex {
        let a = rng.gen_range(0..=max_dim.max(1));
        let c = rng.gen_range(0..=max_dim.max(1));
        let dims = vec![a, a + c, c];
        let mut m0 = Matrix::zero(field, dims[1], dims[0]);
        for k in 0..a {
            m0.set(k, k, field.one());
        }
        let mut m1 = Matrix::zero(field, dims[2], dims[1]);
        for k in 0..c {
            m1.set(k, a + k, field.one());
        }
        let basis: Vec<Matrix> = dims.iter().map(|&n| random_invertible(rng, field, n)).collect();
        ChainComplex {
            field,
            dims: dims.clone(),
            maps: vec![
                basis[1].mul(&m0).mul(&basis[0].inverse().unwrap()),
                basis[2].mul(&m1).mul(&basis[1].inverse().unwrap()),
            ],
        }
    };
    let bottom = short_exact(rng);
    let extra = short_exact(rng);
    // middle = bottom (+) extra, conjugated; verticals = projection onto bottom.
    let mid_dims: Vec<usize> = (0..3).map(|r| bottom.dims[r] + extra.dims[r]).collect();
    let mut mid_maps = Vec::new();
    for r in 0..2 {
        let mut m = Matrix::zero(field, mid_dims[r + 1], mid_dims[r]);
        for i in 0..bottom.dims[r + 1] {
            for j in 0..bottom.dims[r] {
                m.set(i, j, bottom.maps[r].at(i, j).clone());
            }
        }
        for i in 0..extra.dims[r + 1] {
            for j in 0..extra.dims[r] {
                m.set(
                    bottom.dims[r + 1] + i,
                    bottom.dims[r] + j,
                    extra.maps[r].at(i, j).clone(),
                );
            }
        }
        mid_maps.push(m);
    }
    let basis: Vec<Matrix> = mid_dims
        .iter()
        .map(|&n| random_invertible(rng, field, n))
        .collect();
    let mid_maps: Vec<Matrix> = mid_maps
        .into_iter()
        .enumerate()
        .map(|(r, m)| basis[r + 1].mul(&m).mul(&basis[r].inverse().unwrap()))
        .collect();
    let proj: Vec<Matrix> = (0..3)
        .map(|r| {
            let mut p = Matrix::zero(field, bottom.dims[r], mid_dims[r]);
            for k in 0..bottom.dims[r] {
                p.set(k, k, field.one());
            }
            p.mul(&basis[r].inverse().unwrap())
        })
        .collect();
    let mut b = ComplexBuilder::new(field);
    for r in 0..3usize {
        b = b
            .object(1, r as i64, mid_dims[r])
            .object(2, r as i64, bottom.dims[r]);
    }
    for r in 0..2usize {
        if !mid_maps[r].is_zero() {
            b = b.dh(1, r as i64, mid_maps[r].clone());
        }
        if !bottom.maps[r].is_zero() {
            b = b.dh(2, r as i64, bottom.maps[r].clone());
        }
    }
    for r in 0..3usize {
        if !proj[r].is_zero() {
            b = b.dv(1, r as i64, proj[r].clone());
        }
    }
    let two_rows = b.build().expect("sharp instance shapes");
    // Kernel row on top becomes row 0.
    let completed = two_rows
        .complete_with_kercoker(crate::grid::Side::Top)
        .expect("kernel completion");
    completed
}

/// Sum of staircases and elementary blocks whose inexact lines are exactly
/// the listed rows and columns.
pub fn nonexact_lines(
    rng: &mut ChaCha8Rng,
    field: FieldSpec,
    rows: &[i64],
    cols: &[i64],
    window_rows: usize,
    window_cols: usize,
    max_dim: usize,
) -> Result<DoubleComplex> {
    let mut rows: Vec<i64> = rows.to_vec();
    let mut cols: Vec<i64> = cols.to_vec();
    rows.sort_unstable();
    rows.dedup();
    cols.sort_unstable();
    cols.dedup();
    let mut pairs: Vec<(LineBreak, LineBreak)> = Vec::new();
    // Pair rows among themselves, chaining when odd; same for columns;
    // a leftover single row pairs with a single column.
    let pair_up = |list: &[i64], mk: fn(i64) -> LineBreak, pairs: &mut Vec<(LineBreak, LineBreak)>| -> Option<i64> {
        let mut k = 0;
        while k + 1 < list.len() {
            pairs.push((mk(list[k]), mk(list[k + 1])));
            k += 2;
        }
        if k < list.len() {
            if list.len() >= 2 {
                // chain the last one to its predecessor
                pairs.push((mk(list[list.len() - 2]), mk(list[list.len() - 1])));
                None
            } else {
                Some(list[0])
            }
        } else {
            None
        }
    };
    let lone_row = pair_up(&rows, LineBreak::Row, &mut pairs);
    let lone_col = pair_up(&cols, LineBreak::Col, &mut pairs);
    match (lone_row, lone_col) {
        (Some(i), Some(c)) => pairs.push((LineBreak::Col(c), LineBreak::Row(i))),
        (None, None) => {}
        // A leftover line re-breaks an already covered line of the other kind.
        (Some(i), None) if !cols.is_empty() => {
            pairs.push((LineBreak::Col(cols[cols.len() - 1]), LineBreak::Row(i)));
        }
        (None, Some(c)) if !rows.is_empty() => {
            pairs.push((LineBreak::Col(c), LineBreak::Row(rows[rows.len() - 1])));
        }
        _ => {
            return Err(Error::PreconditionUnmet(
                "a single inexact line cannot be realized by a finite complex; list at least two lines".into(),
            ))
        }
    }
    let mut acc = DoubleComplex::empty(field);
    for (top, bottom) in pairs {
        let d = rng.gen_range(1..=max_dim.max(1));
        // Choose the free coordinate so the staircase stays near the window.
        let st = match (top, bottom) {
            (LineBreak::Row(i), LineBreak::Row(j)) => {
                let span = j - i;
                let c0 = span + rng.gen_range(0..window_cols.max(1) as i64);
                staircase(field, d, LineBreak::Row(i), LineBreak::Row(j), c0)?
            }
            (LineBreak::Col(c), LineBreak::Row(j)) => {
                let i0 = (j - 1 - rng.gen_range(0..(window_rows.max(2) as i64 - 1))).min(j - 1);
                staircase(field, d, LineBreak::Col(c), LineBreak::Row(j), i0)?
            }
            (LineBreak::Col(c), LineBreak::Col(c2)) => {
                let (hi, lo) = if c > c2 { (c, c2) } else { (c2, c) };
                let i0 = rng.gen_range(0..window_rows.max(1) as i64);
                staircase(field, d, LineBreak::Col(hi), LineBreak::Col(lo), i0)?
            }
            (LineBreak::Row(i), LineBreak::Col(c)) => {
                let j = i + 1 + rng.gen_range(0..window_rows.max(2) as i64 - 1);
                staircase(field, d, LineBreak::Row(i), LineBreak::Col(c), c + (j - i))?
            }
        };
        acc = direct_sum(&acc, &st);
    }
    // pad with exact blocks
    let blocks = rng.gen_range(1..=3);
    for _ in 0..blocks {
        let i = rng.gen_range(0..window_rows.max(2) as i64 - 1);
        let r = rng.gen_range(0..window_cols.max(2) as i64 - 1);
        let d = rng.gen_range(1..=max_dim.max(1));
        acc = direct_sum(&acc, &elementary(field, Position::new(i, r), d));
    }
    Ok(conjugate(rng, &acc))
}

// ---------------------------------------------------------------------------
// extensions

/// A random extension of `a` by `q`: underlying objects a (+) q with
/// block-upper-triangular differentials, the off-diagonal blocks sampled
/// from the linear system expressing the complex axioms. Returns the
/// extension; the witnessing inclusion/projection are the block maps.
pub fn random_extension(a: &DoubleComplex, q: &DoubleComplex, seed: u64) -> Result<DoubleComplex> {
    let f = a.field();
    if f != q.field() {
        return Err(Error::PreconditionUnmet("extension fields differ".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<Position> = a.support();
    positions.extend(q.support());
    positions.sort();
    positions.dedup();
    // pad by one so constraints at the boundary are included
    let mut all: Vec<Position> = Vec::new();
    for p in &positions {
        all.push(*p);
        all.push(p.down());
        all.push(p.right());
        all.push(p.down().right());
    }
    all.sort();
    all.dedup();
    // constraints at the boundary reference unknowns one layer further out
    let mut unknown_positions = all.clone();
    for p in &all {
        unknown_positions.push(p.down());
        unknown_positions.push(p.right());
    }
    unknown_positions.sort();
    unknown_positions.dedup();

    let mut sys = LinearConstraints::new(f);
    let mut xv: BTreeMap<Position, usize> = BTreeMap::new();
    let mut xh: BTreeMap<Position, usize> = BTreeMap::new();
    for &p in &unknown_positions {
        // Xv(p): q-part of p -> a-part of p.down()
        xv.insert(p, sys.add_unknown(a.dim(p.down()), q.dim(p)));
        xh.insert(p, sys.add_unknown(a.dim(p.right()), q.dim(p)));
    }
    for &p in &all {
        // dv(p.down) * dv(p) = 0:
        //   DVa(p.down)*Xv(p) + Xv(p.down)*DVq(p) = 0
        let dva_down = a.dv(p.down());
        let dvq = q.dv(p);
        let idl = Matrix::identity(f, a.dim(p.down().down()));
        sys.add_equation(&[
            (xv[&p], &dva_down, &Matrix::identity(f, q.dim(p)), false),
            (xv[&p.down()], &idl, &dvq, false),
        ]);
        // dh(p.right) * dh(p) = 0
        let dha_right = a.dh(p.right());
        let dhq = q.dh(p);
        let idl = Matrix::identity(f, a.dim(p.right().right()));
        sys.add_equation(&[
            (xh[&p], &dha_right, &Matrix::identity(f, q.dim(p)), false),
            (xh[&p.right()], &idl, &dhq, false),
        ]);
        // commuting square:
        //   DVa(p.right)*Xh(p) + Xv(p.right)*DHq(p)
        // = DHa(p.down)*Xv(p) + Xh(p.down)*DVq(p)
        let idq = Matrix::identity(f, q.dim(p));
        let id_corner = Matrix::identity(f, a.dim(p.down().right()));
        let dva_right = a.dv(p.right());
        let dhq_p = q.dh(p);
        let dha_down = a.dh(p.down());
        let dvq_p = q.dv(p);
        sys.add_equation(&[
            (xh[&p], &dva_right, &idq, false),
            (xv[&p.right()], &id_corner, &dhq_p, false),
            (xv[&p], &dha_down, &idq, true),
            (xh[&p.down()], &id_corner, &dvq_p, true),
        ]);
    }
    let sols = sys.sample(&mut rng);

    let mut dims = BTreeMap::new();
    for &p in &positions {
        let d = a.dim(p) + q.dim(p);
        if d > 0 {
            dims.insert(p, d);
        }
    }
    let block_ext = |da: Matrix, dq: Matrix, x: &Matrix| -> Matrix {
        // [[da, x], [0, dq]] with row split (a-target, q-target)
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
    let mut dv = BTreeMap::new();
    let mut dh = BTreeMap::new();
    for &p in &positions {
        let mv = block_ext(a.dv(p), q.dv(p), &sols[xv[&p]]);
        if !mv.is_zero() {
            dv.insert(p, mv);
        }
        let mh = block_ext(a.dh(p), q.dh(p), &sols[xh[&p]]);
        if !mh.is_zero() {
            dh.insert(p, mh);
        }
    }
    DoubleComplex::new(f, dims, dv, dh)
}

// ---------------------------------------------------------------------------
// FX decomposition

#[derive(Debug, Clone, Serialize)]
pub struct PeelStep {
    pub block: ElementaryBlock,
    pub kernel_total_dim: usize,
    pub kernel_is_fx: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FxDecomposition {
    pub blocks: Vec<ElementaryBlock>,
    pub steps: Vec<PeelStep>,
    pub total_dim: usize,
}

fn is_fx(c: &DoubleComplex) -> bool {
    let profile = c.pad(1).exactness_profile();
    profile.all_rows_exact() && profile.all_cols_exact()
}

/// Peel a finite exact complex into elementary blocks. Each step picks the
/// lexicographically last support position D (so the objects below and to
/// the right of it vanish), checks that the receptor at D vanishes, maps
/// the complex onto the elementary block anchored diagonally above D, and
/// recurses on the kernel.
pub fn decompose_fx(c: &DoubleComplex) -> Result<FxDecomposition> {
    if !is_fx(c) {
        return Err(Error::NotExact(
            "decompose_fx needs every row and column exact".into(),
        ));
    }
    let f = c.field();
    let total_dim = c.total_dimension();
    let mut cur = c.clone();
    let mut blocks = Vec::new();
    let mut steps = Vec::new();
    while cur.total_dimension() > 0 {
        let d_pos = *cur
            .dims_map()
            .keys()
            .max()
            .expect("nonzero complex has support");
        let d = cur.dim(d_pos);
        // The receptor at D must vanish; otherwise the projection below is
        // not surjective at the far corner.
        let receptor = crate::corners::corner(&cur, d_pos, crate::corners::CornerKind::Receptor);
        if receptor.dim() != 0 {
            return Err(Error::InternalCheckFailed(format!(
                "receptor at {d_pos} is nonzero during peeling"
            )));
        }
        let anchor = d_pos.up().left();
        blocks.push(ElementaryBlock { anchor, dim: d });
        // The chain map onto the elementary block: identity at D, the two
        // differentials at the neighbors, the diagonal composite at the corner.
        let phi_b = cur.dv(d_pos.up()); // A(i-1,r) -> D
        let phi_c = cur.dh(d_pos.left()); // A(i,r-1) -> D
        let phi_a = cur.dv(d_pos.up()).mul(&cur.dh(anchor)); // corner -> D
        let phi_d = Matrix::identity(f, d);

        // Surjectivity at each of the four positions.
        for (m, at) in [
            (&phi_d, d_pos),
            (&phi_b, d_pos.up()),
            (&phi_c, d_pos.left()),
            (&phi_a, anchor),
        ] {
            if m.rank() != d {
                return Err(Error::InternalCheckFailed(format!(
                    "projection onto the elementary block is not surjective at {at}"
                )));
            }
        }

        // Kernel complex: restrict the differentials to the kernels of phi.
        let phi = |p: Position| -> Option<&Matrix> {
            if p == d_pos {
                Some(&phi_d)
            } else if p == d_pos.up() {
                Some(&phi_b)
            } else if p == d_pos.left() {
                Some(&phi_c)
            } else if p == anchor {
                Some(&phi_a)
            } else {
                None
            }
        };
        let mut kbases: BTreeMap<Position, Matrix> = BTreeMap::new(); // columns: kernel basis
        let mut dims = BTreeMap::new();
        for p in cur.support() {
            let kb = match phi(p) {
                Some(m) => kernel(m).basis().transpose(),
                None => Matrix::identity(f, cur.dim(p)),
            };
            if kb.cols() > 0 {
                dims.insert(p, kb.cols());
            }
            kbases.insert(p, kb);
        }
        let restrict = |m: &Matrix, src: Position, tgt: Position| -> Result<Matrix> {
            let ks = &kbases[&src];
            let zero_t = Matrix::identity(f, 0);
            let kt = kbases.get(&tgt).unwrap_or(&zero_t);
            let mut out = Matrix::zero(f, kt.cols(), ks.cols());
            for j in 0..ks.cols() {
                let v: Vec<Scalar> = (0..ks.rows()).map(|i| ks.at(i, j).clone()).collect();
                let w = m.apply(&v);
                let sol = kt.solve(&w).ok_or_else(|| {
                    Error::InternalCheckFailed("kernel is not preserved by the differentials".into())
                })?;
                for (i, s) in sol.into_iter().enumerate() {
                    out.set(i, j, s);
                }
            }
            Ok(out)
        };
        let mut dv = BTreeMap::new();
        let mut dh = BTreeMap::new();
        for p in cur.support() {
            if dims.get(&p).copied().unwrap_or(0) == 0 {
                continue;
            }
            if dims.get(&p.down()).copied().unwrap_or(0) > 0 {
                let m = restrict(&cur.dv(p), p, p.down())?;
                if !m.is_zero() {
                    dv.insert(p, m);
                }
            }
            if dims.get(&p.right()).copied().unwrap_or(0) > 0 {
                let m = restrict(&cur.dh(p), p, p.right())?;
                if !m.is_zero() {
                    dh.insert(p, m);
                }
            }
        }
        let next = DoubleComplex::new(f, dims, dv, dh)?;
        let fx = is_fx(&next);
        steps.push(PeelStep {
            block: ElementaryBlock { anchor, dim: d },
            kernel_total_dim: next.total_dimension(),
            kernel_is_fx: fx,
        });
        if !fx {
            return Err(Error::InternalCheckFailed(
                "peeled kernel is not finite exact".into(),
            ));
        }
        if next.total_dimension() >= cur.total_dimension() {
            return Err(Error::InternalCheckFailed("peeling failed to shrink".into()));
        }
        cur = next;
    }
    blocks.sort();
    Ok(FxDecomposition {
        blocks,
        steps,
        total_dim,
    })
}

// ---------------------------------------------------------------------------
// subquotient helper shared by twist code

/// Cokernel of a matrix as a subquotient of its target space.
pub(crate) fn cokernel_subquotient(f: FieldSpec, m: &Matrix) -> Subquotient {
    Subquotient::new(
        crate::exactlin::Subspace::full(f, m.rows()),
        image(m),
    )
    .expect("image sits inside the full space")
}

// ---------------------------------------------------------------------------
// the twist construction

/// A twist-shaped diagram: two full rows (`mid`, `bot`) joined by vertical
/// maps, a top row ending just left of the focus column, a bottom row
/// starting just right of it, and short exact columns away from the focus
/// column. The "detour row" top -> mid(focus) -> bot(focus) -> bottom is a
/// complex; this follows from the square conditions and is not extra data.
///
/// This shape is not itself a double complex (the detour bends), which is
/// why it gets its own type; squaring it off with the kernel and cokernel
/// at the focus column produces an honest double complex with exact
/// columns.
#[derive(Debug, Clone)]
pub struct TwistDiagram {
    pub field: FieldSpec,
    /// Row 0, occupying columns focus_col - top.dims.len() .. focus_col.
    pub top: ChainComplex,
    /// Row 1, columns 0..width.
    pub mid: ChainComplex,
    /// Row 2, columns 0..width.
    pub bot: ChainComplex,
    /// Row 3, occupying columns focus_col + 1 ..
    pub bottom: ChainComplex,
    /// Verticals top[j] -> mid[top_start + j].
    pub v_top: Vec<Matrix>,
    /// Verticals mid[c] -> bot[c] for every column.
    pub v_mid: Vec<Matrix>,
    /// Verticals bot[focus_col + 1 + j] -> bottom[j].
    pub v_bottom: Vec<Matrix>,
    pub focus_col: usize,
}

impl TwistDiagram {
    pub fn top_start(&self) -> usize {
        self.focus_col - self.top.dims.len()
    }

    pub fn width(&self) -> usize {
        self.mid.dims.len()
    }

    /// Verify the shape: rows are complexes, all squares commute, and every
    /// column except the focus one is short exact.
    pub fn check(&self) -> Result<()> {
        let f = self.field;
        let w = self.width();
        let kf = self.focus_col;
        let fail = |msg: String| Err(Error::PreconditionUnmet(msg));
        if self.bot.dims.len() != w || self.v_mid.len() != w {
            return fail("mid/bot rows must have equal width".into());
        }
        if kf >= w || self.top.dims.len() > kf {
            return fail("top row must end before the focus column".into());
        }
        if kf + 1 + self.bottom.dims.len() > w {
            return fail("bottom row must fit right of the focus column".into());
        }
        if !self.top.is_complex() || !self.mid.is_complex() || !self.bot.is_complex()
            || !self.bottom.is_complex()
        {
            return fail("rows must be complexes".into());
        }
        let ts = self.top_start();
        // vertical shapes and squares for the top band
        for (j, vt) in self.v_top.iter().enumerate() {
            let c = ts + j;
            if vt.rows() != self.mid.dims[c] || vt.cols() != self.top.dims[j] {
                return fail(format!("top vertical {j} has the wrong shape"));
            }
            if j + 1 < self.v_top.len() {
                let lhs = self.mid.maps[c].mul(vt);
                let rhs = self.v_top[j + 1].mul(&self.top.maps[j]);
                if lhs != rhs {
                    return fail(format!("top square at column {c} does not commute"));
                }
            }
        }
        for c in 0..w {
            let vm = &self.v_mid[c];
            if vm.rows() != self.bot.dims[c] || vm.cols() != self.mid.dims[c] {
                return fail(format!("middle vertical {c} has the wrong shape"));
            }
            if c + 1 < w {
                let lhs = self.bot.maps[c].mul(vm);
                let rhs = self.v_mid[c + 1].mul(&self.mid.maps[c]);
                if lhs != rhs {
                    return fail(format!("middle square at column {c} does not commute"));
                }
            }
        }
        for (j, vb) in self.v_bottom.iter().enumerate() {
            let c = kf + 1 + j;
            if vb.rows() != self.bottom.dims[j] || vb.cols() != self.bot.dims[c] {
                return fail(format!("bottom vertical {j} has the wrong shape"));
            }
            if j + 1 < self.v_bottom.len() {
                let lhs = self.bottom.maps[j].mul(vb);
                let rhs = self.v_bottom[j + 1].mul(&self.bot.maps[c]);
                if lhs != rhs {
                    return fail(format!("bottom square at column {c} does not commute"));
                }
            }
        }
        // short exact columns away from the focus column
        for c in 0..w {
            if c == kf {
                continue;
            }
            let vt = if c >= ts && c - ts < self.v_top.len() {
                self.v_top[c - ts].clone()
            } else {
                Matrix::zero(f, self.mid.dims[c], 0)
            };
            let vb = if c > kf && c - kf - 1 < self.v_bottom.len() {
                self.v_bottom[c - kf - 1].clone()
            } else {
                Matrix::zero(f, 0, self.bot.dims[c])
            };
            let vm = &self.v_mid[c];
            if kernel(&vt).dim() != 0 {
                return fail(format!("column {c}: top vertical is not injective"));
            }
            if image(&vt) != kernel(vm) {
                return fail(format!("column {c}: not exact at the middle row"));
            }
            if image(vm) != kernel(&vb) {
                return fail(format!("column {c}: not exact at the lower row"));
            }
            if image(&vb) != crate::exactlin::Subspace::full(f, vb.rows()) {
                return fail(format!("column {c}: bottom vertical is not surjective"));
            }
        }
        Ok(())
    }

    /// Square off: insert the kernel of the focus vertical at the top and
    /// its cokernel at the bottom, producing a valid double complex on rows
    /// 0..=3 with all columns exact.
    pub fn square_off(&self) -> Result<DoubleComplex> {
        self.check()?;
        let f = self.field;
        let kf = self.focus_col;
        let ts = self.top_start();
        let w = self.width();
        let mut b = ComplexBuilder::new(f);
        for (j, &d) in self.top.dims.iter().enumerate() {
            b = b.object(0, (ts + j) as i64, d);
        }
        for (c, &d) in self.mid.dims.iter().enumerate() {
            b = b.object(1, c as i64, d);
        }
        for (c, &d) in self.bot.dims.iter().enumerate() {
            b = b.object(2, c as i64, d);
        }
        for (j, &d) in self.bottom.dims.iter().enumerate() {
            b = b.object(3, (kf + 1 + j) as i64, d);
        }
        for (j, m) in self.top.maps.iter().enumerate() {
            if !m.is_zero() {
                b = b.dh(0, (ts + j) as i64, m.clone());
            }
        }
        for (c, m) in self.mid.maps.iter().enumerate() {
            if !m.is_zero() {
                b = b.dh(1, c as i64, m.clone());
            }
        }
        for (c, m) in self.bot.maps.iter().enumerate() {
            if !m.is_zero() {
                b = b.dh(2, c as i64, m.clone());
            }
        }
        for (j, m) in self.bottom.maps.iter().enumerate() {
            if !m.is_zero() {
                b = b.dh(3, (kf + 1 + j) as i64, m.clone());
            }
        }
        for (j, m) in self.v_top.iter().enumerate() {
            if !m.is_zero() {
                b = b.dv(0, (ts + j) as i64, m.clone());
            }
        }
        for (c, m) in self.v_mid.iter().enumerate() {
            if !m.is_zero() {
                b = b.dv(1, c as i64, m.clone());
            }
        }
        for (j, m) in self.v_bottom.iter().enumerate() {
            if !m.is_zero() {
                b = b.dv(2, (kf + 1 + j) as i64, m.clone());
            }
        }
        // kernel of the focus vertical, inserted at (0, kf)
        let ker = kernel(&self.v_mid[kf]);
        if ker.dim() > 0 {
            let incl = ker.basis().transpose();
            b = b.object(0, kf as i64, ker.dim()).dv(0, kf as i64, incl.clone());
            // factor the composite top-last -> mid[kf] through the kernel
            if let Some(&last_dim) = self.top.dims.last() {
                if last_dim > 0 && kf >= 1 {
                    let to_e = self.mid.maps[kf - 1].mul(self.v_top.last().unwrap());
                    let mut fac = Matrix::zero(f, ker.dim(), last_dim);
                    for j in 0..last_dim {
                        let mut e = vec![f.zero(); last_dim];
                        e[j] = f.one();
                        let w2 = to_e.apply(&e);
                        let sol = incl.solve(&w2).ok_or_else(|| {
                            Error::InternalCheckFailed(
                                "detour composite does not land in the focus kernel".into(),
                            )
                        })?;
                        for (i2, v) in sol.into_iter().enumerate() {
                            fac.set(i2, j, v);
                        }
                    }
                    if !fac.is_zero() {
                        b = b.dh(0, (kf - 1) as i64, fac);
                    }
                }
            }
        }
        // cokernel at (3, kf)
        let cok = cokernel_subquotient(f, &self.v_mid[kf]);
        if cok.dim() > 0 {
            let n = self.bot.dims[kf];
            let mut proj = Matrix::zero(f, cok.dim(), n);
            for j in 0..n {
                let mut e = vec![f.zero(); n];
                e[j] = f.one();
                for (i2, v) in cok.coords_of(&e)?.into_iter().enumerate() {
                    proj.set(i2, j, v);
                }
            }
            b = b.object(3, kf as i64, cok.dim()).dv(2, kf as i64, proj);
            // induced arrow to the start of the bottom row
            if let Some(&first_dim) = self.bottom.dims.first() {
                if first_dim > 0 && kf + 1 < w {
                    let rhs = self.v_bottom[0].mul(&self.bot.maps[kf]);
                    let mut ind = Matrix::zero(f, first_dim, cok.dim());
                    for (j, v) in cok.coord_basis().iter().enumerate() {
                        for (i2, val) in rhs.apply(v).into_iter().enumerate() {
                            ind.set(i2, j, val);
                        }
                    }
                    if !ind.is_zero() {
                        b = b.dh(3, kf as i64, ind);
                    }
                }
            }
        }
        let squared = b.build()?;
        let issues = squared.validate();
        if !issues.is_empty() {
            return Err(Error::InternalCheckFailed(format!(
                "squared twist diagram is not a double complex: {}",
                issues[0]
            )));
        }
        Ok(squared)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistReport {
    pub sequence: crate::report::SequenceReport,
    /// The upper focus term in its original coordinates: the kernel of the
    /// focus vertical modulo the image of the detour composite into it.
    pub focus_upper: Subquotient,
    /// The lower focus term: the kernel of the detour composite out,
    /// modulo the image of the focus vertical.
    pub focus_lower: Subquotient,
}

/// Derive the long exact sequence of mostly horizontal homology objects
/// from a twist diagram: square it off, then splice the row homologies of
/// the four rows along the columns, turning at the focus column. Exactness
/// is verified at every interior term.
pub fn twist_sequence(t: &TwistDiagram) -> Result<TwistReport> {
    use crate::corners::{corner, extramural, intramural, CornerKind};
    use crate::exactlin::compose;
    use crate::grid::Direction;
    use crate::report::{SequenceReport, SequenceTerm};
    let s = t.square_off()?;
    let profile = s.exactness_profile();
    if !profile.all_cols_exact() {
        return Err(Error::InternalCheckFailed(
            "squared twist diagram does not have exact columns".into(),
        ));
    }
    let kf = t.focus_col as i64;
    let w = t.width() as i64;
    let f = t.field;

    let hom = |r: i64, c: i64| corner(&s, Position::new(r, c), CornerKind::Horizontal);
    // homology-to-homology step one row down, through the receptor below
    let step_down = |r: i64, c: i64| -> Result<crate::exactlin::SubquotientMap> {
        let p = Position::new(r, c);
        let m1 = intramural(&s, p, CornerKind::Horizontal, CornerKind::Donor)?;
        let m2 = extramural(&s, p, Direction::Vertical)?;
        let m3 = intramural(&s, p.down(), CornerKind::Receptor, CornerKind::Horizontal)?;
        compose(&compose(&m1, &m2)?, &m3)
    };
    // cross-column step from the bottom row of one triple to the top row of
    // the next, through the middle-row donors
    let cross = |c: i64| -> Result<crate::exactlin::SubquotientMap> {
        let rm = if c < kf { 1 } else { 2 };
        let p = Position::new(rm, c);
        let w_chain = compose(
            &extramural(&s, p, Direction::Vertical)?,
            &intramural(&s, p.down(), CornerKind::Receptor, CornerKind::Horizontal)?,
        )?;
        let w_inv = w_chain.invert().map_err(|_| {
            Error::InternalCheckFailed(format!("row identification at {p} is not invertible"))
        })?;
        let over = extramural(&s, p, Direction::Horizontal)?;
        let q = Position::new(rm - 1, c + 1);
        let u1 = extramural(&s, q, Direction::Vertical)?.invert().map_err(|_| {
            Error::InternalCheckFailed(format!("column identification at {q} is not invertible"))
        })?;
        let u2 = intramural(&s, q, CornerKind::Horizontal, CornerKind::Donor)?
            .invert()
            .map_err(|_| {
                Error::InternalCheckFailed(format!(
                    "homology identification at {q} is not invertible"
                ))
            })?;
        compose(&compose(&compose(&w_inv, &over)?, &u1)?, &u2)
    };

    let rows_of = |c: i64| -> Vec<i64> {
        if c < kf {
            vec![0, 1, 2]
        } else if c == kf {
            vec![0, 1, 2, 3]
        } else {
            vec![1, 2, 3]
        }
    };
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut trace = Vec::new();
    for c in -1..=w {
        let rows = rows_of(c);
        for (idx, &r) in rows.iter().enumerate() {
            let h = hom(r, c);
            if idx > 0 {
                maps.push(step_down(rows[idx - 1], c)?);
                trace.push(format!("within-column step at ({},{c})", rows[idx - 1]));
            }
            terms.push(SequenceTerm::new(h.label(), Some(h.position), h.value));
        }
        if c < w {
            maps.push(cross(c)?);
            trace.push(format!("cross-column step at column {c}"));
        }
    }
    let sequence = SequenceReport::assemble(
        "twist long sequence of mostly horizontal homologies",
        terms,
        maps,
        trace,
    );

    // bridge terms in the original coordinates
    let to_e = if t.top.dims.last().copied().unwrap_or(0) > 0 && kf >= 1 {
        t.mid.maps[kf as usize - 1].mul(t.v_top.last().unwrap())
    } else {
        Matrix::zero(f, t.mid.dims[kf as usize], 0)
    };
    let focus_upper = Subquotient::new(kernel(&t.v_mid[kf as usize]), image(&to_e))?;
    let out_of_f = if t.bottom.dims.first().copied().unwrap_or(0) > 0 && kf + 1 < w {
        t.v_bottom[0].mul(&t.bot.maps[kf as usize])
    } else {
        Matrix::zero(f, 0, t.bot.dims[kf as usize])
    };
    let focus_lower = Subquotient::new(kernel(&out_of_f), image(&t.v_mid[kf as usize]))?;
    let upper_term = sequence
        .terms
        .iter()
        .find(|tm| tm.position == Some(Position::new(0, kf)))
        .expect("bridge term present");
    let lower_term = sequence
        .terms
        .iter()
        .find(|tm| tm.position == Some(Position::new(3, kf)))
        .expect("bridge term present");
    if focus_upper.dim() != upper_term.dim || focus_lower.dim() != lower_term.dim {
        return Err(Error::InternalCheckFailed(
            "focus terms disagree with their squared-off counterparts".into(),
        ));
    }
    Ok(TwistReport {
        sequence,
        focus_upper,
        focus_lower,
    })
}

/// Build one column of the twisted diagram: the direct sum of the blocks
/// at row offset `a` and column offset `b` from the focus position, with
/// `(a, b)` ranging over a quadrant antidiagonal. Returns the positions in
/// ascending `a`.
fn twist_blocks(fpos: Position, offsets: &[(i64, i64)], left: bool) -> Vec<Position> {
    offsets
        .iter()
        .map(|&(a, b)| {
            if left {
                Position::new(fpos.i - a, fpos.r - b)
            } else {
                Position::new(fpos.i + a, fpos.r + b)
            }
        })
        .collect()
}

fn twist_sum_dim(c: &DoubleComplex, positions: &[Position]) -> usize {
    positions.iter().map(|&p| c.dim(p)).sum()
}

/// The map between two antidiagonal sums assembled from all available
/// single-step differentials, with horizontal components negated in odd
/// block rows so that consecutive maps compose to zero.
fn twist_sum_map(
    c: &DoubleComplex,
    fpos: Position,
    src: &[(i64, i64)],
    tgt: &[(i64, i64)],
    left: bool,
    flips: &mut Vec<String>,
) -> Matrix {
    let f = c.field();
    let src_pos = twist_blocks(fpos, src, left);
    let tgt_pos = twist_blocks(fpos, tgt, left);
    let rows = twist_sum_dim(c, &tgt_pos);
    let cols = twist_sum_dim(c, &src_pos);
    let mut m = Matrix::zero(f, rows, cols);
    let offset = |list: &[Position], k: usize| -> usize {
        list[..k].iter().map(|&p| c.dim(p)).sum()
    };
    for (sk, &(sa, _sb)) in src.iter().enumerate() {
        let sp = src_pos[sk];
        if c.dim(sp) == 0 {
            continue;
        }
        for (tk, &(ta, _tb)) in tgt.iter().enumerate() {
            let tp = tgt_pos[tk];
            if c.dim(tp) == 0 {
                continue;
            }
            // a single grid arrow from sp to tp, if any
            let (block, is_dh) = if tp == sp.down() {
                (c.dv(sp), false)
            } else if tp == sp.right() {
                (c.dh(sp), true)
            } else {
                continue;
            };
            let _ = (sa, ta);
            let sign_flip = is_dh && sa.rem_euclid(2) == 1;
            let block = if sign_flip {
                flips.push(format!(
                    "horizontal component {sp} -> {tp} (block row {sa})"
                ));
                block.neg()
            } else {
                block
            };
            let ro = offset(&tgt_pos, tk);
            let co = offset(&src_pos, sk);
            for i2 in 0..block.rows() {
                for j2 in 0..block.cols() {
                    m.set(ro + i2, co + j2, block.at(i2, j2).clone());
                }
            }
        }
    }
    m
}

/// Assemble the direct-sum twist diagram around the horizontal arrow at
/// `fpos`, spanning the whole support of the complex: the middle row sums
/// the upper-left quadrant antidiagonals into the focus object and the
/// strictly lower-right ones out of it, the lower row is shifted one
/// column right, and the top and bottom rows are the original row of the
/// focus restricted to the two sides. Signs follow the alternating rule
/// (horizontal components negated in odd block rows); the first assignment
/// that validates is accepted, and the flipped components are recorded.
pub fn twist_build(
    c: &DoubleComplex,
    fpos: Position,
) -> Result<(TwistDiagram, Vec<String>)> {
    if !c.is_valid() {
        return Err(Error::PreconditionUnmet("complex is not valid".into()));
    }
    let f = c.field();
    let (tl, tr) = match c.window() {
        Some((min, max)) => (
            ((fpos.i - min.i) + (fpos.r - min.r)).max(1),
            ((max.i - fpos.i) + (max.r - fpos.r)).max(1) + 1,
        ),
        None => (1, 1),
    };
    // block offset sets per column of the middle and lower rows
    let mid_left = |t: i64| -> Vec<(i64, i64)> { (0..=t).map(|a| (a, t - a)).collect() };
    let mid_right = |t: i64| -> Vec<(i64, i64)> { (1..=t).map(|a| (a, t + 1 - a)).collect() };
    let bot_left = |t: i64| -> Vec<(i64, i64)> { (1..=t).map(|a| (a, t - a)).collect() };
    let bot_right = |t: i64| -> Vec<(i64, i64)> { (0..=t).map(|a| (a, t + 1 - a)).collect() };
    // seam composites need explicit handling below
    let mut flips = Vec::new();

    let mut mid_dims = Vec::new();
    let mut mid_maps = Vec::new();
    let mut bot_dims = Vec::new();
    let mut bot_maps = Vec::new();
    // columns indexed left to right: t = tl..1 (left), center, t = 1..tr (right)
    let mid_col = |t: i64| -> Vec<(i64, i64)> {
        if t < 0 {
            mid_left(-t)
        } else if t == 0 {
            vec![(0, 0)]
        } else {
            mid_right(t)
        }
    };
    let bot_col = |t: i64| -> Vec<(i64, i64)> {
        if t < 0 {
            bot_left(-t)
        } else {
            bot_right(t)
        }
    };
    let fg = c.dh(fpos);
    let dg = fpos.right();
    for t in -tl..=tr {
        let mcol = mid_col(t);
        let bcol = bot_col(t);
        mid_dims.push(twist_sum_dim(c, &twist_blocks(fpos, &mcol, t < 0)));
        bot_dims.push(twist_sum_dim(
            c,
            &twist_blocks(fpos, &bcol, t < 0),
        ));
        if t == tr {
            continue;
        }
        let next_m = mid_col(t + 1);
        let next_b = bot_col(t + 1);
        if t + 1 == 0 {
            // into the center: single-step components
            mid_maps.push(twist_sum_map(c, fpos, &mcol, &next_m, true, &mut flips));
            // lower row seam: composite through the focus arrow
            let from = twist_blocks(fpos, &bcol, true);
            let rows = c.dim(dg);
            let cols = twist_sum_dim(c, &from);
            let mut m = Matrix::zero(f, rows, cols);
            let mut off = 0;
            for &p in &from {
                if c.dim(p) == 0 {
                    continue;
                }
                if p == fpos.up() {
                    // composite (focus arrow) o (vertical into the focus)
                    let comp = fg.mul(&c.dv(p));
                    for i2 in 0..comp.rows() {
                        for j2 in 0..comp.cols() {
                            m.set(i2, off + j2, comp.at(i2, j2).clone());
                        }
                    }
                }
                off += c.dim(p);
            }
            bot_maps.push(m);
        } else if t == 0 {
            // out of the center: composite through the next vertical
            let to = twist_blocks(fpos, &next_m, false);
            let rows = twist_sum_dim(c, &to);
            let mut m = Matrix::zero(f, rows, c.dim(fpos));
            let mut off = 0;
            for &p in &to {
                if c.dim(p) == 0 {
                    continue;
                }
                if p == dg.down() {
                    let comp = c.dv(dg).mul(&fg);
                    for i2 in 0..comp.rows() {
                        for j2 in 0..comp.cols() {
                            m.set(off + i2, j2, comp.at(i2, j2).clone());
                        }
                    }
                }
                off += c.dim(p);
            }
            mid_maps.push(m);
            bot_maps.push(twist_sum_map(c, fpos, &bcol, &next_b, false, &mut flips));
        } else {
            let left = t < 0;
            // block offsets on the two sides live in mirrored coordinates,
            // so crossing maps only happen within one side here
            mid_maps.push(twist_sum_map(c, fpos, &mcol, &next_m, left, &mut flips));
            bot_maps.push(twist_sum_map(c, fpos, &bcol, &next_b, left, &mut flips));
        }
    }
    let mid = ChainComplex {
        field: f,
        dims: mid_dims,
        maps: mid_maps,
    };
    let bot = ChainComplex {
        field: f,
        dims: bot_dims,
        maps: bot_maps,
    };
    // top row: the focus row strictly left of the focus column
    let top_dims: Vec<usize> = (1..=tl)
        .rev()
        .map(|t| c.dim(Position::new(fpos.i, fpos.r - t)))
        .collect();
    let top_maps: Vec<Matrix> = (1..tl)
        .rev()
        .map(|t| c.dh(Position::new(fpos.i, fpos.r - t - 1 + 1)))
        .collect();
    let top_maps = {
        // maps top[j] -> top[j+1] correspond to dh at (i, r - tl + j)
        let mut v = Vec::new();
        for j in 0..top_dims.len().saturating_sub(1) {
            v.push(c.dh(Position::new(fpos.i, fpos.r - tl + j as i64)));
        }
        let _ = top_maps;
        v
    };
    let top = ChainComplex {
        field: f,
        dims: top_dims,
        maps: top_maps,
    };
    // bottom row: the focus row strictly right of the focus column + 1
    let bottom_dims: Vec<usize> = (1..=tr)
        .map(|t| c.dim(Position::new(fpos.i, fpos.r + 1 + t)))
        .collect();
    let bottom_maps: Vec<Matrix> = (1..tr)
        .map(|t| c.dh(Position::new(fpos.i, fpos.r + 1 + t)))
        .collect();
    let bottom = ChainComplex {
        field: f,
        dims: bottom_dims,
        maps: bottom_maps,
    };
    // verticals
    let kf = tl as usize;
    let width = (tl + tr + 1) as usize;
    let mut v_top = Vec::new();
    for (j, &d) in top.dims.iter().enumerate() {
        let t = tl - j as i64; // column offset to the left of the focus
        let mcol = mid_col(-t);
        let blocks = twist_blocks(fpos, &mcol, true);
        let mdim = twist_sum_dim(c, &blocks);
        let mut m = Matrix::zero(f, mdim, d);
        // the (0, t) block is first in ascending-a order
        for k in 0..d {
            m.set(k, k, f.one());
        }
        v_top.push(m);
    }
    let mut v_mid = Vec::new();
    for t in -tl..=tr {
        if t == 0 {
            v_mid.push(fg.clone());
            continue;
        }
        let mcol = mid_col(t);
        let bcol = bot_col(t);
        let mpos = twist_blocks(fpos, &mcol, t < 0);
        let bpos = twist_blocks(fpos, &bcol, t < 0);
        let mdim = twist_sum_dim(c, &mpos);
        let bdim = twist_sum_dim(c, &bpos);
        let mut m = Matrix::zero(f, bdim, mdim);
        // identity on blocks shared by both columns
        for (sk, sp) in mpos.iter().enumerate() {
            if let Some(tk) = bpos.iter().position(|bp| bp == sp) {
                let co: usize = mpos[..sk].iter().map(|&p| c.dim(p)).sum();
                let ro: usize = bpos[..tk].iter().map(|&p| c.dim(p)).sum();
                for k in 0..c.dim(*sp) {
                    m.set(ro + k, co + k, f.one());
                }
            }
        }
        v_mid.push(m);
    }
    let mut v_bottom = Vec::new();
    for (j, &d) in bottom.dims.iter().enumerate() {
        let t = 1 + j as i64;
        let bcol = bot_col(t);
        let bpos = twist_blocks(fpos, &bcol, false);
        let bdim = twist_sum_dim(c, &bpos);
        let mut m = Matrix::zero(f, d, bdim);
        // project onto the (0, t + 1) block, first in ascending-a order
        for k in 0..d {
            m.set(k, k, f.one());
        }
        v_bottom.push(m);
    }
    let t = TwistDiagram {
        field: f,
        top,
        mid,
        bot,
        bottom,
        v_top,
        v_mid,
        v_bottom,
        focus_col: kf,
    };
    debug_assert_eq!(t.width(), width);
    t.check()?;
    if flips.is_empty() {
        flips.push("all components taken with the positive sign".into());
    }
    Ok((t, flips))
}


#[cfg(test)]
mod twist_tests {
    use super::*;
    use rand::Rng;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn twist_on_zero_complex_is_trivial() {
        let f = gf(101);
        let c = DoubleComplex::empty(f);
        let (t, _) = twist_build(&c, Position::new(0, 0)).unwrap();
        let rep = twist_sequence(&t).unwrap();
        assert!(rep.sequence.all_exact());
        assert!(rep.sequence.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn twist_sequence_exact_on_random_complexes() {
        let f = gf(101);
        for seed in 0..12u64 {
            let c = generate(f, &GeneratorSpec::new(seed, 5, 5, 2, GeneratorMode::ChainMapFill))
                .unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
            let Some((min, max)) = c.window() else { continue };
            let fpos = Position::new(
                rng.gen_range(min.i..=max.i),
                rng.gen_range(min.r..=max.r),
            );
            let (t, signs) = twist_build(&c, fpos).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(!signs.is_empty());
            let rep = twist_sequence(&t).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(rep.sequence.all_exact(), "seed {seed}: {}", rep.sequence);
        }
    }

    #[test]
    fn twist_vanishes_on_bounded_exact_complexes() {
        let f = gf(101);
        for seed in 0..8u64 {
            let c = generate(
                f,
                &GeneratorSpec::new(seed, 4, 4, 2, GeneratorMode::ExExtensions { count: 3 }),
            )
            .unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let Some((min, max)) = c.window() else { continue };
            let fpos = Position::new(
                rng.gen_range(min.i..=max.i),
                rng.gen_range(min.r..=max.r),
            );
            let (t, _) = twist_build(&c, fpos).unwrap();
            let rep = twist_sequence(&t).unwrap();
            assert!(rep.sequence.all_exact());
            assert!(
                rep.sequence.dims().iter().all(|&d| d == 0),
                "seed {seed}: twisted terms must vanish on doubly exact input"
            );
        }
    }
}
