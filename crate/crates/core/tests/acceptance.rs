//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything is exact arithmetic, so every comparison is equality — there
//! are no tolerances anywhere.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use salamander_core::construct::{
    self, elementary, generate, random_extension, snake_instance, twist_build, twist_sequence,
    ElementaryBlock, GeneratorMode, GeneratorSpec,
};
use salamander_core::corners::{
    self, corner, extramural, induced_homology_map, intramural, CornerKind,
};
use salamander_core::exactlin::{compose, FieldSpec, Matrix, Scalar};
use salamander_core::grid::{ComplexBuilder, Direction, DoubleComplex, Position};
use salamander_core::nfold::{self, DownSet, NComplex};
use salamander_core::textio;
use salamander_core::theorems::{
    self, check_extramural_iso, check_intramural_iso, long_sequences, IntramuralCase,
    LongSequenceSpec, TwoBordersVariant,
};
use salamander_core::total;

fn gf101() -> FieldSpec {
    FieldSpec::prime(101).unwrap()
}

fn pass(n: usize, name: &str) {
    println!("acceptance criterion {n} ({name}): PASS");
}

/// Mixed-mode instance pool used by the salamander criterion: windows up
/// to 6x6 and dimensions up to 4.
fn pool(count: usize) -> Vec<DoubleComplex> {
    let f = gf101();
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        let seed = k;
        k += 1;
        let rows = 3 + (seed % 4) as usize; // 3..6
        let cols = 3 + ((seed / 4) % 4) as usize;
        let dim = 2 + (seed % 3) as usize; // 2..4
        let mode = match seed % 6 {
            0 => GeneratorMode::ChainMapFill,
            1 => GeneratorMode::Tensor {
                rows_exact: true,
                cols_exact: true,
            },
            2 => GeneratorMode::Tensor {
                rows_exact: false,
                cols_exact: true,
            },
            3 => GeneratorMode::Tensor {
                rows_exact: true,
                cols_exact: false,
            },
            4 => GeneratorMode::ExExtensions { count: 2 },
            _ => GeneratorMode::NonexactLines {
                rows: vec![1, (2 + seed % 2) as i64],
                cols: vec![2],
            },
        };
        let c = generate(f, &GeneratorSpec::new(seed, rows, cols, dim, mode)).unwrap();
        assert!(c.is_valid());
        out.push(c);
    }
    out
}

#[test]
fn criterion_01_salamander_suite() {
    let start = std::time::Instant::now();
    let complexes = pool(500);
    let mut arrows = 0usize;
    for c in &complexes {
        for p in c.positions() {
            for dir in [Direction::Horizontal, Direction::Vertical] {
                let seq = corners::salamander(c, p, dir).unwrap();
                assert!(seq.all_exact(), "sequence at {p} {dir} failed:\n{seq}");
                arrows += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(arrows >= 500 * 2);
    assert!(
        elapsed.as_secs() < 60,
        "salamander suite took {elapsed:?}, budget is 60s"
    );
    println!("  {} complexes, {arrows} arrows, {elapsed:?}", complexes.len());
    pass(1, "salamander suite");
}

#[test]
fn criterion_02_negative_control() {
    let f = gf101();
    let mut nonzero_witness = false;
    for c in pool(40) {
        for p in c.positions() {
            let seq =
                corners::salamander_with_kind(&c, p, Direction::Horizontal, CornerKind::Vertical)
                    .unwrap();
            let middle = compose(
                &compose(&seq.maps[1], &seq.maps[2]).unwrap(),
                &seq.maps[3],
            )
            .unwrap();
            let induced = induced_homology_map(&c, p, Direction::Horizontal).unwrap();
            assert_eq!(middle.matrix, induced.matrix);
            nonzero_witness |= !middle.is_zero();
        }
    }
    // explicit fixture where the wrongly shaped sequence is genuinely inexact
    let c = ComplexBuilder::new(f)
        .object(0, 0, 2)
        .object(0, 1, 2)
        .dh(0, 0, Matrix::identity(f, 2))
        .build()
        .unwrap();
    let seq = corners::salamander_with_kind(
        &c,
        Position::new(0, 0),
        Direction::Horizontal,
        CornerKind::Vertical,
    )
    .unwrap();
    let middle = compose(&compose(&seq.maps[1], &seq.maps[2]).unwrap(), &seq.maps[3]).unwrap();
    assert!(!middle.is_zero());
    assert!(!seq.all_exact());
    assert!(nonzero_witness || !middle.is_zero());
    pass(2, "negative control for the wrongly shaped sequence");
}

#[test]
fn criterion_03_iso_criteria() {
    let f = gf101();
    // doubly exact: every extramural map is an isomorphism with witness
    for seed in 0..30u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                4,
                4,
                3,
                GeneratorMode::Tensor {
                    rows_exact: true,
                    cols_exact: true,
                },
            ),
        )
        .unwrap();
        for p in c.positions() {
            for dir in [Direction::Horizontal, Direction::Vertical] {
                let w = check_extramural_iso(&c, p, dir).unwrap();
                assert!(w.map.is_iso());
            }
        }
    }
    // the four zero-pattern cases
    let mut case_hits = [0usize; 4];
    for seed in 0..20u64 {
        let cols_exact = generate(
            f,
            &GeneratorSpec::new(
                seed,
                4,
                4,
                2,
                GeneratorMode::Tensor {
                    rows_exact: false,
                    cols_exact: true,
                },
            ),
        )
        .unwrap();
        if let Some((min, max)) = cols_exact.window() {
            for r in min.r..=max.r {
                check_intramural_iso(
                    &cols_exact,
                    Position::new(min.i, r),
                    IntramuralCase::TopBorderRight,
                )
                .unwrap();
                case_hits[0] += 1;
                check_intramural_iso(
                    &cols_exact,
                    Position::new(max.i, r),
                    IntramuralCase::BottomBorderLeft,
                )
                .unwrap();
                case_hits[1] += 1;
            }
        }
        let rows_exact = generate(
            f,
            &GeneratorSpec::new(
                seed,
                4,
                4,
                2,
                GeneratorMode::Tensor {
                    rows_exact: true,
                    cols_exact: false,
                },
            ),
        )
        .unwrap();
        if let Some((min, max)) = rows_exact.window() {
            for i in min.i..=max.i {
                check_intramural_iso(
                    &rows_exact,
                    Position::new(i, min.r),
                    IntramuralCase::LeftBorderDown,
                )
                .unwrap();
                case_hits[2] += 1;
                check_intramural_iso(
                    &rows_exact,
                    Position::new(i, max.r),
                    IntramuralCase::RightBorderUp,
                )
                .unwrap();
                case_hits[3] += 1;
            }
        }
    }
    assert!(case_hits.iter().all(|&n| n > 0));
    // the two vanishing-hypothesis cases, with nontrivial homology
    let mut nontrivial = 0usize;
    for seed in 0..20u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                5,
                5,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![1, 3],
                    cols: vec![],
                },
            ),
        )
        .unwrap();
        let Some((min, max)) = c.window() else { continue };
        for r in min.r..=max.r {
            let up = check_intramural_iso(&c, Position::new(1, r), IntramuralCase::VanishingUpRight)
                .unwrap();
            nontrivial += up.first.dims.0;
            check_intramural_iso(&c, Position::new(3, r), IntramuralCase::VanishingLeftBelow)
                .unwrap();
        }
    }
    assert!(nontrivial > 0);
    // the counterexample direction: identity vertical arrow, everything
    // else zero; the two intramural maps at the target have the form 0 -> B
    let c = ComplexBuilder::new(f)
        .object(0, 0, 3)
        .object(1, 0, 3)
        .dv(0, 0, Matrix::identity(f, 3))
        .build()
        .unwrap();
    let b = Position::new(0, 0);
    assert!(c.row_exact_at(Position::new(0, -1)), "row through the left neighbor is zero");
    let m1 = intramural(&c, b, CornerKind::Receptor, CornerKind::Horizontal).unwrap();
    let m2 = intramural(&c, b, CornerKind::Vertical, CornerKind::Donor).unwrap();
    assert_eq!((m1.source.dim(), m1.target.dim()), (0, 3));
    assert_eq!((m2.source.dim(), m2.target.dim()), (0, 3));
    pass(3, "extramural and intramural isomorphism criteria");
}

#[test]
fn criterion_04_snake() {
    let f = gf101();
    let mut nontrivial_connecting = 0usize;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = snake_instance(&mut rng, f, 4);
        let rep = theorems::snake_at(&c, Position::new(0, 0))
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(rep.sequence.all_exact(), "seed {seed}");
        assert_eq!(rep.connecting, rep.oracle, "seed {seed}");
        nontrivial_connecting += rep.connecting.rows().min(rep.connecting.cols());
    }
    assert!(nontrivial_connecting > 0, "connecting maps were all empty");
    pass(4, "snake connecting map against the lifting oracle");
}

#[test]
fn criterion_05_sharp_3x3() {
    let f = gf101();
    let mut verified = 0usize;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = construct::sharp_instance(&mut rng, f, 3);
        let rep = theorems::sharp_3x3(&c).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(rep.chain_a.is_iso && rep.chain_b.is_iso);
        assert!(!rep.chain_a.trace.is_empty() && !rep.chain_b.trace.is_empty());
        assert!(rep.chain_c.is_some());
        assert!(rep.first_row_exact.iter().all(|&(_, ok)| ok));
        verified += 1;
    }
    assert_eq!(verified, 100);
    // mutation detection: break hypotheses one at a time
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = construct::sharp_instance(&mut rng, f, 2);
    let Some((min, _)) = c.window() else { panic!() };
    let mut detected = 0usize;
    // remove a bottom-row object (breaks column exactness)
    for target_row in [min.i + 1, min.i + 2] {
        let mut dims = c.dims_map().clone();
        let Some(&victim) = dims.keys().find(|p| p.i == target_row) else {
            continue;
        };
        dims.remove(&victim);
        let mut dv = c.stored_dv().clone();
        let mut dh = c.stored_dh().clone();
        dv.retain(|p, _| *p != victim && p.down() != victim);
        dh.retain(|p, _| *p != victim && p.right() != victim);
        if let Ok(m) = DoubleComplex::new(f, dims, dv, dh) {
            if m.is_valid() {
                if theorems::sharp_3x3(&m).is_err() {
                    detected += 1;
                }
            } else {
                detected += 1;
            }
        }
    }
    assert!(detected > 0, "no mutation detected");
    pass(5, "sharp 3x3 with full traces and mutation detection");
}

#[test]
fn criterion_06_long_sequences() {
    let f = gf101();
    // one-row and linked ladders
    for seed in 0..15u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                5,
                5,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![1, 3],
                    cols: vec![],
                },
            ),
        )
        .unwrap();
        for row in [1, 3] {
            let rep = long_sequences(&c, &LongSequenceSpec::OneRow { row }).unwrap();
            assert!(rep.all_exact(), "one-row seed {seed}");
        }
        let rep = long_sequences(&c, &LongSequenceSpec::LinkedAll).unwrap();
        assert!(rep.all_exact(), "linked seed {seed}");
    }
    // pure three-row sequences and the collapse isomorphisms
    for seed in 0..15u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                6,
                6,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![0, 2, 5],
                    cols: vec![],
                },
            ),
        )
        .unwrap();
        let rep = theorems::ijk_sequence(&c, 0, 2, 5).unwrap();
        assert!(rep.all_exact(), "ijk seed {seed}");
        for t in &rep.terms {
            let p = t.position.unwrap();
            assert_eq!(t.dim, corner(&c, p, CornerKind::Horizontal).dim());
        }
    }
    for seed in 0..10u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                6,
                6,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![0, 4],
                    cols: vec![],
                },
            ),
        )
        .unwrap();
        let rep = theorems::ijk_sequence(&c, 0, 2, 4).unwrap();
        assert!(rep.all_exact());
        let mut saw = false;
        for (t, m) in rep.maps.iter().enumerate() {
            let prev_zero = t == 0 || rep.terms[t - 1].dim == 0;
            let next_zero = t + 2 >= rep.terms.len() || rep.terms[t + 2].dim == 0;
            if prev_zero && next_zero {
                assert!(m.is_iso(), "collapse iso seed {seed}");
                saw |= m.source.dim() > 0;
            }
        }
        assert!(saw, "seed {seed}: no nontrivial collapse isomorphism");
    }
    // mixed two-rows-one-column sequences
    for seed in 0..15u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                6,
                6,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![1, 4],
                    cols: vec![2],
                },
            ),
        )
        .unwrap();
        let rep = theorems::ijk_mixed_sequence(&c, 1, 4, 2).unwrap();
        assert!(rep.all_exact(), "mixed seed {seed}");
    }
    // two-borders shifted-rows isomorphisms
    for seed in 0..10u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                6,
                6,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![1, 4],
                    cols: vec![],
                },
            ),
        )
        .unwrap();
        let rep = theorems::two_borders(&c, TwoBordersVariant::TwoRows { m: 1, n: 4 }).unwrap();
        assert!(rep.witnesses.iter().all(|w| w.is_iso));
        assert!(rep.witnesses.iter().any(|w| w.start_dim > 0));
    }
    // splice systems
    for seed in 0..10u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                6,
                6,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![1, 2, 3],
                    cols: vec![2],
                },
            ),
        )
        .unwrap();
        let rep = long_sequences(
            &c,
            &LongSequenceSpec::Splice {
                rows: vec![1, 2, 3],
                cols: vec![2],
            },
        )
        .unwrap();
        assert!(rep.all_exact(), "splice 3+1 seed {seed}");
        let c2 = generate(
            f,
            &GeneratorSpec::new(
                seed,
                6,
                6,
                2,
                GeneratorMode::NonexactLines {
                    rows: vec![2, 3],
                    cols: vec![2, 3],
                },
            ),
        )
        .unwrap();
        let rep2 = long_sequences(
            &c2,
            &LongSequenceSpec::Splice {
                rows: vec![2, 3],
                cols: vec![2, 3],
            },
        )
        .unwrap();
        assert!(rep2.all_exact(), "splice 2+2 seed {seed}");
    }
    pass(6, "long and spliced exact sequences");
}

#[test]
fn criterion_07_total_homology() {
    let f = gf101();
    let degree_range = |c: &DoubleComplex| {
        c.window().map(|(a, b)| (a.i + a.r, b.i + b.r))
    };
    // (a) total six-term sequences on arbitrary valid complexes, with the
    // skew-complex cross-check
    for seed in 0..20u64 {
        let c = generate(f, &GeneratorSpec::new(seed, 4, 4, 2, GeneratorMode::ChainMapFill))
            .unwrap();
        let Some((lo, hi)) = degree_range(&c) else { continue };
        for n in lo..=hi {
            let (direct, skew) = total::total_salamander_crosscheck(&c, n).unwrap();
            assert!(direct.all_exact() && skew.all_exact(), "seed {seed} degree {n}");
            assert_eq!(direct.dims()[1..5], skew.dims()[1..5]);
        }
    }
    // (b) long sequence and invertible vertical identification on
    // exact-columns instances
    for seed in 0..15u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(
                seed,
                4,
                4,
                2,
                GeneratorMode::Tensor {
                    rows_exact: false,
                    cols_exact: true,
                },
            ),
        )
        .unwrap();
        let rep = total::total_long(&c).unwrap();
        assert!(rep.sequence.all_exact(), "seed {seed}");
        assert!(rep.bar1_iso.iter().all(|&(_, ok)| ok), "seed {seed}");
        // (c) and (d): vanishing plus the colimit identifications
        if let Some((lo, hi)) = degree_range(&c) {
            for n in lo..=hi {
                assert_eq!(total::total_homology(&c, n).value.dim(), 0);
                let col = total::staircase_colimit(&c, n).unwrap();
                assert_eq!(col.colimit_dim, col.cokernel_dim);
                assert_eq!(col.cokernel_dim, col.image_dim);
            }
        }
    }
    // (c) doubly exact instances
    for seed in 0..10u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(seed, 4, 4, 2, GeneratorMode::ExExtensions { count: 3 }),
        )
        .unwrap();
        if let Some((lo, hi)) = degree_range(&c) {
            for n in lo..=hi {
                assert_eq!(total::total_homology(&c, n).value.dim(), 0, "seed {seed}");
            }
        }
    }
    pass(7, "total homology: six-term, long sequence, vanishing, colimit");
}

#[test]
fn criterion_08_fx_decomposition() {
    let f = gf101();
    let mut done = 0usize;
    let mut seed = 0u64;
    while done < 100 {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 2 + (seed % 3) as usize;
        let mut anchors = std::collections::BTreeSet::new();
        let mut expected: Vec<ElementaryBlock> = Vec::new();
        let mut acc = DoubleComplex::empty(f);
        for _ in 0..k {
            let anchor = Position::new(rng.gen_range(0..3), rng.gen_range(0..3));
            if !anchors.insert(anchor) {
                continue;
            }
            let d = rng.gen_range(1..=2);
            expected.push(ElementaryBlock { anchor, dim: d });
            acc = random_extension(&acc, &elementary(f, anchor, d), rng.gen()).unwrap();
        }
        if expected.len() < 2 {
            continue;
        }
        expected.sort();
        let dec = construct::decompose_fx(&acc).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(dec.blocks, expected, "seed {seed}");
        assert_eq!(
            dec.blocks.iter().map(|b| 4 * b.dim).sum::<usize>(),
            acc.total_dimension(),
            "dimension accounting seed {seed}"
        );
        assert!(dec.steps.iter().all(|s| s.kernel_is_fx));
        done += 1;
    }
    pass(8, "elementary-block recovery with exact dimension accounting");
}

#[test]
fn criterion_09_twist() {
    let f = gf101();
    let mut done = 0usize;
    let mut seed = 0u64;
    while done < 100 {
        let c = generate(
            f,
            &GeneratorSpec::new(seed, 4, 4, 2, GeneratorMode::ChainMapFill),
        )
        .unwrap();
        seed += 1;
        let Some((min, max)) = c.window() else { continue };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fpos = Position::new(rng.gen_range(min.i..=max.i), rng.gen_range(min.r..=max.r));
        let (t, signs) = twist_build(&c, fpos).unwrap();
        assert!(!signs.is_empty());
        let rep = twist_sequence(&t).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(rep.sequence.all_exact(), "seed {seed}");
        done += 1;
    }
    // vanishing on bounded doubly exact inputs
    for seed in 0..20u64 {
        let c = generate(
            f,
            &GeneratorSpec::new(seed, 4, 4, 2, GeneratorMode::ExExtensions { count: 3 }),
        )
        .unwrap();
        let Some((min, max)) = c.window() else { continue };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fpos = Position::new(rng.gen_range(min.i..=max.i), rng.gen_range(min.r..=max.r));
        let (t, _) = twist_build(&c, fpos).unwrap();
        let rep = twist_sequence(&t).unwrap();
        assert!(rep.sequence.all_exact());
        assert!(
            rep.sequence.dims().iter().all(|&d| d == 0),
            "seed {seed}: twisted terms must vanish"
        );
        assert_eq!(rep.focus_upper.dim(), 0);
        assert_eq!(rep.focus_lower.dim(), 0);
    }
    pass(9, "twist sequences exact, vanishing on bounded exact input");
}

#[test]
fn criterion_10_nfold() {
    let f = gf101();
    let (two, orbits2) = nfold::enumerate_downsets(2);
    assert_eq!(two.len(), 4);
    assert_eq!(orbits2.len(), 3);
    let (three, orbits3) = nfold::enumerate_downsets(3);
    assert_eq!(three.len(), 18);
    let mut sizes: Vec<usize> = orbits3.iter().map(|o| o.len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 1, 1, 3, 3, 3, 3, 3]);
    // the two-dimensional dictionary on 100 random complexes
    let dictionary = [
        (DownSet::new(2, vec![0b11]).unwrap(), CornerKind::Donor),
        (
            DownSet::new(2, vec![0b10, 0b11]).unwrap(),
            CornerKind::Horizontal,
        ),
        (
            DownSet::new(2, vec![0b01, 0b11]).unwrap(),
            CornerKind::Vertical,
        ),
        (
            DownSet::new(2, vec![0b01, 0b10, 0b11]).unwrap(),
            CornerKind::Receptor,
        ),
    ];
    for seed in 0..100u64 {
        let c = generate(f, &GeneratorSpec::new(seed, 3, 3, 2, GeneratorMode::ChainMapFill))
            .unwrap();
        for p in c.positions() {
            for (ds, kind) in &dictionary {
                let got = nfold::downset_homology_double(&c, p, ds).unwrap();
                assert_eq!(got, corner(&c, p, *kind).value, "seed {seed} at {p}");
            }
        }
    }
    // denominator inside numerator on triple complexes, and vanishing on
    // block extensions
    for seed in 0..10u64 {
        let t = nfold::random_extension_triple(
            &nfold::elementary_triple(f, (0, 0, 0), 1),
            &nfold::elementary_triple(f, ((seed % 2) as i64, 1, (seed % 3) as i64), 1),
            seed,
        )
        .unwrap();
        assert!(t.is_valid());
        let view = NComplex::Triple(&t);
        for &p in &t.support() {
            for s in &three {
                nfold::downset_subquotient(&view, p, s).unwrap();
            }
        }
        let probe = nfold::triple_vanishing_probe(&t).unwrap();
        assert!(probe.nonzero.is_empty(), "seed {seed}: {:?}", probe.nonzero);
    }
    pass(10, "down-set constructions: counts, orbits, dictionary, vanishing");
}

#[test]
fn criterion_11_infrastructure() {
    let f = gf101();
    // parser round-trip byte stability
    for seed in 0..20u64 {
        let c = generate(f, &GeneratorSpec::new(seed, 4, 4, 3, GeneratorMode::ChainMapFill))
            .unwrap();
        let text = textio::print_double(&c);
        let textio::ParsedComplex::Double(back) = textio::parse(&text).unwrap() else {
            panic!()
        };
        assert_eq!(back, c);
        assert_eq!(textio::print_double(&back), text, "byte stability");
    }
    // determinism under fixed seeds
    for seed in [0u64, 3, 9] {
        let spec = GeneratorSpec::new(
            seed,
            5,
            5,
            3,
            GeneratorMode::NonexactLines {
                rows: vec![1, 3],
                cols: vec![2],
            },
        );
        assert_eq!(generate(f, &spec).unwrap(), generate(f, &spec).unwrap());
    }
    // GF(101) and rational backends agree on 20 fixed integer fixtures
    let q = FieldSpec::Rationals;
    for seed in 0..20u64 {
        let cq = generate(q, &GeneratorSpec::new(seed, 3, 3, 2, GeneratorMode::ChainMapFill))
            .unwrap();
        // reduce every matrix entry into GF(101)
        let reduce = |m: &Matrix| -> Matrix {
            let entries: Vec<Scalar> = (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| f.reduce_scalar(m.at(i, j)).unwrap())
                .collect();
            Matrix::new(f, m.rows(), m.cols(), entries).unwrap()
        };
        let cp = DoubleComplex::new(
            f,
            cq.dims_map().clone(),
            cq.stored_dv().iter().map(|(p, m)| (*p, reduce(m))).collect(),
            cq.stored_dh().iter().map(|(p, m)| (*p, reduce(m))).collect(),
        )
        .unwrap();
        assert!(cq.is_valid() && cp.is_valid());
        for p in cq.positions() {
            for kind in [
                CornerKind::Horizontal,
                CornerKind::Vertical,
                CornerKind::Donor,
                CornerKind::Receptor,
            ] {
                assert_eq!(
                    corner(&cq, p, kind).dim(),
                    corner(&cp, p, kind).dim(),
                    "fixture {seed} at {p} {kind}"
                );
            }
            assert_eq!(cq.row_exact_at(p), cp.row_exact_at(p));
            assert_eq!(cq.col_exact_at(p), cp.col_exact_at(p));
        }
        // extramural maps exist over both backends
        for p in cq.positions() {
            assert_eq!(
                extramural(&cq, p, Direction::Horizontal).unwrap().matrix.rows(),
                extramural(&cp, p, Direction::Horizontal).unwrap().matrix.rows()
            );
        }
    }
    pass(11, "round-trip stability, determinism, backend agreement");
}
