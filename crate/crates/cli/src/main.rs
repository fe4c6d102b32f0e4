//! Command-line surface: load complexes from the text format, run the
//! verification machinery, and emit human or JSON reports.
//!
//! Exit codes: 0 when every requested verdict holds, 1 when some verdict
//! fails, 2 for usage or parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use salamander_core::construct::{self, GeneratorMode, GeneratorSpec};
use salamander_core::corners::{self, CornerKind};
use salamander_core::grid::Direction;
use salamander_core::nfold::{self, DownSet, NComplex};
use salamander_core::textio::{self, ParsedComplex};
use salamander_core::theorems::{self, LongSequenceSpec};
use salamander_core::total;
use salamander_core::{DoubleComplex, FieldSpec, Position};

mod report;
use report::Reporter;

#[derive(Parser)]
#[command(
    name = "salamander",
    about = "Exact diagram chasing on finite double and triple complexes",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for anything randomized (generators, self checks).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the complex axioms (d^2 = 0, commuting squares).
    Validate { file: PathBuf },
    /// Print the donor/receptor/homology dimensions per position.
    Corners {
        file: PathBuf,
        /// Restrict to one position, as `i,r`.
        #[arg(long)]
        pos: Option<String>,
        /// Restrict to one kind: hor, ver, donor, receptor.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Verify the six-term exact sequence of one arrow, or all of them.
    Salamander {
        file: PathBuf,
        /// Arrow as `i,r,h` or `i,r,v`.
        #[arg(long, conflicts_with = "all")]
        arrow: Option<String>,
        /// Check every arrow of the complex.
        #[arg(long)]
        all: bool,
    },
    /// Verify the snake lemma on a two-row, three-column diagram.
    Snake { file: PathBuf },
    /// Verify the sharp 3x3 statement on a 3x3 diagram.
    Sharp3x3 { file: PathBuf },
    /// Assemble and verify a long exact sequence.
    Longseq {
        file: PathBuf,
        /// One of: one-row:I | linked | ijk:I,J,K | ijk-mixed:I,J,K |
        /// nine-term:I,R | splice:rows=A,B,..:cols=C,..
        #[arg(long)]
        spec: String,
    },
    /// Total complex, total homology, and the total six-term sequence.
    Total {
        file: PathBuf,
        /// Restrict to a single degree.
        #[arg(long)]
        degree: Option<i64>,
    },
    /// Peel a finite exact complex into elementary blocks.
    Decompose { file: PathBuf },
    /// Enumerate the generalized homology constructions of the n-cube.
    Downsets {
        #[arg(long, default_value_t = 3)]
        n: u8,
    },
    /// Evaluate a down-set construction on a triple complex.
    Triple {
        file: PathBuf,
        /// Up-set members as comma-separated bit strings, e.g. `011,101,111`.
        #[arg(long)]
        downset: String,
        /// Position as `i,j,k`.
        #[arg(long)]
        pos: String,
    },
    /// Generate a complex and write it in the text format.
    Gen {
        /// One of: tensor-exact | tensor-rows | tensor-cols | tensor-none |
        /// chainfill | snake | sharp3x3 | ex-extensions:K |
        /// lines:rows=A,B:cols=C
        #[arg(long)]
        mode: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Field: `gf:P` or `q`.
        #[arg(long, default_value = "gf:101")]
        field: String,
    },
    /// Run the full property suite over generated instances.
    Selfcheck {
        #[arg(long, default_value_t = 5)]
        seeds: u64,
    },
}

fn parse_field(text: &str) -> anyhow::Result<FieldSpec> {
    if text == "q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(p) = text.strip_prefix("gf:") {
        return Ok(FieldSpec::prime(p.parse()?)?);
    }
    anyhow::bail!("field must be `q` or `gf:P`")
}

fn load(file: &PathBuf) -> Result<ParsedComplex, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    textio::parse(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn load_double(file: &PathBuf) -> Result<DoubleComplex, String> {
    match load(file)? {
        ParsedComplex::Double(c) => Ok(c),
        ParsedComplex::Triple(_) => Err(format!(
            "{}: expected a double complex",
            file.display()
        )),
    }
}

fn parse_pos(text: &str) -> Result<Position, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("bad position `{text}`, expected i,r"));
    }
    let i = parts[0].trim().parse().map_err(|_| format!("bad index `{}`", parts[0]))?;
    let r = parts[1].trim().parse().map_err(|_| format!("bad index `{}`", parts[1]))?;
    Ok(Position::new(i, r))
}

fn parse_longseq_spec(text: &str) -> Result<LongSequenceSpec, String> {
    let parse_list = |s: &str| -> Result<Vec<i64>, String> {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| format!("bad index `{x}`")))
            .collect()
    };
    if let Some(rest) = text.strip_prefix("one-row:") {
        return Ok(LongSequenceSpec::OneRow {
            row: rest.trim().parse().map_err(|_| "bad row index".to_string())?,
        });
    }
    if text == "linked" {
        return Ok(LongSequenceSpec::LinkedAll);
    }
    if let Some(rest) = text.strip_prefix("ijk-mixed:") {
        let v = parse_list(rest)?;
        if v.len() != 3 {
            return Err("ijk-mixed needs three indices".into());
        }
        return Ok(LongSequenceSpec::IjkMixed {
            i: v[0],
            j: v[1],
            k_col: v[2],
        });
    }
    if let Some(rest) = text.strip_prefix("ijk:") {
        let v = parse_list(rest)?;
        if v.len() != 3 {
            return Err("ijk needs three row indices".into());
        }
        return Ok(LongSequenceSpec::Ijk {
            i: v[0],
            j: v[1],
            k: v[2],
        });
    }
    if let Some(rest) = text.strip_prefix("nine-term:") {
        let v = parse_list(rest)?;
        if v.len() != 2 {
            return Err("nine-term needs a position i,r".into());
        }
        return Ok(LongSequenceSpec::NineTerm { i: v[0], r: v[1] });
    }
    if let Some(rest) = text.strip_prefix("splice:") {
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for chunk in rest.split(':') {
            if let Some(r) = chunk.strip_prefix("rows=") {
                rows = parse_list(r)?;
            } else if let Some(c) = chunk.strip_prefix("cols=") {
                cols = parse_list(c)?;
            } else {
                return Err(format!("bad splice chunk `{chunk}`"));
            }
        }
        return Ok(LongSequenceSpec::Splice { rows, cols });
    }
    Err(format!("unknown sequence spec `{text}`"))
}

fn parse_gen_mode(text: &str) -> Result<GeneratorMode, String> {
    match text {
        "tensor-exact" => Ok(GeneratorMode::Tensor {
            rows_exact: true,
            cols_exact: true,
        }),
        "tensor-rows" => Ok(GeneratorMode::Tensor {
            rows_exact: true,
            cols_exact: false,
        }),
        "tensor-cols" => Ok(GeneratorMode::Tensor {
            rows_exact: false,
            cols_exact: true,
        }),
        "tensor-none" => Ok(GeneratorMode::Tensor {
            rows_exact: false,
            cols_exact: false,
        }),
        "chainfill" => Ok(GeneratorMode::ChainMapFill),
        "snake" => Ok(GeneratorMode::SnakeInstance),
        "sharp3x3" => Ok(GeneratorMode::Sharp3x3Instance),
        other => {
            if let Some(k) = other.strip_prefix("ex-extensions:") {
                let count = k.parse().map_err(|_| "bad extension count".to_string())?;
                return Ok(GeneratorMode::ExExtensions { count });
            }
            if let Some(rest) = other.strip_prefix("lines:") {
                let mut rows = Vec::new();
                let mut cols = Vec::new();
                for chunk in rest.split(':') {
                    if let Some(r) = chunk.strip_prefix("rows=") {
                        rows = r
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(|x| x.parse().map_err(|_| format!("bad row `{x}`")))
                            .collect::<Result<_, _>>()?;
                    } else if let Some(c) = chunk.strip_prefix("cols=") {
                        cols = c
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(|x| x.parse().map_err(|_| format!("bad col `{x}`")))
                            .collect::<Result<_, _>>()?;
                    } else {
                        return Err(format!("bad lines chunk `{chunk}`"));
                    }
                }
                return Ok(GeneratorMode::NonexactLines { rows, cols });
            }
            Err(format!("unknown generator mode `{other}`"))
        }
    }
}

/// Outcome of a command: verdicts hold, some verdict failed, or usage error.
enum Outcome {
    Pass,
    Fail(String),
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let mut rep = Reporter::new(cli.json);
    let outcome = dispatch(cli, &mut rep)?;
    rep.finish();
    Ok(outcome)
}

fn dispatch(cli: &Cli, rep: &mut Reporter) -> Result<Outcome, String> {
    match &cli.command {
        Command::Validate { file } => {
            let parsed = load(file)?;
            let issues: Vec<String> = match &parsed {
                ParsedComplex::Double(c) => {
                    c.validate().iter().map(|i| i.to_string()).collect()
                }
                ParsedComplex::Triple(t) => t.validate(),
            };
            rep.kv("issues", &issues.len().to_string());
            for issue in &issues {
                rep.line(issue);
            }
            if issues.is_empty() {
                rep.line("valid double/triple complex");
                Ok(Outcome::Pass)
            } else {
                Ok(Outcome::Fail("complex axioms violated".into()))
            }
        }
        Command::Corners { file, pos, kind } => {
            let c = load_double(file)?;
            let kinds: Vec<CornerKind> = match kind.as_deref() {
                None => vec![
                    CornerKind::Receptor,
                    CornerKind::Horizontal,
                    CornerKind::Vertical,
                    CornerKind::Donor,
                ],
                Some("hor") => vec![CornerKind::Horizontal],
                Some("ver") => vec![CornerKind::Vertical],
                Some("donor") => vec![CornerKind::Donor],
                Some("receptor") => vec![CornerKind::Receptor],
                Some(other) => return Err(format!("unknown corner kind `{other}`")),
            };
            let positions = match pos {
                Some(p) => vec![parse_pos(p)?],
                None => c.positions(),
            };
            for p in positions {
                for &k in &kinds {
                    let co = corners::corner(&c, p, k);
                    rep.corner(&co);
                }
            }
            Ok(Outcome::Pass)
        }
        Command::Salamander { file, arrow, all } => {
            let c = load_double(file)?;
            if !c.is_valid() {
                return Err("complex is not valid; run `validate`".into());
            }
            let arrows: Vec<(Position, Direction)> = if *all {
                c.positions()
                    .into_iter()
                    .flat_map(|p| {
                        [(p, Direction::Horizontal), (p, Direction::Vertical)]
                    })
                    .collect()
            } else {
                let text = arrow.as_deref().ok_or("pass --arrow i,r,(h|v) or --all")?;
                let parts: Vec<&str> = text.split(',').collect();
                if parts.len() != 3 {
                    return Err("arrow must be i,r,h or i,r,v".into());
                }
                let p = parse_pos(&format!("{},{}", parts[0], parts[1]))?;
                let dir = match parts[2].trim() {
                    "h" => Direction::Horizontal,
                    "v" => Direction::Vertical,
                    other => return Err(format!("bad direction `{other}`")),
                };
                vec![(p, dir)]
            };
            let mut ok = true;
            for (p, dir) in arrows {
                let seq = corners::salamander(&c, p, dir).map_err(|e| e.to_string())?;
                ok &= seq.all_exact();
                rep.sequence(&seq);
            }
            if ok {
                Ok(Outcome::Pass)
            } else {
                Ok(Outcome::Fail("a six-term sequence is not exact".into()))
            }
        }
        Command::Snake { file } => {
            let c = load_double(file)?;
            let snake = theorems::snake(&c).map_err(|e| e.to_string())?;
            rep.sequence(&snake.sequence);
            rep.kv("connecting map", &snake.connecting.to_string());
            rep.trace("connecting path", &snake.path_trace);
            if snake.sequence.all_exact() && snake.connecting == snake.oracle {
                rep.line("connecting map agrees with the lifting construction");
                Ok(Outcome::Pass)
            } else {
                Ok(Outcome::Fail("snake verification failed".into()))
            }
        }
        Command::Sharp3x3 { file } => {
            let c = load_double(file)?;
            let sharp = theorems::sharp_3x3(&c).map_err(|e| e.to_string())?;
            rep.chain(&sharp.chain_a);
            rep.chain(&sharp.chain_b);
            if let Some(cc) = &sharp.chain_c {
                rep.chain(cc);
            }
            for (p, ok) in &sharp.first_row_exact {
                rep.kv(&format!("first row exact at {p}"), &ok.to_string());
            }
            Ok(Outcome::Pass)
        }
        Command::Longseq { file, spec } => {
            let c = load_double(file)?;
            let spec = parse_longseq_spec(spec)?;
            let out = theorems::long_sequences(&c, &spec).map_err(|e| e.to_string())?;
            for seq in &out.sequences {
                rep.sequence(seq);
            }
            for link in &out.links {
                rep.kv(&link.description, &link.is_iso.to_string());
            }
            if out.all_exact() {
                Ok(Outcome::Pass)
            } else {
                Ok(Outcome::Fail("a long sequence verdict failed".into()))
            }
        }
        Command::Total { file, degree } => {
            let c = load_double(file)?;
            if !c.is_valid() {
                return Err("complex is not valid; run `validate`".into());
            }
            let t = total::total_complex(&c).map_err(|e| e.to_string())?;
            let degrees: Vec<i64> = match degree {
                Some(n) => vec![*n],
                None => t.degrees.keys().copied().collect(),
            };
            let mut ok = true;
            for n in degrees {
                let h = total::total_homology(&c, n);
                let d = total::total_donor(&c, n);
                let r = total::total_receptor(&c, n);
                rep.kv(
                    &format!("degree {n}"),
                    &format!(
                        "homology {}, donor {}, receptor {}, blockwise {}",
                        h.value.dim(),
                        d.value.dim(),
                        r.value.dim(),
                        total::blockwise_identity(&c, n)
                    ),
                );
                let seq = total::total_salamander(&c, n).map_err(|e| e.to_string())?;
                ok &= seq.all_exact();
                rep.sequence(&seq);
            }
            if ok {
                Ok(Outcome::Pass)
            } else {
                Ok(Outcome::Fail("a total six-term sequence is not exact".into()))
            }
        }
        Command::Decompose { file } => {
            let c = load_double(file)?;
            let dec = construct::decompose_fx(&c).map_err(|e| e.to_string())?;
            rep.kv("total dimension", &dec.total_dim.to_string());
            rep.kv("blocks", &dec.blocks.len().to_string());
            for b in &dec.blocks {
                rep.line(&format!("block at {} of dimension {}", b.anchor, b.dim));
            }
            Ok(Outcome::Pass)
        }
        Command::Downsets { n } => {
            if *n != 2 && *n != 3 {
                return Err("n must be 2 or 3".into());
            }
            let (all, orbits) = nfold::enumerate_downsets(*n);
            rep.kv("constructions", &all.len().to_string());
            rep.kv("orbits", &orbits.len().to_string());
            for (k, orbit) in orbits.iter().enumerate() {
                let members: Vec<String> = orbit
                    .iter()
                    .map(|d| {
                        d.members
                            .iter()
                            .map(|m| format!("{m:0width$b}", width = *n as usize))
                            .collect::<Vec<_>>()
                            .join("+")
                    })
                    .collect();
                rep.line(&format!(
                    "orbit {k} (size {}): {}",
                    orbit.len(),
                    members.join("  ")
                ));
            }
            Ok(Outcome::Pass)
        }
        Command::Triple { file, downset, pos } => {
            let ParsedComplex::Triple(t) = load(file)? else {
                return Err("expected a triple complex".into());
            };
            let parts: Vec<&str> = pos.split(',').collect();
            if parts.len() != 3 {
                return Err("position must be i,j,k".into());
            }
            let p: (i64, i64, i64) = (
                parts[0].trim().parse().map_err(|_| "bad index")?,
                parts[1].trim().parse().map_err(|_| "bad index")?,
                parts[2].trim().parse().map_err(|_| "bad index")?,
            );
            let members: Vec<u8> = downset
                .split(',')
                .map(|s| u8::from_str_radix(s.trim(), 2).map_err(|_| format!("bad vector `{s}`")))
                .collect::<Result<_, _>>()?;
            let ds = DownSet::new(3, members).map_err(|e| e.to_string())?;
            let sq = nfold::downset_subquotient(&NComplex::Triple(&t), p, &ds)
                .map_err(|e| e.to_string())?;
            rep.kv(
                &format!("construction at ({},{},{})", p.0, p.1, p.2),
                &format!("dimension {}", sq.dim()),
            );
            Ok(Outcome::Pass)
        }
        Command::Gen {
            mode,
            out,
            rows,
            cols,
            max_dim,
            field,
        } => {
            let f = parse_field(field).map_err(|e| e.to_string())?;
            let mode = parse_gen_mode(mode)?;
            let spec = GeneratorSpec::new(cli.seed, *rows, *cols, *max_dim, mode);
            let c = construct::generate(f, &spec).map_err(|e| e.to_string())?;
            std::fs::write(out, textio::print_double(&c))
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            rep.kv("written", &out.display().to_string());
            rep.kv("support", &c.support().len().to_string());
            rep.kv("total dimension", &c.total_dimension().to_string());
            Ok(Outcome::Pass)
        }
        Command::Selfcheck { seeds } => selfcheck(cli.seed, *seeds, rep),
    }
}

/// A condensed run of the property suite: generators, salamanders,
/// factorization, iso criteria, snake, total homology.
fn selfcheck(base_seed: u64, count: u64, rep: &mut Reporter) -> Result<Outcome, String> {
    use rand::SeedableRng;
    let f = FieldSpec::prime(101).unwrap();
    let mut failures = Vec::new();
    let mut checks = 0usize;
    for k in 0..count {
        let seed = base_seed.wrapping_add(k);
        let modes = [
            GeneratorMode::ChainMapFill,
            GeneratorMode::Tensor {
                rows_exact: false,
                cols_exact: true,
            },
            GeneratorMode::ExExtensions { count: 2 },
            GeneratorMode::NonexactLines {
                rows: vec![1, 2],
                cols: vec![],
            },
        ];
        for mode in modes {
            let c = construct::generate(f, &GeneratorSpec::new(seed, 4, 4, 3, mode.clone()))
                .map_err(|e| e.to_string())?;
            if !c.is_valid() {
                failures.push(format!("seed {seed}: invalid complex from {mode:?}"));
                continue;
            }
            for p in c.positions() {
                for dir in [Direction::Horizontal, Direction::Vertical] {
                    checks += 1;
                    match corners::salamander(&c, p, dir) {
                        Ok(seq) if seq.all_exact() => {}
                        Ok(_) => failures.push(format!("seed {seed}: sequence at {p} {dir}")),
                        Err(e) => failures.push(format!("seed {seed}: {e}")),
                    }
                    let direct = corners::induced_homology_map(&c, p, dir);
                    let factored = corners::induced_homology_map_factored(&c, p, dir);
                    match (direct, factored) {
                        (Ok(a), Ok(b)) if a.matrix == b.matrix => {}
                        _ => failures.push(format!("seed {seed}: factorization at {p} {dir}")),
                    }
                }
            }
            if let Some((lo, hi)) = c.window().map(|(a, b)| (a.i + a.r, b.i + b.r)) {
                for n in lo..=hi {
                    checks += 1;
                    match total::total_salamander(&c, n) {
                        Ok(seq) if seq.all_exact() => {}
                        _ => failures.push(format!("seed {seed}: total sequence at {n}")),
                    }
                }
            }
        }
        // one snake instance per seed
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sn = construct::snake_instance(&mut rng, f, 3);
        checks += 1;
        match theorems::snake_at(&sn, Position::new(0, 0)) {
            Ok(out) if out.sequence.all_exact() && out.connecting == out.oracle => {}
            Ok(_) => failures.push(format!("seed {seed}: snake verdicts")),
            Err(e) => failures.push(format!("seed {seed}: snake: {e}")),
        }
    }
    rep.kv("checks", &checks.to_string());
    rep.kv("failures", &failures.len().to_string());
    for msg in &failures {
        rep.line(msg);
    }
    if failures.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Fail("self check found failures".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
