//! Line-oriented text format for complexes.
//!
//! ```text
//! # comments run to the end of the line
//! field gf 7            # or: field q
//! object I R DIM
//! dv I R [1,2;3,4]      # A(I,R) -> A(I+1,R), rows separated by ';'
//! dh I R [1/2]          # A(I,R) -> A(I,R+1), rationals as a/b
//! ```
//!
//! Triple complexes use four indices and the map keywords d1, d2, d3.
//! Unlisted objects and maps are zero; matrix shapes are checked against
//! the declared dimensions; the window is inferred from the declarations.
//! The printer emits a canonical normal form (sorted declarations,
//! canonical scalars), and parsing then printing is byte-stable.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactlin::{FieldSpec, Matrix, Scalar};
use crate::grid::{DoubleComplex, Position};
use crate::nfold::{Position3, TripleComplex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedComplex {
    Double(DoubleComplex),
    Triple(TripleComplex),
}

struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
    })
}

fn tokenize(line: &str, lineno: usize) -> Vec<Tok<'_>> {
    let body = match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    };
    let mut toks = Vec::new();
    let mut start = None;
    for (k, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                toks.push(Tok {
                    text: &body[s..k],
                    line: lineno,
                    col: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    toks
}

fn parse_int(t: &Tok) -> Result<i64, ParseError> {
    t.text
        .parse::<i64>()
        .map_err(|_| ParseError {
            line: t.line,
            col: t.col,
            message: format!("expected an integer, found `{}`", t.text),
        })
}

fn parse_scalar(field: FieldSpec, text: &str, line: usize, col: usize) -> Result<Scalar, ParseError> {
    if let Some((num, den)) = text.split_once('/') {
        if !matches!(field, FieldSpec::Rationals) {
            return err(line, col, "fractional entries are only valid over the rationals");
        }
        let n: i64 = num
            .parse()
            .map_err(|_| ParseError {
                line,
                col,
                message: format!("bad numerator `{num}`"),
            })?;
        let d: i64 = den
            .parse()
            .map_err(|_| ParseError {
                line,
                col,
                message: format!("bad denominator `{den}`"),
            })?;
        if d == 0 {
            return err(line, col, "zero denominator");
        }
        field
            .from_ratio(n, d)
            .map_err(|e| ParseError {
                line,
                col,
                message: e.to_string(),
            })
    } else {
        let n: i64 = text.parse().map_err(|_| ParseError {
            line,
            col,
            message: format!("expected a scalar, found `{text}`"),
        })?;
        Ok(field.from_i64(n))
    }
}

fn parse_matrix(
    field: FieldSpec,
    t: &Tok,
    rows: usize,
    cols: usize,
) -> Result<Matrix, ParseError> {
    let body = t
        .text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ParseError {
            line: t.line,
            col: t.col,
            message: "matrix must be bracketed like [1,2;3,4]".into(),
        })?;
    let row_texts: Vec<&str> = if body.is_empty() {
        Vec::new()
    } else {
        body.split(';').collect()
    };
    if row_texts.len() != rows {
        return err(
            t.line,
            t.col,
            format!("matrix has {} rows, expected {rows}", row_texts.len()),
        );
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for rt in &row_texts {
        let cells: Vec<&str> = if rt.is_empty() {
            Vec::new()
        } else {
            rt.split(',').collect()
        };
        if cells.len() != cols {
            return err(
                t.line,
                t.col,
                format!("matrix row has {} entries, expected {cols}", cells.len()),
            );
        }
        for cell in cells {
            entries.push(parse_scalar(field, cell.trim(), t.line, t.col)?);
        }
    }
    Matrix::new(field, rows, cols, entries).map_err(|e| ParseError {
        line: t.line,
        col: t.col,
        message: e.to_string(),
    })
}

/// Parse a complex file.
pub fn parse(text: &str) -> Result<ParsedComplex, ParseError> {
    let mut field: Option<FieldSpec> = None;
    let mut arity: Option<u8> = None;
    let mut dims2: BTreeMap<Position, usize> = BTreeMap::new();
    let mut dims3: BTreeMap<Position3, usize> = BTreeMap::new();
    struct RawMap<'a> {
        keyword: &'a str,
        indices: Vec<i64>,
        tok_index: usize,
        line: usize,
        col: usize,
    }
    let mut raw_lines: Vec<(Vec<Tok>, RawMap)> = Vec::new();
    let mut seen_objects: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut seen_maps: Vec<(String, Vec<i64>)> = Vec::new();

    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let toks = tokenize(line, lineno);
        if toks.is_empty() {
            continue;
        }
        let head = toks[0].text;
        match head {
            "field" => {
                if field.is_some() {
                    return err(toks[0].line, toks[0].col, "duplicate field declaration");
                }
                match toks.get(1).map(|t| t.text) {
                    Some("q") => field = Some(FieldSpec::Rationals),
                    Some("gf") => {
                        let Some(ptok) = toks.get(2) else {
                            return err(toks[0].line, toks[0].col, "field gf needs a modulus");
                        };
                        let p = parse_int(ptok)?;
                        if p < 2 {
                            return err(ptok.line, ptok.col, format!("modulus {p} is not prime"));
                        }
                        field = Some(FieldSpec::prime(p as u64).map_err(|e| ParseError {
                            line: ptok.line,
                            col: ptok.col,
                            message: e.to_string(),
                        })?);
                    }
                    _ => return err(toks[0].line, toks[0].col, "expected `field gf P` or `field q`"),
                }
            }
            "object" => {
                let f = field.ok_or_else(|| ParseError {
                    line: toks[0].line,
                    col: toks[0].col,
                    message: "field must be declared first".into(),
                })?;
                let _ = f;
                let nums: Vec<i64> = toks[1..]
                    .iter()
                    .map(parse_int)
                    .collect::<Result<_, _>>()?;
                let (this_arity, idx, dim) = match nums.len() {
                    3 => (2u8, vec![nums[0], nums[1]], nums[2]),
                    4 => (3u8, vec![nums[0], nums[1], nums[2]], nums[3]),
                    _ => {
                        return err(
                            toks[0].line,
                            toks[0].col,
                            "object takes 2 or 3 indices and a dimension",
                        )
                    }
                };
                if dim < 0 {
                    return err(toks[0].line, toks[0].col, "dimension must be nonnegative");
                }
                if *arity.get_or_insert(this_arity) != this_arity {
                    return err(toks[0].line, toks[0].col, "mixed double and triple declarations");
                }
                if seen_objects.iter().any(|(_, i2)| *i2 == idx) {
                    return err(toks[0].line, toks[0].col, "duplicate object declaration");
                }
                seen_objects.push((toks[0].line, idx.clone()));
                if this_arity == 2 {
                    dims2.insert(Position::new(idx[0], idx[1]), dim as usize);
                } else {
                    dims3.insert((idx[0], idx[1], idx[2]), dim as usize);
                }
            }
            "dv" | "dh" | "d1" | "d2" | "d3" => {
                let this_arity: u8 = if head == "dv" || head == "dh" { 2 } else { 3 };
                if *arity.get_or_insert(this_arity) != this_arity {
                    return err(toks[0].line, toks[0].col, "mixed double and triple declarations");
                }
                let n_idx = this_arity as usize;
                if toks.len() != n_idx + 2 {
                    return err(
                        toks[0].line,
                        toks[0].col,
                        format!("{head} takes {n_idx} indices and a matrix"),
                    );
                }
                let indices: Vec<i64> = toks[1..=n_idx]
                    .iter()
                    .map(parse_int)
                    .collect::<Result<_, _>>()?;
                let key = (head.to_string(), indices.clone());
                if seen_maps.contains(&key) {
                    return err(toks[0].line, toks[0].col, "duplicate map declaration");
                }
                seen_maps.push(key);
                raw_lines.push((
                    toks.into_iter().collect(),
                    RawMap {
                        keyword: "",
                        indices,
                        tok_index: n_idx + 1,
                        line: lineno,
                        col: 0,
                    },
                ));
            }
            other => {
                return err(
                    toks[0].line,
                    toks[0].col,
                    format!("unknown keyword `{other}`"),
                );
            }
        }
    }
    let field = field.ok_or_else(|| ParseError {
        line: 1,
        col: 1,
        message: "missing field declaration".into(),
    })?;
    let arity = arity.unwrap_or(2);
    if arity == 2 {
        let mut dv = BTreeMap::new();
        let mut dh = BTreeMap::new();
        let dim_at = |p: Position| dims2.get(&p).copied().unwrap_or(0);
        for (toks, raw) in &raw_lines {
            let head = toks[0].text;
            let p = Position::new(raw.indices[0], raw.indices[1]);
            let target = if head == "dv" { p.down() } else { p.right() };
            let m = parse_matrix(field, &toks[raw.tok_index], dim_at(target), dim_at(p))?;
            let _ = (raw.keyword, raw.line, raw.col);
            if head == "dv" {
                dv.insert(p, m);
            } else {
                dh.insert(p, m);
            }
        }
        let c = DoubleComplex::new(field, dims2, dv, dh).map_err(|e| ParseError {
            line: 1,
            col: 1,
            message: e.to_string(),
        })?;
        Ok(ParsedComplex::Double(c))
    } else {
        let mut maps = [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
        let dim_at = |p: Position3| dims3.get(&p).copied().unwrap_or(0);
        for (toks, raw) in &raw_lines {
            let head = toks[0].text;
            let axis = match head {
                "d1" => 0usize,
                "d2" => 1,
                "d3" => 2,
                _ => return err(raw.line, 1, "dv/dh are for double complexes"),
            };
            let p = (raw.indices[0], raw.indices[1], raw.indices[2]);
            let mut q = p;
            match axis {
                0 => q.0 += 1,
                1 => q.1 += 1,
                _ => q.2 += 1,
            }
            let m = parse_matrix(field, &toks[raw.tok_index], dim_at(q), dim_at(p))?;
            maps[axis].insert(p, m);
        }
        let t = TripleComplex::new(
            field,
            dims3,
            maps[0].clone(),
            maps[1].clone(),
            maps[2].clone(),
        )
        .map_err(|e| ParseError {
            line: 1,
            col: 1,
            message: e.to_string(),
        })?;
        Ok(ParsedComplex::Triple(t))
    }
}

fn field_line(f: FieldSpec) -> String {
    match f {
        FieldSpec::Prime(p) => format!("field gf {p}"),
        FieldSpec::Rationals => "field q".into(),
    }
}

/// Print a double complex in the canonical normal form.
pub fn print_double(c: &DoubleComplex) -> String {
    let mut out = String::new();
    out.push_str(&field_line(c.field()));
    out.push('\n');
    for (p, d) in c.dims_map() {
        out.push_str(&format!("object {} {} {}\n", p.i, p.r, d));
    }
    for (p, m) in c.stored_dv() {
        out.push_str(&format!("dv {} {} [{}]\n", p.i, p.r, m.to_string_rows()));
    }
    for (p, m) in c.stored_dh() {
        out.push_str(&format!("dh {} {} [{}]\n", p.i, p.r, m.to_string_rows()));
    }
    out
}

/// Print a triple complex in the canonical normal form.
pub fn print_triple(t: &TripleComplex) -> String {
    let mut out = String::new();
    out.push_str(&field_line(t.field()));
    out.push('\n');
    for p in t.support() {
        out.push_str(&format!("object {} {} {} {}\n", p.0, p.1, p.2, t.dim(p)));
    }
    for (axis, kw) in ["d1", "d2", "d3"].iter().enumerate() {
        for p in t.support() {
            let m = t.differential(p, axis);
            if !m.is_zero() {
                out.push_str(&format!(
                    "{kw} {} {} {} [{}]\n",
                    p.0,
                    p.1,
                    p.2,
                    m.to_string_rows()
                ));
            }
        }
    }
    out
}

pub fn print(c: &ParsedComplex) -> String {
    match c {
        ParsedComplex::Double(d) => print_double(d),
        ParsedComplex::Triple(t) => print_triple(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{elementary, generate, GeneratorMode, GeneratorSpec};

    #[test]
    fn empty_file_after_field_is_zero_complex() {
        let ParsedComplex::Double(c) = parse("field gf 7\n").unwrap() else {
            panic!("expected a double complex");
        };
        assert!(c.is_valid());
        assert!(c.support().is_empty());
    }

    #[test]
    fn elementary_block_fixture_roundtrips() {
        let f = FieldSpec::prime(7).unwrap();
        let c = elementary(f, Position::new(0, 0), 2);
        let text = print_double(&c);
        let ParsedComplex::Double(back) = parse(&text).unwrap() else {
            panic!()
        };
        assert_eq!(back, c);
        // byte stability
        assert_eq!(print_double(&back), text);
    }

    #[test]
    fn dimension_mismatch_reported_with_position() {
        let text = "field gf 7\nobject 0 0 1\nobject 1 0 1\ndv 0 0 [1,0]\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("entries"), "{e}");
    }

    #[test]
    fn duplicate_and_syntax_errors() {
        assert!(parse("field gf 7\nobject 0 0 1\nobject 0 0 2\n").is_err());
        assert!(parse("field gf 6\n").is_err()); // composite modulus
        let e = parse("field gf 7\nwat 1 2\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        assert!(parse("field q\nobject 0 0 1\nobject 0 0 0 1\n").is_err()); // mixed arity
    }

    #[test]
    fn rational_scalars() {
        let text = "field q\nobject 0 0 1\nobject 0 1 1\ndh 0 0 [1/2]\n";
        let ParsedComplex::Double(c) = parse(text).unwrap() else {
            panic!()
        };
        let m = c.dh(Position::new(0, 0));
        assert_eq!(m.at(0, 0).to_string(), "1/2");
        // fractions rejected over prime fields
        assert!(parse("field gf 7\nobject 0 0 1\nobject 0 1 1\ndh 0 0 [1/2]\n").is_err());
    }

    #[test]
    fn generated_complexes_roundtrip() {
        let f = FieldSpec::prime(101).unwrap();
        for seed in 0..10u64 {
            let c = generate(f, &GeneratorSpec::new(seed, 4, 4, 3, GeneratorMode::ChainMapFill))
                .unwrap();
            let text = print_double(&c);
            let ParsedComplex::Double(back) = parse(&text).unwrap() else {
                panic!()
            };
            assert_eq!(back, c, "seed {seed}");
            assert_eq!(print_double(&back), text, "seed {seed}");
        }
    }

    #[test]
    fn triple_roundtrip() {
        let f = FieldSpec::prime(7).unwrap();
        let t = crate::nfold::elementary_triple(f, (0, 0, 0), 1);
        let text = print_triple(&t);
        let ParsedComplex::Triple(back) = parse(&text).unwrap() else {
            panic!()
        };
        assert_eq!(back, t);
        assert_eq!(print_triple(&back), text);
    }

    #[test]
    fn negative_indices_are_fine() {
        let text = "field gf 5\nobject -1 -2 1\nobject 0 -2 1\ndv -1 -2 [3]\n";
        let ParsedComplex::Double(c) = parse(text).unwrap() else {
            panic!()
        };
        assert_eq!(c.dim(Position::new(-1, -2)), 1);
    }
}
