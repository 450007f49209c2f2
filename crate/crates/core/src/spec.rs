//! Line-oriented matrix and right-hand-side specification files.
//!
//! ```text
//! # comment
//! field rational            | field gf <p>
//! kind stencil              | kind explicit | kind builtin
//! stencil <off>:<val> ...   (stencil)
//! row <k> <col>:<val> ...   (explicit, repeated)
//! tail zero                 (explicit, last)
//! builtin <name>            (builtin)
//! floor m*<a>+<b>           (optional)
//! ```
//!
//! Right-hand-side files use `field ...` followed by `rhs symbolic <name>` or
//! `rhs explicit <idx>:<val> ...`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::engine::PivotFloor;
use crate::error::{Error, Result};
use crate::linform::valid_rhs_name;
use crate::matrix::{make_explicit, make_stencil, Builtin, RowFiniteMatrix};
use crate::row::{parse_index, Row};
use crate::scalar::{Field, Scalar};
use crate::solver::Rhs;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixKind {
    Stencil(Vec<(usize, Scalar)>),
    Explicit(BTreeMap<usize, Row>),
    Builtin(Builtin),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSpec {
    pub field: Field,
    pub kind: MatrixKind,
    pub floor: Option<PivotFloor>,
}

/// Non-blank lines with comments stripped, numbered from 1.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

/// Moves an error raised by a nested parser onto `line`.
fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { reason, .. } => Error::Parse { line, reason },
        other => Error::Parse {
            line,
            reason: other.to_string(),
        },
    }
}

fn parse_field(line: usize, words: &[&str]) -> Result<Field> {
    match words {
        ["field", "rational"] => Ok(Field::Rational),
        ["field", "gf", p] => {
            let p: u64 = parse_index(p)
                .and_then(|p| u64::try_from(p).ok())
                .ok_or_else(|| Error::parse(line, format!("bad modulus {p:?}")))?;
            Field::gf(p).map_err(at(line))
        }
        ["field", ..] => Err(Error::parse(line, "expected `field rational` or `field gf <p>`")),
        _ => Err(Error::parse(line, "expected a `field` line first")),
    }
}

fn parse_pairs(field: Field, line: usize, words: &[&str]) -> Result<Vec<(usize, Scalar)>> {
    words
        .iter()
        .map(|tok| {
            let (k, v) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(line, format!("expected idx:val, got {tok:?}")))?;
            let k = parse_index(k).ok_or_else(|| Error::parse(line, format!("bad index {k:?}")))?;
            let v = field.parse_scalar(v).map_err(at(line))?;
            if v.is_zero() {
                return Err(Error::parse(line, format!("zero value at {k}")));
            }
            Ok((k, v))
        })
        .collect()
}

fn parse_floor(line: usize, rule: &str) -> Result<PivotFloor> {
    let bad = || Error::parse(line, format!("expected floor m*<a>+<b>, got {rule:?}"));
    let rest = rule.strip_prefix("m*").ok_or_else(bad)?;
    let (a, b) = rest.split_once('+').ok_or_else(bad)?;
    let a = parse_index(a).ok_or_else(bad)?;
    let b = parse_index(b).ok_or_else(bad)?;
    Ok(PivotFloor::affine(a, b))
}

impl MatrixSpec {
    pub fn parse(text: &str) -> Result<MatrixSpec> {
        let mut lines = directives(text);
        let Some((l, words)) = lines.next() else {
            return Err(Error::parse(1, "empty specification"));
        };
        let field = parse_field(l, &words)?;
        let Some((l, words)) = lines.next() else {
            return Err(Error::parse(l + 1, "expected a `kind` line"));
        };
        let kind_name = match words.as_slice() {
            ["kind", k @ ("stencil" | "explicit" | "builtin")] => *k,
            _ => return Err(Error::parse(l, "expected `kind stencil|explicit|builtin`")),
        };

        let mut floor = None;
        let mut stencil: Option<Vec<(usize, Scalar)>> = None;
        let mut rows: BTreeMap<usize, Row> = BTreeMap::new();
        let mut tail = false;
        let mut builtin = None;
        let mut last_line = l;
        for (l, words) in lines {
            last_line = l;
            match (kind_name, words.as_slice()) {
                (_, ["floor", rule]) => {
                    if floor.is_some() {
                        return Err(Error::parse(l, "repeated floor line"));
                    }
                    floor = Some(parse_floor(l, rule)?);
                }
                ("stencil", ["stencil", pairs @ ..]) => {
                    if stencil.is_some() {
                        return Err(Error::parse(l, "repeated stencil line"));
                    }
                    let pairs = parse_pairs(field, l, pairs)?;
                    make_stencil(field, &pairs).map_err(at(l))?;
                    stencil = Some(pairs);
                }
                ("explicit", ["row", k, pairs @ ..]) => {
                    if tail {
                        return Err(Error::parse(l, "row after `tail zero`"));
                    }
                    let k = parse_index(k).ok_or_else(|| Error::parse(l, format!("bad row index {k:?}")))?;
                    let row = Row::parse(field, &pairs.join(" ")).map_err(at(l))?;
                    if rows.insert(k, row).is_some() {
                        return Err(Error::parse(l, format!("row {k} listed twice")));
                    }
                }
                ("explicit", ["tail", "zero"]) => {
                    if tail {
                        return Err(Error::parse(l, "repeated tail line"));
                    }
                    tail = true;
                }
                ("builtin", ["builtin", name]) => {
                    if builtin.is_some() {
                        return Err(Error::parse(l, "repeated builtin line"));
                    }
                    let b: Builtin = name.parse().map_err(at(l))?;
                    if field != Field::Rational {
                        return Err(Error::parse(l, format!("builtin {b} requires field rational")));
                    }
                    builtin = Some(b);
                }
                _ => {
                    return Err(Error::parse(
                        l,
                        format!("unexpected `{}` in {kind_name} spec", words.join(" ")),
                    ))
                }
            }
        }
        let kind = match kind_name {
            "stencil" => MatrixKind::Stencil(
                stencil.ok_or_else(|| Error::parse(last_line, "missing stencil line"))?,
            ),
            "explicit" => {
                if !tail {
                    return Err(Error::parse(last_line, "missing `tail zero`"));
                }
                MatrixKind::Explicit(rows)
            }
            _ => MatrixKind::Builtin(
                builtin.ok_or_else(|| Error::parse(last_line, "missing builtin line"))?,
            ),
        };
        Ok(MatrixSpec { field, kind, floor })
    }

    pub fn builtin(b: Builtin) -> MatrixSpec {
        MatrixSpec {
            field: Field::Rational,
            kind: MatrixKind::Builtin(b),
            floor: None,
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("field {}\n", self.field);
        match &self.kind {
            MatrixKind::Stencil(pairs) => {
                out.push_str("kind stencil\nstencil");
                for (k, v) in pairs {
                    let _ = write!(out, " {k}:{v}");
                }
                out.push('\n');
            }
            MatrixKind::Explicit(rows) => {
                out.push_str("kind explicit\n");
                for (k, row) in rows {
                    if row.is_zero() {
                        let _ = writeln!(out, "row {k}");
                    } else {
                        let _ = writeln!(out, "row {k} {row}");
                    }
                }
                out.push_str("tail zero\n");
            }
            MatrixKind::Builtin(b) => {
                let _ = writeln!(out, "kind builtin\nbuiltin {b}");
            }
        }
        if let Some(f) = self.floor {
            let _ = writeln!(out, "floor m*{}+{}", f.slope, f.offset);
        }
        out
    }

    pub fn build(&self) -> Result<RowFiniteMatrix> {
        let m = match &self.kind {
            MatrixKind::Stencil(pairs) => make_stencil(self.field, pairs)?,
            MatrixKind::Explicit(rows) => make_explicit(self.field, rows.clone())?,
            MatrixKind::Builtin(b) => b.build(),
        };
        Ok(match self.floor {
            Some(f) => m.with_certificate(f),
            None => m,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhsSpec {
    pub field: Field,
    pub rhs: Rhs,
}

impl RhsSpec {
    pub fn parse(text: &str) -> Result<RhsSpec> {
        let mut lines = directives(text);
        let Some((l, words)) = lines.next() else {
            return Err(Error::parse(1, "empty specification"));
        };
        let field = parse_field(l, &words)?;
        let Some((l, words)) = lines.next() else {
            return Err(Error::parse(l + 1, "expected an `rhs` line"));
        };
        let rhs = match words.as_slice() {
            ["rhs", "symbolic", name] if valid_rhs_name(name) => Rhs::Symbolic(name.to_string()),
            ["rhs", "symbolic", name] => {
                return Err(Error::parse(l, format!("invalid symbol name {name:?}")))
            }
            ["rhs", "explicit", pairs @ ..] => {
                let pairs = parse_pairs(field, l, pairs)?;
                let mut values = BTreeMap::new();
                for (k, v) in pairs {
                    if values.insert(k, v).is_some() {
                        return Err(Error::parse(l, format!("index {k} listed twice")));
                    }
                }
                Rhs::Explicit(values)
            }
            _ => return Err(Error::parse(l, "expected `rhs symbolic <name>` or `rhs explicit ...`")),
        };
        if let Some((l, _)) = lines.next() {
            return Err(Error::parse(l, "unexpected line after rhs"));
        }
        Ok(RhsSpec { field, rhs })
    }

    pub fn render(&self) -> String {
        let mut out = format!("field {}\n", self.field);
        match &self.rhs {
            Rhs::Symbolic(name) => {
                let _ = writeln!(out, "rhs symbolic {name}");
            }
            Rhs::Explicit(values) => {
                out.push_str("rhs explicit");
                for (k, v) in values {
                    let _ = write!(out, " {k}:{v}");
                }
                out.push('\n');
            }
        }
        out
    }
}
