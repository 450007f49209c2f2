//! Lazily generated row-finite matrices and the built-in examples.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use crate::engine::PivotFloor;
use crate::error::{Error, Result};
use crate::row::{axpy, Row};
use crate::scalar::{Field, Scalar};

pub type Generator = Arc<dyn Fn(usize) -> Result<Row> + Send + Sync>;

pub struct RowFiniteMatrix {
    field: Field,
    name: String,
    generator: Generator,
    memo: RwLock<HashMap<usize, Row>>,
    certificate: Option<PivotFloor>,
}

impl fmt::Debug for RowFiniteMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RowFiniteMatrix")
            .field("field", &self.field)
            .field("name", &self.name)
            .field("certificate", &self.certificate)
            .finish_non_exhaustive()
    }
}

impl RowFiniteMatrix {
    pub fn new(field: Field, name: impl Into<String>, generator: Generator) -> RowFiniteMatrix {
        RowFiniteMatrix {
            field,
            name: name.into(),
            generator,
            memo: RwLock::new(HashMap::new()),
            certificate: None,
        }
    }

    pub fn with_certificate(mut self, floor: PivotFloor) -> RowFiniteMatrix {
        self.certificate = Some(floor);
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn certificate(&self) -> Option<PivotFloor> {
        self.certificate
    }

    pub fn row_at(&self, k: usize) -> Result<Row> {
        if let Some(r) = self.memo.read().expect("memo lock").get(&k) {
            return Ok(r.clone());
        }
        let row = (self.generator)(k)?;
        if let Some(f) = row.field() {
            if f != self.field {
                return Err(Error::GeneratorFailure {
                    row: k,
                    reason: format!("produced a {f} row in a {} matrix", self.field),
                });
            }
        }
        self.memo
            .write()
            .expect("memo lock")
            .entry(k)
            .or_insert_with(|| row.clone());
        Ok(row)
    }

    /// Rows `0..=n`.
    pub fn top_submatrix(&self, n: usize) -> Result<Vec<Row>> {
        (0..=n).map(|k| self.row_at(k)).collect()
    }
}

/// Row `k` carries `value` at column `k + offset` for every pair.
pub fn make_stencil(field: Field, offsets: &[(usize, Scalar)]) -> Result<RowFiniteMatrix> {
    let mut seen = std::collections::BTreeSet::new();
    for (off, v) in offsets {
        if !seen.insert(*off) {
            return Err(Error::DuplicateOffset(*off));
        }
        if v.field() != field {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: v.field().to_string(),
            });
        }
    }
    let offsets: Vec<(usize, Scalar)> = offsets.to_vec();
    let gen: Generator = Arc::new(move |k| {
        Row::from_pairs(offsets.iter().map(|(off, v)| (k + off, v.clone())))
    });
    Ok(RowFiniteMatrix::new(field, "stencil", gen))
}

/// Listed rows as given, every other row zero.
pub fn make_explicit(field: Field, rows: BTreeMap<usize, Row>) -> Result<RowFiniteMatrix> {
    for row in rows.values() {
        if let Some(f) = row.field() {
            if f != field {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: f.to_string(),
                });
            }
        }
    }
    let gen: Generator = Arc::new(move |k| Ok(rows.get(&k).cloned().unwrap_or_default()));
    Ok(RowFiniteMatrix::new(field, "explicit", gen))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Bidiag,
    Fulkerson,
    Pde,
    Repeated,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Bidiag,
        Builtin::Fulkerson,
        Builtin::Pde,
        Builtin::Repeated,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Bidiag => "bidiag",
            Builtin::Fulkerson => "fulkerson",
            Builtin::Pde => "pde",
            Builtin::Repeated => "repeated",
        }
    }

    pub fn build(&self) -> RowFiniteMatrix {
        match self {
            Builtin::Bidiag => builtin_bidiag(),
            Builtin::Fulkerson => builtin_fulkerson(),
            Builtin::Pde => builtin_pde_operator(),
            Builtin::Repeated => builtin_repeated(),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Builtin> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::parse(0, format!("unknown builtin {s:?}")))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn builtin_bidiag() -> RowFiniteMatrix {
    let one = Field::Rational.one();
    let mut m = make_stencil(Field::Rational, &[(0, one.clone()), (1, one)])
        .expect("offsets are distinct");
    m.name = "bidiag".into();
    m
}

pub fn builtin_repeated() -> RowFiniteMatrix {
    let gen: Generator = Arc::new(|_| Ok(Row::unit(Field::Rational, 0)));
    RowFiniteMatrix::new(Field::Rational, "repeated", gen)
}

fn int_row(pairs: &[(usize, i64)]) -> Row {
    Row::from_sum(pairs.iter().map(|&(c, v)| (c, Field::Rational.from_i64(v))))
        .expect("single field")
}

fn fulkerson_even(n: usize) -> Row {
    match n {
        0 => int_row(&[(2, 1), (3, 1)]),
        1 => int_row(&[(3, 1), (5, 1), (6, 1)]),
        _ => int_row(&[(3, 1), (6, 1), (3 * n + 2, 1), (3 * (n + 1), 1)]),
    }
}

fn fulkerson_row(k: usize) -> Result<Row> {
    if k % 2 == 0 {
        return Ok(fulkerson_even(k / 2));
    }
    let n = k / 2;
    if n == 0 {
        return Ok(Row::zero());
    }
    let f = Field::Rational;
    let mut acc = fulkerson_even(n).scale(&f.from_i64(n as i64 + 1))?;
    for i in 0..n {
        acc = axpy(&f.one(), &fulkerson_even(i), &acc)?;
    }
    Ok(acc)
}

pub fn builtin_fulkerson() -> RowFiniteMatrix {
    RowFiniteMatrix::new(Field::Rational, "fulkerson", Arc::new(fulkerson_row))
}

/// The two well-orderings of exponent pairs `(i, j)` of `x^i y^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrdering {
    /// By total degree, then increasing `j`.
    Prec1,
    /// By total degree, then increasing `i` in odd degree and increasing `j` in even degree.
    Prec2,
}

fn triangle(d: usize) -> usize {
    d * (d + 1) / 2
}

impl MonomialOrdering {
    pub fn rank(&self, i: usize, j: usize) -> usize {
        let d = i + j;
        let pos = match self {
            MonomialOrdering::Prec1 => j,
            MonomialOrdering::Prec2 if d % 2 == 1 => i,
            MonomialOrdering::Prec2 => j,
        };
        triangle(d) + pos
    }

    pub fn unrank(&self, k: usize) -> (usize, usize) {
        let mut d = (((8 * k + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
        while triangle(d + 1) <= k {
            d += 1;
        }
        while triangle(d) > k {
            d -= 1;
        }
        let pos = k - triangle(d);
        match self {
            MonomialOrdering::Prec2 if d % 2 == 1 => (pos, d - pos),
            _ => (d - pos, pos),
        }
    }

    pub fn cmp(&self, a: (usize, usize), b: (usize, usize)) -> std::cmp::Ordering {
        self.rank(a.0, a.1).cmp(&self.rank(b.0, b.1))
    }
}

/// Coordinates of `D(X_k)` in the target basis, where
/// `D(x^n y^m) = nm x^(n+1) y^(m-1) + nm x^n y^m + nm x^(n-1) y^(m+1) + m x^(n+1) y^m + n x^n y^(m+1)`.
fn pde_row(k: usize) -> Result<Row> {
    let (n, m) = MonomialOrdering::Prec2.unrank(k);
    let (n, m) = (n as i64, m as i64);
    let nm = n * m;
    let terms = [
        (n + 1, m - 1, nm),
        (n, m, nm),
        (n - 1, m + 1, nm),
        (n + 1, m, m),
        (n, m + 1, n),
    ];
    let mut pairs = Vec::new();
    for (i, j, c) in terms {
        if i < 0 || j < 0 {
            assert_eq!(c, 0, "only vanishing terms leave the monomial basis");
            continue;
        }
        if c != 0 {
            let col = MonomialOrdering::Prec1.rank(i as usize, j as usize);
            pairs.push((col, Field::Rational.from_i64(c)));
        }
    }
    Row::from_sum(pairs)
}

pub fn builtin_pde_operator() -> RowFiniteMatrix {
    RowFiniteMatrix::new(Field::Rational, "pde", Arc::new(pde_row))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Row {
        Row::parse(Field::Rational, s).unwrap()
    }

    #[test]
    fn bidiag_rows() {
        let m = builtin_bidiag();
        assert_eq!(m.row_at(0).unwrap(), r("0:1 1:1"));
        assert_eq!(m.row_at(10).unwrap(), r("10:1 11:1"));
        assert_eq!(
            m.top_submatrix(1).unwrap(),
            vec![r("0:1 1:1"), r("1:1 2:1")]
        );
        assert_eq!(m.row_at(3).unwrap(), m.row_at(3).unwrap());
    }

    #[test]
    fn stencil_and_explicit() {
        let f = Field::Rational;
        let id = make_stencil(f, &[(0, f.one())]).unwrap();
        assert_eq!(id.row_at(4).unwrap(), Row::unit(f, 4));
        assert!(make_stencil(f, &[]).unwrap().row_at(3).unwrap().is_zero());
        assert_eq!(
            make_stencil(f, &[(1, f.one()), (1, f.one())]).unwrap_err(),
            Error::DuplicateOffset(1)
        );
        let mut rows = BTreeMap::new();
        rows.insert(0, r("2:1 3:1"));
        rows.insert(2, r("3:1 5:1 6:1"));
        let m = make_explicit(f, rows).unwrap();
        assert!(m.row_at(1).unwrap().is_zero());
        assert_eq!(m.row_at(2).unwrap(), r("3:1 5:1 6:1"));
        assert!(m.row_at(99).unwrap().is_zero());
    }

    #[test]
    fn repeated_rows() {
        assert_eq!(builtin_repeated().row_at(7).unwrap(), r("0:1"));
    }

    #[test]
    fn fulkerson_rows() {
        let m = builtin_fulkerson();
        assert_eq!(m.row_at(3).unwrap(), r("2:1 3:3 5:2 6:2"));
        assert_eq!(m.row_at(4).unwrap(), r("3:1 6:1 8:1 9:1"));
        assert!(m.row_at(1).unwrap().is_zero());
        for n in 1..=10usize {
            let mut expect = m.row_at(2 * n).unwrap().scale(&Field::Rational.from_i64(n as i64 + 1)).unwrap();
            for i in 0..n {
                expect = axpy(&Field::Rational.one(), &m.row_at(2 * i).unwrap(), &expect).unwrap();
            }
            assert_eq!(m.row_at(2 * n + 1).unwrap(), expect);
        }
    }

    #[test]
    fn orderings() {
        let p2: Vec<_> = (0..7).map(|k| MonomialOrdering::Prec2.unrank(k)).collect();
        assert_eq!(p2, vec![(0, 0), (0, 1), (1, 0), (2, 0), (1, 1), (0, 2), (0, 3)]);
        for ord in [MonomialOrdering::Prec1, MonomialOrdering::Prec2] {
            for i in 0..=40 {
                for j in 0..=(40 - i) {
                    assert_eq!(ord.unrank(ord.rank(i, j)), (i, j));
                }
            }
        }
        let mut listed = Vec::new();
        for d in 0..=20usize {
            for j in 0..=d {
                listed.push((d - j, j));
            }
        }
        for (k, (i, j)) in listed.into_iter().enumerate() {
            assert_eq!(MonomialOrdering::Prec1.rank(i, j), k);
            assert_eq!(MonomialOrdering::Prec1.rank(i, j), (i + j) * (i + j + 1) / 2 + j);
        }
    }

    #[test]
    fn pde_printed_prefix() {
        let m = builtin_pde_operator();
        let printed = [
            "",
            "4:1",
            "4:1",
            "7:2",
            "3:1 4:1 5:1 7:1 8:1",
            "8:2",
            "13:3",
            "7:2 8:2 9:2 12:2 13:1",
            "6:2 7:2 8:2 11:1 12:2",
            "11:3",
        ];
        for (k, text) in printed.iter().enumerate() {
            assert_eq!(m.row_at(k).unwrap(), r(text), "row {k}");
        }
    }
}
