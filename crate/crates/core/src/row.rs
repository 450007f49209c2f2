//! Finitely supported rows stored as sorted `(column, value)` lists.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Row {
    support: Vec<(usize, Scalar)>,
}

impl Row {
    pub fn zero() -> Row {
        Row::default()
    }

    /// The unit vector `e_i` over `field`.
    pub fn unit(field: Field, i: usize) -> Row {
        Row {
            support: vec![(i, field.one())],
        }
    }

    /// Builds a row from pairs in any order. Zeros are dropped; repeated
    /// columns are an error.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Result<Row> {
        let mut support: Vec<(usize, Scalar)> = pairs.into_iter().collect();
        support.sort_by_key(|(c, _)| *c);
        for w in support.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateColumn(w[0].0));
            }
            if w[0].1.field() != w[1].1.field() {
                return Err(Error::FieldMismatch {
                    left: w[0].1.field().to_string(),
                    right: w[1].1.field().to_string(),
                });
            }
        }
        support.retain(|(_, v)| !v.is_zero());
        Ok(Row { support })
    }

    /// Accumulates pairs, summing values at repeated columns.
    pub fn from_sum(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Result<Row> {
        let mut support: Vec<(usize, Scalar)> = pairs.into_iter().collect();
        support.sort_by_key(|(c, _)| *c);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(support.len());
        for (c, v) in support {
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.add(&v)?,
                _ => out.push((c, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Ok(Row { support: out })
    }

    pub fn support(&self) -> &[(usize, Scalar)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Rightmost nonzero column; `None` for the zero row.
    pub fn maxs(&self) -> Option<usize> {
        self.support.last().map(|(c, _)| *c)
    }

    /// Leftmost nonzero column; `None` for the zero row.
    pub fn zeta(&self) -> Option<usize> {
        self.support.first().map(|(c, _)| *c)
    }

    pub fn field(&self) -> Option<Field> {
        self.support.first().map(|(_, v)| v.field())
    }

    pub fn get(&self, col: usize) -> Option<&Scalar> {
        self.support
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|i| &self.support[i].1)
    }

    pub fn value_at(&self, col: usize, field: Field) -> Scalar {
        self.get(col).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn right_leading(&self) -> Option<&Scalar> {
        self.support.last().map(|(_, v)| v)
    }

    pub fn left_leading(&self) -> Option<&Scalar> {
        self.support.first().map(|(_, v)| v)
    }

    pub fn scale(&self, lambda: &Scalar) -> Result<Row> {
        if lambda.is_zero() {
            return Ok(Row::zero());
        }
        let support = self
            .support
            .iter()
            .map(|(c, v)| Ok((*c, v.mul(lambda)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Row { support })
    }

    /// Divides by the right leading coefficient.
    pub fn normalize_rightmost(&self) -> Row {
        self.normalize_by(self.right_leading())
    }

    /// Divides by the left leading coefficient.
    pub fn normalize_leftmost(&self) -> Row {
        self.normalize_by(self.left_leading())
    }

    fn normalize_by(&self, lead: Option<&Scalar>) -> Row {
        match lead {
            None => Row::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("stored values are nonzero");
                self.scale(&inv).expect("row is single-field")
            }
        }
    }

    /// Dense prefix of columns `0..width`.
    pub fn to_dense(&self, field: Field, width: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); width];
        for (c, v) in &self.support {
            if *c < width {
                out[*c] = v.clone();
            }
        }
        out
    }

    /// Parses the sparse text form `col:val col:val ...`.
    pub fn parse(field: Field, text: &str) -> Result<Row> {
        let mut pairs = Vec::new();
        for tok in text.split_whitespace() {
            let (c, v) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(0, format!("expected col:val, got {tok:?}")))?;
            let col = parse_index(c)
                .ok_or_else(|| Error::parse(0, format!("bad column {c:?}")))?;
            let val = field.parse_scalar(v)?;
            if val.is_zero() {
                return Err(Error::parse(0, format!("zero value at column {col}")));
            }
            pairs.push((col, val));
        }
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::parse(0, "columns must be strictly increasing"));
            }
        }
        Row::from_pairs(pairs)
    }
}

pub(crate) fn parse_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `y + lambda * x`.
pub fn axpy(lambda: &Scalar, x: &Row, y: &Row) -> Result<Row> {
    if lambda.is_zero() || x.is_zero() {
        if let (Some(a), Some(b)) = (x.field(), y.field()) {
            if a != b {
                return Err(Error::FieldMismatch {
                    left: a.to_string(),
                    right: b.to_string(),
                });
            }
        }
        return Ok(y.clone());
    }
    let xs = &x.support;
    let ys = &y.support;
    let mut out = Vec::with_capacity(xs.len() + ys.len());
    let (mut i, mut j) = (0, 0);
    while i < xs.len() || j < ys.len() {
        let take_x = j == ys.len() || (i < xs.len() && xs[i].0 < ys[j].0);
        let take_y = i == xs.len() || (j < ys.len() && ys[j].0 < xs[i].0);
        if take_x {
            out.push((xs[i].0, lambda.mul(&xs[i].1)?));
            i += 1;
        } else if take_y {
            if ys[j].1.field() != lambda.field() {
                return Err(Error::FieldMismatch {
                    left: lambda.field().to_string(),
                    right: ys[j].1.field().to_string(),
                });
            }
            out.push(ys[j].clone());
            j += 1;
        } else {
            let v = ys[j].1.add(&lambda.mul(&xs[i].1)?)?;
            if !v.is_zero() {
                out.push((xs[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(Row { support: out })
}

/// Sum of `coeffs[j] * rows[j]` over the stored coefficients.
pub fn combine(coeffs: &Row, rows: impl Fn(usize) -> Result<Row>) -> Result<Row> {
    let mut acc = Row::zero();
    for (j, q) in coeffs.support() {
        acc = axpy(q, &rows(*j)?, &acc)?;
    }
    Ok(acc)
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, v)) in self.support.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}:{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Row {
        Row::parse(Field::Rational, s).unwrap()
    }

    fn q(s: &str) -> Scalar {
        Field::Rational.parse_scalar(s).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(Row::unit(Field::Rational, 0).maxs(), Some(0));
        assert_eq!(Row::zero().maxs(), None);
        let a0 = r("2:1 3:1");
        assert_eq!((a0.maxs(), a0.zeta()), (Some(3), Some(2)));
    }

    #[test]
    fn axpy_examples() {
        assert_eq!(axpy(&q("-1"), &r("0:1 1:1"), &r("1:1 2:1")).unwrap(), r("0:-1 2:1"));
        assert_eq!(axpy(&q("0"), &r("0:1"), &r("3:2")).unwrap(), r("3:2"));
        let x = r("1:3 4:1/2");
        assert!(axpy(&q("-1"), &x, &x).unwrap().is_zero());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(r("1:2 2:4").normalize_rightmost(), r("1:1/2 2:1"));
        assert!(Row::zero().normalize_rightmost().is_zero());
        assert_eq!(r("0:5 2:1").normalize_rightmost(), r("0:5 2:1"));
        assert_eq!(r("1:2 2:4").normalize_leftmost(), r("1:1 2:2"));
    }

    #[test]
    fn get_examples() {
        assert_eq!(r("0:1 1:1").value_at(1, Field::Rational), q("1"));
        assert_eq!(Row::zero().value_at(5, Field::Rational), q("0"));
        assert_eq!(r("2:1 3:3 5:2 6:2").value_at(3, Field::Rational), q("3"));
    }

    #[test]
    fn from_pairs_sorts_and_rejects_duplicates() {
        let row = Row::from_pairs(vec![(4, q("1")), (1, q("2")), (2, q("0"))]).unwrap();
        assert_eq!(row.to_string(), "1:2 4:1");
        assert_eq!(
            Row::from_pairs(vec![(1, q("1")), (1, q("2"))]),
            Err(Error::DuplicateColumn(1))
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["1", "1:", ":1", "2:1 1:1", "1:1 1:2", "1:0", "x:1", "-1:1"] {
            assert!(Row::parse(Field::Rational, s).is_err(), "{s}");
        }
    }
}
