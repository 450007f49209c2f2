//! Predicates for the reduced and echelon forms, plus rank and equivalence checks.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RowFiniteMatrix;
use crate::row::{Row, axpy, combine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Form {
    Lrrf,
    Lref,
    Urrf,
    Uref,
    Qhf,
    Hermite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub rows: Vec<usize>,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormReport {
    pub form: Form,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl FormReport {
    fn pass(form: Form) -> FormReport {
        FormReport {
            form,
            holds: true,
            witness: None,
        }
    }

    fn fail(form: Form, rows: Vec<usize>, column: usize) -> FormReport {
        FormReport {
            form,
            holds: false,
            witness: Some(Witness { rows, column }),
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Right,
    Left,
}

impl Side {
    fn lead(self, r: &Row) -> Option<usize> {
        match self {
            Side::Right => r.maxs(),
            Side::Left => r.zeta(),
        }
    }
}

fn reduced(rows: &[Row], side: Side, form: Form) -> FormReport {
    for (i, r) in rows.iter().enumerate() {
        let Some(col) = side.lead(r) else { continue };
        if !r.get(col).is_some_and(|v| v.is_one()) {
            return FormReport::fail(form, vec![i], col);
        }
        for (k, other) in rows.iter().enumerate() {
            if k != i && other.get(col).is_some() {
                return FormReport::fail(form, vec![i, k], col);
            }
        }
    }
    FormReport::pass(form)
}

fn echelon(rows: &[Row], side: Side, form: Form) -> FormReport {
    let mut prev: Option<(usize, usize)> = None;
    for (i, r) in rows.iter().enumerate() {
        let Some(col) = side.lead(r) else { continue };
        if let Some((j, c)) = prev {
            if col <= c {
                return FormReport::fail(form, vec![j, i], col);
            }
        }
        prev = Some((i, col));
    }
    FormReport::pass(form)
}

/// Right leading coefficients are ones and each of their columns is zero in every other row.
pub fn is_lrrf(rows: &[Row]) -> FormReport {
    reduced(rows, Side::Right, Form::Lrrf)
}

/// Row-lengths of the nonzero rows strictly increase.
pub fn is_lref(rows: &[Row]) -> FormReport {
    echelon(rows, Side::Right, Form::Lref)
}

pub fn is_urrf(rows: &[Row]) -> FormReport {
    reduced(rows, Side::Left, Form::Urrf)
}

pub fn is_uref(rows: &[Row]) -> FormReport {
    echelon(rows, Side::Left, Form::Uref)
}

/// The nonzero rows have strictly increasing lengths, rightmost coefficients
/// equal to one, and zeros below each rightmost one.
pub fn is_hermite_basis(rows: &[Row]) -> FormReport {
    let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_zero()).collect();
    let report = echelon(rows, Side::Right, Form::Hermite);
    if !report.holds {
        return report;
    }
    for (a, &j) in nonzero.iter().enumerate() {
        let col = rows[j].maxs().expect("nonzero");
        if !rows[j].right_leading().is_some_and(|v| v.is_one()) {
            return FormReport::fail(Form::Hermite, vec![j], col);
        }
        for &k in &nonzero[a + 1..] {
            if rows[k].get(col).is_some() {
                return FormReport::fail(Form::Hermite, vec![j, k], col);
            }
        }
    }
    FormReport::pass(Form::Hermite)
}

/// Quasi-Hermite form: in LRRF and in LREF at once. Equivalently, the
/// nonzero rows form a Hermite basis.
pub fn is_qhf(rows: &[Row]) -> FormReport {
    let lrrf = is_lrrf(rows);
    let lref = is_lref(rows);
    let hermite = is_hermite_basis(rows);
    debug_assert_eq!(hermite.holds, lrrf.holds && lref.holds);
    match (lrrf.witness, lref.witness) {
        (Some(w), _) | (None, Some(w)) => FormReport::fail(Form::Qhf, w.rows, w.column),
        (None, None) => FormReport::pass(Form::Qhf),
    }
}

/// Builds the Hermite basis from representatives of strictly increasing
/// length, one row at a time.
pub fn fulkerson_recurrence(reps: &[Row]) -> Result<Vec<Row>> {
    for (i, r) in reps.iter().enumerate() {
        if r.is_zero() {
            return Err(Error::NonIncreasingLengths { first: i, second: i });
        }
        if i > 0 && r.maxs() <= reps[i - 1].maxs() {
            return Err(Error::NonIncreasingLengths {
                first: i - 1,
                second: i,
            });
        }
    }
    let mut out: Vec<Row> = Vec::with_capacity(reps.len());
    for a in reps {
        let mut h = a.clone();
        for prev in &out {
            let col = prev.maxs().expect("nonzero");
            if let Some(v) = a.get(col) {
                h = axpy(&v.neg(), prev, &h)?;
            }
        }
        out.push(h.normalize_rightmost());
    }
    Ok(out)
}

/// Lengths of the nonzero rows. Only meaningful when those lengths are distinct.
pub fn right_set(rows: &[Row]) -> Result<BTreeSet<usize>> {
    if !is_lrrf(rows).holds && !is_lref(rows).holds {
        return Err(Error::NotReduced);
    }
    Ok(rows.iter().filter_map(Row::maxs).collect())
}

/// Rank and nullity of the prefix.
pub fn rank_nullity(rows: &[Row]) -> Result<(usize, usize)> {
    let rank = right_set(rows)?.len();
    Ok((rank, rows.len() - rank))
}

/// Number of columns in `0..=horizon` that carry no pivot.
pub fn deficiency(rows: &[Row], horizon: usize) -> Result<usize> {
    let right = right_set(rows)?;
    Ok(horizon + 1 - right.range(..=horizon).count())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowEquivalence {
    pub holds: bool,
    /// First failing `(row, column)`.
    pub failure: Option<(usize, usize)>,
}

/// Checks `sum_j q[i][j] * input_j == out[i]` for every `i <= horizon`
/// present in both lists.
pub fn verify_row_equivalence(
    q_rows: &[Row],
    input: &RowFiniteMatrix,
    out_rows: &[Row],
    horizon: usize,
) -> Result<RowEquivalence> {
    let limit = q_rows.len().min(out_rows.len()).min(horizon.saturating_add(1));
    for i in 0..limit {
        let got = combine(&q_rows[i], |j| input.row_at(j))?;
        if let Some(col) = first_difference(&got, &out_rows[i]) {
            return Ok(RowEquivalence {
                holds: false,
                failure: Some((i, col)),
            });
        }
    }
    Ok(RowEquivalence {
        holds: true,
        failure: None,
    })
}

pub fn first_difference(a: &Row, b: &Row) -> Option<usize> {
    let cols: BTreeSet<usize> = a
        .support()
        .iter()
        .chain(b.support())
        .map(|(c, _)| *c)
        .collect();
    cols.into_iter().find(|&c| a.get(c) != b.get(c))
}

/// Multiset equality of the nonzero rows.
pub fn same_nonzero_rows(a: &[Row], b: &[Row]) -> bool {
    let key = |rows: &[Row]| {
        let mut v: Vec<String> = rows
            .iter()
            .filter(|r| !r.is_zero())
            .map(|r| r.to_string())
            .collect();
        v.sort();
        v
    };
    key(a) == key(b)
}
