//! Non-incremental reduction of a finite truncation.
//!
//! Every prefix `C|_i` is reduced from scratch to its rightmost-pivot reduced
//! echelon basis, which is unique. Row `i` of the staged result is the basis
//! vector whose length first appears at prefix `i`, so the staged state can be
//! read off without replaying the elimination.

use std::collections::BTreeMap;

use crate::engine::{EliminationState, Strategy};
use crate::error::Result;
use crate::matrix::RowFiniteMatrix;
use crate::row::{Row, axpy};
use crate::scalar::{Field, Scalar};

/// Reduced rows at every stage plus the final state.
#[derive(Debug, Clone)]
pub struct OneShot {
    pub stages: Vec<Vec<Row>>,
    pub state: EliminationState,
}

type Dense = Vec<Vec<Scalar>>;

/// Rightmost-pivot reduced echelon form, searching for pivots only among the
/// first `width` columns. Returns the pivot rows keyed by pivot column.
fn rref_right(mut rows: Dense, width: usize) -> Result<BTreeMap<usize, Vec<Scalar>>> {
    let mut used = vec![false; rows.len()];
    let mut basis = BTreeMap::new();
    for col in (0..width).rev() {
        let Some(p) = (0..rows.len()).find(|&r| !used[r] && !rows[r][col].is_zero()) else {
            continue;
        };
        used[p] = true;
        let inv = rows[p][col].inv()?;
        for v in rows[p].iter_mut() {
            *v = v.mul(&inv)?;
        }
        let pivot = rows[p].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == p || row[col].is_zero() {
                continue;
            }
            let lambda = row[col].neg();
            for (v, pv) in row.iter_mut().zip(&pivot) {
                if !pv.is_zero() {
                    *v = v.add(&lambda.mul(pv)?)?;
                }
            }
        }
        basis.insert(col, p);
    }
    Ok(basis.into_iter().map(|(c, p)| (c, rows[p].clone())).collect())
}

fn sparse(values: &[Scalar]) -> Row {
    Row::from_pairs(values.iter().cloned().enumerate()).expect("distinct columns")
}

pub fn one_shot(m: &RowFiniteMatrix, n: usize) -> Result<OneShot> {
    let field = m.field();
    let input = m.top_submatrix(n)?;
    let width = input.iter().filter_map(Row::maxs).max().map_or(0, |c| c + 1);
    let dense: Dense = input.iter().map(|r| r.to_dense(field, width)).collect();

    let mut bases: Vec<BTreeMap<usize, Row>> = Vec::with_capacity(n + 1);
    let mut history: Vec<Option<usize>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let basis: BTreeMap<usize, Row> = rref_right(dense[..=i].to_vec(), width)?
            .into_iter()
            .map(|(c, v)| (c, sparse(&v)))
            .collect();
        let fresh = match bases.last() {
            None => basis.keys().next().copied(),
            Some(prev) => basis.keys().find(|c| !prev.contains_key(c)).copied(),
        };
        history.push(fresh);
        bases.push(basis);
    }

    let stages: Vec<Vec<Row>> = (0..=n)
        .map(|s| {
            (0..=s)
                .map(|i| history[i].map_or_else(Row::zero, |c| bases[s][&c].clone()))
                .collect()
        })
        .collect();

    let last_changed: Vec<usize> = (0..=n)
        .map(|i| {
            (i + 1..=n)
                .filter(|&s| stages[s][i] != stages[s - 1][i])
                .last()
                .unwrap_or(i)
        })
        .collect();

    let passage = passage_rows(field, &dense, &history, width)?;
    let state = EliminationState::from_parts(
        field,
        Strategy::Rps,
        stages[n].clone(),
        passage,
        history,
        last_changed,
        m.certificate(),
    )?;
    Ok(OneShot { stages, state })
}

/// Passage rows written over the rows that raised the rank. Those rows are
/// independent, so each reduced row has exactly one such expression, and each
/// dependent row `w` gets `e_w` minus its expression.
fn passage_rows(
    field: Field,
    dense: &Dense,
    history: &[Option<usize>],
    width: usize,
) -> Result<Vec<Row>> {
    let n = dense.len();
    let independent: Vec<usize> = (0..n).filter(|&i| history[i].is_some()).collect();
    let aug: Dense = independent
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut v = dense[i].clone();
            v.extend((0..independent.len()).map(|j| if j == k { field.one() } else { field.zero() }));
            v
        })
        .collect();
    let reduced = rref_right(aug, width)?;
    let combo_of = |col: usize| -> Row {
        let v = &reduced[&col][width..];
        Row::from_pairs(
            v.iter()
                .enumerate()
                .map(|(k, s)| (independent[k], s.clone())),
        )
        .expect("distinct rows")
    };

    let mut out = Vec::with_capacity(n);
    for w in 0..n {
        match history[w] {
            Some(col) => out.push(combo_of(col)),
            None => {
                let mut p = Row::unit(field, w);
                for (col, v) in dense[w].iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    if reduced.contains_key(&col) {
                        p = axpy(&v.neg(), &combo_of(col), &p)?;
                    }
                }
                out.push(p);
            }
        }
    }
    Ok(out)
}
