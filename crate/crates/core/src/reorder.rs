//! Reordering of reduced prefixes into strictly increasing row-lengths.
//!
//! Zero rows keep their slots. Only the contents of nonzero slots move.

use crate::engine::{EliminationState, run_to};
use crate::error::{Error, Result};
use crate::matrix::RowFiniteMatrix;
use crate::oneshot::one_shot;
use crate::row::Row;

/// Sorts nonzero contents by length into the nonzero slots. `perm[slot]` is
/// the source index of the row placed at `slot`.
pub fn reorder_prefix(rows: &[Row]) -> Result<(Vec<usize>, Vec<Row>)> {
    let slots: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_zero()).collect();
    let mut by_length = slots.clone();
    by_length.sort_by_key(|&i| rows[i].maxs());
    for w in by_length.windows(2) {
        if rows[w[0]].maxs() == rows[w[1]].maxs() {
            return Err(Error::DuplicateLength {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
                column: rows[w[0]].maxs().expect("nonzero"),
            });
        }
    }
    let mut perm: Vec<usize> = (0..rows.len()).collect();
    for (&slot, &src) in slots.iter().zip(&by_length) {
        perm[slot] = src;
    }
    let q_rows = perm.iter().map(|&i| rows[i].clone()).collect();
    Ok((perm, q_rows))
}

/// Largest row-length among `rows[0..=j]` for every `j`.
fn prefix_maxima(rows: &[Row]) -> Vec<Option<usize>> {
    let mut best = None;
    rows.iter()
        .map(|r| {
            best = best.max(r.maxs());
            best
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReorderState {
    permutation: Vec<usize>,
    q_rows: Vec<Row>,
    m_history: Vec<Vec<Option<usize>>>,
}

impl ReorderState {
    pub fn new() -> ReorderState {
        ReorderState::default()
    }

    /// Records the reordered view of the rows of one more completed stage.
    pub fn observe(&mut self, rows: &[Row]) -> Result<()> {
        if rows.len() != self.m_history.len() + 1 {
            return Err(Error::IndexOutOfRange {
                index: rows.len(),
                limit: self.m_history.len() + 1,
            });
        }
        let (perm, q_rows) = reorder_prefix(rows)?;
        self.m_history.push(prefix_maxima(&q_rows));
        self.permutation = perm;
        self.q_rows = q_rows;
        Ok(())
    }

    pub fn stage(&self) -> Option<usize> {
        self.m_history.len().checked_sub(1)
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn q_rows(&self) -> &[Row] {
        &self.q_rows
    }

    /// `m_history[n][j]` is the largest row-length among reordered rows `0..=j` at stage `n`.
    pub fn m_history(&self) -> &[Vec<Option<usize>>] {
        &self.m_history
    }

    /// Passage rows permuted alongside the row contents, so that they map the
    /// input onto `q_rows`.
    pub fn q_passage(&self, base: &EliminationState) -> Vec<Row> {
        self.permutation
            .iter()
            .map(|&i| base.passage()[i].clone())
            .collect()
    }

    /// Last stage at which reordered rows `0..=k` changed. Past stage `k` the
    /// prefix changes exactly when its largest length drops.
    pub fn qhf_prefix_stability(&self, k: usize) -> Result<usize> {
        let n = self.m_history.len();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, limit: n });
        }
        Ok((k + 1..n)
            .filter(|&s| self.m_history[s][k] < self.m_history[s - 1][k])
            .last()
            .unwrap_or(k))
    }
}

/// Runs the engine through row `n`, reordering after every stage. With
/// `seed = Some(s)` the first `s + 1` stages come from the one-shot reduction.
pub fn extended_run(
    m: &RowFiniteMatrix,
    n: usize,
    seed: Option<usize>,
) -> Result<(EliminationState, ReorderState)> {
    let mut reorder = ReorderState::new();
    let mut state = match seed {
        Some(s) => {
            let shot = one_shot(m, s.min(n))?;
            for rows in &shot.stages {
                reorder.observe(rows)?;
            }
            shot.state
        }
        None => {
            let state = run_to(m, 0)?;
            reorder.observe(state.rows())?;
            state
        }
    };
    while state.len() <= n {
        state.step(&m.row_at(state.len())?)?;
        reorder.observe(state.rows())?;
    }
    Ok((state, reorder))
}
