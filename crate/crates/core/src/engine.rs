//! Staged Gauss-Jordan elimination with rightmost (or, diagnostically, leftmost) pivots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RowFiniteMatrix;
use crate::row::{axpy, Row};
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Rps,
    Lps,
}

impl Strategy {
    /// The pivot column of a row under this strategy.
    pub fn lead(&self, row: &Row) -> Option<usize> {
        match self {
            Strategy::Rps => row.maxs(),
            Strategy::Lps => row.zeta(),
        }
    }

    fn normalize(&self, row: &Row) -> Row {
        match self {
            Strategy::Rps => row.normalize_rightmost(),
            Strategy::Lps => row.normalize_leftmost(),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "rps" => Ok(Strategy::Rps),
            "lps" => Ok(Strategy::Lps),
            _ => Err(Error::parse(0, format!("unknown strategy {s:?}"))),
        }
    }
}

/// Promise that every pivot produced after stage `m` lies at column
/// `slope * m + offset` or further right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PivotFloor {
    pub slope: usize,
    pub offset: usize,
}

impl PivotFloor {
    pub fn affine(slope: usize, offset: usize) -> PivotFloor {
        PivotFloor { slope, offset }
    }

    pub fn bound(&self, m: usize) -> usize {
        self.slope.saturating_mul(m).saturating_add(self.offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Certified,
    Provisional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Certificate {
    floor: PivotFloor,
    validated_through: Option<usize>,
    /// Largest promised bound over all completed stages.
    running_floor: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationState {
    field: Field,
    strategy: Strategy,
    rows: Vec<Row>,
    pivots: BTreeMap<usize, usize>,
    passage: Vec<Row>,
    pivot_history: Vec<Option<usize>>,
    last_changed: Vec<usize>,
    certificate: Option<Certificate>,
}

impl EliminationState {
    pub fn new(field: Field, strategy: Strategy) -> EliminationState {
        EliminationState {
            field,
            strategy,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
            passage: Vec::new(),
            pivot_history: Vec::new(),
            last_changed: Vec::new(),
            certificate: None,
        }
    }

    pub fn with_certificate(mut self, floor: PivotFloor) -> EliminationState {
        let mut cert = Certificate {
            floor,
            validated_through: None,
            running_floor: None,
        };
        for stage in 0..self.rows.len() {
            validate(&mut cert, stage, self.pivot_history[stage])
                .expect("certificate attached after rows must hold");
        }
        self.certificate = Some(cert);
        self
    }

    /// Reassembles a state computed elsewhere. Pivots are rebuilt from `pivot_history`.
    pub(crate) fn from_parts(
        field: Field,
        strategy: Strategy,
        rows: Vec<Row>,
        passage: Vec<Row>,
        pivot_history: Vec<Option<usize>>,
        last_changed: Vec<usize>,
        floor: Option<PivotFloor>,
    ) -> Result<EliminationState> {
        let mut pivots = BTreeMap::new();
        for (i, p) in pivot_history.iter().enumerate() {
            if let Some(c) = p {
                if let Some(&j) = pivots.get(c) {
                    return Err(Error::PivotCollision { column: *c, row: j });
                }
                pivots.insert(*c, i);
            }
        }
        let mut state = EliminationState {
            field,
            strategy,
            rows,
            pivots,
            passage,
            pivot_history,
            last_changed,
            certificate: None,
        };
        if let Some(floor) = floor {
            let mut cert = Certificate {
                floor,
                validated_through: None,
                running_floor: None,
            };
            for stage in 0..state.rows.len() {
                validate(&mut cert, stage, state.pivot_history[stage])?;
            }
            state.certificate = Some(cert);
        }
        Ok(state)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Index of the last processed input row.
    pub fn stage(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn passage(&self) -> &[Row] {
        &self.passage
    }

    /// Pivot column to owning row.
    pub fn pivots(&self) -> &BTreeMap<usize, usize> {
        &self.pivots
    }

    pub fn pivot_history(&self) -> &[Option<usize>] {
        &self.pivot_history
    }

    pub fn last_changed(&self) -> &[usize] {
        &self.last_changed
    }

    pub fn floor(&self) -> Option<PivotFloor> {
        self.certificate.as_ref().map(|c| c.floor)
    }

    pub fn validated_through(&self) -> Option<usize> {
        self.certificate.as_ref().and_then(|c| c.validated_through)
    }

    /// The promised lower bound on every pivot still to come.
    pub fn certified_floor(&self) -> Option<usize> {
        self.certificate.as_ref().and_then(|c| c.running_floor)
    }

    /// Reduces `c` by every current pivot. The multiplier for the pivot at
    /// column `p` is minus the entry of `c` at `p`.
    pub fn gaussian_reduce(&self, c: &Row) -> Result<Row> {
        Ok(self.gaussian_with_passage(c)?.0)
    }

    fn gaussian_with_passage(&self, c: &Row) -> Result<(Row, Row)> {
        let n = self.rows.len();
        let mut g = c.clone();
        let mut gp = Row::unit(self.field, n);
        for (col, v) in c.support() {
            if let Some(&i) = self.pivots.get(col) {
                let lambda = v.neg();
                g = axpy(&lambda, &self.rows[i], &g)?;
                gp = axpy(&lambda, &self.passage[i], &gp)?;
            }
        }
        Ok((g, gp))
    }

    /// Applies the pivots owned by `order` one at a time, each multiplier read
    /// off the current intermediate row. Returns every intermediate row,
    /// starting with `c` itself.
    pub fn gaussian_trace(&self, c: &Row, order: &[usize]) -> Result<Vec<Row>> {
        let mut out = vec![c.clone()];
        let mut g = c.clone();
        for &i in order {
            let col = self.strategy.lead(&self.rows[i]).ok_or(Error::IndexOutOfRange {
                index: i,
                limit: self.rows.len(),
            })?;
            let lambda = g.value_at(col, self.field).neg();
            g = axpy(&lambda, &self.rows[i], &g)?;
            out.push(g.clone());
        }
        Ok(out)
    }

    /// Clears the pivot column of `g` from every earlier row, applying the same
    /// operation to the passage rows. `g` must be normalized.
    pub fn jordan_update(&mut self, g: &Row, g_passage: &Row) -> Result<()> {
        let stage = self.rows.len();
        let Some(col) = self.strategy.lead(g) else {
            return Ok(());
        };
        if let Some(&row) = self.pivots.get(&col) {
            return Err(Error::PivotCollision { column: col, row });
        }
        for i in 0..self.rows.len() {
            let Some(v) = self.rows[i].get(col) else {
                continue;
            };
            let lambda = v.neg();
            self.rows[i] = axpy(&lambda, g, &self.rows[i])?;
            self.passage[i] = axpy(&lambda, g_passage, &self.passage[i])?;
            self.last_changed[i] = stage;
        }
        Ok(())
    }

    /// One full stage: Gaussian reduction, normalization, Jordan update and
    /// passage bookkeeping for the next input row.
    pub fn step(&mut self, c: &Row) -> Result<()> {
        if let Some(f) = c.field() {
            if f != self.field {
                return Err(Error::FieldMismatch {
                    left: self.field.to_string(),
                    right: f.to_string(),
                });
            }
        }
        let n = self.rows.len();
        let (g, gp) = self.gaussian_with_passage(c)?;
        let (g, gp) = match self.strategy.lead(&g) {
            None => (g, gp),
            Some(_) => {
                let lead = match self.strategy {
                    Strategy::Rps => g.right_leading(),
                    Strategy::Lps => g.left_leading(),
                }
                .expect("nonzero row")
                .clone();
                let inv = lead.inv()?;
                (self.strategy.normalize(&g), gp.scale(&inv)?)
            }
        };
        let pivot = self.strategy.lead(&g);
        if let Some(cert) = self.certificate.as_mut() {
            let mut next = cert.clone();
            validate(&mut next, n, g.maxs())?;
            *cert = next;
        }
        if pivot.is_some() {
            self.jordan_update(&g, &gp)?;
        }
        if let Some(col) = pivot {
            self.pivots.insert(col, n);
        }
        self.rows.push(g);
        self.passage.push(gp);
        self.pivot_history.push(pivot);
        self.last_changed.push(n);
        Ok(())
    }

    /// `step` for a state built with the leftmost-pivot strategy.
    pub fn step_lps(&mut self, c: &Row) -> Result<()> {
        debug_assert_eq!(self.strategy, Strategy::Lps);
        self.step(c)
    }

    /// Steps through input rows until row `n` has been processed.
    pub fn extend_to(&mut self, m: &RowFiniteMatrix, n: usize) -> Result<()> {
        for k in self.rows.len()..=n {
            self.step(&m.row_at(k)?)?;
        }
        Ok(())
    }

    /// Last stage at which any of rows `0..=k` changed.
    pub fn prefix_stability(&self, k: usize) -> Result<usize> {
        if k >= self.rows.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                limit: self.rows.len(),
            });
        }
        Ok(*self.last_changed[..=k].iter().max().expect("nonempty"))
    }

    /// Rows `0..=k` are certified once the promised floor for every future
    /// pivot lies strictly right of all their lengths: no later Jordan step can
    /// reach them.
    pub fn certified_stable(&self, k: usize) -> Result<Stability> {
        if k >= self.rows.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                limit: self.rows.len(),
            });
        }
        if self.strategy != Strategy::Rps {
            return Ok(Stability::Provisional);
        }
        let Some(floor) = self.certified_floor() else {
            return Ok(Stability::Provisional);
        };
        let longest = self.rows[..=k].iter().filter_map(Row::maxs).max();
        Ok(match longest {
            Some(l) if l >= floor => Stability::Provisional,
            _ => Stability::Certified,
        })
    }

    /// Passage rows at zero-row indices: a basis of the left kernel of the processed prefix.
    pub fn nullspace_basis(&self) -> Vec<Row> {
        self.rows
            .iter()
            .zip(&self.passage)
            .filter(|(r, _)| r.is_zero())
            .map(|(_, p)| p.clone())
            .collect()
    }

    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].is_zero()).collect()
    }
}

fn validate(cert: &mut Certificate, stage: usize, length: Option<usize>) -> Result<()> {
    if let (Some(floor), Some(col)) = (cert.running_floor, length) {
        if col < floor {
            return Err(Error::CertificateViolation {
                stage,
                column: col,
                floor,
            });
        }
    }
    let b = cert.floor.bound(stage);
    cert.running_floor = Some(cert.running_floor.map_or(b, |f| f.max(b)));
    cert.validated_through = Some(stage);
    Ok(())
}

fn start_state(m: &RowFiniteMatrix, strategy: Strategy) -> EliminationState {
    let state = EliminationState::new(m.field(), strategy);
    match m.certificate() {
        Some(floor) => state.with_certificate(floor),
        None => state,
    }
}

/// Processes input rows `0..=n` with rightmost pivots.
pub fn run_to(m: &RowFiniteMatrix, n: usize) -> Result<EliminationState> {
    run_with(m, n, Strategy::Rps)
}

/// Processes input rows `0..=n` with leftmost pivots.
pub fn run_lps_to(m: &RowFiniteMatrix, n: usize) -> Result<EliminationState> {
    run_with(m, n, Strategy::Lps)
}

pub fn run_with(m: &RowFiniteMatrix, n: usize, strategy: Strategy) -> Result<EliminationState> {
    let mut state = start_state(m, strategy);
    state.extend_to(m, n)?;
    Ok(state)
}
