//! JSON and TSV emission of engine, reorder, solver and stability results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::{EliminationState, Stability, Strategy};
use crate::error::{Error, Result};
use crate::reorder::ReorderState;
use crate::row::Row;
use crate::scalar::Field;
use crate::solver::SolveResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Emit {
    Rows,
    Passage,
    Pivots,
    History,
    LastChanged,
}

impl Emit {
    pub const ALL: [Emit; 5] = [
        Emit::Rows,
        Emit::Passage,
        Emit::Pivots,
        Emit::History,
        Emit::LastChanged,
    ];

    /// Parses a comma-separated list such as `rows,passage`.
    pub fn parse_list(text: &str) -> Result<Vec<Emit>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let e = match part {
                "rows" => Emit::Rows,
                "passage" => Emit::Passage,
                "pivots" => Emit::Pivots,
                "pivot_history" | "history" => Emit::History,
                "last_changed" => Emit::LastChanged,
                "all" => return Ok(Emit::ALL.to_vec()),
                _ => return Err(Error::parse(0, format!("unknown emission {part:?}"))),
            };
            if !out.contains(&e) {
                out.push(e);
            }
        }
        if out.is_empty() {
            return Err(Error::parse(0, "empty emission list"));
        }
        Ok(out)
    }
}

fn length(c: Option<usize>) -> i64 {
    c.map_or(-1, |c| c as i64)
}

fn texts(rows: &[Row]) -> Vec<String> {
    rows.iter().map(Row::to_string).collect()
}

fn parse_field_name(text: &str) -> Result<Field> {
    match text.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["rational"] => Ok(Field::Rational),
        ["gf", p] => Field::gf(p.parse().map_err(|_| Error::parse(0, "bad modulus"))?),
        _ => Err(Error::parse(0, format!("unknown field {text:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSnapshot {
    pub stage: usize,
    pub field: String,
    pub strategy: Strategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivots: Option<BTreeMap<usize, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot_history: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_changed: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passage: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_history: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<usize>>,
}

/// A snapshot with its rows parsed back into values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedSnapshot {
    pub field: Field,
    pub stage: usize,
    pub rows: Option<Vec<Row>>,
    pub passage: Option<Vec<Row>>,
    pub pivot_history: Option<Vec<Option<usize>>>,
}

impl StateSnapshot {
    pub fn from_state(state: &EliminationState, emit: &[Emit]) -> StateSnapshot {
        let has = |e| emit.contains(&e);
        StateSnapshot {
            stage: state.stage().unwrap_or(0),
            field: state.field().to_string(),
            strategy: state.strategy(),
            rows: has(Emit::Rows).then(|| texts(state.rows())),
            pivots: has(Emit::Pivots).then(|| state.pivots().clone()),
            pivot_history: has(Emit::History)
                .then(|| state.pivot_history().iter().map(|p| length(*p)).collect()),
            last_changed: has(Emit::LastChanged).then(|| state.last_changed().to_vec()),
            passage: has(Emit::Passage).then(|| texts(state.passage())),
            permutation: None,
            m_history: None,
            delta: None,
        }
    }

    /// The reordered view: rows and passage are replaced by their permuted
    /// versions, and the permutation, length history and stability indices
    /// for prefixes `0..=prefix` are added.
    pub fn from_reorder(
        state: &EliminationState,
        reorder: &ReorderState,
        prefix: usize,
        emit: &[Emit],
    ) -> Result<StateSnapshot> {
        let mut snap = StateSnapshot::from_state(state, emit);
        if snap.rows.is_some() {
            snap.rows = Some(texts(reorder.q_rows()));
        }
        if snap.passage.is_some() {
            snap.passage = Some(texts(&reorder.q_passage(state)));
        }
        snap.permutation = Some(reorder.permutation().to_vec());
        snap.m_history = Some(
            reorder
                .m_history()
                .iter()
                .map(|h| h.iter().map(|m| length(*m)).collect())
                .collect(),
        );
        snap.delta = Some(
            (0..=prefix)
                .map(|k| reorder.qhf_prefix_stability(k))
                .collect::<Result<Vec<_>>>()?,
        );
        Ok(snap)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }

    pub fn from_json(text: &str) -> Result<StateSnapshot> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn decode(&self) -> Result<DecodedSnapshot> {
        let field = parse_field_name(&self.field)?;
        let rows = |v: &Option<Vec<String>>| -> Result<Option<Vec<Row>>> {
            v.as_ref()
                .map(|v| v.iter().map(|t| Row::parse(field, t)).collect())
                .transpose()
        };
        let history = self
            .pivot_history
            .as_ref()
            .map(|h| {
                h.iter()
                    .map(|&p| match p {
                        -1 => Ok(None),
                        p if p >= 0 => Ok(Some(p as usize)),
                        _ => Err(Error::parse(0, format!("bad length {p}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Ok(DecodedSnapshot {
            field,
            stage: self.stage,
            rows: rows(&self.rows)?,
            passage: rows(&self.passage)?,
            pivot_history: history,
        })
    }
}

/// Parses and validates a JSON snapshot.
pub fn decode_snapshot(text: &str) -> Result<DecodedSnapshot> {
    StateSnapshot::from_json(text)?.decode()
}

/// Dense TSV block. Width is one past the largest row-length, at least one.
pub fn dense_block(rows: &[Row], field: Field) -> String {
    let width = rows.iter().filter_map(Row::maxs).max().map_or(1, |c| c + 1);
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.to_dense(field, width).iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

fn header(out: &mut String, name: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "#{name}\t{value}");
}

pub fn state_tsv(state: &EliminationState, emit: &[Emit]) -> String {
    let snap = StateSnapshot::from_state(state, emit);
    snapshot_tsv(&snap, state.field())
}

pub fn reorder_tsv(
    state: &EliminationState,
    reorder: &ReorderState,
    prefix: usize,
    emit: &[Emit],
) -> Result<String> {
    let snap = StateSnapshot::from_reorder(state, reorder, prefix, emit)?;
    Ok(snapshot_tsv(&snap, state.field()))
}

fn snapshot_tsv(snap: &StateSnapshot, field: Field) -> String {
    let mut out = String::new();
    header(&mut out, "stage", snap.stage);
    header(&mut out, "field", &snap.field);
    header(&mut out, "strategy", format!("{:?}", snap.strategy).to_lowercase());
    let parse = |v: &Vec<String>| -> Vec<Row> {
        v.iter().map(|t| Row::parse(field, t).expect("own rendering")).collect()
    };
    if let Some(rows) = &snap.rows {
        header(&mut out, "rows", rows.len());
        out.push_str(&dense_block(&parse(rows), field));
    }
    if let Some(rows) = &snap.passage {
        header(&mut out, "passage", rows.len());
        out.push_str(&dense_block(&parse(rows), field));
    }
    if let Some(p) = &snap.pivots {
        header(&mut out, "pivots", p.len());
        for (c, r) in p {
            let _ = writeln!(out, "{c}\t{r}");
        }
    }
    let mut list = |name: &str, items: Vec<String>| {
        header(&mut out, name, items.len());
        for i in items {
            let _ = writeln!(out, "{i}");
        }
    };
    if let Some(h) = &snap.pivot_history {
        list("pivot_history", h.iter().map(|v| v.to_string()).collect());
    }
    if let Some(h) = &snap.last_changed {
        list("last_changed", h.iter().map(|v| v.to_string()).collect());
    }
    if let Some(p) = &snap.permutation {
        list("permutation", p.iter().map(|v| v.to_string()).collect());
    }
    if let Some(d) = &snap.delta {
        list("delta", d.iter().map(|v| v.to_string()).collect());
    }
    out
}

/// Sections of a TSV emission: header name to its data lines split on tabs.
pub fn parse_tsv(text: &str) -> Result<BTreeMap<String, (String, Vec<Vec<String>>)>> {
    let mut out: BTreeMap<String, (String, Vec<Vec<String>>)> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, line) in text.lines().enumerate() {
        if let Some(h) = line.strip_prefix('#') {
            let (name, value) = h
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, "header without value"))?;
            if out.insert(name.to_string(), (value.to_string(), Vec::new())).is_some() {
                return Err(Error::parse(i + 1, format!("repeated section {name}")));
            }
            current = Some(name.to_string());
        } else {
            let name = current
                .as_ref()
                .ok_or_else(|| Error::parse(i + 1, "data before any header"))?;
            out.get_mut(name)
                .expect("section exists")
                .1
                .push(line.split('\t').map(str::to_string).collect());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionEntry {
    pub column: usize,
    pub value: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveSnapshot {
    pub stage: usize,
    pub horizon: usize,
    pub deficiency: usize,
    pub constraints: Vec<String>,
    pub transformed: Vec<String>,
    pub free_columns: Vec<usize>,
    pub general: Vec<SolutionEntry>,
}

impl SolveSnapshot {
    pub fn new(res: &SolveResult) -> SolveSnapshot {
        SolveSnapshot {
            stage: res.stage,
            horizon: res.horizon,
            deficiency: res.deficiency_over_horizon,
            constraints: res.constraints.iter().map(|c| c.render_constraint()).collect(),
            transformed: res.transformed.iter().map(|k| k.to_string()).collect(),
            free_columns: res.general.free_columns.clone(),
            general: res
                .general
                .entries
                .iter()
                .zip(&res.general.provenance)
                .enumerate()
                .map(|(column, (v, p))| SolutionEntry {
                    column,
                    value: v.to_string(),
                    provenance: p.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        header(&mut out, "stage", self.stage);
        header(&mut out, "horizon", self.horizon);
        header(&mut out, "deficiency", self.deficiency);
        header(&mut out, "constraints", self.constraints.len());
        for c in &self.constraints {
            let _ = writeln!(out, "{c}");
        }
        header(&mut out, "general", self.general.len());
        for e in &self.general {
            let _ = writeln!(out, "{}\t{}\t{}", e.column, e.value, e.provenance);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub row: usize,
    pub length: i64,
    pub last_changed: usize,
    pub prefix_stability: usize,
    pub status: Stability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilitySnapshot {
    pub stage: usize,
    pub floor: Option<String>,
    pub rows: Vec<StabilityRow>,
}

impl StabilitySnapshot {
    pub fn new(state: &EliminationState) -> Result<StabilitySnapshot> {
        let rows = (0..state.len())
            .map(|i| {
                Ok(StabilityRow {
                    row: i,
                    length: length(state.rows()[i].maxs()),
                    last_changed: state.last_changed()[i],
                    prefix_stability: state.prefix_stability(i)?,
                    status: state.certified_stable(i)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StabilitySnapshot {
            stage: state.stage().unwrap_or(0),
            floor: state.floor().map(|f| format!("m*{}+{}", f.slope, f.offset)),
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stability serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        header(&mut out, "stage", self.stage);
        header(&mut out, "floor", self.floor.as_deref().unwrap_or("none"));
        header(&mut out, "rows", self.rows.len());
        out.push_str("row\tlength\tlast_changed\tprefix_stability\tstatus\n");
        for r in &self.rows {
            let status = match r.status {
                Stability::Certified => "certified",
                Stability::Provisional => "provisional",
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.row, r.length, r.last_changed, r.prefix_stability, status
            );
        }
        out
    }
}
