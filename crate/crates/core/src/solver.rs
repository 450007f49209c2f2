//! Symbolic solutions of `A x = c` read off a reduced state.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::canon::right_set;
use crate::engine::{EliminationState, Strategy};
use crate::error::{Error, Result};
use crate::linform::{Binding, LinForm, Symbol};
use crate::matrix::RowFiniteMatrix;
use crate::row::Row;
use crate::scalar::{Field, Scalar};

/// Right-hand side of the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rhs {
    /// `c_i` is the fresh symbol `name_i`.
    Symbolic(String),
    /// Listed values; every other entry is zero.
    Explicit(BTreeMap<usize, Scalar>),
}

impl Rhs {
    pub fn entry(&self, field: Field, i: usize) -> LinForm {
        match self {
            Rhs::Symbolic(name) => LinForm::symbol(field, Symbol::rhs(name, i)),
            Rhs::Explicit(values) => values
                .get(&i)
                .map_or_else(|| LinForm::zero(field), |v| LinForm::constant(v.clone())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Certified,
    /// May still change after the given stage.
    Provisional(usize),
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Certified => f.write_str("certified"),
            Provenance::Provisional(n) => write!(f, "provisional@{n}"),
        }
    }
}

/// A solution stream realized over columns `0..=horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSequence {
    pub entries: Vec<LinForm>,
    pub free_columns: Vec<usize>,
    pub provenance: Vec<Provenance>,
}

impl SymbolicSequence {
    pub fn horizon(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    pub fn add(&self, other: &SymbolicSequence) -> Result<SymbolicSequence> {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolicSequence {
            entries,
            free_columns: self.free_columns.clone(),
            provenance: self.provenance.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub stage: usize,
    pub transformed: Vec<LinForm>,
    pub constraints: Vec<LinForm>,
    pub general: SymbolicSequence,
    pub deficiency_over_horizon: usize,
    pub horizon: usize,
}

fn require_rps(state: &EliminationState) -> Result<usize> {
    if state.strategy() != Strategy::Rps {
        return Err(Error::NotReduced);
    }
    state.stage().ok_or(Error::IndexOutOfRange { index: 0, limit: 0 })
}

/// `k_i = sum_j q_ij c_j`.
pub fn transform_rhs(field: Field, passage: &[Row], c: &Rhs) -> Result<Vec<LinForm>> {
    passage
        .iter()
        .map(|q| {
            let mut k = LinForm::zero(field);
            for (j, v) in q.support() {
                k = k.axpy(v, &c.entry(field, *j))?;
            }
            Ok(k)
        })
        .collect()
}

/// `k_w = 0` for every zero row `w`.
pub fn consistency_constraints(state: &EliminationState, k: &[LinForm]) -> Vec<LinForm> {
    state.zero_rows().into_iter().map(|w| k[w].clone()).collect()
}

fn provenance(state: &EliminationState, horizon: usize) -> Vec<Provenance> {
    let stage = state.stage().unwrap_or(0);
    let floor = if state.strategy() == Strategy::Rps {
        state.certified_floor()
    } else {
        None
    };
    (0..=horizon)
        .map(|m| match floor {
            Some(f) if f > m => Provenance::Certified,
            _ => Provenance::Provisional(stage),
        })
        .collect()
}

fn pivot_rows_within(state: &EliminationState, horizon: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    state.pivots().range(..=horizon).map(|(&c, &i)| (c, i))
}

/// Free column `m` carries the parameter numbered by its rank among free
/// columns. The pivot column of row `i` carries minus the row's earlier
/// entries applied to their parameters.
pub fn homogeneous_solution(state: &EliminationState, horizon: usize) -> Result<SymbolicSequence> {
    require_rps(state)?;
    let field = state.field();
    let pivot_cols: BTreeSet<usize> = state.pivots().keys().copied().collect();
    let free_columns: Vec<usize> = (0..=horizon).filter(|c| !pivot_cols.contains(c)).collect();
    let param: BTreeMap<usize, usize> = free_columns.iter().enumerate().map(|(t, &c)| (c, t)).collect();
    let mut entries = vec![LinForm::zero(field); horizon + 1];
    for (&c, &t) in &param {
        entries[c] = LinForm::symbol(field, Symbol::Param(t));
    }
    for (col, i) in pivot_rows_within(state, horizon) {
        let mut x = LinForm::zero(field);
        for (k, h) in state.rows()[i].support() {
            if *k >= col {
                break;
            }
            let t = param[k];
            x = x.axpy(&h.neg(), &LinForm::symbol(field, Symbol::Param(t)))?;
        }
        entries[col] = x;
    }
    Ok(SymbolicSequence {
        entries,
        free_columns,
        provenance: provenance(state, horizon),
    })
}

/// Zero except `k_i` at the pivot column of every nonzero row `i`.
pub fn particular_solution(
    state: &EliminationState,
    k: &[LinForm],
    horizon: usize,
) -> Result<SymbolicSequence> {
    require_rps(state)?;
    let field = state.field();
    let mut entries = vec![LinForm::zero(field); horizon + 1];
    for (col, i) in pivot_rows_within(state, horizon) {
        entries[col] = k[i].clone();
    }
    let pivot_cols: BTreeSet<usize> = state.pivots().keys().copied().collect();
    Ok(SymbolicSequence {
        entries,
        free_columns: (0..=horizon).filter(|c| !pivot_cols.contains(c)).collect(),
        provenance: provenance(state, horizon),
    })
}

pub fn general_solution(state: &EliminationState, c: &Rhs, horizon: usize) -> Result<SolveResult> {
    let stage = require_rps(state)?;
    let k = transform_rhs(state.field(), state.passage(), c)?;
    let constraints = consistency_constraints(state, &k);
    let xh = homogeneous_solution(state, horizon)?;
    let xp = particular_solution(state, &k, horizon)?;
    let general = xp.add(&xh)?;
    let deficiency_over_horizon = general.free_columns.len();
    debug_assert_eq!(
        Some(deficiency_over_horizon),
        crate::canon::deficiency(state.rows(), horizon).ok()
    );
    let _ = right_set(state.rows())?;
    Ok(SolveResult {
        stage,
        transformed: k,
        constraints,
        general,
        deficiency_over_horizon,
        horizon,
    })
}

/// Constraints in reduced echelon form keyed by their largest symbol, each
/// scaled so that symbol has coefficient one.
#[derive(Debug, Clone)]
pub struct ConstraintBasis {
    field: Field,
    rows: BTreeMap<Symbol, LinForm>,
    inconsistent: bool,
}

impl ConstraintBasis {
    pub fn new(field: Field, constraints: &[LinForm]) -> Result<ConstraintBasis> {
        let mut basis = ConstraintBasis {
            field,
            rows: BTreeMap::new(),
            inconsistent: false,
        };
        for c in constraints {
            let r = basis.reduce(c)?;
            let Some(lead) = r.leading_symbol().cloned() else {
                if !r.is_zero() {
                    basis.inconsistent = true;
                }
                continue;
            };
            let r = r.scale(&r.coefficient(&lead).inv()?)?;
            for other in basis.rows.values_mut() {
                let v = other.coefficient(&lead);
                if !v.is_zero() {
                    *other = other.axpy(&v.neg(), &r)?;
                }
            }
            basis.rows.insert(lead, r);
        }
        Ok(basis)
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Remainder of `f` after eliminating every leading symbol.
    pub fn reduce(&self, f: &LinForm) -> Result<LinForm> {
        let mut out = f.clone();
        for (sym, row) in &self.rows {
            let v = out.coefficient(sym);
            if !v.is_zero() {
                out = out.axpy(&v.neg(), row)?;
            }
        }
        Ok(out)
    }

    /// Extends `binding` with values for the leading symbols so that every
    /// constraint holds.
    pub fn complete(&self, binding: &mut Binding) -> Result<()> {
        for (sym, row) in &self.rows {
            let rest = row.sub(&LinForm::symbol(self.field, sym.clone()))?;
            let v = rest.eval(binding)?;
            if !v.is_constant() {
                return Err(Error::NotReduced);
            }
            binding.insert(sym.clone(), v.constant_term().neg());
        }
        Ok(())
    }

    pub fn leading(&self) -> impl Iterator<Item = &Symbol> {
        self.rows.keys()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCheck {
    pub holds: bool,
    /// First failing row and its residual.
    pub witness: Option<(usize, String)>,
}

impl SolutionCheck {
    fn fail(row: usize, why: String) -> SolutionCheck {
        SolutionCheck {
            holds: false,
            witness: Some((row, why)),
        }
    }
}

/// Residual `A_i x - c_i` for one row, as a form.
pub fn residual(m: &RowFiniteMatrix, x: &SymbolicSequence, c: &Rhs, i: usize) -> Result<Option<LinForm>> {
    let field = m.field();
    let row = m.row_at(i)?;
    let mut acc = c.entry(field, i).scale(&field.one().neg())?;
    for (j, a) in row.support() {
        let Some(xj) = x.entries.get(*j) else {
            return Ok(None);
        };
        acc = acc.axpy(a, xj)?;
    }
    Ok(Some(acc))
}

fn random_scalar(field: Field, rng: &mut impl Rng) -> Scalar {
    match field {
        Field::Rational => {
            let n = field.from_i64(rng.random_range(-9..=9));
            let d = field.from_i64(rng.random_range(1..=5));
            n.div(&d).expect("nonzero denominator")
        }
        Field::Gf(p) => field.from_i64(rng.random_range(0..p) as i64),
    }
}

/// Checks rows `0..=horizon` symbolically modulo the constraints, then at
/// `trials` random assignments that satisfy them.
pub fn verify_solution(
    m: &RowFiniteMatrix,
    x: &SymbolicSequence,
    c: &Rhs,
    constraints: &[LinForm],
    horizon: usize,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<SolutionCheck> {
    let field = m.field();
    let basis = ConstraintBasis::new(field, constraints)?;
    if basis.is_inconsistent() {
        return Ok(SolutionCheck::fail(0, "constraints are inconsistent".into()));
    }
    let mut residuals = Vec::with_capacity(horizon + 1);
    for i in 0..=horizon {
        let Some(r) = residual(m, x, c, i)? else {
            return Ok(SolutionCheck::fail(i, "row reaches past the realized columns".into()));
        };
        let reduced = basis.reduce(&r)?;
        if !reduced.is_zero() {
            return Ok(SolutionCheck::fail(i, reduced.to_string()));
        }
        residuals.push(r);
    }
    let leading: BTreeSet<&Symbol> = basis.leading().collect();
    let mut symbols: BTreeSet<Symbol> = BTreeSet::new();
    for r in residuals.iter().chain(constraints) {
        symbols.extend(r.terms().map(|(s, _)| s.clone()));
    }
    for entry in &x.entries {
        symbols.extend(entry.terms().map(|(s, _)| s.clone()));
    }
    for _ in 0..trials {
        let mut binding = Binding::new();
        for s in symbols.iter().filter(|s| !leading.contains(s)) {
            binding.insert(s.clone(), random_scalar(field, rng));
        }
        basis.complete(&mut binding)?;
        for (i, r) in residuals.iter().enumerate() {
            let v = r.eval(&binding)?;
            if !v.is_zero() {
                return Ok(SolutionCheck::fail(i, format!("numeric residual {v}")));
            }
        }
    }
    Ok(SolutionCheck {
        holds: true,
        witness: None,
    })
}

/// Largest column touched by input rows `0..=rows`.
pub fn column_reach(m: &RowFiniteMatrix, rows: usize) -> Result<usize> {
    let mut reach = 0;
    for i in 0..=rows {
        reach = reach.max(m.row_at(i)?.maxs().unwrap_or(0));
    }
    Ok(reach)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_to;
    use crate::matrix::{builtin_bidiag, builtin_fulkerson, builtin_repeated, make_stencil};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn strings(v: &[LinForm]) -> Vec<String> {
        v.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn bidiag_transformed_rhs() {
        let s = run_to(&builtin_bidiag(), 4).unwrap();
        let res = general_solution(&s, &Rhs::Symbolic("s".into()), 4).unwrap();
        assert_eq!(&strings(&res.transformed)[..3], ["s_0", "-s_0 + s_1", "s_0 - s_1 + s_2"]);
        assert!(res.constraints.is_empty());
        let xh = homogeneous_solution(&s, 4).unwrap();
        assert_eq!(strings(&xh.entries), ["t_0", "-t_0", "t_0", "-t_0", "t_0"]);
        assert_eq!(res.deficiency_over_horizon, 1);
    }

    #[test]
    fn fulkerson_constraints() {
        let s = run_to(&builtin_fulkerson(), 12).unwrap();
        let res = general_solution(&s, &Rhs::Symbolic("c".into()), 12).unwrap();
        assert_eq!(res.transformed[3].to_string(), "-c_0 - 2*c_2 + c_3");
        let rendered: Vec<String> = res.constraints.iter().map(|c| c.render_constraint()).collect();
        assert_eq!(
            &rendered[..3],
            ["c_1 = 0", "c_3 - c_0 - 2*c_2 = 0", "c_5 - c_0 - c_2 - 3*c_4 = 0"]
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let check = verify_solution(
            &builtin_fulkerson(),
            &general_solution(&run_to(&builtin_fulkerson(), 12).unwrap(), &Rhs::Symbolic("c".into()), 30)
                .unwrap()
                .general,
            &Rhs::Symbolic("c".into()),
            &res.constraints,
            12,
            3,
            &mut rng,
        )
        .unwrap();
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn repeated_constraints() {
        let s = run_to(&builtin_repeated(), 4).unwrap();
        let res = general_solution(&s, &Rhs::Symbolic("c".into()), 4).unwrap();
        let rendered: Vec<String> = res.constraints.iter().map(|c| c.render_constraint()).collect();
        assert_eq!(rendered, ["c_1 - c_0 = 0", "c_2 - c_0 = 0", "c_3 - c_0 = 0", "c_4 - c_0 = 0"]);
    }

    #[test]
    fn zero_rhs_and_identity() {
        let s = run_to(&builtin_bidiag(), 6).unwrap();
        let res = general_solution(&s, &Rhs::Explicit(BTreeMap::new()), 6).unwrap();
        assert_eq!(res.general.entries, homogeneous_solution(&s, 6).unwrap().entries);
        assert!(res.transformed.iter().all(LinForm::is_zero));

        let f = Field::Rational;
        let id = make_stencil(f, &[(0, f.one())]).unwrap();
        let s = run_to(&id, 5).unwrap();
        let xh = homogeneous_solution(&s, 5).unwrap();
        assert!(xh.entries.iter().all(LinForm::is_zero));
        assert!(xh.free_columns.is_empty());
    }

    #[test]
    fn perturbed_solution_fails() {
        let m = builtin_bidiag();
        let s = run_to(&m, 31).unwrap();
        let c = Rhs::Symbolic("s".into());
        let res = general_solution(&s, &c, 31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(verify_solution(&m, &res.general, &c, &res.constraints, 30, 2, &mut rng).unwrap().holds);
        let mut x = res.general.clone();
        x.entries[5] = x.entries[5].add(&LinForm::constant(Field::Rational.one())).unwrap();
        let check = verify_solution(&m, &x, &c, &res.constraints, 30, 2, &mut rng).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness.unwrap().0, 4);
    }
}
