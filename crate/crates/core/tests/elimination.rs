//! Property tests for the staged elimination, reordering and the solver.

mod common;

use std::collections::BTreeMap;

use num_rational::BigRational;
use omega_gj::canon::{deficiency, is_lrrf, is_qhf};
use omega_gj::engine::EliminationState;
use omega_gj::linform::Binding;
use omega_gj::oneshot::one_shot;
use omega_gj::row::axpy;
use omega_gj::solver::{general_solution, Rhs};
use omega_gj::{extended_run, run_to, Field, ReorderState, Row, Scalar, Strategy as Pivoting, Symbol};
use proptest::prelude::*;

use common::{apply_passage, densify, r, reference_rref, FromScalar, RandomMatrix, Zp};

fn gf7() -> Field {
    Field::gf(7).unwrap()
}

fn scalar_in(field: Field) -> BoxedStrategy<Scalar> {
    match field {
        Field::Rational => (prop_oneof![-4i64..=-1, 1i64..=4], 1i64..=3)
            .prop_map(|(n, d)| Field::Rational.from_i64(n).div(&Field::Rational.from_i64(d)).unwrap())
            .boxed(),
        Field::Gf(_) => (1i64..7).prop_map(|v| gf7().from_i64(v)).boxed(),
    }
}

fn row_in(field: Field) -> BoxedStrategy<Row> {
    prop::collection::btree_map(0usize..18, scalar_in(field), 0..5)
        .prop_map(|m| Row::from_pairs(m).unwrap())
        .boxed()
}

/// Random rows followed by a few combinations of them, so that dependent
/// rows and zero results occur.
fn matrix() -> impl Strategy<Value = RandomMatrix> {
    prop_oneof![Just(Field::Rational), Just(gf7())].prop_flat_map(|field| {
        (
            prop::collection::vec(row_in(field), 1..14),
            prop::collection::vec((0usize..64, 0usize..64, scalar_in(field)), 0..5),
            prop::collection::vec(0usize..64, 0..3),
        )
            .prop_map(move |(mut rows, mixes, cuts)| {
                for (a, b, lambda) in mixes {
                    let n = rows.len();
                    let mixed = axpy(&lambda, &rows[a % n], &rows[b % n]).unwrap();
                    rows.insert((a + b) % (n + 1), mixed);
                }
                for c in cuts {
                    let n = rows.len();
                    rows.insert(c % (n + 1), Row::zero());
                }
                RandomMatrix { field, rows }
            })
    })
}

fn rank_of<E: FromScalar>(rows: &[Row], zero: &E, width: usize) -> usize {
    let dense: Vec<Vec<E>> = rows.iter().map(|x| densify(x, zero, width)).collect();
    if dense.is_empty() {
        return 0;
    }
    reference_rref(&dense).len()
}

fn prefix_rank(rm: &RandomMatrix, upto: usize) -> usize {
    let width = rm.width();
    let rows = &rm.rows[..upto];
    match rm.field {
        Field::Rational => rank_of(rows, &BigRational::from_integer(0.into()), width),
        Field::Gf(p) => rank_of(rows, &Zp { v: 0, p }, width),
    }
}

fn staged(rm: &RandomMatrix) -> Vec<EliminationState> {
    let mut state = EliminationState::new(rm.field, Pivoting::Rps);
    rm.rows
        .iter()
        .map(|row| {
            state.step(row).unwrap();
            state.clone()
        })
        .collect()
}

fn shuffled<T: Clone>(items: &[T], keys: &[usize]) -> Vec<T> {
    let mut tagged: Vec<(usize, usize, T)> = items
        .iter()
        .enumerate()
        .map(|(i, x)| (keys.get(i).copied().unwrap_or(i), i, x.clone()))
        .collect();
    tagged.sort_by_key(|(k, i, _)| (*k, *i));
    tagged.into_iter().map(|(_, _, x)| x).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_stage_is_reduced_and_consistent(rm in matrix()) {
        let stages = staged(&rm);
        for (s, state) in stages.iter().enumerate() {
            prop_assert!(is_lrrf(state.rows()).holds, "stage {}", s);
            for (&col, &i) in state.pivots() {
                prop_assert_eq!(state.rows()[i].maxs(), Some(col));
            }
            let nonzero = state.rows().iter().filter(|x| !x.is_zero()).count();
            prop_assert_eq!(state.pivots().len(), nonzero);
            for (i, q) in state.passage().iter().enumerate() {
                prop_assert_eq!(&apply_passage(q, &rm.rows), &state.rows()[i]);
                prop_assert_eq!(state.pivot_history()[i], state.rows()[i].maxs());
            }
            if s > 0 {
                let before = &stages[s - 1];
                for i in 0..s {
                    prop_assert_eq!(before.rows()[i].maxs(), state.rows()[i].maxs());
                    let changed = before.rows()[i] != state.rows()[i];
                    prop_assert_eq!(changed, state.last_changed()[i] == s && before.last_changed()[i] != s);
                }
            }
            let dependent = prefix_rank(&rm, s + 1) == prefix_rank(&rm, s);
            prop_assert_eq!(state.rows()[s].is_zero(), dependent, "zero row at {}", s);
        }
    }

    #[test]
    fn gaussian_order_does_not_matter(rm in matrix(), keys in prop::collection::vec(0usize..100, 20), c_row in row_in(Field::Rational)) {
        let n = rm.rows.len() - 1;
        let state = run_to(&rm.matrix(), n).unwrap();
        let c = match rm.field {
            Field::Rational => c_row,
            f => Row::from_pairs(c_row.support().iter().map(|(k, v)| {
                let num = v.as_rational().unwrap().numer().to_string().parse::<i64>().unwrap();
                (*k, f.from_i64(num))
            })).unwrap(),
        };
        let nonzero: Vec<usize> = (0..=n).filter(|&i| !state.rows()[i].is_zero()).collect();
        let order = shuffled(&nonzero, &keys);
        let trace = state.gaussian_trace(&c, &order).unwrap();
        prop_assert_eq!(trace.last().unwrap(), &state.gaussian_reduce(&c).unwrap());
        prop_assert!(trace.windows(2).all(|w| w[1].maxs() <= w[0].maxs()));
        let g = trace.last().unwrap();
        for col in state.pivots().keys() {
            prop_assert!(g.get(*col).is_none());
        }
    }

    #[test]
    fn one_shot_matches_staged(rm in matrix()) {
        let n = rm.rows.len() - 1;
        let m = rm.matrix();
        let shot = one_shot(&m, n).unwrap();
        let stages = staged(&rm);
        prop_assert_eq!(&shot.state, stages.last().unwrap());
        for (s, state) in stages.iter().enumerate() {
            prop_assert_eq!(&shot.stages[s], &state.rows().to_vec());
        }
    }

    #[test]
    fn row_reduced_form_ignores_row_order(rm in matrix(), keys in prop::collection::vec(0usize..100, 40)) {
        let state = run_to(&rm.matrix(), rm.rows.len() - 1).unwrap();
        let rows = state.rows().to_vec();
        prop_assert!(is_lrrf(&shuffled(&rows, &keys)).holds);
        prop_assert_eq!(is_lrrf(&shuffled(&rm.rows, &keys)).holds, is_lrrf(&rm.rows).holds);
    }

    #[test]
    fn reordering_history(rm in matrix()) {
        let stages = staged(&rm);
        let mut reorder = ReorderState::new();
        let mut views: Vec<Vec<Row>> = Vec::new();
        for state in &stages {
            reorder.observe(state.rows()).unwrap();
            prop_assert!(is_qhf(reorder.q_rows()).holds);
            views.push(reorder.q_rows().to_vec());
        }
        let hist = reorder.m_history();
        let n = stages.len();
        for k in 0..n {
            let mut last = k;
            for s in k + 1..n {
                prop_assert!(hist[s][k] <= hist[s - 1][k]);
                let changed = views[s][..=k] != views[s - 1][..=k];
                prop_assert_eq!(changed, hist[s][k] < hist[s - 1][k], "k {} stage {}", k, s);
                if changed {
                    last = s;
                }
            }
            prop_assert_eq!(reorder.qhf_prefix_stability(k).unwrap(), last);
        }
        let (base, seeded) = extended_run(&rm.matrix(), n - 1, Some(n / 2)).unwrap();
        prop_assert_eq!(&base, stages.last().unwrap());
        prop_assert_eq!(seeded.q_rows(), reorder.q_rows());
        prop_assert_eq!(seeded.m_history(), reorder.m_history());
    }

    #[test]
    fn parameters_count_the_deficiency(rm in matrix(), extra in 0usize..6) {
        let state = run_to(&rm.matrix(), rm.rows.len() - 1).unwrap();
        let horizon = rm.width() + extra;
        let res = general_solution(&state, &Rhs::Symbolic("c".into()), horizon).unwrap();
        prop_assert_eq!(res.general.free_columns.len(), deficiency(state.rows(), horizon).unwrap());
        let mut params = std::collections::BTreeSet::new();
        for e in &res.general.entries {
            params.extend(e.terms().filter(|(s, _)| s.is_param()).map(|(s, _)| s.clone()));
        }
        prop_assert_eq!(params.len(), res.deficiency_over_horizon);
        prop_assert_eq!(res.constraints.len(), state.zero_rows().len());
    }

    #[test]
    fn solving_commutes_with_evaluation(rm in matrix(), values in prop::collection::vec(-5i64..=5, 40)) {
        let field = rm.field;
        let state = run_to(&rm.matrix(), rm.rows.len() - 1).unwrap();
        let horizon = rm.width();
        let explicit: BTreeMap<usize, Scalar> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (i, field.from_i64(*v)))
            .collect();
        let binding: Binding = (0..values.len())
            .map(|i| (Symbol::rhs("c", i), field.from_i64(values[i])))
            .collect();
        let sym = general_solution(&state, &Rhs::Symbolic("c".into()), horizon).unwrap();
        let num = general_solution(&state, &Rhs::Explicit(explicit), horizon).unwrap();
        for (a, b) in sym.general.entries.iter().zip(&num.general.entries) {
            prop_assert_eq!(&a.eval(&binding).unwrap(), b);
        }
        for (a, b) in sym.constraints.iter().zip(&num.constraints) {
            prop_assert_eq!(&a.eval(&binding).unwrap(), b);
        }
        for (a, b) in sym.transformed.iter().zip(&num.transformed) {
            prop_assert_eq!(&a.eval(&binding).unwrap(), b);
        }
    }
}

#[test]
fn worked_reordering_example() {
    let rows = [r("0:1"), Row::zero(), r("2:1"), Row::zero(), r("1:1")];
    let mut reorder = ReorderState::new();
    for s in 0..rows.len() {
        reorder.observe(&rows[..=s]).unwrap();
        if s == 3 {
            assert_eq!(reorder.q_rows(), &rows[..4]);
        }
    }
    assert_eq!(reorder.q_rows(), &[r("0:1"), Row::zero(), r("1:1"), Row::zero(), r("2:1")]);
    assert_eq!(reorder.permutation(), &[0, 1, 4, 3, 2]);
    let hist = reorder.m_history();
    assert_eq!(hist[3][3], Some(2));
    assert_eq!(hist[4][3], Some(1));
    assert_eq!(reorder.qhf_prefix_stability(3).unwrap(), 4);
}

#[test]
fn zero_rows_never_receive_content() {
    let rows = [Row::zero(), r("3:1"), Row::zero(), r("1:1 2:1"), r("0:1")];
    let mut reorder = ReorderState::new();
    for s in 0..rows.len() {
        reorder.observe(&rows[..=s]).unwrap();
        for (i, row) in rows[..=s].iter().enumerate() {
            assert_eq!(row.is_zero(), reorder.q_rows()[i].is_zero());
        }
    }
    assert_eq!(reorder.q_rows(), &[Row::zero(), r("0:1"), Row::zero(), r("1:1 2:1"), r("3:1")]);
}
