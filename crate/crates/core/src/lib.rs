//! Infinite Gauss-Jordan elimination with rightmost pivots over lazily
//! generated row-finite matrices, with exact rational or prime-field
//! arithmetic.
//!
//! The engine processes one input row per stage. After stage `n` the first
//! `n + 1` reduced rows are in lower row-reduced form and the passage rows
//! record how each was built from the input. Reordering the nonzero rows by
//! length gives quasi-Hermite prefixes, and the solver reads symbolic general
//! solutions off either view.

pub mod canon;
pub mod cli;
pub mod engine;
pub mod error;
pub mod linform;
pub mod matrix;
pub mod oneshot;
pub mod reorder;
pub mod row;
pub mod scalar;
pub mod snapshot;
pub mod solver;
pub mod spec;

pub use engine::{run_lps_to, run_to, EliminationState, PivotFloor, Stability, Strategy};
pub use error::{Error, Result};
pub use linform::{LinForm, Symbol};
pub use matrix::{Builtin, MonomialOrdering, RowFiniteMatrix};
pub use reorder::{extended_run, reorder_prefix, ReorderState};
pub use row::Row;
pub use scalar::{Field, Scalar};
