//! Test-only helpers: a dense reference reduction written directly over
//! `BigRational` and `u64` residues, and random matrix generation.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};
use omega_gj::matrix::make_explicit;
use omega_gj::{Field, Row, RowFiniteMatrix, Scalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seed() -> u64 {
    std::env::var("OMEGA_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(20_240_611)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn q(s: &str) -> Scalar {
    Field::Rational.parse_scalar(s).unwrap()
}

pub fn r(s: &str) -> Row {
    Row::parse(Field::Rational, s).unwrap()
}

/// Rows from dense integer lists, as printed in tables.
pub fn dense_rows(table: &[&[i64]]) -> Vec<Row> {
    table
        .iter()
        .map(|vals| {
            Row::from_pairs(
                vals.iter()
                    .enumerate()
                    .map(|(c, &v)| (c, Field::Rational.from_i64(v))),
            )
            .unwrap()
        })
        .collect()
}

pub trait Elem: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Self;
}

impl Elem for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Self {
        BigRational::one() / self
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Zp {
    pub v: u64,
    pub p: u64,
}

impl Elem for Zp {
    fn zero_like(&self) -> Self {
        Zp { v: 0, p: self.p }
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn plus(&self, o: &Self) -> Self {
        Zp { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn times(&self, o: &Self) -> Self {
        Zp { v: (self.v * o.v) % self.p, p: self.p }
    }
    fn negated(&self) -> Self {
        Zp { v: (self.p - self.v) % self.p, p: self.p }
    }
    fn inverse(&self) -> Self {
        // Fermat: v^(p-2).
        let mut acc = 1u64;
        for _ in 0..self.p - 2 {
            acc = acc * self.v % self.p;
        }
        Zp { v: acc, p: self.p }
    }
}

/// Converts library scalars into reference elements.
pub trait FromScalar: Elem {
    fn from_scalar(s: &Scalar, zero: &Self) -> Self;
}

impl FromScalar for BigRational {
    fn from_scalar(s: &Scalar, _: &Self) -> Self {
        s.as_rational().unwrap().clone()
    }
}

impl FromScalar for Zp {
    fn from_scalar(s: &Scalar, zero: &Self) -> Self {
        Zp { v: s.residue().unwrap(), p: zero.p }
    }
}

pub fn densify<E: FromScalar>(row: &Row, zero: &E, width: usize) -> Vec<E> {
    let mut out = vec![zero.clone(); width];
    for (c, v) in row.support() {
        out[*c] = E::from_scalar(v, zero);
    }
    out
}

/// Reduced echelon form with rightmost pivots of the given rows, keyed by
/// pivot column. Columns are scanned right to left; the pivot row is the
/// lowest-index candidate.
pub fn reference_rref<E: Elem>(rows: &[Vec<E>]) -> BTreeMap<usize, Vec<E>> {
    let mut work: Vec<Vec<E>> = rows.to_vec();
    let mut taken = vec![false; work.len()];
    let mut out = BTreeMap::new();
    let width = work.first().map_or(0, |r| r.len());
    for col in (0..width).rev() {
        let Some(p) = (0..work.len()).find(|&i| !taken[i] && !work[i][col].is_zero_elem()) else {
            continue;
        };
        taken[p] = true;
        let inv = work[p][col].inverse();
        let pivot: Vec<E> = work[p].iter().map(|v| v.times(&inv)).collect();
        let nz: Vec<usize> = (0..width).filter(|&c| !pivot[c].is_zero_elem()).collect();
        for (i, row) in work.iter_mut().enumerate() {
            if i == p || row[col].is_zero_elem() {
                continue;
            }
            let f = row[col].negated();
            for &c in &nz {
                row[c] = row[c].plus(&f.times(&pivot[c]));
            }
        }
        work[p] = pivot;
        out.insert(col, p);
    }
    out.into_iter().map(|(c, p)| (c, work[p].clone())).collect()
}

/// Rows of the staged reduction at every stage, derived from uniqueness of
/// the reduced basis of each prefix: row `i` holds the basis vector whose
/// length is new at prefix `i`.
pub fn reference_stages<E: Elem>(input: &[Vec<E>]) -> Vec<Vec<Vec<E>>> {
    let n = input.len();
    let bases: Vec<BTreeMap<usize, Vec<E>>> =
        (0..n).map(|s| reference_rref(&input[..=s])).collect();
    let fresh: Vec<Option<usize>> = (0..n)
        .map(|i| {
            bases[i]
                .keys()
                .find(|c| i == 0 || !bases[i - 1].contains_key(c))
                .copied()
        })
        .collect();
    let zero_row: Vec<E> = input[0].iter().map(|v| v.zero_like()).collect();
    (0..n)
        .map(|s| {
            (0..=s)
                .map(|i| fresh[i].map_or_else(|| zero_row.clone(), |c| bases[s][&c].clone()))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RandomMatrix {
    pub field: Field,
    pub rows: Vec<Row>,
}

impl RandomMatrix {
    pub fn matrix(&self) -> RowFiniteMatrix {
        let map: BTreeMap<usize, Row> = self.rows.iter().cloned().enumerate().collect();
        make_explicit(self.field, map).unwrap()
    }

    pub fn width(&self) -> usize {
        self.rows.iter().filter_map(Row::maxs).max().map_or(1, |c| c + 1)
    }
}

fn random_value(field: Field, rng: &mut impl Rng) -> Scalar {
    match field {
        Field::Rational => {
            let mut n = 0;
            while n == 0 {
                n = rng.random_range(-5i64..=5);
            }
            let d = if rng.random_bool(0.25) { rng.random_range(2i64..=4) } else { 1 };
            field.from_i64(n).div(&field.from_i64(d)).unwrap()
        }
        Field::Gf(p) => field.from_i64(rng.random_range(1..p) as i64),
    }
}

/// Up to `max_rows` rows, each with at most `max_support` entries below
/// `max_cols`. Some rows are zero and some are combinations of earlier rows,
/// so the elimination sees dependencies and Jordan updates.
pub fn random_matrix(
    field: Field,
    rng: &mut impl Rng,
    max_rows: usize,
    max_support: usize,
    max_cols: usize,
) -> RandomMatrix {
    let n = rng.random_range(1..=max_rows);
    let mut rows: Vec<Row> = Vec::with_capacity(n);
    for _ in 0..n {
        let roll = rng.random_range(0..10);
        if roll == 0 {
            rows.push(Row::zero());
            continue;
        }
        if roll <= 3 && rows.len() >= 2 {
            let a = rng.random_range(0..rows.len());
            let b = rng.random_range(0..rows.len());
            let mixed = omega_gj::row::axpy(
                &random_value(field, rng),
                &rows[a],
                &rows[b].scale(&random_value(field, rng)).unwrap(),
            )
            .unwrap();
            if mixed.len() <= max_support {
                rows.push(mixed);
                continue;
            }
        }
        let k = rng.random_range(1..=max_support);
        let mut pairs = BTreeMap::new();
        // Cluster columns so that supports overlap often.
        let centre = rng.random_range(0..max_cols);
        for _ in 0..k {
            let spread = rng.random_range(0..=8usize);
            let c = if rng.random_bool(0.5) {
                centre.saturating_sub(spread)
            } else {
                (centre + spread).min(max_cols - 1)
            };
            pairs.insert(c, random_value(field, rng));
        }
        rows.push(Row::from_pairs(pairs).unwrap());
    }
    RandomMatrix { field, rows }
}

/// `sum_j passage[j] * input_j`.
pub fn apply_passage(passage: &Row, input: &[Row]) -> Row {
    let mut acc = Row::zero();
    for (j, v) in passage.support() {
        acc = omega_gj::row::axpy(v, &input[*j], &acc).unwrap();
    }
    acc
}
