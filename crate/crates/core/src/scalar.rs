//! Exact field elements: arbitrary-precision rationals and residues modulo a prime.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moduli are kept below 2^32 so trial division stays cheap.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Gf(u64),
}

impl Field {
    /// GF(p), after checking that `p` is prime.
    pub fn gf(p: u64) -> Result<Field> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Gf(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Gf(p) => Scalar::Gf {
                value: reduce_bigint(n, p),
                modulus: p,
            },
        }
    }

    /// Parses the scalar text form: an integer or `p/q`. Over GF(p) the
    /// value is reduced, and `a/b` means `a * b^-1`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::parse(0, format!("invalid scalar {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let num = parse_int(num).ok_or_else(bad)?;
        let den = match den {
            Some(d) => {
                if d.starts_with(['+', '-']) {
                    return Err(bad());
                }
                parse_int(d).ok_or_else(bad)?
            }
            None => BigInt::one(),
        };
        let n = self.from_bigint(&num);
        let d = self.from_bigint(&den);
        n.div(&d).map_err(|_| bad())
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            Field::Rational => None,
            Field::Gf(p) => Some(p),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("rational"),
            Field::Gf(p) => write!(f, "gf {p}"),
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Gf { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Gf { modulus, .. } => Field::Gf(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Gf { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Gf { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Gf { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Gf { value, .. } => Some(*value),
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch {
            left: self.field().to_string(),
            right: other.field().to_string(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Gf { value: a, modulus: p }, Scalar::Gf { value: b, modulus: q }) if p == q => {
                Ok(Scalar::Gf {
                    value: (a + b) % p,
                    modulus: *p,
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Gf { value: a, modulus: p }, Scalar::Gf { value: b, modulus: q }) if p == q => {
                Ok(Scalar::Gf {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if self.field() != other.field() {
            return Err(self.mismatch(other));
        }
        self.mul(&other.inv()?)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Gf { value, modulus } => Scalar::Gf {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(q) => Ok(Scalar::Rational(q.recip())),
            Scalar::Gf { value, modulus } => {
                let g = (*value as i128).extended_gcd(&(*modulus as i128));
                Ok(Scalar::Gf {
                    value: g.x.rem_euclid(*modulus as i128) as u64,
                    modulus: *modulus,
                })
            }
        }
    }

    /// Whether the text rendering needs a leading minus.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Gf { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Gf { value, .. } => write!(f, "{value}"),
        }
    }
}
