//! Affine forms over solution parameters `t_m` and right-hand-side symbols.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Right-hand-side symbols sort before parameters; within a namespace, by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Rhs { name: String, index: usize },
    Param(usize),
}

impl Symbol {
    pub fn rhs(name: &str, index: usize) -> Symbol {
        Symbol::Rhs {
            name: name.to_string(),
            index,
        }
    }

    pub fn is_param(&self) -> bool {
        matches!(self, Symbol::Param(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Rhs { name, index } => write!(f, "{name}_{index}"),
            Symbol::Param(i) => write!(f, "t_{i}"),
        }
    }
}

/// Checks that `name` can be used as a right-hand-side namespace.
pub fn valid_rhs_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
        && name != "t"
}

pub type Binding = BTreeMap<Symbol, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinForm {
    field: Field,
    constant: Scalar,
    terms: BTreeMap<Symbol, Scalar>,
}

impl LinForm {
    pub fn zero(field: Field) -> LinForm {
        LinForm {
            field,
            constant: field.zero(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> LinForm {
        LinForm {
            field: c.field(),
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn symbol(field: Field, sym: Symbol) -> LinForm {
        let mut terms = BTreeMap::new();
        terms.insert(sym, field.one());
        LinForm {
            field,
            constant: field.zero(),
            terms,
        }
    }

    /// Builds a form from raw parts, merging repeated symbols and dropping zeros.
    pub fn from_parts(
        field: Field,
        constant: Scalar,
        terms: impl IntoIterator<Item = (Symbol, Scalar)>,
    ) -> Result<LinForm> {
        check_field(field, &constant)?;
        let mut out = LinForm::constant(constant);
        for (sym, c) in terms {
            check_field(field, &c)?;
            out.add_term(sym, &c)?;
        }
        Ok(out)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sym: &Symbol) -> Scalar {
        self.terms.get(sym).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_symbol(&self) -> Option<&Symbol> {
        self.terms.keys().next_back()
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(Symbol::is_param)
    }

    fn add_term(&mut self, sym: Symbol, c: &Scalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&sym) {
            Some(v) => {
                let s = v.add(c)?;
                if s.is_zero() {
                    self.terms.remove(&sym);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(sym, c.clone());
            }
        }
        Ok(())
    }

    pub fn scale(&self, lambda: &Scalar) -> Result<LinForm> {
        LinForm::zero(self.field).axpy(lambda, self)
    }

    /// `self + lambda * x`.
    pub fn axpy(&self, lambda: &Scalar, x: &LinForm) -> Result<LinForm> {
        check_field(self.field, lambda)?;
        check_field(self.field, &x.constant)?;
        let mut out = self.clone();
        if lambda.is_zero() {
            return Ok(out);
        }
        out.constant = out.constant.add(&lambda.mul(&x.constant)?)?;
        for (sym, c) in &x.terms {
            out.add_term(sym.clone(), &lambda.mul(c)?)?;
        }
        Ok(out)
    }

    pub fn add(&self, x: &LinForm) -> Result<LinForm> {
        self.axpy(&self.field.one(), x)
    }

    pub fn sub(&self, x: &LinForm) -> Result<LinForm> {
        self.axpy(&self.field.one().neg(), x)
    }

    /// Substitutes the bound symbols; unbound symbols stay symbolic.
    pub fn eval(&self, binding: &Binding) -> Result<LinForm> {
        let mut out = LinForm::constant(self.constant.clone());
        for (sym, c) in &self.terms {
            match binding.get(sym) {
                Some(v) => {
                    check_field(self.field, v)?;
                    out.constant = out.constant.add(&c.mul(v)?)?;
                }
                None => out.add_term(sym.clone(), c)?,
            }
        }
        Ok(out)
    }

    /// Renders `form = 0` with the leading symbol first, e.g. `c_3 - c_0 - 2*c_2 = 0`.
    pub fn render_constraint(&self) -> String {
        let mut order: Vec<(&Symbol, &Scalar)> = Vec::new();
        if let Some((s, c)) = self.terms.iter().next_back() {
            order.push((s, c));
        }
        let n = self.terms.len().saturating_sub(1);
        order.extend(self.terms.iter().take(n));
        format!("{} = 0", render(&order, &self.constant))
    }

    pub fn parse(field: Field, text: &str) -> Result<LinForm> {
        parse_linform(field, text)
    }
}

fn check_field(field: Field, s: &Scalar) -> Result<()> {
    if s.field() != field {
        return Err(Error::FieldMismatch {
            left: field.to_string(),
            right: s.field().to_string(),
        });
    }
    Ok(())
}

fn render(terms: &[(&Symbol, &Scalar)], constant: &Scalar) -> String {
    let mut out = String::new();
    let mut push = |negative: bool, body: String| {
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    };
    for (sym, c) in terms {
        let negative = c.is_negative();
        let mag = if negative { c.neg() } else { (*c).clone() };
        if mag.is_one() {
            push(negative, sym.to_string());
        } else {
            push(negative, format!("{mag}*{sym}"));
        }
    }
    if !constant.is_zero() {
        let negative = constant.is_negative();
        let mag = if negative { constant.neg() } else { constant.clone() };
        push(negative, mag.to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.terms.iter().collect();
        f.write_str(&render(&terms, &self.constant))
    }
}

fn parse_symbol(text: &str) -> Option<Symbol> {
    let (name, idx) = text.rsplit_once('_')?;
    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let index: usize = idx.parse().ok()?;
    if name == "t" {
        return Some(Symbol::Param(index));
    }
    valid_rhs_name(name).then(|| Symbol::rhs(name, index))
}

fn parse_linform(field: Field, text: &str) -> Result<LinForm> {
    let bad = |why: &str| Error::parse(0, format!("{why} in form {text:?}"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty form"));
    }
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let bytes = compact.as_bytes();
    let mut i = 0;
    if matches!(bytes[0], b'+' | b'-') {
        negative = bytes[0] == b'-';
        i = 1;
        start = 1;
    }
    while i < bytes.len() {
        if matches!(bytes[i], b'+' | b'-') {
            pieces.push((negative, &compact[start..i]));
            negative = bytes[i] == b'-';
            start = i + 1;
        }
        i += 1;
    }
    pieces.push((negative, &compact[start..]));

    let mut out = LinForm::zero(field);
    for (negative, piece) in pieces {
        if piece.is_empty() {
            return Err(bad("empty term"));
        }
        let (coef, sym) = match piece.split_once('*') {
            Some((c, s)) => {
                let sym = parse_symbol(s).ok_or_else(|| bad("bad symbol"))?;
                (field.parse_scalar(c).map_err(|_| bad("bad coefficient"))?, Some(sym))
            }
            None => match parse_symbol(piece) {
                Some(sym) => (field.one(), Some(sym)),
                None => (
                    field.parse_scalar(piece).map_err(|_| bad("bad term"))?,
                    None,
                ),
            },
        };
        let coef = if negative { coef.neg() } else { coef };
        let term = match sym {
            Some(s) => LinForm::symbol(field, s),
            None => LinForm::constant(field.one()),
        };
        out = out.axpy(&coef, &term)?;
    }
    Ok(out)
}
