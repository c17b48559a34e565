//! Bracket expressions in the generators `x_1..x_n`.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := [integer] factor
//! factor := 'x' ['_'] index | '[' expr ',' expr ']'
//! ```

use std::fmt;

use super::RelationError;
use crate::contragredient::WeightVector;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketExpr {
    /// `x_k`, 1-based.
    Generator(usize),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
    /// Integer coefficient, kept verbatim and reduced only at evaluation.
    Scaled(i64, Box<BracketExpr>),
    Sum(Vec<BracketExpr>),
}

impl BracketExpr {
    pub fn gen(k: usize) -> Self {
        BracketExpr::Generator(k)
    }

    pub fn bracket(a: BracketExpr, b: BracketExpr) -> Self {
        BracketExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn scaled(c: i64, e: BracketExpr) -> Self {
        BracketExpr::Scaled(c, Box::new(e))
    }

    /// `ad(x_i)^k (x_j)`, i.e. `[x_i,[x_i,...,[x_i,x_j]]]`.
    pub fn ad_power(i: usize, k: usize, j: usize) -> Self {
        (0..k).fold(BracketExpr::gen(j), |acc, _| {
            BracketExpr::bracket(BracketExpr::gen(i), acc)
        })
    }

    /// Largest generator index referenced.
    pub fn max_generator(&self) -> usize {
        match self {
            BracketExpr::Generator(k) => *k,
            BracketExpr::Bracket(a, b) => a.max_generator().max(b.max_generator()),
            BracketExpr::Scaled(_, e) => e.max_generator(),
            BracketExpr::Sum(ts) => ts.iter().map(Self::max_generator).max().unwrap_or(0),
        }
    }

    /// Weight of a homogeneous expression over `n` generators.
    pub fn weight(&self, n: usize) -> Result<WeightVector, RelationError> {
        match self {
            BracketExpr::Generator(k) => {
                if *k == 0 || *k > n {
                    return Err(RelationError::IndexOutOfRange { index: *k, n });
                }
                Ok(WeightVector::unit(n, k - 1))
            }
            BracketExpr::Bracket(a, b) => {
                let (wa, wb) = (a.weight(n)?, b.weight(n)?);
                Ok(WeightVector(
                    wa.0.iter().zip(&wb.0).map(|(x, y)| x + y).collect(),
                ))
            }
            BracketExpr::Scaled(_, e) => e.weight(n),
            BracketExpr::Sum(ts) => {
                let mut weights = ts.iter().map(|t| t.weight(n));
                let first = weights.next().ok_or(RelationError::EmptySum)??;
                for w in weights {
                    let w = w?;
                    if w != first {
                        return Err(RelationError::MixedWeight {
                            first: first.to_string(),
                            other: w.to_string(),
                        });
                    }
                }
                Ok(first)
            }
        }
    }

    /// `[a, b] -> -(-1)^(|a||b|) [b, a]` applied at every bracket node.
    pub fn swap_brackets(&self, is_odd: &impl Fn(&BracketExpr) -> bool) -> BracketExpr {
        match self {
            BracketExpr::Generator(_) => self.clone(),
            BracketExpr::Bracket(a, b) => {
                let sign = if is_odd(a) && is_odd(b) { 1 } else { -1 };
                BracketExpr::scaled(
                    sign,
                    BracketExpr::bracket(b.swap_brackets(is_odd), a.swap_brackets(is_odd)),
                )
            }
            BracketExpr::Scaled(c, e) => BracketExpr::scaled(*c, e.swap_brackets(is_odd)),
            BracketExpr::Sum(ts) => {
                BracketExpr::Sum(ts.iter().map(|t| t.swap_brackets(is_odd)).collect())
            }
        }
    }

    /// Flattens sums, and scaled sums, into `(coefficient, term)` pairs
    /// whose term is a generator, a bracket or a scaled factor.
    fn print_terms(&self, coeff: i64, out: &mut Vec<(i64, BracketExpr)>) {
        match self {
            BracketExpr::Sum(ts) => ts.iter().for_each(|t| t.print_terms(coeff, out)),
            BracketExpr::Scaled(c, e) if !e.is_factor() => e.print_terms(coeff * c, out),
            other => out.push((coeff, other.clone())),
        }
    }

    fn is_factor(&self) -> bool {
        matches!(self, BracketExpr::Generator(_) | BracketExpr::Bracket(..))
    }
}

fn fmt_factor(e: &BracketExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        BracketExpr::Generator(k) => write!(f, "x{k}"),
        BracketExpr::Bracket(a, b) => write!(f, "[{a},{b}]"),
        _ => unreachable!("only factors reach fmt_factor"),
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        self.print_terms(1, &mut terms);
        for (i, (outer, term)) in terms.iter().enumerate() {
            let (coeff, factor, explicit) = match term {
                BracketExpr::Scaled(c, e) => (outer * c, e.as_ref(), true),
                other => (*outer, other, *outer != 1),
            };
            if coeff < 0 {
                f.write_str(if i == 0 { "-" } else { " - " })?;
                if coeff != -1 {
                    write!(f, "{} ", -coeff)?;
                }
            } else {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                if explicit {
                    write!(f, "{coeff} ")?;
                }
            }
            fmt_factor(factor, f)?;
        }
        Ok(())
    }
}

/// Parses one expression.
pub fn parse(text: &str) -> Result<BracketExpr, RelationError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> RelationError {
        RelationError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), RelationError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<BracketExpr, RelationError> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let term = self.term()?;
            terms.push(if negate { negated(term) } else { term });
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            BracketExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<BracketExpr, RelationError> {
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let start = self.pos;
            let c = self.integer()?;
            if c == 0 {
                self.pos = start;
                return Err(self.error("zero coefficient"));
            }
            let factor = self.factor()?;
            Ok(BracketExpr::scaled(c, factor))
        } else {
            self.factor()
        }
    }

    fn integer(&mut self) -> Result<i64, RelationError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| RelationError::Syntax {
                position: start,
                message: "integer out of range".to_string(),
            })
    }

    fn factor(&mut self) -> Result<BracketExpr, RelationError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                }
                if !matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                    return Err(self.error("expected generator index"));
                }
                let start = self.pos;
                let k = self.integer()?;
                if k == 0 {
                    self.pos = start;
                    return Err(self.error("generator indices start at 1"));
                }
                Ok(BracketExpr::Generator(k as usize))
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(BracketExpr::bracket(a, b))
            }
            Some(_) => Err(self.error("expected 'x<index>' or '['")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn negated(term: BracketExpr) -> BracketExpr {
    match term {
        BracketExpr::Scaled(c, e) => BracketExpr::Scaled(-c, e),
        other => BracketExpr::scaled(-1, other),
    }
}
