//! Canonical text format for series.
//!
//! Terms are printed in graded-lex order, lowest first, with explicit signs:
//! `1 - 2*b1*x*y + 3*x^2`. Coefficients with more than one polynomial term
//! are parenthesized, `(1 - b1)*x^2`. The printer and parser round-trip
//! byte for byte on canonical output.

use super::coeff::{rational_string, Coeff, CoeffRing};
use super::series::{ExpVec, Series, Vars};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {0}")]
    UnexpectedToken(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("parenthesized subexpression must be a pure coefficient")]
    NonConstantParenthetical,
    #[error("coefficient not valid in this ring: {0}")]
    BadCoefficient(String),
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let vars_part = if e.total_degree() == 0 {
                String::new()
            } else {
                self.monomial_string(e)
            };
            // single-term coefficients are inlined with an extracted sign;
            // multi-term ones are parenthesized
            if c.term_count() == 1 {
                let (mono, q) = c.terms().next().unwrap();
                let neg = q.is_negative();
                let mag = if neg { -q } else { q.clone() };
                write_sign(f, &mut first, neg)?;
                let mut factors = Vec::new();
                let bpart = {
                    let mut parts = Vec::new();
                    for (i, &exp) in mono.exponents().iter().enumerate() {
                        if exp == 1 {
                            parts.push(format!("b{}", i + 1));
                        } else if exp > 1 {
                            parts.push(format!("b{}^{}", i + 1, exp));
                        }
                    }
                    parts.join("*")
                };
                if !mag.is_one() || (bpart.is_empty() && vars_part.is_empty()) {
                    factors.push(rational_string(&mag));
                }
                if !bpart.is_empty() {
                    factors.push(bpart);
                }
                if !vars_part.is_empty() {
                    factors.push(vars_part);
                }
                write!(f, "{}", factors.join("*"))?;
            } else {
                write_sign(f, &mut first, false)?;
                if vars_part.is_empty() {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "({c})*{vars_part}")?;
                }
            }
        }
        Ok(())
    }
}

fn write_sign(f: &mut fmt::Formatter<'_>, first: &mut bool, neg: bool) -> fmt::Result {
    if *first {
        *first = false;
        if neg {
            write!(f, "-")?;
        }
        Ok(())
    } else if neg {
        write!(f, " - ")
    } else {
        write!(f, " + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                tokens.push(Token::Number(s.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Ident(bytes[start..i].iter().collect()));
            }
            other => return Err(ParseError::UnexpectedChar(other, i)),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    ring: &'a CoeffRing,
    template: Series,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_sum(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.template.empty_like();
        let mut sign_neg = match self.peek() {
            Some(Token::Minus) => {
                self.next();
                true
            }
            Some(Token::Plus) => {
                self.next();
                false
            }
            _ => false,
        };
        loop {
            let term = self.parse_term(sign_neg)?;
            acc = acc.add(&term).expect("same template");
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    sign_neg = false;
                }
                Some(Token::Minus) => {
                    self.next();
                    sign_neg = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self, neg: bool) -> Result<Series, ParseError> {
        let mut coeff = if neg {
            self.ring.from_i64(-1)
        } else {
            self.ring.one()
        };
        let width = self.template.vars().len();
        let mut exps = vec![0u32; width];
        loop {
            match self.next() {
                Some(Token::Number(n)) => {
                    let mut q = BigRational::from_integer(n);
                    if matches!(self.peek(), Some(Token::Slash)) {
                        self.next();
                        match self.next() {
                            Some(Token::Number(d)) => {
                                if d.is_zero() {
                                    return Err(ParseError::ZeroDenominator);
                                }
                                q /= BigRational::from_integer(d);
                            }
                            _ => return Err(ParseError::UnexpectedEnd),
                        }
                    }
                    let c = self
                        .ring
                        .from_rational(q)
                        .map_err(|e| ParseError::BadCoefficient(e.to_string()))?;
                    coeff = self.ring.mul(&coeff, &c);
                }
                Some(Token::Ident(name)) => {
                    let power = self.parse_power()?;
                    if let Some(idx) = self.template.vars().index_of(&name) {
                        exps[idx] += power;
                    } else if let Some(g) = parse_gen(&name, self.ring) {
                        let mut p = self.ring.one();
                        for _ in 0..power {
                            p = self.ring.mul(&p, &g);
                        }
                        coeff = self.ring.mul(&coeff, &p);
                    } else {
                        return Err(ParseError::UnknownSymbol(name));
                    }
                }
                Some(Token::LParen) => {
                    let inner = self.parse_sum()?;
                    match self.next() {
                        Some(Token::RParen) => {}
                        _ => return Err(ParseError::UnexpectedEnd),
                    }
                    if inner.terms().any(|(e, _)| e.total_degree() > 0) {
                        return Err(ParseError::NonConstantParenthetical);
                    }
                    coeff = self.ring.mul(&coeff, &inner.constant_term());
                }
                Some(other) => return Err(ParseError::UnexpectedToken(format!("{other:?}"))),
                None => return Err(ParseError::UnexpectedEnd),
            }
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                }
                _ => break,
            }
        }
        let mut out = self.template.empty_like();
        out.insert_term(ExpVec::from_exps(exps), coeff);
        Ok(out)
    }

    fn parse_power(&mut self) -> Result<u32, ParseError> {
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Number(n)) => n
                    .to_string()
                    .parse()
                    .map_err(|_| ParseError::UnexpectedToken(n.to_string())),
                _ => Err(ParseError::UnexpectedEnd),
            }
        } else {
            Ok(1)
        }
    }
}

fn parse_gen(name: &str, ring: &CoeffRing) -> Option<Coeff> {
    let rest = name.strip_prefix('b')?;
    let i: usize = rest.parse().ok()?;
    if i >= 1 && i <= ring.gens() {
        Some(ring.gen(i))
    } else {
        None
    }
}

/// Parse the canonical text format into a series over the given ring and
/// variable set. Terms beyond the precision or caps are rejected rather
/// than silently dropped.
pub fn parse_series(
    text: &str,
    ring: &CoeffRing,
    vars: &Arc<Vars>,
    precision: u32,
    caps: Vec<Option<u32>>,
) -> Result<Series, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::UnexpectedEnd);
    }
    // parse into an uncapped, unbounded template first so that out-of-range
    // terms surface as errors
    let loose = Series::zero(ring.clone(), Arc::clone(vars), u32::MAX);
    let mut parser = Parser {
        tokens,
        pos: 0,
        ring,
        template: loose,
    };
    let parsed = parser.parse_sum()?;
    if parser.pos != parser.tokens.len() {
        return Err(ParseError::UnexpectedToken(format!(
            "{:?}",
            parser.tokens[parser.pos]
        )));
    }
    let mut out = Series::zero_with_caps(ring.clone(), Arc::clone(vars), precision, caps);
    for (e, c) in parsed.terms() {
        if e.total_degree() > precision {
            return Err(ParseError::BadCoefficient(format!(
                "term of degree {} exceeds precision {}",
                e.total_degree(),
                precision
            )));
        }
        out.insert_term(e.clone(), c.clone());
    }
    Ok(out)
}
