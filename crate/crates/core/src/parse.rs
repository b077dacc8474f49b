//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (precedence high to low): `^` with a non-negative integer
//! exponent, unary `-`, `*` and `/` (divisor must be a nonzero constant),
//! binary `+`/`-`. Atoms are integers, variable names, `i` (Q(i) only) and
//! parenthesised expressions.

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Ring, RingRef};
use crate::scalar::{Field, GaussRational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let n = text[start..k].parse().expect("digits");
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((Tok::Ident(text[start..k].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), k));
            k += 1;
        } else {
            return Err(Error::Syntax {
                pos: k,
                msg: format!("unexpected character `{}`", c),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    ring: &'a RingRef,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.at += 1;
            let pos = self.pos();
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                let Some(c) = rhs.constant_value() else {
                    return Err(Error::Syntax {
                        pos,
                        msg: "divisor must be a constant".into(),
                    });
                };
                if c.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = acc.scale(&c.inv().expect("nonzero"));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.at += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    let Ok(e) = u32::try_from(&n) else {
                        return self.syntax("exponent too large");
                    };
                    self.at += 1;
                    if let Some(Tok::Op('^')) = self.peek() {
                        return self.syntax("chained exponents need parentheses");
                    }
                    return Ok(base.pow(e));
                }
                _ => return self.syntax("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let pos = self.pos();
        match self.peek().cloned() {
            None => self.syntax("unexpected end of input"),
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(MultiPoly::constant(self.ring, GaussRational::from_bigint(n)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(idx) = self.ring.index_of(&name) {
                    return Ok(MultiPoly::var_at(self.ring, idx));
                }
                if name == "i" {
                    if self.ring.field() == Field::Gaussian {
                        return Ok(MultiPoly::constant(self.ring, GaussRational::i()));
                    }
                    return Err(Error::ImaginaryInRationalField { pos });
                }
                Err(Error::UnknownVariable(name))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    _ => self.syntax("expected `)`"),
                }
            }
            Some(Tok::Op(c)) => self.syntax(format!("unexpected `{}`", c)),
        }
    }
}

/// Parses `text` into a canonical polynomial of `ring`.
pub fn parse_poly(text: &str, ring: &RingRef) -> Result<MultiPoly> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        ring,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return p.syntax("unexpected trailing input");
    }
    Ok(out)
}

/// Parses a constant such as `1/2`, `1 - i` or `-3*i`.
pub fn parse_scalar(text: &str, field: Field) -> Result<GaussRational> {
    let ring = Ring::new(Vec::<String>::new(), field)?;
    let p = parse_poly(text, &ring)?;
    Ok(p.constant_value().expect("no variables"))
}

/// Comma-separated list of constants.
pub fn parse_scalar_list(text: &str, field: Field) -> Result<Vec<GaussRational>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_scalar(s, field))
        .collect()
}
