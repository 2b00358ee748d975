//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace-insensitive):
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := ident | uint ['/' uint] | '(' expr ')' | '-' atom
//! ```
//! Identifiers must name variables of the supplied ring context. Products
//! require an explicit `*`.

use crate::poly::Polynomial;
use crate::ring::Ctx;
use crate::scalar::Scalar;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let v: i64 = text.parse().map_err(|_| ParseError {
                    pos: start,
                    message: format!("integer literal `{text}` out of range"),
                })?;
                toks.push((start, Tok::Int(v)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    message: format!("unexpected character `{}`", &input[i..i + 1]),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    ctx: &'a Ctx,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError { pos, message: format!("expected {what}") }),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(e)) if e >= 0 => Ok(base.pow(e as u32)),
                _ => Err(ParseError {
                    pos,
                    message: "expected a nonnegative integer exponent".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Ident(name)) => match self.ctx.var_index(&name) {
                Some(i) => Ok(Polynomial::var(self.ctx.clone(), i)),
                None => Err(ParseError {
                    pos,
                    message: format!("unknown variable `{name}`"),
                }),
            },
            Some(Tok::Int(n)) => {
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let dpos = self.here();
                    match self.bump() {
                        Some(Tok::Int(d)) if d > 0 => Ok(Polynomial::constant(
                            self.ctx.clone(),
                            Scalar::from_ratio(self.ctx.field(), n, d),
                        )),
                        _ => Err(ParseError {
                            pos: dpos,
                            message: "expected a positive integer denominator".into(),
                        }),
                    }
                } else {
                    Ok(Polynomial::constant(
                        self.ctx.clone(),
                        Scalar::from_i64(self.ctx.field(), n),
                    ))
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(e)
            }
            Some(Tok::Minus) => Ok(self.atom()?.neg()),
            Some(t) => Err(ParseError {
                pos,
                message: format!("unexpected token {t:?}"),
            }),
            None => Err(ParseError {
                pos,
                message: "unexpected end of expression".into(),
            }),
        }
    }
}

/// Parse one polynomial over the given ring context.
pub fn parse_polynomial(ctx: &Ctx, input: &str) -> Result<Polynomial, ParseError> {
    let toks = tokenize(input)?;
    let mut p = Parser { ctx, toks, pos: 0, end: input.len() };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError {
            pos: p.here(),
            message: "trailing input after expression".into(),
        });
    }
    Ok(poly)
}

/// Split on `sep` at nesting depth zero with respect to `()` and `[]`.
pub fn split_top_level(input: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in input.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}
