//! Text syntax: identifiers for variables, `^` for non-negative integer
//! powers, optional `*` between factors, integer or `a/b` literals and
//! parentheses, e.g. `x^2*y - 3/2*z1` or `z^2(z+t)^2`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::{Polynomial, Ring};

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str) -> std::result::Result<Lexer, (usize, String)> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().unwrap()), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err((start, format!("unexpected character `{other}`"))),
        };
        toks.push((t, start));
        i += 1;
    }
    Ok(Lexer { toks, end: chars.len() })
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    lx: Lexer,
    pos: usize,
}

type PResult<T> = std::result::Result<T, (usize, String)>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.lx.toks.get(self.pos).map_or(self.lx.end, |(_, c)| *c)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.lx.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> PResult<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -1
            }
            Some(Tok::Plus) => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen))
    }

    fn term(&mut self) -> PResult<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            if let Some(Tok::Star) = self.peek() {
                self.bump();
                let f = self.factor()?;
                acc = &acc * &f;
            } else if self.starts_factor() {
                let f = self.factor()?;
                acc = &acc * &f;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> PResult<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.here();
            let e = match self.bump() {
                Some(Tok::Num(n)) => n,
                Some(Tok::LParen) => {
                    let n = match self.bump() {
                        Some(Tok::Num(n)) => n,
                        _ => return Err((at, "expected integer exponent".into())),
                    };
                    if self.bump() != Some(Tok::RParen) {
                        return Err((at, "expected `)` after exponent".into()));
                    }
                    n
                }
                _ => return Err((at, "expected non-negative integer exponent".into())),
            };
            let e: u32 = e
                .try_into()
                .map_err(|_| (at, "exponent too large".to_string()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Polynomial> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let dom = self.ring.domain();
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dat = self.here();
                    match self.bump() {
                        Some(Tok::Num(d)) => {
                            let c = dom.from_ratio(&n, &d).map_err(|e| (dat, e.to_string()))?;
                            Ok(Polynomial::constant(self.ring, c))
                        }
                        _ => Err((dat, "`/` must join two integer literals".into())),
                    }
                } else {
                    Ok(Polynomial::constant(self.ring, dom.from_bigint(&n)))
                }
            }
            Some(Tok::Ident(name)) => match self.ring.index_of(&name) {
                Some(i) => Ok(Polynomial::var(self.ring, i)),
                None => Err((at, format!("undeclared variable `{name}`"))),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cat = self.here();
                if self.bump() != Some(Tok::RParen) {
                    return Err((cat, "expected `)`".into()));
                }
                Ok(inner)
            }
            Some(Tok::Minus) => {
                let inner = self.factor()?;
                Ok(-&inner)
            }
            Some(Tok::Slash) => Err((at, "`/` must join two integer literals".into())),
            Some(t) => Err((at, format!("unexpected token {t:?}"))),
            None => Err((at, "unexpected end of input".into())),
        }
    }
}

/// Parses a polynomial in `ring`.
pub fn parse_polynomial(ring: &Arc<Ring>, src: &str) -> Result<Polynomial> {
    parse_polynomial_at(ring, src, 1, 1)
}

/// As [`parse_polynomial`], reporting errors relative to a position in a
/// larger document (1-based line and column of `src[0]`).
pub fn parse_polynomial_at(ring: &Arc<Ring>, src: &str, line: usize, column: usize) -> Result<Polynomial> {
    let lx = lex(src).map_err(|(c, m)| Error::parse(line, column + c, m))?;
    if lx.toks.is_empty() {
        return Err(Error::parse(line, column, "empty polynomial"));
    }
    let mut p = Parser { ring, lx, pos: 0 };
    let out = p.expr().map_err(|(c, m)| Error::parse(line, column + c, m))?;
    if p.pos < p.lx.toks.len() {
        return Err(Error::parse(line, column + p.here(), "trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x", "y", "z1", "t"], Domain::Rational).unwrap()
    }

    #[test]
    fn juxtaposition_and_rationals() {
        let r = ring();
        let a = parse_polynomial(&r, "x^2*y - 3/2*z1").unwrap();
        let b = parse_polynomial(&r, "x^2 y - (3/2) z1").unwrap();
        assert_eq!(a, b);
        let c = parse_polynomial(&r, "z1^2(z1+t)^2").unwrap();
        assert_eq!(c.degree().finite(), Some(4));
        assert_eq!(parse_polynomial(&r, "2x").unwrap(), parse_polynomial(&r, "x + x").unwrap());
    }

    #[test]
    fn errors_carry_columns() {
        let r = ring();
        match parse_polynomial(&r, "x + w") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial(&r, "x/2").is_err());
        assert!(parse_polynomial(&r, "x^-1").is_err());
        assert!(parse_polynomial(&r, "(x").is_err());
        assert!(parse_polynomial(&r, "").is_err());
    }

    #[test]
    fn modular_literals() {
        let r = Ring::new(&["x"], Domain::prime(5).unwrap()).unwrap();
        let a = parse_polynomial(&r, "1/2*x + 7").unwrap();
        assert_eq!(a.to_string(), "3*x + 2");
    }
}
