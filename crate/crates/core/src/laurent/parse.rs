//! Parser for the Laurent expression grammar:
//!
//! ```text
//! expr  := ['+'|'-'] term (('+'|'-') term)*
//! term  := power (('*'|'/') power)*
//! power := atom ['^' ['-'] INT]
//! atom  := INT | 'x' INT | '(' expr ')'
//! ```
//!
//! Division and negative powers must be exact in the Laurent ring.

use num_bigint::BigInt;
use thiserror::Error;

use super::{LaurentError, LaurentPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {at}")]
    Unexpected { found: char, at: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("variable x{index} out of range for rank {rank}")]
    VariableOutOfRange { index: usize, rank: usize },
    #[error(transparent)]
    Arithmetic(#[from] LaurentError),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

pub(super) fn parse(text: &str, rank: usize) -> Result<LaurentPolynomial, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, rank };
    let v = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(ParseError::Unexpected { found: c as char, at: p.pos });
    }
    Ok(v)
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(&c) => ParseError::Unexpected { found: c as char, at: self.pos },
            None => ParseError::Eof,
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_integer(&mut self) -> Result<i64, ParseError> {
        let at = self.pos;
        let v = self.integer()?;
        i64::try_from(v).map_err(|_| ParseError::Unexpected { found: '9', at })
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = acc.divide_exact(&f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.small_integer()?;
        let e = u32::try_from(e).map_err(|_| self.unexpected())?;
        let p = base.pow(e);
        if negative {
            Ok(LaurentPolynomial::one(self.rank).divide_exact(&p)?)
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<LaurentPolynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.small_integer()?;
                if i < 1 || i as usize > self.rank {
                    return Err(ParseError::VariableOutOfRange { index: i.max(0) as usize, rank: self.rank });
                }
                Ok(LaurentPolynomial::variable(self.rank, i as usize - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let c = self.integer()?;
                Ok(LaurentPolynomial::constant(self.rank, c))
            }
            _ => Err(self.unexpected()),
        }
    }
}
