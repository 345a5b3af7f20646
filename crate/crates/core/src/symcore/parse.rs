//! Text syntax: `x[1]*p[1] - (1/2)i*theta[1,2]`, with `[a, b]` for brackets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::expr::Expression;
use super::generator::Kind;
use super::table::BracketTable;
use super::{bracket, normal_form};
use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let text = &src[start..i];
            out.push((
                start,
                Tok::Num(parse_decimal(text).ok_or_else(|| perr(start, "bad number"))?),
            ));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/()[],".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(perr(i, &format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Some(BigRational::new(num, den))
}

fn perr(pos: usize, msg: &str) -> Error {
    Error::Parse {
        pos,
        msg: msg.to_string(),
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    table: Option<&'a BracketTable>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.pos(), &format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = &acc * &rhs;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                let rhs = self.unary()?;
                let inv = rhs
                    .as_scalar()
                    .and_then(|c| c.inv())
                    .ok_or_else(|| perr(pos, "division by a non-scalar or zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expression> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let mut e = self.primary()?;
        // `2i`, `(1/2)i`: an imaginary-unit suffix binds tighter than `*`.
        while matches!(self.peek(), Some(Tok::Ident(s)) if s == "i") {
            self.at += 1;
            e = e.scale(&GaussianRational::i());
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expression> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.at += 1;
                Ok(Expression::scalar(GaussianRational::real(r)))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.at += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                let t = self
                    .table
                    .ok_or_else(|| perr(pos, "bracket needs an algebra"))?;
                bracket(&a, &b, t)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if name == "i" {
                    return Ok(Expression::scalar(GaussianRational::i()));
                }
                let kind =
                    Kind::from_name(&name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                self.expect('[')?;
                let mut idx = vec![self.index()?];
                while self.eat(',') {
                    idx.push(self.index()?);
                }
                self.expect(']')?;
                match (kind.is_pair(), idx.as_slice()) {
                    (false, [i]) => Ok(Expression::vector(kind, *i)),
                    (true, [i, j]) => Ok(Expression::pair(kind, *i, *j)),
                    _ => Err(perr(pos, &format!("wrong number of indices for `{name}`"))),
                }
            }
            Some(Tok::Sym(c)) => Err(perr(pos, &format!("unexpected `{c}`"))),
            None => Err(perr(pos, "unexpected end of input")),
        }
    }

    fn index(&mut self) -> Result<u8> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(r)) if r.is_integer() && r >= BigRational::zero() => {
                self.at += 1;
                let n: BigInt = r.to_integer();
                u8::try_from(n).map_err(|_| perr(pos, "index out of range"))
            }
            _ => Err(perr(pos, "expected a non-negative integer index")),
        }
    }
}

/// Parses an expression. Brackets `[a, b]` and the final normal ordering use
/// `table` when one is given.
pub fn parse(src: &str, table: Option<&BracketTable>) -> Result<Expression> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
        table,
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(perr(p.pos(), "trailing input"));
    }
    match table {
        Some(t) => normal_form(&e, t),
        None => Ok(e),
    }
}
