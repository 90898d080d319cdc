//! Infix expression parser producing rational functions.
//!
//! Grammar: `+ - * / ^`, parentheses, integer and decimal literals, base
//! symbols, and jets written `D_<dir>(expr)` with `dir` one of
//! `U`, `phiU`, `xi` (or `e`, `phie`).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ratfunc::RatFunc;
use super::symbol::{Direction, Symbol};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, Error> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&text)?));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{}' in \"{}\"", ch, src)));
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad number \"{}\"", text));
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{}{}", int, frac);
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, d))
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: char) -> Result<(), Error> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at token {}", op, self.pos)))
        }
    }

    fn expr(&mut self) -> Result<RatFunc, Error> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_op('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, Error> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat_op('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, Error> {
        if self.eat_op('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, Error> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let neg = self.eat_op('-');
        let paren = self.eat_op('(');
        let neg = neg || (paren && self.eat_op('-'));
        let e = q_to_u32(self.toks.get(self.pos))?;
        self.pos += 1;
        if paren {
            self.expect_op(')')?;
        }
        let p = base.pow(e);
        if neg {
            p.recip()
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<RatFunc, Error> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(RatFunc::constant(q))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(dir) = name.strip_prefix("D_") {
                    let dir = Direction::from_name(dir)
                        .ok_or_else(|| Error::Parse(format!("unknown direction in {}", name)))?;
                    self.expect_op('(')?;
                    let inner = self.expr()?;
                    self.expect_op(')')?;
                    return inner.derivative(dir);
                }
                Ok(RatFunc::var(Symbol::named(&name)?))
            }
            other => Err(Error::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

fn q_to_u32(t: Option<&Tok>) -> Result<u32, Error> {
    match t {
        Some(Tok::Num(q)) if q.is_integer() => {
            let n = q.numer();
            u32::try_from(n.clone()).map_err(|_| Error::Parse("exponent too large".into()))
        }
        _ => Err(Error::Parse("exponent must be an integer".into())),
    }
}

/// Parses an expression into a normalized rational function.
pub fn parse_expr(src: &str) -> Result<RatFunc, Error> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in \"{}\"", src)));
    }
    Ok(e)
}

/// Parses `lhs = rhs` (or a bare expression) into `lhs - rhs`.
pub fn parse_relation(src: &str) -> Result<RatFunc, Error> {
    match src.split_once('=') {
        Some((l, r)) => Ok(&parse_expr(l)? - &parse_expr(r)?),
        None => parse_expr(src),
    }
}
