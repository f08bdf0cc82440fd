//! A small recursive-descent parser for arithmetic expressions, shared by the
//! scalar and operator grammars.
//!
//! ```text
//! sum    := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | identifier | '(' sum ')'
//! ```

use num_bigint::BigInt;

use crate::{Error, Result};

pub(crate) trait ExprValue: Sized {
    fn integer(n: BigInt) -> Self;
    fn identifier(name: &str, offset: usize) -> Result<Self>;
    fn expr_add(self, rhs: Self) -> Result<Self>;
    fn expr_sub(self, rhs: Self) -> Result<Self>;
    fn expr_mul(self, rhs: Self) -> Result<Self>;
    fn expr_div(self, rhs: Self, offset: usize) -> Result<Self>;
    fn expr_pow(self, exp: i64, offset: usize) -> Result<Self>;
    fn expr_neg(self) -> Result<Self>;
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = input[start..i].parse().expect("ascii digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(input[start..i].to_owned())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                offset: i,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum<T: ExprValue>(&mut self) -> Result<T> {
        let mut acc = self.term::<T>()?;
        loop {
            if self.eat('+') {
                acc = acc.expr_add(self.term()?)?;
            } else if self.eat('-') {
                acc = acc.expr_sub(self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<T: ExprValue>(&mut self) -> Result<T> {
        let mut acc = self.unary::<T>()?;
        loop {
            if self.eat('*') {
                acc = acc.expr_mul(self.unary()?)?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let offset = self.offset();
                self.pos += 1;
                acc = acc.expr_div(self.unary()?, offset)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<T: ExprValue>(&mut self) -> Result<T> {
        if self.eat('-') {
            self.unary::<T>()?.expr_neg()
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power<T: ExprValue>(&mut self) -> Result<T> {
        let base = self.atom::<T>()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        let offset = self.offset();
        self.pos += 1;
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let e: i64 = i64::try_from(n).or_else(|_| self.error("exponent too large"))?;
                base.expr_pow(if negative { -e } else { e }, offset)
            }
            _ => self.error("expected integer exponent"),
        }
    }

    fn atom<T: ExprValue>(&mut self) -> Result<T> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(T::integer(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                T::identifier(&name, offset)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Some(t) => self.error(format!("unexpected token {t:?}")),
            None => self.error("unexpected end of input"),
        }
    }
}

pub(crate) fn parse<T: ExprValue>(input: &str) -> Result<T> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
        end: input.len(),
    };
    let value = p.sum()?;
    if p.pos != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(value)
}
