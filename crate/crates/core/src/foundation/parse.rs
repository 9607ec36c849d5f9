//! A small recursive-descent parser for exact scalar expressions such as
//! `"3/4"`, `"alpha + 2*b1 - 1/12*cdot"` or `"sqrt2*1 + 1"`.
//!
//! Grammar: `expr = term (("+"|"-") term)*`, `term = unary (("*"|"/") unary)*`,
//! `unary = "-" unary | power`, `power = atom ("^" integer)?`,
//! `atom = integer | identifier | "(" expr ")"`. Decimal points are rejected.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;

/// Arithmetic needed to evaluate a parsed expression.
pub trait ExprTarget: Sized + Clone {
    fn integer(n: BigInt) -> Self;
    fn symbol(name: &str) -> Result<Self, Error>;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, Error>;
    fn neg(&self) -> Self;

    fn pow(&self, e: i64) -> Result<Self, Error> {
        let mut acc = Self::integer(BigInt::from(1));
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(self);
        }
        if e < 0 {
            Self::integer(BigInt::from(1)).div(&acc)
        } else {
            Ok(acc)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(Error::Parse(format!(
                    "floating-point literal not accepted in {src:?}"
                )));
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<T: ExprTarget>(&mut self) -> Result<T, Error> {
        let mut acc = self.term::<T>()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<T: ExprTarget>(&mut self) -> Result<T, Error> {
        let mut acc = self.unary::<T>()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<T: ExprTarget>(&mut self) -> Result<T, Error> {
        if self.eat('-') {
            return Ok(self.unary::<T>()?.neg());
        }
        self.power()
    }

    fn power<T: ExprTarget>(&mut self) -> Result<T, Error> {
        let base = self.atom::<T>()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: i64 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    return base.pow(if neg { -e } else { e });
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom<T: ExprTarget>(&mut self) -> Result<T, Error> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(T::integer(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                T::symbol(&name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr<T: ExprTarget>(src: &str) -> Result<T, Error> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input in {src:?}")));
    }
    Ok(v)
}

impl ExprTarget for BigRational {
    fn integer(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }
    fn symbol(name: &str) -> Result<Self, Error> {
        Err(Error::Parse(format!("symbol {name:?} not allowed in a rational")))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Result<Self, Error> {
        if num_traits::Zero::is_zero(rhs) {
            return Err(Error::Parse("division by zero".into()));
        }
        Ok(self / rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
}
