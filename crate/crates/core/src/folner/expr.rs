//! Integer expressions in `N`: `+ - * / ^`, parentheses, implicit products (`2N`).
//!
//! `/` is floor division. Evaluation is checked and fails on overflow or
//! division by zero.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(i128),
    N,
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl Expr {
    pub fn eval(&self, n: u64) -> Result<i128> {
        let overflow = || Error::OutOfRange(format!("{self} overflows at N = {n}"));
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::N => Ok(n as i128),
            Expr::Neg(e) => e.eval(n)?.checked_neg().ok_or_else(overflow),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(n)?, b.eval(n)?);
                match op {
                    Op::Add => a.checked_add(b).ok_or_else(overflow),
                    Op::Sub => a.checked_sub(b).ok_or_else(overflow),
                    Op::Mul => a.checked_mul(b).ok_or_else(overflow),
                    Op::Div => {
                        if b == 0 {
                            return Err(Error::OutOfRange(format!("division by zero in {self}")));
                        }
                        Ok(Integer::div_floor(&a, &b))
                    }
                    Op::Pow => {
                        let e = u32::try_from(b).map_err(|_| overflow())?;
                        a.checked_pow(e).ok_or_else(overflow)
                    }
                }
            }
        }
    }

    /// Evaluate and require a value in `u64`.
    pub fn eval_u64(&self, n: u64) -> Result<u64> {
        let v = self.eval(n)?;
        u64::try_from(v).map_err(|_| Error::OutOfRange(format!("{self} = {v} at N = {n}")))
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in expression {:?}", self.src))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(c @ ('*' | '/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let op = if c == '*' { Op::Mul } else { Op::Div };
                    lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
                }
                Some(c) if c == 'N' || c == '(' || c.is_ascii_digit() => {
                    let rhs = self.power()?;
                    lhs = Expr::Bin(Op::Mul, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('N') | Some('n') => {
                self.pos += 1;
                Ok(Expr::N)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                text.parse()
                    .map(Expr::Num)
                    .map_err(|_| self.err("number too large"))
            }
            Some(c) => Err(self.err(&format!("unexpected {c:?}"))),
            None => Err(self.err("unexpected end")),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s,
            chars: s.chars().collect(),
            pos: 0,
        };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::N => write!(f, "N"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    Op::Add => "+",
                    Op::Sub => "-",
                    Op::Mul => "*",
                    Op::Div => "/",
                    Op::Pow => "^",
                };
                write!(f, "({a}{sym}{b})")
            }
        }
    }
}

/// An [`Expr`] that remembers its source text for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NExpr {
    text: String,
    expr: Expr,
}

impl NExpr {
    pub fn eval(&self, n: u64) -> Result<i128> {
        self.expr.eval(n)
    }

    pub fn eval_u64(&self, n: u64) -> Result<u64> {
        self.expr.eval_u64(n)
    }
}

impl FromStr for NExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(NExpr {
            text: s.split_whitespace().collect(),
            expr: s.parse()?,
        })
    }
}

impl fmt::Display for NExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, n: u64) -> i128 {
        s.parse::<Expr>().unwrap().eval(n).unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(ev("2N", 3), 6);
        assert_eq!(ev("3^N", 4), 81);
        assert_eq!(ev("N^2+2N+1", 5), 36);
        assert_eq!(ev("(2N-1)*4^N/N", 6), 7509);
        assert_eq!(ev("2^3^2", 0), 512);
        assert_eq!(ev("-7/2", 0), -4);
    }

    #[test]
    fn display_round_trips() {
        for s in ["2N", "3^N", "N^2+2N+1", "(2N-1)*4^N/N"] {
            let e: Expr = s.parse().unwrap();
            let again: Expr = e.to_string().parse().unwrap();
            for n in 1..6 {
                assert_eq!(e.eval(n).unwrap(), again.eval(n).unwrap());
            }
        }
    }

    #[test]
    fn errors() {
        assert!("2N+".parse::<Expr>().is_err());
        assert!("N/0".parse::<Expr>().unwrap().eval(1).is_err());
        assert!("2^N".parse::<Expr>().unwrap().eval(200).is_err());
    }
}
