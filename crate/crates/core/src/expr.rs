//! Tiny arithmetic expression language over the variables `j` and `k`.
//!
//! Used for user-supplied Köthe matrices such as `(abs(j)+1)^k` or
//! `step(j+k)`. Evaluation is exact.

use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numerics::Exact;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Exact),
    J,
    K,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Abs,
    Max,
    Min,
    /// 1 when the argument is positive, else 0.
    Step,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Max => "max",
            Func::Min => "min",
            Func::Step => "step",
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in expression {src:?}")));
        }
        Ok(e)
    }

    pub fn eval(&self, j: i64, k: u32) -> Result<Exact> {
        Ok(match self {
            Expr::Num(x) => x.clone(),
            Expr::J => Exact::from_int(j),
            Expr::K => Exact::from_int(k as i64),
            Expr::Neg(a) => -a.eval(j, k)?,
            Expr::Add(a, b) => a.eval(j, k)? + b.eval(j, k)?,
            Expr::Sub(a, b) => a.eval(j, k)? - b.eval(j, k)?,
            Expr::Mul(a, b) => a.eval(j, k)? * b.eval(j, k)?,
            Expr::Div(a, b) => a.eval(j, k)?.checked_div(&b.eval(j, k)?)?,
            Expr::Pow(a, b) => {
                let e = b.eval(j, k)?;
                if e.denom() != &1.into() {
                    return Err(Error::InvalidSpec("non-integer exponent".into()));
                }
                let e = e.numer().to_i64().ok_or_else(|| Error::Overflow("exponent".into()))?;
                a.eval(j, k)?.powi(e)?
            }
            Expr::Call(f, args) => {
                let vals = args.iter().map(|a| a.eval(j, k)).collect::<Result<Vec<_>>>()?;
                match f {
                    Func::Abs => vals[0].abs(),
                    Func::Max => vals.into_iter().max().expect("arity checked"),
                    Func::Min => vals.into_iter().min().expect("arity checked"),
                    Func::Step => {
                        if vals[0].is_positive() {
                            Exact::one()
                        } else {
                            Exact::zero()
                        }
                    }
                }
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => {
                if x.denom() == &1.into() && !x.numer().sign().eq(&num_bigint::Sign::Minus) {
                    write!(f, "{x}")
                } else {
                    write!(f, "({x})")
                }
            }
            Expr::J => write!(f, "j"),
            Expr::K => write!(f, "k"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in expression")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` in expression")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(s) => Ok(Expr::Num(s.parse()?)),
            Tok::Ident(name) => match name.as_str() {
                "j" => Ok(Expr::J),
                "k" => Ok(Expr::K),
                "abs" | "max" | "min" | "step" => {
                    let func = match name.as_str() {
                        "abs" => Func::Abs,
                        "max" => Func::Max,
                        "min" => Func::Min,
                        _ => Func::Step,
                    };
                    self.expect('(')?;
                    let mut args = vec![self.expr()?];
                    while self.peek_op() == Some(',') {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    let ok = match func {
                        Func::Abs | Func::Step => args.len() == 1,
                        Func::Max | Func::Min => !args.is_empty(),
                    };
                    if !ok {
                        return Err(Error::Parse(format!("wrong number of arguments to {name}")));
                    }
                    Ok(Expr::Call(func, args))
                }
                other => Err(Error::Parse(format!("unknown identifier `{other}`"))),
            },
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected `{c}` in expression"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_matrix() {
        let e = Expr::parse("(abs(j)+1)^k").unwrap();
        assert_eq!(e.eval(5, 2).unwrap(), Exact::from_int(36));
        assert_eq!(e.eval(-3, 3).unwrap(), Exact::from_int(64));
    }

    #[test]
    fn step_and_precedence() {
        let e = Expr::parse("step(j+k)").unwrap();
        assert_eq!(e.eval(-1, 2).unwrap(), Exact::one());
        assert_eq!(e.eval(-2, 2).unwrap(), Exact::zero());
        let e = Expr::parse("-2^2 + 3*4/6").unwrap();
        assert_eq!(e.eval(0, 1).unwrap(), Exact::from_int(-2));
        let e = Expr::parse("max(j, 1/2, -k)").unwrap();
        assert_eq!(e.eval(0, 1).unwrap(), "1/2".parse().unwrap());
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("j +").is_err());
        assert!(Expr::parse("foo(j)").is_err());
        assert!(Expr::parse("abs(j, k)").is_err());
        assert!(Expr::parse("1/(j-j)").unwrap().eval(3, 1).is_err());
    }

    #[test]
    fn display_round_trip() {
        let e = Expr::parse("2*(abs(j)+1)^k - min(j,0)/3").unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        for j in -4..=4 {
            for k in 1..=3 {
                assert_eq!(e.eval(j, k).unwrap(), again.eval(j, k).unwrap());
            }
        }
    }
}
