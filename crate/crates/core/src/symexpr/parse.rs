//! Infix input grammar:
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := power (('*'|'/') power)*
//! power   := atom ['^' ['-'] integer]
//! atom    := number | 'i' | coordinate | ('sin'|'cos') '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are non-negative integers or decimals; `p/q` is ordinary division.
//! Arguments of `sin`/`cos` must be integer-linear in the coordinates.

use super::poly::NV;
use super::ScalarExpr;
use crate::error::{GkError, GkResult};
use num::{BigInt, BigRational, Complex, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> GkResult<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&txt)?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(GkError::Parse(format!("unexpected character '{}' at {}", c, i)));
        }
    }
    Ok(out)
}

fn parse_decimal(t: &str) -> GkResult<BigRational> {
    let bad = || GkError::Parse(format!("bad number '{}'", t));
    match t.split_once('.') {
        None => Ok(BigRational::from_integer(t.parse::<BigInt>().map_err(|_| bad())?)),
        Some((a, b)) => {
            if b.contains('.') {
                return Err(bad());
            }
            let digits = format!("{}{}", a, b);
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            Ok(BigRational::new(n, BigInt::from(10u32).pow(b.len() as u32)))
        }
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }
    fn expect(&mut self, c: char) -> GkResult<()> {
        match self.next() {
            Some(Tok::Op(d)) if d == c => Ok(()),
            other => Err(GkError::Parse(format!("expected '{}', found {:?}", c, other))),
        }
    }
    fn expr(&mut self) -> GkResult<ScalarExpr> {
        let mut acc = match self.peek() {
            Some(Tok::Op('-')) => {
                self.next();
                -self.term()?
            }
            Some(Tok::Op('+')) => {
                self.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.next();
                    acc = acc + self.term()?;
                }
                Some(Tok::Op('-')) => {
                    self.next();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }
    fn term(&mut self) -> GkResult<ScalarExpr> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.next();
                    acc = acc * self.power()?;
                }
                Some(Tok::Op('/')) => {
                    self.next();
                    let d = self.power()?;
                    acc = acc.checked_div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }
    fn power(&mut self) -> GkResult<ScalarExpr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.next();
            let mut neg = false;
            if let Some(Tok::Op('-')) = self.peek() {
                self.next();
                neg = true;
            }
            let e = match self.next() {
                Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
                other => return Err(GkError::Parse(format!("expected integer exponent, found {:?}", other))),
            };
            let e: i32 = e.try_into().map_err(|_| GkError::Parse("exponent too large".into()))?;
            return base.powi(if neg { -e } else { e });
        }
        Ok(base)
    }
    fn atom(&mut self) -> GkResult<ScalarExpr> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(ScalarExpr::constant(Complex::new(n, BigRational::zero()))),
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                if id == "i" {
                    return Ok(ScalarExpr::i());
                }
                if id == "sin" || id == "cos" {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    let k = linear_frequency(&arg)?;
                    return Ok(if id == "sin" { ScalarExpr::sin_k(&k) } else { ScalarExpr::cos_k(&k) });
                }
                match self.names.iter().position(|n| *n == id) {
                    Some(j) if j < NV => Ok(ScalarExpr::var(j)),
                    _ => Err(GkError::Parse(format!("unknown identifier '{}'", id))),
                }
            }
            other => Err(GkError::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

fn linear_frequency(arg: &ScalarExpr) -> GkResult<Vec<i64>> {
    let err = || GkError::Parse("sin/cos argument must be an integer-linear combination of coordinates".into());
    if !arg.is_polynomial() || arg.has_trig() {
        return Err(err());
    }
    let mut k = vec![0i64; NV];
    for (m, c) in &arg.numer().terms {
        if m.x_degree() != 1 || !c.im.is_zero() || !c.re.is_integer() {
            return Err(err());
        }
        let j = (0..NV).find(|&j| m.x(j) == 1).unwrap();
        k[j] = c.re.to_integer().try_into().map_err(|_| err())?;
    }
    Ok(k)
}

/// Parse an expression over the named coordinates.
pub fn parse_expr(src: &str, names: &[String]) -> GkResult<ScalarExpr> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(GkError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, names };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(GkError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn parses_canonical_identities() {
        let n = names();
        assert_eq!(parse_expr("sin(x)^2+cos(x)^2", &n).unwrap(), ScalarExpr::one());
        assert_eq!(parse_expr("(x^2-1)/(x-1)", &n).unwrap(), parse_expr("x+1", &n).unwrap());
        assert_eq!(parse_expr("(1+i)*(1-i)", &n).unwrap(), ScalarExpr::int(2));
        assert_eq!(parse_expr("3/4", &n).unwrap(), ScalarExpr::rat(3, 4));
        assert_eq!(parse_expr("0.25*x", &n).unwrap(), ScalarExpr::var(0).scale(&super::super::cq_rat(1, 4)));
        assert_eq!(parse_expr("x^-1*x", &n).unwrap(), ScalarExpr::one());
    }

    #[test]
    fn rejects_bad_input() {
        let n = names();
        assert!(matches!(parse_expr("sin(x*y)", &n), Err(GkError::Parse(_))));
        assert!(matches!(parse_expr("z+1", &n), Err(GkError::Parse(_))));
        assert!(matches!(parse_expr("1/(x-x)", &n), Err(GkError::DivisionByZero)));
        assert!(matches!(parse_expr("(x+1", &n), Err(GkError::Parse(_))));
    }
}
