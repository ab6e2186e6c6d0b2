//! Tiny rational expression language for family parameters, e.g.
//! `1/28 + 1/(100n)`. Supports `+ - * /`, parentheses, integers, the variable
//! `n` and implicit multiplication (`10n`, `2(n+1)`).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{CarpetError, Result};
use crate::geometry::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Val {
    Fin(Rational),
    /// Unbounded, with sign (`true` = +∞).
    Inf(bool),
}

fn err(msg: impl Into<String>) -> CarpetError {
    CarpetError::Config(msg.into())
}

impl Val {
    fn neg(self) -> Val {
        match self {
            Val::Fin(r) => Val::Fin(-r),
            Val::Inf(s) => Val::Inf(!s),
        }
    }

    fn add(self, o: Val) -> Result<Val> {
        Ok(match (self, o) {
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a + b),
            (Val::Inf(s), Val::Fin(_)) | (Val::Fin(_), Val::Inf(s)) => Val::Inf(s),
            (Val::Inf(a), Val::Inf(b)) if a == b => Val::Inf(a),
            _ => return Err(err("limit is ∞ − ∞")),
        })
    }

    fn mul(self, o: Val) -> Result<Val> {
        Ok(match (self, o) {
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a * b),
            (Val::Inf(s), Val::Fin(c)) | (Val::Fin(c), Val::Inf(s)) => {
                if c.is_zero() {
                    return Err(err("limit is 0 · ∞"));
                }
                Val::Inf(s == c.is_positive())
            }
            (Val::Inf(a), Val::Inf(b)) => Val::Inf(a == b),
        })
    }

    fn div(self, o: Val) -> Result<Val> {
        Ok(match (self, o) {
            (_, Val::Fin(c)) if c.is_zero() => return Err(err("division by zero")),
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a / b),
            (Val::Fin(_), Val::Inf(_)) => Val::Fin(Rational::zero()),
            (Val::Inf(s), Val::Fin(c)) => Val::Inf(s == c.is_positive()),
            (Val::Inf(_), Val::Inf(_)) => return Err(err("limit is ∞ / ∞")),
        })
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    n: &'a Val,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Val> {
        let mut v = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            v = if c == '+' { v.add(t)? } else { v.add(t.neg())? };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<Val> {
        let mut v = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    v = v.mul(self.factor()?)?;
                }
                Some('/') => {
                    self.pos += 1;
                    v = v.div(self.factor()?)?;
                }
                Some('(' | 'n') | Some('0'..='9') => v = v.mul(self.factor()?)?,
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Result<Val> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(err("missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('n') => {
                self.pos += 1;
                Ok(self.n.clone())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let i: BigInt = digits.parse().map_err(|_| err("bad integer"))?;
                Ok(Val::Fin(Rational::from_integer(i)))
            }
            Some(c) => Err(err(format!("unexpected '{c}'"))),
            None => Err(err("unexpected end of expression")),
        }
    }
}

fn eval_val(text: &str, n: Val) -> Result<Val> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, n: &n };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input in '{text}'")));
    }
    Ok(v)
}

/// Value of the expression at integer `n`.
pub fn eval(text: &str, n: i64) -> Result<Rational> {
    match eval_val(text, Val::Fin(Rational::from_integer(n.into())))? {
        Val::Fin(r) => Ok(r),
        Val::Inf(_) => unreachable!("finite inputs give finite values"),
    }
}

/// Limit of the expression as `n → ∞`, when it exists and is finite.
pub fn limit(text: &str) -> Result<Rational> {
    match eval_val(text, Val::Inf(true))? {
        Val::Fin(r) => Ok(r),
        Val::Inf(_) => Err(err(format!("'{text}' diverges"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_rational;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn family_expressions() {
        assert_eq!(eval("1/28+1/(100n)", 2).unwrap(), r("1/28") + r("1/200"));
        assert_eq!(eval("1/(10n)", 3).unwrap(), r("1/30"));
        assert_eq!(eval("2(n+1) - n*n", 3).unwrap(), r("-1"));
        assert_eq!(limit("1/28 + 1/(100n)").unwrap(), r("1/28"));
        assert_eq!(limit("1/(10n)").unwrap(), r("0"));
        assert_eq!(limit("(n+1)/(2n)").unwrap_err().to_string().contains("∞"), true);
        assert!(limit("n").is_err());
        assert_eq!(limit("3/4").unwrap(), r("3/4"));
    }

    #[test]
    fn malformed() {
        for bad in ["", "1/", "(1", "1)", "x", "1/0", "1/(n-n)"] {
            assert!(eval(bad, 1).is_err(), "{bad}");
        }
    }
}
