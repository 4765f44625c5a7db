//! Text grammar for polynomials.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are universe symbols (`alpha`, `beta`, `gamma`, `delta`,
//! `eta`, `lam`, `l1`, `l2`, `l3`, `lbar`, `t1`, `t2`, ...) or names bound in
//! a [`Bindings`] environment.  Rational literals are written `p/q`.
//! Whitespace is ignored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use super::poly::Poly;
use super::ratfn::RatFn;
use super::var::Var;
use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Named polynomial abbreviations visible to the parser.
pub type Bindings = BTreeMap<String, Poly>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str, line: usize, col: usize) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut l, mut c) = (line, col);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch == '\n' {
            l += 1;
            c = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            c += 1;
            i += 1;
            continue;
        }
        let start = (l, c);
        if ch.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            toks.push((Tok::Int(s.parse().unwrap()), start.0, start.1));
            c += j - i;
            i = j;
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            toks.push((Tok::Ident(s), start.0, start.1));
            c += j - i;
            i = j;
        } else if "+-*/^()".contains(ch) {
            toks.push((Tok::Op(ch), start.0, start.1));
            c += 1;
            i += 1;
        } else {
            return Err(ParseError {
                line: l,
                column: c,
                message: format!("unexpected character '{ch}'"),
            });
        }
    }
    Ok(Lexer { toks, pos: 0, end: (l, c) })
}

struct Parser<'a> {
    lx: Lexer,
    env: &'a Bindings,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.lx.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.lx
            .toks
            .get(self.lx.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.lx.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = self.here();
        Err(ParseError { line, column, message: message.into() })
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.lx.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFn, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat_op('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat_op('/') {
                let at = self.here();
                let d = self.unary()?;
                match acc.div(&d) {
                    Some(q) => acc = q,
                    None => {
                        return Err(ParseError {
                            line: at.0,
                            column: at.1,
                            message: "division by zero".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn, ParseError> {
        if self.eat_op('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFn, ParseError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.lx.pos += 1;
                    let e: u32 = match n.try_into() {
                        Ok(e) if e <= 64 => e,
                        _ => return self.err("exponent too large"),
                    };
                    Ok(base.pow(e))
                }
                _ => self.err("expected non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFn, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.lx.pos += 1;
                Ok(RatFn::from_poly(Poly::constant(Rational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                if let Some(p) = self.env.get(&name) {
                    self.lx.pos += 1;
                    return Ok(RatFn::from_poly(p.clone()));
                }
                match Var::from_name(&name) {
                    Some(v) => {
                        self.lx.pos += 1;
                        Ok(RatFn::from_poly(Poly::var(v)))
                    }
                    None => self.err(format!("unknown symbol '{name}'")),
                }
            }
            Some(Tok::Op('(')) => {
                self.lx.pos += 1;
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a rational-function expression whose text starts at `line:column`.
pub fn parse_ratfn_at(
    src: &str,
    env: &Bindings,
    line: usize,
    column: usize,
) -> Result<RatFn, ParseError> {
    let lx = lex(src, line, column)?;
    let mut p = Parser { lx, env };
    let e = p.expr()?;
    if p.lx.pos != p.lx.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_ratfn(src: &str, env: &Bindings) -> Result<RatFn, ParseError> {
    parse_ratfn_at(src, env, 1, 1)
}

/// Parses a polynomial; only constant divisors are allowed.
pub fn parse_poly_at(
    src: &str,
    env: &Bindings,
    line: usize,
    column: usize,
) -> Result<Poly, ParseError> {
    let r = parse_ratfn_at(src, env, line, column)?;
    r.as_poly().ok_or(ParseError {
        line,
        column,
        message: format!("'{}' is not a polynomial (non-constant denominator)", src.trim()),
    })
}

pub fn parse_poly_with(src: &str, env: &Bindings) -> Result<Poly, ParseError> {
    parse_poly_at(src, env, 1, 1)
}

impl std::str::FromStr for Poly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Poly, ParseError> {
        parse_poly_with(s, &Bindings::new())
    }
}

/// Convenience for tests and examples: panics on malformed input.
pub fn poly(src: &str) -> Poly {
    src.parse().unwrap_or_else(|e| panic!("bad polynomial {src:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn literals_and_precedence() {
        assert_eq!(poly("1/2*alpha"), Poly::var(Var::ALPHA).scale(&rat(1, 2)));
        assert_eq!(poly("beta^2/2"), Poly::var(Var::BETA).pow(2).scale(&rat(1, 2)));
        assert_eq!(poly("-alpha^2"), -&Poly::var(Var::ALPHA).pow(2));
        assert_eq!(poly(" ( alpha+beta ) * (alpha - beta) "), poly("alpha^2-beta^2"));
        assert_eq!(poly("2*lam - -lam"), poly("3*lam"));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "2*l2*alpha - 2*alpha^2 - beta^2 + 2*lam",
            "-1/2*alpha*l2",
            "t3*alpha - 1",
            "0",
            "-7/3",
        ] {
            let p = poly(s);
            assert_eq!(poly(&p.to_text()), p);
        }
    }

    #[test]
    fn bindings_are_expanded() {
        let mut env = Bindings::new();
        env.insert("b3".into(), poly("alpha/2 + eta"));
        let p = parse_poly_with("2*eta*b3", &env).unwrap();
        assert_eq!(p, poly("alpha*eta + 2*eta^2"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = "alpha + x".parse::<Poly>().unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        let e = "alpha +".parse::<Poly>().unwrap_err();
        assert_eq!(e.column, 8);
        let e = "alpha / beta".parse::<Poly>().unwrap_err();
        assert!(e.message.contains("not a polynomial"));
        let e = "(alpha".parse::<Poly>().unwrap_err();
        assert!(e.message.contains("')'"));
        assert!("alpha / 0".parse::<Poly>().is_err());
        assert!("alpha $ beta".parse::<Poly>().is_err());
    }

    #[test]
    fn rational_functions() {
        let r = parse_ratfn("-gamma*alpha/lbar", &Bindings::new()).unwrap();
        assert_eq!(r.num, poly("-gamma*alpha"));
        assert_eq!(r.den, poly("lbar"));
    }
}
