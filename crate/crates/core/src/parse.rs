//! Text input for polynomials, fractions and derivations.
//!
//! ```text
//! expr   = term (('+' | '-') term)*
//! term   = factor (('*' | '/') factor)*
//! factor = '-' factor | power
//! power  = atom ('^' integer)?
//! atom   = integer | 'x' index | 'd' index | '(' expr ')'
//! ```
//!
//! `d<i>` stands for the coordinate derivation along `x<i>`. The number of
//! variables is the largest index used, unless a larger one is requested.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    X(usize),
    D(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = s[start..i].parse().expect("digits");
                out.push((start, Tok::Int(v)));
                continue;
            }
            b'x' | b'd' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = s[ds..i]
                    .parse()
                    .map_err(|_| err(start, "expected a variable index"))?;
                if idx == 0 {
                    return Err(err(start, "variable indices start at 1"));
                }
                out.push((start, if c == b'x' { Tok::X(idx) } else { Tok::D(idx) }));
                continue;
            }
            _ => return Err(err(start, format!("unexpected character {:?}", c as char))),
        }
        i += 1;
    }
    Ok(out)
}

fn max_index_of(toks: &[(usize, Tok)]) -> usize {
    toks.iter()
        .filter_map(|(_, t)| match t {
            Tok::X(i) | Tok::D(i) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Largest variable index mentioned in `s` (0 if none).
pub fn max_index(s: &str) -> Result<usize> {
    Ok(max_index_of(&tokenize(s)?))
}

#[derive(Debug, Clone)]
enum Value {
    F(RatFunc),
    D(Derivation),
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    n: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            let sub = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => return Ok(acc),
            };
            let at = self.here();
            self.pos += 1;
            let rhs = self.term()?;
            acc = match (acc, rhs) {
                (Value::F(a), Value::F(b)) => Value::F(if sub { &a - &b } else { &a + &b }),
                (Value::D(a), Value::D(b)) => Value::D(if sub { &a - &b } else { &a + &b }),
                (Value::D(a), Value::F(b)) | (Value::F(b), Value::D(a)) if b.is_zero() => Value::D(a),
                _ => return Err(err(at, "cannot add a function and a derivation")),
            };
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            let div = match self.peek() {
                Some(Tok::Star) => false,
                Some(Tok::Slash) => true,
                _ => return Ok(acc),
            };
            let at = self.here();
            self.pos += 1;
            let rhs = self.factor()?;
            acc = match (acc, rhs, div) {
                (Value::F(a), Value::F(b), false) => Value::F(&a * &b),
                (Value::F(a), Value::F(b), true) => {
                    Value::F(a.checked_div(&b).map_err(|_| err(at, "division by zero"))?)
                }
                (Value::F(a), Value::D(d), false) | (Value::D(d), Value::F(a), false) => {
                    Value::D(d.mul_fn(&a))
                }
                (Value::D(d), Value::F(a), true) => {
                    let inv = a.inv().map_err(|_| err(at, "division by zero"))?;
                    Value::D(d.mul_fn(&inv))
                }
                (_, Value::D(_), true) => return Err(err(at, "cannot divide by a derivation")),
                (Value::D(_), Value::D(_), false) => {
                    return Err(err(at, "cannot multiply two derivations"))
                }
            };
        }
    }

    fn factor(&mut self) -> Result<Value> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(match self.factor()? {
                Value::F(f) => Value::F(-&f),
                Value::D(d) => Value::D(-&d),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.here();
        self.pos += 1;
        let e = match self.toks.get(self.pos) {
            Some((_, Tok::Int(v))) => v
                .to_u32()
                .ok_or_else(|| err(at, "exponent too large"))?,
            _ => return Err(err(self.here(), "expected a nonnegative integer exponent")),
        };
        self.pos += 1;
        match base {
            Value::F(f) => Ok(Value::F(f.pow(e))),
            Value::D(_) => Err(err(at, "cannot raise a derivation to a power")),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let at = self.here();
        let Some((_, t)) = self.toks.get(self.pos) else {
            return Err(err(at, "unexpected end of input"));
        };
        self.pos += 1;
        match t {
            Tok::Int(v) => Ok(Value::F(RatFunc::constant(
                Scalar::from_integer(v.clone()),
                self.n,
            ))),
            Tok::X(i) => Ok(Value::F(RatFunc::var(self.n, i - 1))),
            Tok::D(i) => Ok(Value::D(Derivation::coordinate(self.n, i - 1))),
            Tok::LParen => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            other => Err(err(at, format!("unexpected token {:?}", other))),
        }
    }
}

fn resolve_n(found: usize, n: Option<usize>, pos: usize) -> Result<usize> {
    match n {
        Some(n) if found > n => Err(err(
            pos,
            format!("index {} exceeds the requested {} variables", found, n),
        )),
        Some(n) => Ok(n.max(1)),
        None => Ok(found.max(1)),
    }
}

fn parse_value(s: &str, n: usize) -> Result<Value> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        n,
        end: s.len(),
    };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok(v)
}

pub fn parse_ratfunc(s: &str, n: Option<usize>) -> Result<RatFunc> {
    let n = resolve_n(max_index(s)?, n, 0)?;
    match parse_value(s, n)? {
        Value::F(f) => Ok(f),
        Value::D(_) => Err(err(0, "expected a function, found a derivation")),
    }
}

pub fn parse_poly(s: &str, n: Option<usize>) -> Result<MultiPoly> {
    let f = parse_ratfunc(s, n)?;
    f.as_poly()
        .cloned()
        .ok_or_else(|| err(0, format!("{} is not a polynomial", f)))
}

pub fn parse_derivation(s: &str, n: Option<usize>) -> Result<Derivation> {
    let n = resolve_n(max_index(s)?, n, 0)?;
    match parse_value(s, n)? {
        Value::D(d) => Ok(d),
        Value::F(f) if f.is_zero() => Ok(Derivation::zero(n)),
        Value::F(_) => Err(err(0, "expected a derivation, found a function")),
    }
}

/// Semicolon-separated derivations sharing one variable count.
pub fn parse_derivation_list(s: &str, n: Option<usize>) -> Result<Vec<Derivation>> {
    let parts: Vec<&str> = s.split(';').filter(|p| !p.trim().is_empty()).collect();
    let mut found = 0;
    for p in &parts {
        found = found.max(max_index(p)?);
    }
    let n = resolve_n(found, n, 0)?;
    let mut offset = 0;
    let mut out = Vec::new();
    for chunk in s.split(';') {
        if !chunk.trim().is_empty() {
            let d = parse_derivation(chunk, Some(n)).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset,
                    msg,
                },
                other => other,
            })?;
            out.push(d);
        }
        offset += chunk.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn polynomials_round_trip() {
        for s in ["-x1 + x3^2 + 1", "1/2*x2^2", "x2^2 - x3^2", "0", "7", "-3/4*x1*x2 + x2"] {
            let p = parse_poly(s, Some(3)).unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p = parse_poly("(x2+x3)*(x2-x3)", None).unwrap();
        assert_eq!(p.to_string(), "x2^2 - x3^2");
        assert_eq!(p.num_vars(), 3);
    }

    #[test]
    fn fractions_round_trip() {
        let f = parse_ratfunc("1/x2 + 1/x3", None).unwrap();
        assert_eq!(f.to_string(), "(x2 + x3)/(x2*x3)");
        assert_eq!(parse_ratfunc(&f.to_string(), Some(3)).unwrap(), f);
        let g = parse_ratfunc("-2*x1/x2^2", None).unwrap();
        assert_eq!(parse_ratfunc(&g.to_string(), Some(2)).unwrap(), g);
    }

    #[test]
    fn derivations_round_trip() {
        let d = parse_derivation("d2 + x3*d1", None).unwrap();
        assert_eq!(d.to_string(), "x3*d1 + d2");
        let e = parse_derivation("x3^2/2*d1 - (x1/x3)*d2 + (x3+1)*d1", None).unwrap();
        assert_eq!(parse_derivation(&e.to_string(), Some(3)).unwrap(), e);
        assert_eq!(parse_derivation("0", Some(2)).unwrap(), Derivation::zero(2));
        let c = parse_derivation("1/2*x3^2*d1", Some(3)).unwrap();
        assert_eq!(c.coeff(0), &RatFunc::var(3, 2).pow(2).scale(&frac(1, 2)));
    }

    #[test]
    fn lists_share_n() {
        let ds = parse_derivation_list("d1; x3*d1; d2", None).unwrap();
        assert_eq!(ds.len(), 3);
        assert!(ds.iter().all(|d| d.num_vars() == 3));
        let ds = parse_derivation_list("d1", Some(4)).unwrap();
        assert_eq!(ds[0].num_vars(), 4);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_derivation("d1 + ", None), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_derivation("d1 * d2", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_derivation("x1", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("x1 / 0", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("x4", Some(3)), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("x1 ? 2", None), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(
            parse_derivation_list("d1; d1 +", None),
            Err(Error::Parse { pos: 8, .. })
        ));
        assert_eq!(parse_poly("2^3", None).unwrap().constant_value(), Some(int(8)));
    }
}
