use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::ring::{Domain, Ring};
use super::univariate::UniPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at offset {pos}")]
    Expected { expected: &'static str, pos: usize },
    #[error("division by a non-constant or zero expression at offset {pos}")]
    BadDivision { pos: usize },
    #[error("exponent at offset {pos} must be a non-negative integer below 4096")]
    BadExponent { pos: usize },
    #[error("mixed variable names {first:?} and {second:?}")]
    MixedVariables { first: char, second: char },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(char),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            let mut int_part = String::new();
            let mut frac_part = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                int_part.push(chars[i]);
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    frac_part.push(chars[i]);
                    i += 1;
                }
            }
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(ParseError::UnexpectedChar { ch: '.', pos: start });
            }
            let digits = format!("{int_part}{frac_part}");
            let num: BigInt = digits.parse().expect("ascii digits");
            let den = num_traits::pow(BigInt::from(10), frac_part.len());
            out.push((Tok::Num(BigRational::new(num, den)), start));
        } else if matches!(c, 'x' | 'X' | 't' | 'T' | 'z' | 'Z' | 'y' | 'Y') {
            out.push((Tok::Var(c.to_ascii_lowercase()), i));
            i += 1;
        } else if matches!(c, '+' | '-' | '*' | '/' | '^' | '(' | ')') {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar { ch: c, pos: i });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    var: Option<char>,
}

type Q = UniPoly<BigRational>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Q, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*' | '/') unary | implicit-factor)*
    fn term(&mut self) -> Result<Q, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let pos = self.offset();
                let d = self.unary()?;
                let c = match d.degree() {
                    Some(0) => d.coeff(0),
                    _ => return Err(ParseError::BadDivision { pos }),
                };
                acc = acc.scale(&BigRational::from_integer(1.into()).checked_div(&c).expect("nonzero"));
            } else if matches!(self.peek(), Some(Tok::Var(_)) | Some(Tok::Op('(')) | Some(Tok::Num(_))) {
                // Juxtaposition such as `3x^2` or `2(x+1)`.
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Q, ParseError> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    // power := atom ('^' exponent)?
    fn power(&mut self) -> Result<Q, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.offset();
        let e = match self.toks.get(self.pos) {
            Some((Tok::Num(n), _)) if n.is_integer() => n.to_integer().to_u32().filter(|e| *e < 4096),
            _ => None,
        }
        .ok_or(ParseError::BadExponent { pos })?;
        self.pos += 1;
        let mut acc = Q::constant(BigRational::from_integer(1.into()));
        for _ in 0..e {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Q, ParseError> {
        let Some((tok, pos)) = self.toks.get(self.pos).cloned() else {
            return Err(ParseError::UnexpectedEnd);
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Q::constant(n)),
            Tok::Var(v) => {
                match self.var {
                    None => self.var = Some(v),
                    Some(first) if first != v => return Err(ParseError::MixedVariables { first, second: v }),
                    _ => {}
                }
                Ok(Q::x(Domain::Rational))
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::Expected { expected: "')'", pos: self.offset() });
                }
                Ok(inner)
            }
            Tok::Op(c) => Err(ParseError::UnexpectedChar { ch: c, pos }),
        }
    }
}

/// Parses a univariate rational polynomial such as `2x^4 - 4x^2` or
/// `(t+1)^3/6`. Any one of `x`, `t`, `y`, `z` may name the variable.
pub fn parse_poly(src: &str) -> Result<UniPoly<BigRational>, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0, end: src.len(), var: None };
    let p = parser.expr()?;
    if parser.pos < parser.toks.len() {
        let (tok, pos) = &parser.toks[parser.pos];
        let ch = match tok {
            Tok::Op(c) | Tok::Var(c) => *c,
            Tok::Num(_) => '0',
        };
        return Err(ParseError::UnexpectedChar { ch, pos: *pos });
    }
    Ok(p)
}
