//! Parser for the polynomial term syntax used by problem files.
//!
//! Grammar, informally: a polynomial is a signed sum of terms; a term is a
//! `*`-separated product of factors; a factor is either a rational literal
//! (`3`, `3/2`) or a variable power (`x1`, `x2^4`). Variables are `x1..xn`
//! for the ambient dimension `n` supplied by the caller.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(BigInt),
    Var(usize), // zero-based index
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::PolyParse {
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self, n: usize) -> Result<Tok> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        match c {
            b'+' => {
                self.pos += 1;
                Ok(Tok::Plus)
            }
            b'-' => {
                self.pos += 1;
                Ok(Tok::Minus)
            }
            b'*' => {
                self.pos += 1;
                Ok(Tok::Star)
            }
            b'^' => {
                self.pos += 1;
                Ok(Tok::Caret)
            }
            b'/' => {
                self.pos += 1;
                Ok(Tok::Slash)
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Tok::Int(digits.parse::<BigInt>().unwrap()))
            }
            b'x' => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("expected variable index after 'x'"));
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx: usize = digits
                    .parse()
                    .map_err(|_| self.err("variable index out of range"))?;
                if idx == 0 {
                    return Err(self.err("variables are named x1..xn"));
                }
                if idx > n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: idx,
                        context: "variable index in polynomial",
                    });
                }
                Ok(Tok::Var(idx - 1))
            }
            _ => Err(self.err(format!("unexpected character '{}'", c as char))),
        }
    }

    fn peek(&mut self, n: usize) -> Result<Tok> {
        let save = self.pos;
        let t = self.next(n);
        self.pos = save;
        t
    }
}

/// Parses the text syntax into a canonical `Polynomial` in `n` variables.
pub fn parse_polynomial(src: &str, n: usize) -> Result<Polynomial> {
    let mut lx = Lexer::new(src);
    let mut terms: Vec<(Monomial, BigRational)> = Vec::new();

    // leading sign
    let mut sign = BigRational::one();
    match lx.peek(n)? {
        Tok::Plus => {
            lx.next(n)?;
        }
        Tok::Minus => {
            lx.next(n)?;
            sign = -sign;
        }
        Tok::End => return Err(lx.err("empty polynomial")),
        _ => {}
    }

    loop {
        let (m, c) = parse_term(&mut lx, n)?;
        terms.push((m, c * &sign));
        match lx.next(n)? {
            Tok::Plus => sign = BigRational::one(),
            Tok::Minus => sign = -BigRational::one(),
            Tok::End => break,
            other => return Err(lx.err(format!("expected '+', '-' or end, found {other:?}"))),
        }
    }
    Polynomial::from_terms(n, terms)
}

fn parse_term(lx: &mut Lexer<'_>, n: usize) -> Result<(Monomial, BigRational)> {
    let mut coeff = BigRational::one();
    let mut exps = vec![0u32; n];
    loop {
        match lx.next(n)? {
            Tok::Int(num) => {
                // optional /den immediately after an integer literal
                if let Tok::Slash = lx.peek(n)? {
                    lx.next(n)?;
                    match lx.next(n)? {
                        Tok::Int(den) => {
                            if den.is_zero() {
                                return Err(lx.err("zero denominator"));
                            }
                            coeff *= BigRational::new(num, den);
                        }
                        _ => return Err(lx.err("expected integer denominator after '/'")),
                    }
                } else {
                    coeff *= BigRational::from_integer(num);
                }
            }
            Tok::Var(i) => {
                let mut e: u32 = 1;
                if let Tok::Caret = lx.peek(n)? {
                    lx.next(n)?;
                    match lx.next(n)? {
                        Tok::Int(v) => {
                            e = u32::try_from(&v)
                                .map_err(|_| lx.err("exponent too large"))?;
                        }
                        _ => return Err(lx.err("expected integer exponent after '^'")),
                    }
                }
                exps[i] = exps[i]
                    .checked_add(e)
                    .ok_or_else(|| lx.err("exponent overflow"))?;
            }
            other => return Err(lx.err(format!("expected a factor, found {other:?}"))),
        }
        match lx.peek(n)? {
            Tok::Star => {
                lx.next(n)?;
            }
            _ => break,
        }
    }
    Ok((Monomial::new(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn parses_readme_style_terms() {
        let p = parse_polynomial("3/2*x1^2*x2 - x2 + 1", 2).unwrap();
        assert_eq!(
            p.evaluate(&[rat(2), rat(3)]).unwrap(),
            ratio(3, 2) * rat(4) * rat(3) - rat(3) + rat(1)
        );
    }

    #[test]
    fn leading_minus_and_implicit_coefficients() {
        let p = parse_polynomial("-x1^4 + x1", 1).unwrap();
        assert_eq!(p.evaluate(&[rat(2)]).unwrap(), rat(-16 + 2));
    }

    #[test]
    fn rejects_unknown_variable() {
        let e = parse_polynomial("x3 + 1", 2).unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_polynomial("", 2).is_err());
        assert!(parse_polynomial("x", 2).is_err());
        assert!(parse_polynomial("1 +", 2).is_err());
        assert!(parse_polynomial("x1 / 2", 2).is_err());
        assert!(parse_polynomial("y1", 2).is_err());
        assert!(parse_polynomial("x0", 2).is_err());
        assert!(parse_polynomial("1/0", 2).is_err());
    }

    #[test]
    fn repeated_variable_multiplies() {
        let p = parse_polynomial("x1*x1", 1).unwrap();
        assert_eq!(p, parse_polynomial("x1^2", 1).unwrap());
    }

    #[test]
    fn roundtrip_display_parse() {
        for s in [
            "0",
            "1",
            "-5/3",
            "x1",
            "x1^2*x2 - x2 + 1",
            "3/2*x1^2*x2 - x2 + 1",
            "-x1^4 + x1^3 + 1/4*x1^2 - 2*x1^2*x2 + x1*x2 - x2^2 + 1/2*x2",
        ] {
            let p = parse_polynomial(s, 2).unwrap();
            let q = parse_polynomial(&p.to_string(), 2).unwrap();
            assert_eq!(p, q, "roundtrip failed for {s}");
        }
    }
}
