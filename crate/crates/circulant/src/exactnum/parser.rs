//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr             := term (('+'|'-') term)*
//! term             := factor ('*' factor)*
//! factor           := base ('^' nonneg-integer)?
//! base             := rational-literal | identifier | '(' expr ')' | '-' base
//! rational-literal := integer ('/' positive-integer)?
//! identifier       := letter (letter|digit|'_')*
//! ```
//!
//! `/` may only appear inside a rational literal; general quotients never
//! occur in input. Unary minus binds looser than `^`, as in ordinary
//! mathematical notation, so `-a^2` denotes `-(a^2)` and canonical output
//! re-parses to the value it was printed from.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{ExprError, Polynomial, Rational, ScalarExpr};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(tok) = lx.next_token()? {
            out.push(tok);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize)>, ExprError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let b = self.src[self.pos];
        let tok = match b {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok(Some((Tok::Int(digits.parse().unwrap()), start)));
            }
            c if c.is_ascii_alphabetic() => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok(Some((Tok::Ident(name.to_string()), start)));
            }
            other => {
                return Err(ExprError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((tok, start)))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    cursor: usize,
    params: &'a [String],
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.cursor)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.len, |(_, p)| *p)
    }

    fn expr(&mut self) -> Result<Polynomial, ExprError> {
        let mut acc = self.term()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ExprError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some((Tok::Star, _))) {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ExprError> {
        // A leading minus negates the whole factor, exponent included.
        if matches!(self.peek(), Some((Tok::Minus, _))) {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if matches!(self.peek(), Some((Tok::Caret, _))) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some((Tok::Int(n), _)) => {
                    let exp = n.to_u32().ok_or(ExprError::Syntax {
                        pos,
                        msg: "exponent too large".to_string(),
                    })?;
                    return Ok(base.pow(exp));
                }
                _ => {
                    return Err(ExprError::Syntax {
                        pos,
                        msg: "expected a non-negative integer exponent after `^`".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ExprError> {
        let pos = self.here();
        match self.bump() {
            Some((Tok::Int(n), _)) => {
                // optional `/ positive-integer` completing a rational literal
                if matches!(self.peek(), Some((Tok::Slash, _))) {
                    self.bump();
                    let dpos = self.here();
                    match self.bump() {
                        Some((Tok::Int(d), _)) => {
                            if d.is_zero() {
                                return Err(ExprError::ZeroDenominatorLiteral { pos: dpos });
                            }
                            Ok(Polynomial::constant(Rational::new(n, d)))
                        }
                        _ => Err(ExprError::Syntax {
                            pos: dpos,
                            msg: "expected a positive integer denominator after `/`".to_string(),
                        }),
                    }
                } else {
                    Ok(Polynomial::constant(Rational::from_integer(n)))
                }
            }
            Some((Tok::Ident(name), p)) => {
                if self.params.iter().any(|q| q == &name) {
                    Ok(Polynomial::var(&name))
                } else {
                    Err(ExprError::UnknownIdentifier { name, pos: p })
                }
            }
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                let cpos = self.here();
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => Err(ExprError::Syntax {
                        pos: cpos,
                        msg: "expected `)`".to_string(),
                    }),
                }
            }
            Some((Tok::Minus, _)) => Ok(-self.factor()?),
            Some((Tok::Slash, p)) => Err(ExprError::Syntax {
                pos: p,
                msg: "`/` is only allowed inside a rational literal".to_string(),
            }),
            Some((tok, p)) => Err(ExprError::Syntax {
                pos: p,
                msg: format!("unexpected token `{tok:?}`"),
            }),
            None => Err(ExprError::Syntax {
                pos,
                msg: "unexpected end of input".to_string(),
            }),
        }
    }
}

/// Parses `text` as a polynomial in the given parameters.
pub fn parse_polynomial(text: &str, params: &[String]) -> Result<Polynomial, ExprError> {
    let toks = Lexer::tokenize(text)?;
    let mut parser = Parser {
        toks,
        cursor: 0,
        params,
        len: text.len(),
    };
    let value = parser.expr()?;
    if let Some((tok, pos)) = parser.peek() {
        return Err(ExprError::Syntax {
            pos: *pos,
            msg: format!("unexpected trailing token `{tok:?}`"),
        });
    }
    Ok(value)
}

/// Parses `text` as a scalar expression. Input is restricted to the
/// polynomial grammar; quotients only arise from arithmetic.
pub fn parse_scalar(text: &str, params: &[String]) -> Result<ScalarExpr, ExprError> {
    Ok(ScalarExpr::from_poly(parse_polynomial(text, params)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio};

    fn ab() -> Vec<String> {
        vec!["a".to_string(), "b".to_string()]
    }

    #[test]
    fn linear_combination() {
        let p = parse_polynomial("2*a + b - 1", &ab()).unwrap();
        assert_eq!(p.to_string(), "2*a + b - 1");
    }

    #[test]
    fn zero_literal() {
        assert!(parse_polynomial("0", &ab()).unwrap().is_zero());
    }

    #[test]
    fn algebraic_identity_normalizes_to_zero() {
        let p = parse_polynomial("(a - b)^2 - (a^2 - 2*a*b + b^2)", &ab()).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn rational_literals() {
        let p = parse_polynomial("3/4 + 1/4", &ab()).unwrap();
        assert_eq!(p.as_constant().unwrap(), rat(1));
        let q = parse_polynomial("-5/10", &ab()).unwrap();
        assert_eq!(q.as_constant().unwrap(), ratio(-1, 2));
    }

    #[test]
    fn unary_minus_binds_below_power() {
        let p = parse_polynomial("-a^2", &ab()).unwrap();
        assert_eq!(p.to_string(), "-a^2");
        let q = parse_polynomial("(-a)^2", &ab()).unwrap();
        assert_eq!(q.to_string(), "a^2");
        let r = parse_polynomial("--a", &ab()).unwrap();
        assert_eq!(r.to_string(), "a");
    }

    #[test]
    fn error_positions() {
        match parse_polynomial("a + $", &ab()).unwrap_err() {
            ExprError::Syntax { pos, .. } => assert_eq!(pos, 4),
            other => panic!("unexpected error {other:?}"),
        }
        match parse_polynomial("a + c", &ab()).unwrap_err() {
            ExprError::UnknownIdentifier { name, pos } => {
                assert_eq!(name, "c");
                assert_eq!(pos, 4);
            }
            other => panic!("unexpected error {other:?}"),
        }
        match parse_polynomial("1/0", &ab()).unwrap_err() {
            ExprError::ZeroDenominatorLiteral { pos } => assert_eq!(pos, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn slash_outside_literal_rejected() {
        assert!(matches!(
            parse_polynomial("(1 + a)/2", &ab()).unwrap_err(),
            ExprError::Syntax { .. }
        ));
        assert!(matches!(
            parse_polynomial("a/b", &ab()).unwrap_err(),
            ExprError::Syntax { .. }
        ));
    }

    #[test]
    fn trailing_input_rejected() {
        assert!(matches!(
            parse_polynomial("a b", &ab()).unwrap_err(),
            ExprError::Syntax { .. }
        ));
        assert!(matches!(
            parse_polynomial("", &ab()).unwrap_err(),
            ExprError::Syntax { .. }
        ));
    }

    #[test]
    fn print_parse_fixed_point() {
        for src in [
            "2*a + b - 1",
            "a*b",
            "b^2",
            "-a^2 + 3/2*b - 7",
            "(a + b)^3",
            "a^2*b^3 - 1/8",
        ] {
            let p = parse_polynomial(src, &ab()).unwrap();
            let printed = p.to_string();
            let again = parse_polynomial(&printed, &ab()).unwrap();
            assert_eq!(p, again, "round-trip failed for `{src}`");
            assert_eq!(printed, again.to_string());
        }
    }
}
