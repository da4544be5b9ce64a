//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   = term { ("+"|"-") term } ;
//! term   = factor { ("*"|"/") factor } ;
//! factor = "-" factor | power ;
//! power  = atom [ "^" integer ] ;
//! atom   = number | "i" | "z" | "x" | "y" | ident "(" expr ")" | "(" expr ")" ;
//! ```
//!
//! `^` binds tighter than unary minus, so `-z^2` is `-(z^2)`. Exponents are
//! integer literals, optionally signed and optionally parenthesized.
//! Variable-free subtrees are folded to constants.

use num_complex::Complex64;

use super::expr::{Func, HoloExpr, Mode, Var};
use crate::error::{ParseError, ParseErrorKind};

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn tokens(mut self) -> PResult<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        loop {
            let (at, tok) = self.next()?;
            let end = tok == Tok::End;
            out.push((at, tok));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> PResult<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(start) else {
            return Ok((start, Tok::End));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((start, t));
        }
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start).map(|t| (start, t));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(Self::err(
            start,
            ParseErrorKind::Syntax(format!("unexpected character `{ch}`")),
        ))
    }

    fn number(&mut self, start: usize) -> PResult<Tok> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut n = digits(&mut self.pos);
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            self.pos += 1;
            n += digits(&mut self.pos);
        }
        if n == 0 {
            return Err(Self::err(
                start,
                ParseErrorKind::Syntax("malformed number".into()),
            ));
        }
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                p += 1;
            }
            if digits(&mut p) == 0 {
                return Err(Self::err(
                    self.pos,
                    ParseErrorKind::Syntax("malformed exponent in number".into()),
                ));
            }
            self.pos = p;
        }
        let text = &self.src[start..self.pos];
        let v: f64 = text.parse().map_err(|_| {
            Self::err(
                start,
                ParseErrorKind::Syntax(format!("malformed number `{text}`")),
            )
        })?;
        if !v.is_finite() {
            return Err(Self::err(
                start,
                ParseErrorKind::Syntax(format!("number `{text}` out of range")),
            ));
        }
        Ok(Tok::Num(v, text.to_string()))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn offset(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax(msg.into()),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> PResult<HoloExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = HoloExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = HoloExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<HoloExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = HoloExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = HoloExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> PResult<HoloExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(HoloExpr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<HoloExpr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let n = self.exponent()?;
        Ok(HoloExpr::Pow(Box::new(base), n))
    }

    fn exponent(&mut self) -> PResult<i32> {
        let at = self.offset();
        let non_integer = ParseError {
            offset: at,
            kind: ParseErrorKind::NonIntegerExponent,
        };
        let parenthesized = *self.peek() == Tok::LParen;
        if parenthesized {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let value = match self.bump() {
            Tok::Num(v, _) => v,
            Tok::End => return self.syntax("expected exponent"),
            _ => return Err(non_integer),
        };
        if value.fract() != 0.0 || value > i32::MAX as f64 {
            return Err(non_integer);
        }
        if parenthesized && *self.peek() != Tok::RParen {
            // something like z^(2*z): still not an integer literal
            return Err(non_integer);
        }
        if parenthesized {
            self.bump();
        }
        let n = value as i32;
        Ok(if negative { -n } else { n })
    }

    fn atom(&mut self) -> PResult<HoloExpr> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v, _) => Ok(HoloExpr::real(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(HoloExpr::Const(Complex64::new(0.0, 1.0))),
                "z" => Ok(HoloExpr::Var(Var::Z)),
                "x" => Ok(HoloExpr::Var(Var::X)),
                "y" => Ok(HoloExpr::Var(Var::Y)),
                other => match Func::from_name(other) {
                    Some(f) => {
                        self.expect(Tok::LParen, &format!("`(` after `{other}`"))?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(HoloExpr::Func(f, Box::new(arg)))
                    }
                    None => Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnknownIdentifier(other.to_string()),
                    }),
                },
            },
            Tok::End => Err(ParseError {
                offset: at,
                kind: ParseErrorKind::Syntax("unexpected end of input".into()),
            }),
            t => Err(ParseError {
                offset: at,
                kind: ParseErrorKind::Syntax(format!("unexpected token {t:?}")),
            }),
        }
    }
}

/// Parses an expression in either mode.
pub fn parse(src: &str) -> Result<HoloExpr, ParseError> {
    let toks = Lexer { src, pos: 0 }.tokens()?;
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    if e.contains_var(Var::Z) && (e.contains_var(Var::X) || e.contains_var(Var::Y)) {
        let offset = src.find(['x', 'y']).unwrap_or(0);
        return Err(ParseError {
            offset,
            kind: ParseErrorKind::MixedModes,
        });
    }
    Ok(e.fold_constants())
}

/// Parses an expression and requires it to be a function of `z` only.
pub fn parse_complex(src: &str) -> Result<HoloExpr, ParseError> {
    let e = parse(src)?;
    if e.mode() == Some(Mode::Real) {
        let offset = src.find(['x', 'y']).unwrap_or(0);
        return Err(ParseError {
            offset,
            kind: ParseErrorKind::MixedModes,
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Box<HoloExpr> {
        Box::new(HoloExpr::z())
    }

    #[test]
    fn power_minus_constant() {
        let e = parse("z^2 - 1").unwrap();
        assert_eq!(
            e,
            HoloExpr::Sub(
                Box::new(HoloExpr::Pow(z(), 2)),
                Box::new(HoloExpr::real(1.0))
            )
        );
    }

    #[test]
    fn complex_constants_fold() {
        let e = parse("exp(z)*(2+3*i)").unwrap();
        assert_eq!(
            e,
            HoloExpr::Mul(
                Box::new(HoloExpr::Func(Func::Exp, z())),
                Box::new(HoloExpr::Const(Complex64::new(2.0, 3.0)))
            )
        );
    }

    #[test]
    fn caret_binds_tighter_than_unary_minus() {
        assert_eq!(
            parse("-z^2").unwrap(),
            HoloExpr::Neg(Box::new(HoloExpr::Pow(z(), 2)))
        );
        assert_eq!(
            parse("2*-z").unwrap(),
            HoloExpr::Mul(Box::new(HoloExpr::real(2.0)), Box::new(HoloExpr::Neg(z())))
        );
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(
            parse(" z ^ 3 *  exp ( 2 * z ) ").unwrap(),
            parse("z^3*exp(2*z)").unwrap()
        );
    }

    #[test]
    fn left_associative() {
        let e = parse("z - 1 - z").unwrap();
        assert_eq!(
            e,
            HoloExpr::Sub(
                Box::new(HoloExpr::Sub(z(), Box::new(HoloExpr::real(1.0)))),
                z()
            )
        );
    }

    #[test]
    fn exponent_forms() {
        assert_eq!(parse("z^(-2)").unwrap(), HoloExpr::Pow(z(), -2));
        assert_eq!(parse("z^-2").unwrap(), HoloExpr::Pow(z(), -2));
        assert_eq!(parse("z^(3)").unwrap(), HoloExpr::Pow(z(), 3));
        assert_eq!(parse("2^3").unwrap(), HoloExpr::real(8.0));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1e-3").unwrap(), HoloExpr::real(1e-3));
        assert_eq!(parse("0.5").unwrap(), HoloExpr::real(0.5));
        assert_eq!(parse(".25").unwrap(), HoloExpr::real(0.25));
        assert_eq!(parse("2.5E+2").unwrap(), HoloExpr::real(250.0));
    }

    #[test]
    fn non_integer_exponent() {
        let err = parse("z^(1.5)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonIntegerExponent);
        assert_eq!(err.offset, 2);
        assert_eq!(
            parse("z^z").unwrap_err().kind,
            ParseErrorKind::NonIntegerExponent
        );
        assert_eq!(
            parse("z^(2*z)").unwrap_err().kind,
            ParseErrorKind::NonIntegerExponent
        );
    }

    #[test]
    fn unknown_identifier_offset() {
        let err = parse("z + log(z)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("log".into()));
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn syntax_errors() {
        for (src, off) in [
            ("z +", 3),
            ("(z", 2),
            ("z z", 2),
            ("exp z", 4),
            ("z # 1", 2),
            ("", 0),
            ("1e", 1),
        ] {
            let err = parse(src).unwrap_err();
            assert!(
                matches!(err.kind, ParseErrorKind::Syntax(_)),
                "{src}: {err}"
            );
            assert_eq!(err.offset, off, "{src}");
        }
    }

    #[test]
    fn modes_do_not_mix() {
        assert_eq!(parse("z + x").unwrap_err().kind, ParseErrorKind::MixedModes);
        assert!(parse("x^2 - y^2").is_ok());
        assert_eq!(
            parse_complex("x*y").unwrap_err().kind,
            ParseErrorKind::MixedModes
        );
    }

    #[test]
    fn prints_and_reparses() {
        for src in [
            "z^2 - 1",
            "exp(z)*(2+3*i)",
            "-z^2",
            "1/(z-2)",
            "sinh(z)/cosh(z) + z^(-3)",
            "(0.1-2*i)*z",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }
}
