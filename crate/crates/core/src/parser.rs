//! Expression front end: a recursive-descent parser for the polynomial
//! grammar, and the canonical renderer that inverts it.
//!
//! Grammar: integers, the imaginary unit `I`, identifiers (coordinates and
//! parameters), `+ - * / ^` and parentheses. `^` takes a non-negative
//! integer literal. Division is only by coordinate-free expressions; a
//! coordinate in a denominator is rejected with its position.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::Coeff;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Result<Option<(Tok, usize)>> {
        let save = self.pos;
        let t = self.next_tok()?;
        self.pos = save;
        Ok(t)
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize)>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                Tok::Int(s.parse().unwrap())
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                Tok::Ident(s.to_string())
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok(Some((tok, start)))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    ctx: &'a Arc<Context>,
}

impl<'a> Parser<'a> {
    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.lex.peek()? {
                Some((Tok::Plus, _)) => {
                    self.lex.next_tok()?;
                    acc = acc.add(&self.term()?)?;
                }
                Some((Tok::Minus, _)) => {
                    self.lex.next_tok()?;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.lex.peek()? {
                Some((Tok::Star, _)) => {
                    self.lex.next_tok()?;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some((Tok::Slash, _)) => {
                    let (_, pos) = self.lex.next_tok()?.unwrap();
                    let rhs = self.unary()?;
                    let c = rhs
                        .constant_value()
                        .ok_or(Error::CoordinateInDenominator { pos })?;
                    if c.is_zero() {
                        return Err(Error::ZeroDenominator);
                    }
                    acc = acc.scale(&c.inv()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if let Some((Tok::Minus, _)) = self.lex.peek()? {
            self.lex.next_tok()?;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if let Some((Tok::Caret, _)) = self.lex.peek()? {
            self.lex.next_tok()?;
            match self.lex.next_tok()? {
                Some((Tok::Int(n), pos)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Syntax {
                        pos,
                        msg: "exponent out of range".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                Some((_, pos)) => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected a non-negative integer exponent".into(),
                    })
                }
                None => {
                    return Err(Error::Syntax {
                        pos: self.lex.pos,
                        msg: "expected an exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.lex.next_tok()? {
            Some((Tok::Int(n), _)) => Ok(MultiPoly::from_int(self.ctx, n)),
            Some((Tok::Ident(name), pos)) => {
                if name == "I" {
                    return Ok(MultiPoly::constant(
                        self.ctx,
                        Coeff::imaginary_unit(self.ctx.n_params()),
                    ));
                }
                if let Some(idx) = self.ctx.coord_index(&name) {
                    return Ok(MultiPoly::coord(self.ctx, idx));
                }
                if let Some(idx) = self.ctx.param_index(&name) {
                    return Ok(MultiPoly::param(self.ctx, idx));
                }
                Err(Error::UnknownIdentifier { name, pos })
            }
            Some((Tok::LParen, pos)) => {
                let inner = self.expr()?;
                match self.lex.next_tok()? {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => Err(Error::Syntax {
                        pos,
                        msg: "unclosed parenthesis".into(),
                    }),
                }
            }
            Some((tok, pos)) => Err(Error::Syntax {
                pos,
                msg: format!("unexpected token {tok:?}"),
            }),
            None => Err(Error::Syntax {
                pos: self.lex.pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parses an expression over the given context into an exact polynomial.
pub fn parse_expression(src: &str, ctx: &Arc<Context>) -> Result<MultiPoly> {
    let mut p = Parser {
        lex: Lexer::new(src),
        ctx,
    };
    let poly = p.expr()?;
    if let Some((_, pos)) = p.lex.next_tok()? {
        return Err(Error::Syntax {
            pos,
            msg: "trailing input".into(),
        });
    }
    Ok(poly)
}

/// Canonical rendering: terms in descending monomial order, coefficients in
/// normalized form. `parse(render(p)) == p` and rendering is a fixed point
/// of parse∘render.
pub fn render_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let ctx = p.context();
    let names = ctx.params().to_vec();
    let mut out = String::new();
    let terms: Vec<(&crate::poly::Monomial, &Coeff)> = p.terms().collect();
    for (k, (mono, coeff)) in terms.into_iter().rev().enumerate() {
        let (neg, cstr) = negatable_render(coeff, &names);
        let mono_str = render_monomial(mono, ctx);
        let body = match (&mono_str, cstr.as_str()) {
            (None, _) => wrap_coeff_for_product(&cstr, coeff, false),
            (Some(ms), "1") => ms.clone(),
            (Some(ms), _) => format!("{}*{}", wrap_coeff_for_product(&cstr, coeff, true), ms),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

fn render_monomial(m: &crate::poly::Monomial, ctx: &Arc<Context>) -> Option<String> {
    if m.is_constant() {
        return None;
    }
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| {
            if e == 1 {
                ctx.coord_name(j).to_string()
            } else {
                format!("{}^{}", ctx.coord_name(j), e)
            }
        })
        .collect();
    Some(parts.join("*"))
}

/// Splits a leading minus when `-c` renders as the string without it.
fn negatable_render(c: &Coeff, names: &[String]) -> (bool, String) {
    let s = c.render(names);
    if s.starts_with('-') {
        let sn = c.neg().render(names);
        if format!("-{sn}") == s {
            return (true, sn);
        }
    }
    (false, s)
}

/// Multi-term numerators without a denominator need parentheses inside a
/// product.
fn wrap_coeff_for_product(s: &str, c: &Coeff, in_product: bool) -> String {
    let needs = in_product
        && c.num().num_terms() > 1
        && c.den() == &crate::coeff::ParamPoly::one(c.nparams());
    if needs {
        format!("({s})")
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<Context> {
        Context::new(
            vec!["x", "y", "z"],
            vec!["a", "b", "c", "k2", "a020", "k001"],
        )
        .unwrap()
    }

    #[test]
    fn parses_the_ellipsoid_polynomial() {
        let ctx = ctx();
        let m = parse_expression("x^2/a^2 + y^2/b^2 + z^2/c^2 - 1", &ctx).unwrap();
        assert_eq!(m.degree(), Some(2));
        assert_eq!(m.num_terms(), 4);
        let back = parse_expression(&render_poly(&m), &ctx).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn parses_complex_meridian_form() {
        let ctx = ctx();
        let f = parse_expression("-I*b*x + a*y", &ctx).unwrap();
        assert_eq!(f.degree(), Some(1));
        let g = parse_expression(&render_poly(&f), &ctx).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_coordinate_denominator() {
        let ctx = ctx();
        match parse_expression("x/(y+1)", &ctx) {
            Err(Error::CoordinateInDenominator { pos }) => assert_eq!(pos, 1),
            other => panic!("expected denominator rejection, got {other:?}"),
        }
    }

    #[test]
    fn reports_positions() {
        let ctx = ctx();
        match parse_expression("x + q", &ctx) {
            Err(Error::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "q");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
        assert!(parse_expression("x +", &ctx).is_err());
        assert!(parse_expression("x ^ y", &ctx).is_err());
        assert!(parse_expression("(x", &ctx).is_err());
        assert!(parse_expression("x) ", &ctx).is_err());
    }

    #[test]
    fn arithmetic_evaluates_exactly() {
        let ctx = ctx();
        let p = parse_expression("(x + y)^2 - x^2 - y^2 - 2*x*y", &ctx).unwrap();
        assert!(p.is_zero());
        let q = parse_expression("1/2*k001*(c^2*(-1 + x^2/a^2 + y^2/b^2) + z^2)", &ctx).unwrap();
        assert_eq!(q.degree(), Some(2));
        let r = parse_expression("3/6", &ctx).unwrap();
        assert_eq!(
            r.constant_value().unwrap(),
            Coeff::from_ratio(6, 1, 2).unwrap()
        );
    }

    #[test]
    fn render_is_fixed_point() {
        let ctx = ctx();
        for src in [
            "x^2/a^2 + y^2/b^2 + z^2/c^2 - 1",
            "-I*b*x + a*y",
            "y*((I*a*k2*x)/b + a020*y)",
            "-(b*x*(I*a*k2*x + a020*b*y))/a^2",
            "(a + b)*x*y - 7/3*z",
            "(3+2*I)*x - I*y",
        ] {
            let p = parse_expression(src, &ctx).unwrap();
            let s1 = render_poly(&p);
            let p2 = parse_expression(&s1, &ctx).unwrap();
            assert_eq!(p, p2, "value roundtrip for `{src}`");
            assert_eq!(s1, render_poly(&p2), "fixed point for `{src}`");
        }
    }
}
