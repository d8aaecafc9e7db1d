//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term (('+'|'-') term)* ;
//! term     := factor (('*'|'/') factor)* ;
//! factor   := base ('^' int)? ;
//! base     := rational | var | '(' expr ')' | '-' base ;
//! rational := int ('/' posint)? ;
//! var      := letter (letter|digit|'_')* ;
//! ```
//!
//! Whitespace is insignificant. A `/` directly followed by digits binds as
//! part of a rational literal (`1/2*T` is `(1/2)*T`); any other `/` is
//! term-level division.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::context::VarContext;
use crate::error::{EqError, Result};
use crate::ratfun::RatFun;

#[derive(Debug, Clone)]
enum Ast {
    Num(BigRational),
    Var(String, usize), // name, position (for unknown-variable errors)
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser { input: input.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(EqError::Parse { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_expr(&mut self) -> Result<Ast> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Ast> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    lhs = Ast::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Ast> {
        let base = self.parse_base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_signed_int()?;
            let e: i32 = match i32::try_from(e) {
                Ok(e) => e,
                Err(_) => return self.err("exponent out of range"),
            };
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn parse_base(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let inner = self.parse_base()?;
                Ok(Ast::Neg(Box::new(inner)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.parse_rational(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let mut end = self.pos;
                while end < self.input.len()
                    && (self.input[end].is_ascii_alphanumeric() || self.input[end] == b'_')
                {
                    end += 1;
                }
                self.pos = end;
                let name = std::str::from_utf8(&self.input[start..end]).unwrap().to_string();
                Ok(Ast::Var(name, start))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn parse_digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        Ok(BigInt::from_str(s).unwrap())
    }

    fn parse_signed_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let n = self.parse_digits()?;
        let v = i64::try_from(&n).map_err(|_| EqError::Parse {
            pos: self.pos,
            message: "integer out of range".into(),
        })?;
        Ok(if neg { -v } else { v })
    }

    /// `rational := int ('/' posint)?` — the `/` is consumed only when
    /// immediately followed by digits, otherwise it is left for the
    /// term-level division.
    fn parse_rational(&mut self) -> Result<Ast> {
        let n = self.parse_digits()?;
        let save = self.pos;
        if self.eat(b'/') {
            self.skip_ws();
            if self
                .input
                .get(self.pos)
                .is_some_and(|c| c.is_ascii_digit())
            {
                let d = self.parse_digits()?;
                if d.is_zero() {
                    return self.err("zero denominator in rational literal");
                }
                return Ok(Ast::Num(BigRational::new(n, d)));
            }
            self.pos = save;
        }
        Ok(Ast::Num(BigRational::from_integer(n)))
    }
}

fn collect_vars(ast: &Ast, out: &mut Vec<String>) {
    match ast {
        Ast::Num(_) => {}
        Ast::Var(name, _) => {
            if !out.iter().any(|n| n == name) {
                out.push(name.clone());
            }
        }
        Ast::Neg(a) | Ast::Pow(a, _) => collect_vars(a, out),
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

fn eval(ast: &Ast, ctx: &Arc<VarContext>) -> Result<RatFun> {
    match ast {
        Ast::Num(c) => Ok(RatFun::constant(ctx, c.clone())),
        Ast::Var(name, pos) => match ctx.index_of(name) {
            Some(i) => Ok(RatFun::var(ctx, i)),
            None => Err(EqError::Parse {
                pos: *pos,
                message: format!("unknown variable '{}'", name),
            }),
        },
        Ast::Neg(a) => Ok(eval(a, ctx)?.neg()),
        Ast::Add(a, b) => eval(a, ctx)?.add(&eval(b, ctx)?),
        Ast::Sub(a, b) => eval(a, ctx)?.sub(&eval(b, ctx)?),
        Ast::Mul(a, b) => eval(a, ctx)?.mul(&eval(b, ctx)?),
        Ast::Div(a, b) => eval(a, ctx)?.div(&eval(b, ctx)?),
        Ast::Pow(a, e) => eval(a, ctx)?.pow(*e),
    }
}

fn parse_to_ast(text: &str) -> Result<Ast> {
    let mut p = Parser::new(text);
    let ast = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return p.err("trailing input");
    }
    Ok(ast)
}

/// Parse over a pinned context; unknown variables are errors.
pub fn parse_expr(text: &str, ctx: &Arc<VarContext>) -> Result<RatFun> {
    eval(&parse_to_ast(text)?, ctx)
}

/// Parse with the context inferred from the variables in first-appearance
/// order.
pub fn parse_expr_infer(text: &str) -> Result<(RatFun, Arc<VarContext>)> {
    let ast = parse_to_ast(text)?;
    let mut names = Vec::new();
    collect_vars(&ast, &mut names);
    let ctx = VarContext::new(names);
    Ok((eval(&ast, &ctx)?, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::format_expr;
    use crate::ratfun::Style;

    #[test]
    fn parses_extraction_denominator() {
        let ctx = VarContext::new(vec!["S1", "S2", "T1", "T2"]);
        let f = parse_expr(
            "(1 - S1*S2*T1*T2)/((1-S1*T1)*(1-S1*T2)*(1-S2*T1)*(1-S2*T2))",
            &ctx,
        )
        .unwrap();
        // round-trip through the canonical printer
        let g = parse_expr(&format_expr(&f, Style::Plain), &ctx).unwrap();
        assert!(f.eq_ratfun(&g).unwrap());
    }

    #[test]
    fn parses_zero() {
        let ctx = VarContext::new(vec!["T"]);
        let f = parse_expr("0", &ctx).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn parses_negative_exponent_monomial() {
        let ctx = VarContext::new(vec!["T1"]);
        let f = parse_expr("T1^-2", &ctx).unwrap();
        assert_eq!(f.to_string(), "T1^-2");
    }

    #[test]
    fn rational_literal_division_disambiguation() {
        let ctx = VarContext::new(vec!["T"]);
        // 1/2*T means (1/2)*T under the grammar
        let f = parse_expr("1/2*T", &ctx).unwrap();
        assert_eq!(f.to_string(), "1/2*T");
        // 1/(2*T) is genuine division
        let g = parse_expr("1/(2*T)", &ctx).unwrap();
        assert_eq!(g.to_string(), "1/2*T^-1");
    }

    #[test]
    fn unknown_variable_reports_position() {
        let ctx = VarContext::new(vec!["T"]);
        let err = parse_expr("1+Q", &ctx).unwrap_err();
        assert!(matches!(err, EqError::Parse { pos: 2, .. }));
    }

    #[test]
    fn syntax_error_reports_position() {
        let ctx = VarContext::new(vec!["T"]);
        assert!(matches!(
            parse_expr("(1+T", &ctx).unwrap_err(),
            EqError::Parse { .. }
        ));
    }

    #[test]
    fn infers_context_in_first_appearance_order() {
        let (f, ctx) = parse_expr_infer("y + T1*T2").unwrap();
        assert_eq!(ctx.names(), &["y", "T1", "T2"]);
        assert_eq!(f.to_string(), "y+T1*T2");
    }
}
