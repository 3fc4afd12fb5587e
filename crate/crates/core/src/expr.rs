//! The expression language shared by every input: sums of products of named
//! generators, coordinates and basis fields with rational coefficients, plus
//! `d(...)`. Juxtaposition multiplies. See `docs/grammar.ebnf`.

use num_traits::Zero;

use crate::algebra::{Algebra, GradedElement};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::model::{CdgaModel, VectorField};
use crate::poly::CoeffPoly;
use crate::scalar::{parse_scalar, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Scalar),
    Ident(String, usize),
    D(Box<Expr>, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push((Tok::Num(src[start..i].to_string()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(_, p)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_unary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.i += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else if self.starts_unary() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.parse().or_else(|_| self.err("exponent must be a non-negative integer"))?;
                    self.i += 1;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return self.err("exponent must be a non-negative integer"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                let v = parse_scalar(&n).ok_or(Error::Parse { pos, msg: format!("bad number `{n}`") })?;
                Ok(Expr::Num(v))
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                if name == "d" {
                    if !self.eat('(') {
                        return self.err("`d` must be applied as d(...)");
                    }
                    let inner = self.expr()?;
                    if !self.eat(')') {
                        return self.err("expected `)`");
                    }
                    return Ok(Expr::D(Box::new(inner), pos));
                }
                Ok(Expr::Ident(name, pos))
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected `{}`", tok_text(&t))),
            None => self.err("unexpected end of input"),
        }
    }
}

fn tok_text(t: &Tok) -> String {
    match t {
        Tok::Num(s) | Tok::Ident(s) => s.clone(),
        Tok::Sym(c) => c.to_string(),
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, i: 0, end: src.len() };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn scalar_of(e: &GradedElement) -> Option<Scalar> {
    if e.is_zero() {
        Some(Scalar::zero())
    } else {
        e.as_scalar()
    }
}

/// Evaluates into `alg`; `d(...)` needs a differential.
pub fn eval_element(e: &Expr, alg: &Algebra, d: Option<&Derivation>) -> Result<GradedElement> {
    let rec = |x: &Expr| eval_element(x, alg, d);
    Ok(match e {
        Expr::Num(v) => GradedElement::scalar(alg, v.clone()),
        Expr::Ident(name, pos) => GradedElement::symbol(alg, name).map_err(|_| Error::Parse { pos: *pos, msg: format!("unknown symbol `{name}`") })?,
        Expr::D(inner, pos) => {
            let d = d.ok_or(Error::Parse { pos: *pos, msg: "no differential in this context".into() })?;
            d.apply(&rec(inner)?)
        }
        Expr::Neg(x) => -rec(x)?,
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Div(a, b, pos) => {
            let den = scalar_of(&rec(b)?).filter(|s| !s.is_zero());
            let den = den.ok_or(Error::Parse { pos: *pos, msg: "can only divide by a nonzero number".into() })?;
            rec(a)?.scale(&(Scalar::from_integer(1.into()) / den))
        }
        Expr::Pow(x, k) => rec(x)?.pow(*k),
    })
}

/// Parses a form over the model, with `d` the model differential.
pub fn parse_form(src: &str, model: &CdgaModel) -> Result<GradedElement> {
    eval_element(&parse(src)?, model.algebra(), Some(model.d()))
}

/// Parses into an arbitrary algebra, with an optional differential for `d(...)`.
pub fn parse_element(src: &str, alg: &Algebra, d: Option<&Derivation>) -> Result<GradedElement> {
    eval_element(&parse(src)?, alg, d)
}

enum VfValue {
    Poly(CoeffPoly),
    Field(VectorField),
}

/// Byte offset of the leftmost token of `e`, when known.
fn expr_pos(e: &Expr) -> usize {
    match e {
        Expr::Num(_) => 0,
        Expr::Ident(_, p) | Expr::D(_, p) => *p,
        Expr::Neg(x) | Expr::Pow(x, _) => expr_pos(x),
        Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) | Expr::Div(a, _, _) => expr_pos(a),
    }
}

fn eval_field(e: &Expr, model: &CdgaModel) -> Result<VfValue> {
    let nvars = model.algebra().nvars();
    let rec = |x: &Expr| eval_field(x, model);
    let mismatch = |pos: usize| Error::Parse { pos, msg: "cannot combine a vector field with a function here".into() };
    Ok(match e {
        Expr::Num(v) => VfValue::Poly(CoeffPoly::constant(nvars, v.clone())),
        Expr::Ident(name, pos) => {
            if let Some(j) = model.field_index(name) {
                VfValue::Field(VectorField::basis(model, j))
            } else if let Some(i) = model.algebra().coord_index(name) {
                VfValue::Poly(CoeffPoly::var(nvars, i))
            } else {
                return Err(Error::Parse { pos: *pos, msg: format!("unknown field or coordinate `{name}`") });
            }
        }
        Expr::D(_, pos) => return Err(Error::Parse { pos: *pos, msg: "d(...) is not allowed in a vector field".into() }),
        Expr::Neg(x) => match rec(x)? {
            VfValue::Poly(p) => VfValue::Poly(p.neg()),
            VfValue::Field(f) => VfValue::Field(f.scale(&-Scalar::from_integer(1.into()))),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let minus = matches!(e, Expr::Sub(..));
            match (rec(a)?, rec(b)?) {
                (VfValue::Poly(p), VfValue::Poly(q)) => VfValue::Poly(if minus { p.sub(&q) } else { p.add(&q) }),
                (VfValue::Field(x), VfValue::Field(y)) => VfValue::Field(if minus { x.sub(&y) } else { x.add(&y) }),
                (VfValue::Field(x), VfValue::Poly(p)) if p.is_zero() => VfValue::Field(x),
                (VfValue::Poly(p), VfValue::Field(x)) if p.is_zero() => VfValue::Field(if minus { x.scale(&-Scalar::from_integer(1.into())) } else { x }),
                _ => return Err(mismatch(expr_pos(e))),
            }
        }
        Expr::Mul(a, b) => match (rec(a)?, rec(b)?) {
            (VfValue::Poly(p), VfValue::Poly(q)) => VfValue::Poly(p.mul(&q)),
            (VfValue::Poly(p), VfValue::Field(x)) | (VfValue::Field(x), VfValue::Poly(p)) => VfValue::Field(x.mul_poly(&p)),
            _ => return Err(mismatch(expr_pos(e))),
        },
        Expr::Div(a, b, pos) => {
            let den = match rec(b)? {
                VfValue::Poly(p) => p.as_constant().filter(|s| !s.is_zero()),
                VfValue::Field(_) => None,
            };
            let den = den.ok_or(Error::Parse { pos: *pos, msg: "can only divide by a nonzero number".into() })?;
            let inv = Scalar::from_integer(1.into()) / den;
            match rec(a)? {
                VfValue::Poly(p) => VfValue::Poly(p.scale(&inv)),
                VfValue::Field(x) => VfValue::Field(x.scale(&inv)),
            }
        }
        Expr::Pow(x, k) => match rec(x)? {
            VfValue::Poly(p) => VfValue::Poly(p.pow(*k)),
            VfValue::Field(_) => return Err(mismatch(expr_pos(e))),
        },
    })
}

/// Parses a vector field such as `x*Dy - y*Dx`; `0` is the zero field.
pub fn parse_field(src: &str, model: &CdgaModel) -> Result<VectorField> {
    match eval_field(&parse(src)?, model)? {
        VfValue::Field(x) => Ok(x),
        VfValue::Poly(p) if p.is_zero() => Ok(VectorField::zero(model)),
        VfValue::Poly(_) => Err(Error::Parse { pos: 0, msg: format!("`{src}` is a function, not a vector field") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_frac;

    #[test]
    fn forms_parse() {
        let m = CdgaModel::affine(2, None).unwrap();
        let a = parse_form("dx dy", &m).unwrap();
        assert_eq!(a, &m.element("dx").unwrap() * &m.element("dy").unwrap());
        assert_eq!(parse_form("d(x dy)", &m).unwrap(), a);
        let r2 = parse_form("(x^2 + y^2)/2", &m).unwrap();
        let expect = (&(&m.element("x").unwrap() * &m.element("x").unwrap()) + &(&m.element("y").unwrap() * &m.element("y").unwrap())).scale(&q_frac(1, 2));
        assert_eq!(r2, expect);
        assert_eq!(parse_form("-2x*dy + 2 x dy", &m).unwrap(), GradedElement::zero(m.algebra()));
        assert_eq!(parse_form("dy dx", &m).unwrap(), -a);
    }

    #[test]
    fn errors_have_positions() {
        let m = CdgaModel::affine(2, None).unwrap();
        assert!(matches!(parse_form("x + w", &m), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_form("x / y", &m), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_form("(x", &m), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_form("x $", &m), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_form("", &m).is_err());
    }

    #[test]
    fn fields_parse() {
        let m = CdgaModel::affine(2, None).unwrap();
        let rot = parse_field("x*Dy - y*Dx", &m).unwrap();
        let expect = m.basis_field("Dy").unwrap().mul_poly(&CoeffPoly::var(2, 0)).sub(&m.basis_field("Dx").unwrap().mul_poly(&CoeffPoly::var(2, 1)));
        assert_eq!(rot, expect);
        assert!(parse_field("0", &m).unwrap().is_zero());
        assert!(parse_field("x", &m).is_err());
        assert!(parse_field("Dx Dy", &m).is_err());
        assert_eq!(parse_field("-Dx/2", &m).unwrap(), m.basis_field("Dx").unwrap().scale(&q_frac(-1, 2)));
    }
}
