//! Plain-text expression grammar for q-series.
//!
//! Identities are stored as text on both sides and parsed into an [`Expr`]
//! tree, so adding one never requires code changes. The grammar mirrors the
//! classical notation:
//!
//! ```text
//! expr      := term (('+' | '-') term)*
//! term      := factor (('*' | '/')? factor)*        juxtaposition multiplies
//! factor    := '-' factor | postfix
//! postfix   := atom ('^' integer)*                  integer may be negative
//! atom      := '(' 'q'[A] ';' 'q'[B] ')'            Pochhammer (q^A; q^B)∞
//!            | integer | 'q'                        monomials need '^': q^7
//!            | 'R' '(' 'q'[M] ')'                   R(q), R(q20), ...
//!            | 'theta' '(' A ',' B ')'              f(-q^A, -q^B)
//!            | 'bk' '(' k ')'                       level-360 eta family
//!            | 'dissect' '(' expr ',' t ',' j ')'   pick exponents t·n+j
//!            | 'subst' '(' expr ',' m ')'           q -> q^m
//!            | '(' expr ')'
//! ```
//!
//! Inside Pochhammer and `R` arguments a bare digit string follows `q`
//! directly ((q2;q10), R(q4)); everywhere else exponents require `^`, which
//! keeps `q20` from silently meaning `q^2 * 0` or `q^20`.
//!
//! Evaluation is truncation-aware: `dissect` inflates the order its
//! subexpression must be computed to (t·(T-1)+j+1 for T requested
//! coefficients) and `subst` deflates it, and any intermediate order above
//! the global cap is rejected rather than silently truncated.

use std::fmt;

use crate::error::{Error, Result};
use crate::eta::bk_series_in;
use crate::qfactory::{pochhammer_in, rr_quotient_in, theta_f_in};
use crate::series::{max_truncation, CoeffMode, TruncatedSeries};

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// (q^a; q^b)∞
    Poch {
        a: usize,
        b: usize,
    },
    /// R(q^m): the Rogers-Ramanujan quotient with q -> q^m applied.
    Rr {
        m: usize,
    },
    /// f(-q^a, -q^b)
    Theta {
        a: usize,
        b: usize,
    },
    /// Level-360 eta-quotient family member, combined q-expansion.
    Bk {
        k: u32,
    },
    /// coeff · q^exp
    Monomial {
        coeff: i64,
        exp: usize,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// Coefficients at exponents t·n + j.
    Dissect(Box<Expr>, usize, usize),
    /// q -> q^m.
    Subst(Box<Expr>, usize),
}

// ---- lexer ---------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Poch(usize, usize),
    Int(i64),
    Q,
    /// q immediately followed by digits; legal only as an R(...) argument.
    QImplicit(usize),
    Ident(String),
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
}

fn err_at(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn digits(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
    }

    /// Attempts `q[digits];q[digits])` after an already-consumed '('.
    fn pochhammer_tail(&mut self, open: usize) -> Result<Option<(usize, usize)>> {
        let mark = self.pos;
        if self.pos >= self.src.len() || self.src[self.pos] != b'q' {
            return Ok(None);
        }
        self.pos += 1;
        let a = self.digits().unwrap_or(1);
        if self.pos >= self.src.len() || self.src[self.pos] != b';' {
            self.pos = mark;
            return Ok(None);
        }
        self.pos += 1;
        if self.pos >= self.src.len() || self.src[self.pos] != b'q' {
            return Err(err_at(
                self.pos,
                "expected q after ';' in Pochhammer symbol",
            ));
        }
        self.pos += 1;
        let b = self.digits().unwrap_or(1);
        if self.pos >= self.src.len() || self.src[self.pos] != b')' {
            return Err(err_at(self.pos, "expected ')' closing Pochhammer symbol"));
        }
        self.pos += 1;
        if a == 0 || b == 0 {
            return Err(err_at(open, "Pochhammer exponents must be positive"));
        }
        Ok(Some((a, b)))
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let start = self.pos;
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'(' => {
                    self.pos += 1;
                    match self.pochhammer_tail(start)? {
                        Some((a, b)) => out.push((Tok::Poch(a, b), start)),
                        None => out.push((Tok::LParen, start)),
                    }
                }
                b')' => {
                    self.pos += 1;
                    out.push((Tok::RParen, start));
                }
                b'^' => {
                    self.pos += 1;
                    out.push((Tok::Caret, start));
                }
                b'+' => {
                    self.pos += 1;
                    out.push((Tok::Plus, start));
                }
                b'-' => {
                    self.pos += 1;
                    out.push((Tok::Minus, start));
                }
                b'*' => {
                    self.pos += 1;
                    out.push((Tok::Star, start));
                }
                b'/' => {
                    self.pos += 1;
                    out.push((Tok::Slash, start));
                }
                b',' => {
                    self.pos += 1;
                    out.push((Tok::Comma, start));
                }
                b'0'..=b'9' => {
                    let v = self
                        .digits()
                        .ok_or_else(|| err_at(start, "integer literal too large"))?;
                    let v =
                        i64::try_from(v).map_err(|_| err_at(start, "integer literal too large"))?;
                    out.push((Tok::Int(v), start));
                }
                b'q' => {
                    self.pos += 1;
                    match self.digits() {
                        Some(m) => out.push((Tok::QImplicit(m), start)),
                        None => out.push((Tok::Q, start)),
                    }
                }
                c if c.is_ascii_alphabetic() => {
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                        self.pos += 1;
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos])
                        .expect("ascii")
                        .to_string();
                    out.push((Tok::Ident(word), start));
                }
                other => {
                    return Err(err_at(
                        start,
                        format!("unexpected character '{}'", other as char),
                    ))
                }
            }
        }
        Ok(out)
    }
}

// ---- parser ---------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(_, p)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(err_at(pos, format!("expected {what}"))),
        }
    }

    /// A nonnegative integer argument.
    fn int_arg(&mut self, what: &str) -> Result<usize> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Int(v)) => {
                usize::try_from(v).map_err(|_| err_at(pos, format!("{what} out of range")))
            }
            _ => Err(err_at(pos, format!("expected integer {what}"))),
        }
    }

    /// A possibly-negated integer (for exponents after '^').
    fn signed_int(&mut self) -> Result<i64> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            Some(Tok::Minus) => match self.next() {
                Some(Tok::Int(v)) => Ok(-v),
                _ => Err(err_at(pos, "expected integer after '-' in exponent")),
            },
            _ => Err(err_at(pos, "expected integer exponent after '^'")),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Poch(_, _) | Tok::Int(_) | Tok::Q | Tok::Ident(_) | Tok::LParen)
        )
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    let rhs = self.parse_factor()?;
                    lhs = smart_mul(lhs, rhs);
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ if self.starts_atom() => {
                    let rhs = self.parse_postfix()?;
                    lhs = smart_mul(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.idx += 1;
            let inner = self.parse_factor()?;
            return Ok(match inner {
                Expr::Monomial { coeff, exp } => Expr::Monomial { coeff: -coeff, exp },
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> Result<Expr> {
        let mut base = self.parse_atom()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            let caret_pos = self.pos();
            self.idx += 1;
            let e = self.signed_int()?;
            base = match base {
                // fold plain q^e into a monomial; negative powers of q are
                // not power series
                Expr::Monomial { coeff: 1, exp: 1 } => {
                    let exp = usize::try_from(e)
                        .map_err(|_| err_at(caret_pos, "negative exponent on q"))?;
                    Expr::Monomial { coeff: 1, exp }
                }
                other => Expr::Pow(Box::new(other), e),
            };
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Poch(a, b)) => Ok(Expr::Poch { a, b }),
            Some(Tok::Int(v)) => Ok(Expr::Monomial { coeff: v, exp: 0 }),
            Some(Tok::Q) => Ok(Expr::Monomial { coeff: 1, exp: 1 }),
            Some(Tok::QImplicit(_)) => Err(err_at(
                pos,
                "exponents need a caret (q^20); bare q20 is only an R argument",
            )),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => self.parse_call(&name, pos),
            _ => Err(err_at(pos, "expected an expression")),
        }
    }

    fn parse_call(&mut self, name: &str, pos: usize) -> Result<Expr> {
        self.expect(Tok::LParen, "'(' after function name")?;
        let node = match name {
            "R" => {
                let arg_pos = self.pos();
                let m = match self.next() {
                    Some(Tok::Q) => 1,
                    Some(Tok::QImplicit(m)) if m >= 1 => m,
                    _ => return Err(err_at(arg_pos, "R takes q or qM, as in R(q) or R(q20)")),
                };
                Expr::Rr { m }
            }
            "theta" => {
                let a = self.int_arg("theta argument")?;
                self.expect(Tok::Comma, "',' between theta arguments")?;
                let b = self.int_arg("theta argument")?;
                Expr::Theta { a, b }
            }
            "bk" => {
                let k = self.int_arg("bk index")?;
                let k = u32::try_from(k).map_err(|_| err_at(pos, "bk index out of range"))?;
                Expr::Bk { k }
            }
            "dissect" => {
                let inner = self.parse_expr()?;
                self.expect(Tok::Comma, "',' after dissect expression")?;
                let t = self.int_arg("dissection stride")?;
                self.expect(Tok::Comma, "',' between dissect arguments")?;
                let j = self.int_arg("dissection index")?;
                Expr::Dissect(Box::new(inner), t, j)
            }
            "subst" => {
                let inner = self.parse_expr()?;
                self.expect(Tok::Comma, "',' after subst expression")?;
                let m = self.int_arg("substitution step")?;
                Expr::Subst(Box::new(inner), m)
            }
            other => return Err(err_at(pos, format!("unknown function '{other}'"))),
        };
        self.expect(Tok::RParen, "')' closing argument list")?;
        Ok(node)
    }
}

/// Fold monomial·monomial during parsing so `3q^4`, `3*q^4`, and `-3q^4`
/// all land on a single [`Expr::Monomial`] node.
fn smart_mul(lhs: Expr, rhs: Expr) -> Expr {
    if let (Expr::Monomial { coeff: c1, exp: e1 }, Expr::Monomial { coeff: c2, exp: e2 }) =
        (&lhs, &rhs)
    {
        if let (Some(coeff), Some(exp)) = (c1.checked_mul(*c2), e1.checked_add(*e2)) {
            return Expr::Monomial { coeff, exp };
        }
    }
    Expr::Mul(Box::new(lhs), Box::new(rhs))
}

/// Parses one expression; trailing input is an error.
pub fn parse(input: &str) -> Result<Expr> {
    let toks = Lexer {
        src: input.as_bytes(),
        pos: 0,
    }
    .tokenize()?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: input.len(),
    };
    let expr = p.parse_expr()?;
    if p.idx != p.toks.len() {
        return Err(err_at(p.pos(), "unexpected trailing input"));
    }
    Ok(expr)
}

// ---- display ---------------------------------------------------------------

impl Expr {
    fn is_atomic(&self) -> bool {
        matches!(
            self,
            Expr::Poch { .. }
                | Expr::Rr { .. }
                | Expr::Theta { .. }
                | Expr::Bk { .. }
                | Expr::Dissect(..)
                | Expr::Subst(..)
        ) || matches!(self, Expr::Monomial { coeff, .. } if *coeff >= 0)
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Neg(..) => 2,
            Expr::Mul(..) | Expr::Div(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let me = self.prec();
        if me < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Poch { a, b } => {
                write!(f, "(q")?;
                if *a != 1 {
                    write!(f, "{a}")?;
                }
                write!(f, ";q")?;
                if *b != 1 {
                    write!(f, "{b}")?;
                }
                write!(f, ")")
            }
            Expr::Rr { m } => {
                if *m == 1 {
                    write!(f, "R(q)")
                } else {
                    write!(f, "R(q{m})")
                }
            }
            Expr::Theta { a, b } => write!(f, "theta({a},{b})"),
            Expr::Bk { k } => write!(f, "bk({k})"),
            Expr::Monomial { coeff, exp } => match (coeff, exp) {
                (c, 0) => write!(f, "{c}"),
                (1, 1) => write!(f, "q"),
                (1, e) => write!(f, "q^{e}"),
                (-1, 1) => write!(f, "-q"),
                (-1, e) => write!(f, "-q^{e}"),
                (c, 1) => write!(f, "{c}q"),
                (c, e) => write!(f, "{c}q^{e}"),
            },
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.fmt_prec(f, 3)
            }
            Expr::Add(x, y) => {
                x.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                y.fmt_prec(f, 2)
            }
            Expr::Sub(x, y) => {
                x.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                y.fmt_prec(f, 2)
            }
            Expr::Mul(x, y) => {
                x.fmt_prec(f, 3)?;
                write!(f, "*")?;
                y.fmt_prec(f, 4)
            }
            Expr::Div(x, y) => {
                x.fmt_prec(f, 3)?;
                write!(f, "/")?;
                y.fmt_prec(f, 4)
            }
            Expr::Pow(x, e) => {
                if x.is_atomic() {
                    x.fmt_prec(f, 0)?;
                } else {
                    write!(f, "(")?;
                    x.fmt_prec(f, 0)?;
                    write!(f, ")")?;
                }
                write!(f, "^{e}")
            }
            Expr::Dissect(x, t, j) => write!(f, "dissect({x},{t},{j})"),
            Expr::Subst(x, m) => write!(f, "subst({x},{m})"),
        }
    }
}

impl fmt::Display for Expr {
    /// Canonical text; parsing it back yields a structurally equal tree for
    /// any parser-produced expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

// ---- evaluation -------------------------------------------------------------

fn dissect_need(trunc: usize, t: usize, j: usize) -> Result<usize> {
    if t == 0 {
        return Err(Error::ZeroDissectionStride);
    }
    t.checked_mul(trunc - 1)
        .and_then(|x| x.checked_add(j + 1))
        .ok_or(Error::Overflow("dissection order"))
}

impl Expr {
    /// Expands to exactly `trunc` coefficients in the requested mode.
    pub fn eval_in(&self, mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        let cap = max_truncation();
        if trunc > cap {
            return Err(Error::TruncationCapExceeded { needed: trunc, cap });
        }
        self.eval_node(mode, trunc)
    }

    /// Exact-mode convenience.
    pub fn eval(&self, trunc: usize) -> Result<TruncatedSeries> {
        self.eval_in(CoeffMode::Exact, trunc)
    }

    fn eval_node(&self, mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
        match self {
            Expr::Poch { a, b } => pochhammer_in(mode, *a, *b, trunc),
            Expr::Rr { m } => {
                let inner = trunc.div_ceil(*m.max(&1));
                let r = rr_quotient_in(mode, inner)?.substitute_power(*m)?;
                r.truncated(trunc.min(r.trunc()))
            }
            Expr::Theta { a, b } => theta_f_in(mode, *a, *b, trunc),
            Expr::Bk { k } => bk_series_in(*k, mode, trunc),
            Expr::Monomial { coeff, exp } => {
                TruncatedSeries::monomial_in(mode, *coeff, *exp, trunc)
            }
            Expr::Neg(x) => Ok(x.eval_node(mode, trunc)?.neg()),
            Expr::Add(x, y) => x.eval_node(mode, trunc)?.add(&y.eval_node(mode, trunc)?),
            Expr::Sub(x, y) => x.eval_node(mode, trunc)?.sub(&y.eval_node(mode, trunc)?),
            Expr::Mul(x, y) => x.eval_node(mode, trunc)?.mul(&y.eval_node(mode, trunc)?),
            Expr::Div(x, y) => x.eval_node(mode, trunc)?.div(&y.eval_node(mode, trunc)?),
            Expr::Pow(x, e) => x.eval_node(mode, trunc)?.pow(*e),
            Expr::Dissect(x, t, j) => {
                let need = dissect_need(trunc, *t, *j)?;
                let cap = max_truncation();
                if need > cap {
                    return Err(Error::TruncationCapExceeded { needed: need, cap });
                }
                let inner = x.eval_node(mode, need)?;
                inner.dissect(*t, *j)
            }
            Expr::Subst(x, m) => {
                if *m == 0 {
                    return Err(Error::ZeroSubstitutionStep);
                }
                let inner = x.eval_node(mode, trunc.div_ceil(*m))?;
                let s = inner.substitute_power(*m)?;
                s.truncated(trunc.min(s.trunc()))
            }
        }
    }

    /// The largest intermediate truncation order evaluation would touch when
    /// asked for `trunc` coefficients.
    pub fn required_order(&self, trunc: usize) -> Result<usize> {
        Ok(match self {
            Expr::Poch { .. }
            | Expr::Rr { .. }
            | Expr::Theta { .. }
            | Expr::Bk { .. }
            | Expr::Monomial { .. } => trunc,
            Expr::Neg(x) | Expr::Pow(x, _) => x.required_order(trunc)?,
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) | Expr::Div(x, y) => {
                x.required_order(trunc)?.max(y.required_order(trunc)?)
            }
            Expr::Dissect(x, t, j) => {
                let need = dissect_need(trunc, *t, *j)?;
                need.max(x.required_order(need)?)
            }
            Expr::Subst(x, m) => {
                if *m == 0 {
                    return Err(Error::ZeroSubstitutionStep);
                }
                trunc.max(x.required_order(trunc.div_ceil(*m))?)
            }
        })
    }
}

/// Parse-and-evaluate convenience.
pub fn eval_str_in(input: &str, mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
    parse(input)?.eval_in(mode, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfactory::{pochhammer, rr_quotient};
    use num_bigint::BigInt;

    fn roundtrip(src: &str) -> Expr {
        let ast = parse(src).unwrap_or_else(|e| panic!("parse {src:?}: {e}"));
        let printed = ast.to_string();
        let again = parse(&printed).unwrap_or_else(|e| panic!("reparse {printed:?}: {e}"));
        assert_eq!(
            ast, again,
            "display of {src:?} -> {printed:?} changed the tree"
        );
        ast
    }

    #[test]
    fn parses_pochhammer_forms() {
        assert_eq!(parse("(q;q)").unwrap(), Expr::Poch { a: 1, b: 1 });
        assert_eq!(parse("(q2;q10)").unwrap(), Expr::Poch { a: 2, b: 10 });
        assert_eq!(parse("(q;q5)").unwrap(), Expr::Poch { a: 1, b: 5 });
        assert!(matches!(parse("(q0;q5)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parses_monomials_and_folding() {
        assert_eq!(parse("q").unwrap(), Expr::Monomial { coeff: 1, exp: 1 });
        assert_eq!(parse("q^7").unwrap(), Expr::Monomial { coeff: 1, exp: 7 });
        assert_eq!(parse("11q").unwrap(), Expr::Monomial { coeff: 11, exp: 1 });
        assert_eq!(parse("3q^4").unwrap(), parse("3*q^4").unwrap());
        assert_eq!(
            parse("-3q^4").unwrap(),
            Expr::Monomial { coeff: -3, exp: 4 }
        );
        // bare q20 is reserved for R arguments
        assert!(matches!(parse("q20"), Err(Error::Parse { .. })));
        assert!(matches!(parse("q^-2"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parses_calls() {
        assert_eq!(parse("R(q)").unwrap(), Expr::Rr { m: 1 });
        assert_eq!(parse("R(q20)").unwrap(), Expr::Rr { m: 20 });
        assert_eq!(parse("theta(2,3)").unwrap(), Expr::Theta { a: 2, b: 3 });
        assert_eq!(parse("bk(1)").unwrap(), Expr::Bk { k: 1 });
        assert_eq!(
            parse("dissect((q;q),2,1)").unwrap(),
            Expr::Dissect(Box::new(Expr::Poch { a: 1, b: 1 }), 2, 1)
        );
        assert!(matches!(parse("theta(2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("spam(1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("R(7)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn juxtaposition_and_precedence() {
        let a = parse("(q2;q2)(q5;q5)/((q;q)(q10;q10))").unwrap();
        let b = parse("(q2;q2)*(q5;q5)/((q;q)*(q10;q10))").unwrap();
        assert_eq!(a, b);
        // a/b*c must stay (a/b)*c
        let c = parse("(q;q)/(q2;q2)(q3;q3)").unwrap();
        assert_eq!(
            c,
            Expr::Mul(
                Box::new(Expr::Div(
                    Box::new(Expr::Poch { a: 1, b: 1 }),
                    Box::new(Expr::Poch { a: 2, b: 2 })
                )),
                Box::new(Expr::Poch { a: 3, b: 3 })
            )
        );
        let d = parse("q^2R(q)^5").unwrap();
        assert_eq!(
            d,
            Expr::Mul(
                Box::new(Expr::Monomial { coeff: 1, exp: 2 }),
                Box::new(Expr::Pow(Box::new(Expr::Rr { m: 1 }), 5))
            )
        );
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "(q;q)",
            "(q2;q2)(q5;q5)/((q;q)(q10;q10))",
            "R(q)^-5 - q^2R(q)^5",
            "(q;q)^6/(q5;q5)^6 + 11q",
            "(q25;q25)(R(q5)^-1 - q - q^2R(q5))",
            "dissect((q2;q2)(q5;q5)/((q;q)(q10;q10)),25,21)",
            "subst(dissect((q;q),5,1),6)",
            "2(q4;q4)^3(q5;q5)",
            "(R(q)R(q2)^2)^-1 - q^2R(q)R(q2)^2 + q",
            "theta(1,2) - bk(1)",
            "-(q;q)^2 + 40(q2;q2)^4(q5;q5)^4/(q;q)^8",
            "q subst(R(q),6)",
        ] {
            roundtrip(src);
        }
    }

    #[test]
    fn eval_matches_direct_construction() {
        let f1 = parse("(q;q)").unwrap().eval(40).unwrap();
        assert_eq!(f1, pochhammer(1, 1, 40).unwrap());
        let r = parse("R(q)").unwrap().eval(30).unwrap();
        assert_eq!(r, rr_quotient(30).unwrap());
        // R(q4) equals subst(R(q), 4)
        let a = parse("R(q4)").unwrap().eval(44).unwrap();
        let b = parse("subst(R(q),4)").unwrap().eval(44).unwrap();
        assert_eq!(a, b);
        // partition numbers via 1/(q;q)
        let p = parse("(q;q)^-1").unwrap().eval(10).unwrap();
        let q = parse("1/(q;q)").unwrap().eval(10).unwrap();
        assert_eq!(p, q);
        for (n, want) in [1i64, 1, 2, 3, 5, 7, 11, 15, 22, 30].iter().enumerate() {
            assert_eq!(p.coeff(n).unwrap(), BigInt::from(*want));
        }
    }

    #[test]
    fn eval_dissect_inflates_inner_order() {
        let direct = pochhammer(1, 1, 100).unwrap().dissect(3, 2).unwrap();
        let via = parse("dissect((q;q),3,2)")
            .unwrap()
            .eval(direct.trunc())
            .unwrap();
        assert_eq!(via, direct.truncated(via.trunc()).unwrap());
        assert_eq!(via.trunc(), direct.trunc());
    }

    #[test]
    fn eval_enforces_truncation_cap() {
        let e = parse("dissect((q;q),7,0)").unwrap();
        let need = 7 * (400_000 - 1) + 1; // past the default 10^6 cap
        assert_eq!(
            e.eval(400_000),
            Err(Error::TruncationCapExceeded {
                needed: need,
                cap: max_truncation()
            })
        );
        assert_eq!(e.required_order(400_000).unwrap(), need);
        assert!(parse("(q;q)").unwrap().eval(max_truncation() + 1).is_err());
    }

    #[test]
    fn eval_in_modular_mode_matches_reduction() {
        let src = "(q2;q2)(q5;q5)/((q;q)(q10;q10))";
        let exact = eval_str_in(src, CoeffMode::Exact, 120)
            .unwrap()
            .reduce_mod(4)
            .unwrap();
        let modular = eval_str_in(src, CoeffMode::Modular(4), 120).unwrap();
        assert_eq!(exact, modular);
    }

    #[test]
    fn subexpression_errors_carry_positions() {
        match parse("(q;q) + spam(1)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse("(q;q") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse("") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
