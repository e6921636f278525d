//! Polynomials in abstract ℘/Q symbols with λ-polynomial coefficients.
//!
//! Text syntax, used by the catalog and the CLI:
//!
//! ```text
//! P444^2 = 4*P44^3 - 4*P44*P33 + P34^2 - 4*P23 + 2*l4*P34 + l4^2 - 4*l3
//! Q2444_1(v)        derivative in u1 of Q2444, evaluated at the second argument
//! ```
//!
//! `P<digits>` is ℘ with the given indices, `Q<digits>` is the Hirota Q,
//! `_<digits>` appends derivatives to a Q, `l0..l4` are the curve constants,
//! `(u)` or `(v)` selects the argument. Multiplication may be implicit.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::grading::lambda::LambdaPoly;
use crate::grading::monomial::{Monomial, LAMBDA_COUNT};
use crate::grading::varspec::U_WEIGHTS;
use crate::rational::Rational;

/// Sorted multiset of indices in `1..=4`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PIndex(Vec<u8>);

impl PIndex {
    pub fn new(mut idx: Vec<u8>) -> Result<PIndex> {
        if idx.iter().any(|&i| !(1..=4).contains(&i)) {
            return Err(Error::InvalidIndex(format!("{idx:?}: indices must lie in 1..=4")));
        }
        idx.sort_unstable();
        Ok(PIndex(idx))
    }

    pub fn parse(digits: &str) -> Result<PIndex> {
        let idx = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidIndex(digits.to_string()))
            })
            .collect::<Result<Vec<u8>>>()?;
        PIndex::new(idx)
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with(&self, k: u8) -> PIndex {
        let mut v = self.0.clone();
        v.push(k);
        v.sort_unstable();
        PIndex(v)
    }

    /// Sum of the u-weights of the indices.
    pub fn weight(&self) -> i64 {
        self.0.iter().map(|&i| U_WEIGHTS[i as usize - 1]).sum()
    }

    /// Zero-based slots, for indexing u-variables.
    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize - 1)
    }
}

impl fmt::Display for PIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Arg {
    U,
    V,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    /// ℘ with all indices; two or more.
    P { idx: PIndex, arg: Arg },
    /// Hirota Q with label indices and genuine derivatives applied afterwards.
    Q { idx: PIndex, deriv: PIndex, arg: Arg },
}

impl Sym {
    pub fn p(idx: &str) -> Sym {
        Sym::P {
            idx: PIndex::parse(idx).expect("valid index"),
            arg: Arg::U,
        }
    }

    pub fn q(idx: &str) -> Sym {
        Sym::Q {
            idx: PIndex::parse(idx).expect("valid index"),
            deriv: PIndex(Vec::new()),
            arg: Arg::U,
        }
    }

    pub fn arg(&self) -> Arg {
        match self {
            Sym::P { arg, .. } | Sym::Q { arg, .. } => *arg,
        }
    }

    pub fn with_arg(&self, a: Arg) -> Sym {
        match self {
            Sym::P { idx, .. } => Sym::P {
                idx: idx.clone(),
                arg: a,
            },
            Sym::Q { idx, deriv, .. } => Sym::Q {
                idx: idx.clone(),
                deriv: deriv.clone(),
                arg: a,
            },
        }
    }

    /// Sato weight of the function.
    pub fn weight(&self) -> i64 {
        match self {
            Sym::P { idx, .. } => -idx.weight(),
            Sym::Q { idx, deriv, .. } => -idx.weight() - deriv.weight(),
        }
    }

    /// Order of the pole along σ = 0, i.e. the σ-power that clears it.
    pub fn pole_order(&self) -> u32 {
        match self {
            Sym::P { idx, .. } => idx.len() as u32,
            Sym::Q { deriv, .. } => 2 + deriv.len() as u32,
        }
    }

    /// Derivative in `u_k` (1-based).
    pub fn derivative(&self, k: u8) -> Sym {
        match self {
            Sym::P { idx, arg } => Sym::P {
                idx: idx.with(k),
                arg: *arg,
            },
            Sym::Q { idx, deriv, arg } => Sym::Q {
                idx: idx.clone(),
                deriv: deriv.with(k),
                arg: *arg,
            },
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arg = |a: &Arg| match a {
            Arg::U => "",
            Arg::V => "(v)",
        };
        match self {
            Sym::P { idx, arg: a } => write!(f, "P{idx}{}", arg(a)),
            Sym::Q { idx, deriv, arg: a } => {
                write!(f, "Q{idx}")?;
                if !deriv.is_empty() {
                    write!(f, "_{deriv}")?;
                }
                write!(f, "{}", arg(a))
            }
        }
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse polynomial: sorted symbol multiset → λ-polynomial coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Expr {
    terms: BTreeMap<Vec<Sym>, LambdaPoly>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn constant(c: LambdaPoly) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn rational(c: Rational) -> Self {
        Self::constant(LambdaPoly::constant(c))
    }

    pub fn sym(s: Sym) -> Self {
        Self::term(vec![s], LambdaPoly::one())
    }

    pub fn term(mut syms: Vec<Sym>, c: LambdaPoly) -> Self {
        syms.sort();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(syms, c);
        }
        Expr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Sym>, &LambdaPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, syms: &[Sym]) -> LambdaPoly {
        let mut key = syms.to_vec();
        key.sort();
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(k.clone()).or_default();
            *e = e.add(c);
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Expr { terms }
    }

    pub fn neg(&self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LambdaPoly) -> Expr {
        let mut out = Expr::zero();
        for (k, a) in &self.terms {
            out = out.add(&Expr::term(k.clone(), a.mul(c)));
        }
        out
    }

    /// Substitutes the λ values marked `Some` in every coefficient.
    pub fn specialize(&self, values: &[Option<Rational>; LAMBDA_COUNT]) -> Expr {
        let mut out = Expr::zero();
        for (k, a) in &self.terms {
            out = out.add(&Expr::term(k.clone(), a.specialize(values)));
        }
        out
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut k = ka.clone();
                k.extend(kb.iter().cloned());
                out = out.add(&Expr::term(k, ca.mul(cb)));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Expr {
        let mut acc = Expr::rational(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Derivative in `u_k` (1-based) of the symbols evaluated at `arg`.
    pub fn derivative(&self, k: u8, arg: Arg) -> Expr {
        let mut out = Expr::zero();
        for (syms, c) in &self.terms {
            for i in 0..syms.len() {
                if syms[i].arg() != arg {
                    continue;
                }
                let mut k2 = syms.clone();
                k2[i] = syms[i].derivative(k);
                out = out.add(&Expr::term(k2, c.clone()));
            }
        }
        out
    }

    /// Re-targets every symbol evaluated at `from` onto `to`.
    pub fn map_arg(&self, from: Arg, to: Arg) -> Expr {
        self.map_syms(|s| if s.arg() == from { s.with_arg(to) } else { s.clone() })
    }

    /// Exchanges the two arguments.
    pub fn swap_args(&self) -> Expr {
        self.map_syms(|s| match s.arg() {
            Arg::U => s.with_arg(Arg::V),
            Arg::V => s.with_arg(Arg::U),
        })
    }

    fn map_syms(&self, f: impl Fn(&Sym) -> Sym) -> Expr {
        let mut out = Expr::zero();
        for (syms, c) in &self.terms {
            out = out.add(&Expr::term(syms.iter().map(&f).collect(), c.clone()));
        }
        out
    }

    /// Distinct symbols in use.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.terms.keys().flatten().cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn uses_arg(&self, arg: Arg) -> bool {
        self.terms.keys().flatten().any(|s| s.arg() == arg)
    }

    /// Weights of every additive term, λ-monomials counted separately.
    pub fn term_weights(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for (syms, c) in &self.terms {
            let base: i64 = syms.iter().map(Sym::weight).sum();
            for (m, _) in c.terms() {
                out.push(base + m.lambda_weight());
            }
        }
        out
    }

    /// Replaces symbols with values from the table; the rest stay symbolic.
    pub fn substitute(&self, table: &BTreeMap<Sym, Expr>) -> Expr {
        let mut out = Expr::zero();
        for (syms, c) in &self.terms {
            let mut acc = Expr::constant(c.clone());
            for s in syms {
                let f = table.get(s).cloned().unwrap_or_else(|| Expr::sym(s.clone()));
                acc = acc.mul(&f);
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn as_constant(&self) -> Option<LambdaPoly> {
        match self.terms.len() {
            0 => Some(LambdaPoly::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (syms, c) in &self.terms {
            for (m, r) in c.terms() {
                let neg = r.signum() < 0;
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { '-' } else { '+' })?;
                }
                first = false;
                let mag = r.abs();
                let mut parts: Vec<String> = Vec::new();
                if !mag.is_one() || (syms.is_empty() && *m == Monomial::ONE) {
                    parts.push(mag.to_string());
                }
                if *m != Monomial::ONE {
                    let mut s = String::new();
                    crate::grading::lambda::write_lambda_monomial(&mut s, *m)?;
                    parts.push(s);
                }
                let mut i = 0;
                while i < syms.len() {
                    let mut j = i;
                    while j < syms.len() && syms[j] == syms[i] {
                        j += 1;
                    }
                    if j - i == 1 {
                        parts.push(syms[i].to_string());
                    } else {
                        parts.push(format!("{}^{}", syms[i], j - i));
                    }
                    i = j;
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Sym(Sym),
    Lambda(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |msg: String| Error::Parse(format!("{msg} in `{text}`"));
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                let rest: String = chars[i..].iter().take(3).collect();
                if rest == "(u)" || rest == "(v)" {
                    let arg = if rest == "(u)" { Arg::U } else { Arg::V };
                    match out.last_mut() {
                        Some(Tok::Sym(s)) => *s = s.with_arg(arg),
                        _ => return Err(err("argument marker without a symbol".into())),
                    }
                    i += 3;
                } else {
                    out.push(Tok::LParen);
                    i += 1;
                }
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '=' => {
                out.push(Tok::Eq);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse().map_err(|_| err(format!("bad number {s}")))?));
            }
            'l' => {
                let d = chars
                    .get(i + 1)
                    .and_then(|c| c.to_digit(10))
                    .filter(|d| *d <= 4)
                    .ok_or_else(|| err("expected l0..l4".into()))?;
                out.push(Tok::Lambda(d as usize));
                i += 2;
            }
            'P' | 'Q' => {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let idx = PIndex::parse(&digits)?;
                let sym = if c == 'P' {
                    if idx.len() < 2 {
                        return Err(err(format!("P{digits} needs two or more indices")));
                    }
                    Sym::P { idx, arg: Arg::U }
                } else {
                    if idx.len() != 4 && idx.len() != 6 {
                        return Err(err(format!("Q{digits} needs four or six indices")));
                    }
                    let mut deriv = PIndex(Vec::new());
                    if i < chars.len() && chars[i] == '_' {
                        i += 1;
                        let ds = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        let dd: String = chars[ds..i].iter().collect();
                        deriv = PIndex::parse(&dd)?;
                    }
                    Sym::Q {
                        idx,
                        deriv,
                        arg: Arg::U,
                    }
                };
                out.push(Tok::Sym(sym));
            }
            _ => return Err(err(format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = d
                        .as_constant()
                        .and_then(|p| p.as_constant())
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                    acc = acc.scale(&LambdaPoly::constant(c.recip()));
                }
                Some(Tok::Num(_) | Tok::Sym(_) | Tok::Lambda(_) | Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(n)) if n.is_integer() && n.signum() >= 0 => {
                    let e: u32 = n
                        .to_string()
                        .parse()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("expected a non-negative integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Expr::rational(n)),
            Some(Tok::Sym(s)) => Ok(Expr::sym(s)),
            Some(Tok::Lambda(j)) => Ok(Expr::constant(LambdaPoly::lambda(j))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse("unbalanced parenthesis".into())),
                }
            }
            Some(Tok::Minus) => Ok(self.power()?.neg()),
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a polynomial expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{text}`")));
    }
    Ok(e)
}

/// Parses `lhs = rhs` into the pair of sides.
pub fn parse_relation(text: &str) -> Result<(Expr, Expr)> {
    let toks = lex(text)?;
    let eqs: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == Tok::Eq)
        .map(|(i, _)| i)
        .collect();
    if eqs.len() != 1 {
        return Err(Error::Parse(format!("expected exactly one `=` in `{text}`")));
    }
    let split = eqs[0];
    let side = |toks: Vec<Tok>| -> Result<Expr> {
        let mut p = Parser { toks, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in `{text}`")));
        }
        Ok(e)
    };
    Ok((side(toks[..split].to_vec())?, side(toks[split + 1..].to_vec())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e = parse_expr("P444^2 - 4*P44^3 + 2*l4*P34 + l4^2 - 4*l3").unwrap();
        assert_eq!(e.len(), 4);
        let again = parse_expr(&e.to_string()).unwrap();
        assert_eq!(again, e);
        let w = e.term_weights();
        assert!(w.iter().all(|&x| x == -6), "{w:?}");
    }

    #[test]
    fn implicit_products_and_fractions() {
        let a = parse_expr("3/2 l3 P33 - 1/2 Q2333").unwrap();
        let b = parse_expr("3/2*l3*P33 - (1/2)*Q2333").unwrap();
        assert_eq!(a, b);
        let c = parse_expr("-(l0 + l4 l1) P33").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&[Sym::p("33")]).len(), 2);
    }

    #[test]
    fn indices_are_sorted_and_args_tracked() {
        let a = parse_expr("P43 + Q4432_1(v)").unwrap();
        let syms = a.symbols();
        assert_eq!(syms[0], Sym::p("34"));
        assert_eq!(syms[1].to_string(), "Q2344_1(v)");
        assert_eq!(syms[1].weight(), -8 - 7);
        assert_eq!(syms[1].pole_order(), 3);
        assert!(parse_expr("Q123").is_err());
        assert!(parse_expr("P1").is_err());
        assert!(parse_expr("P15").is_err());
    }

    #[test]
    fn relation_split_and_derivative() {
        let (l, r) = parse_relation("Q4444 = -3*P33").unwrap();
        let res = l.sub(&r);
        assert_eq!(res.term_weights(), vec![-4, -4]);
        let d = parse_expr("P44*P33").unwrap().derivative(4, Arg::U);
        assert_eq!(d, parse_expr("P444*P33 + P44*P334").unwrap());
        assert!(parse_relation("P11 = P22 = P33").is_err());
    }

    #[test]
    fn swapping_arguments() {
        let e = parse_expr("P11(u)*P44(v)").unwrap();
        assert_eq!(e.swap_args(), parse_expr("P11(v)*P44").unwrap());
    }
}
