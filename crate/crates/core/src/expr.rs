//! Transform expressions such as `Q7*K1,4`, `fbar^-1*L` or `(L*R)^3`.
//!
//! `A*B` means apply B first. Atoms that are not defined everywhere on the
//! universe (P on sevenths, K3,4 on triads) evaluate to partial maps, which can
//! be lifted to the unique group element agreeing with them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::{GeneratedGroup, Perm, Universe};
use crate::transforms::Atom;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Id,
    Atom(Atom),
    Name(String),
    Compose(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Id => write!(f, "Id"),
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Compose(a, b) => write!(f, "{a}*{b}"),
            Expr::Pow(e, k) => match **e {
                Expr::Compose(..) => write!(f, "({e})^{k}"),
                _ => write!(f, "{e}^{k}"),
            },
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = &self.src[start..self.pos];
        match text.parse::<i64>() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.power()?;
        while self.eat('*') || self.eat('·') {
            let rhs = self.power()?;
            e = Expr::Compose(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while self.eat('^') {
            let k = self.int()?;
            e = Expr::Pow(Box::new(e), k);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.eat('(') {
            let e = self.expr()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == '_') {
            self.pos += 1;
        }
        let head = &self.src[start..self.pos];
        let next_is_num = matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '-' || c == '+');
        match head {
            "" => self.err("expected a transform"),
            "T" | "I" | "Q" if next_is_num => {
                let n = self.int()?;
                Ok(Expr::Atom(match head {
                    "T" => Atom::T(n),
                    "I" => Atom::I(n),
                    _ => Atom::Q(n),
                }))
            }
            "K" if next_is_num => {
                let i = self.int()?;
                if !self.eat(',') {
                    return self.err("expected ',' in K index pair");
                }
                let j = self.int()?;
                if i < 1 || j < 1 {
                    return self.err("K indices are 1-based");
                }
                Ok(Expr::Atom(Atom::K(i as usize, j as usize)))
            }
            "P" => Ok(Expr::Atom(Atom::P)),
            "L" => Ok(Expr::Atom(Atom::L)),
            "R" => Ok(Expr::Atom(Atom::R)),
            "Id" => Ok(Expr::Id),
            _ => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                Ok(Expr::Name(self.src[start..self.pos].to_string()))
            }
        }
    }
}

/// Parses a transform expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// A map on part of a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialPerm {
    images: Vec<Option<u32>>,
}

impl PartialPerm {
    #[must_use]
    pub fn new(images: Vec<Option<u32>>) -> Self {
        PartialPerm { images }
    }

    #[must_use]
    pub fn total(p: &Perm) -> Self {
        PartialPerm { images: p.images().iter().map(|&y| Some(y)).collect() }
    }

    #[must_use]
    pub fn images(&self) -> &[Option<u32>] {
        &self.images
    }

    #[must_use]
    pub fn get(&self, x: usize) -> Option<usize> {
        self.images[x].map(|y| y as usize)
    }

    #[must_use]
    pub fn domain_size(&self) -> usize {
        self.images.iter().filter(|y| y.is_some()).count()
    }

    /// `self ∘ q`, defined where both steps are.
    #[must_use]
    pub fn compose(&self, q: &PartialPerm) -> PartialPerm {
        PartialPerm { images: q.images.iter().map(|y| y.and_then(|y| self.images[y as usize])).collect() }
    }

    pub fn inverse(&self) -> Result<PartialPerm> {
        let mut inv = vec![None; self.images.len()];
        for (x, y) in self.images.iter().enumerate() {
            if let Some(y) = y {
                if inv[*y as usize].is_some() {
                    return Err(Error::NotAPermutation("partial map is not injective".into()));
                }
                inv[*y as usize] = Some(x as u32);
            }
        }
        Ok(PartialPerm { images: inv })
    }

    pub fn pow(&self, k: i64) -> Result<PartialPerm> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = PartialPerm { images: (0..self.images.len() as u32).map(Some).collect() };
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        Ok(acc)
    }

    pub fn to_perm(&self) -> Result<Perm> {
        let images = self
            .images
            .iter()
            .map(|y| y.ok_or_else(|| Error::Scope("expression is not defined on the whole universe".into())))
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    #[must_use]
    pub fn agrees_with(&self, p: &Perm) -> bool {
        self.images.iter().enumerate().all(|(x, y)| y.is_none_or(|y| p.apply(x) == y as usize))
    }

    /// The unique element of `g` extending this map.
    pub fn resolve_in(&self, g: &GeneratedGroup) -> Result<Perm> {
        let Some((x, y)) = self.images.iter().enumerate().find_map(|(x, y)| y.map(|y| (x, y as usize))) else {
            return Err(Error::Scope("expression is undefined everywhere".into()));
        };
        let hits: Vec<&Perm> = g.elements().iter().filter(|p| p.apply(x) == y && self.agrees_with(p)).collect();
        match hits.as_slice() {
            [] => Err(Error::NotAMember),
            [p] => Ok((*p).clone()),
            _ => Err(Error::Verification(format!("{} group elements extend the expression", hits.len()))),
        }
    }
}

/// Universe plus named permutations available to expressions.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub universe: Arc<Universe>,
    pub names: HashMap<String, Perm>,
}

impl EvalContext {
    #[must_use]
    pub fn new(universe: Arc<Universe>) -> Self {
        EvalContext { universe, names: HashMap::new() }
    }

    #[must_use]
    pub fn with_name(mut self, name: impl Into<String>, p: Perm) -> Self {
        self.names.insert(name.into(), p);
        self
    }

    pub fn eval(&self, e: &Expr) -> Result<PartialPerm> {
        match e {
            Expr::Id => Ok(PartialPerm::total(&Perm::identity(self.universe.len()))),
            Expr::Atom(a) => Ok(PartialPerm::new(a.partial_images(&self.universe))),
            Expr::Name(n) => {
                let p = self.names.get(n).ok_or_else(|| Error::UnknownName(n.clone()))?;
                if p.len() != self.universe.len() {
                    return Err(Error::UniverseMismatch);
                }
                Ok(PartialPerm::total(p))
            }
            Expr::Compose(a, b) => Ok(self.eval(a)?.compose(&self.eval(b)?)),
            Expr::Pow(a, k) => self.eval(a)?.pow(*k),
        }
    }

    pub fn eval_str(&self, text: &str) -> Result<PartialPerm> {
        self.eval(&parse_expr(text)?)
    }

    /// Evaluates and requires a total permutation.
    pub fn perm(&self, text: &str) -> Result<Perm> {
        self.eval_str(text)?.to_perm()
    }

    /// Group generated by total expressions, each named by its own text.
    pub fn group(&self, exprs: &[&str]) -> Result<GeneratedGroup> {
        let gens = exprs
            .iter()
            .map(|e| self.perm(e).map(|p| ((*e).to_string(), p)))
            .collect::<Result<Vec<_>>>()?;
        GeneratedGroup::generate(self.universe.clone(), gens)
    }

    /// Evaluates and lifts into `g`.
    pub fn resolve(&self, text: &str, g: &GeneratedGroup) -> Result<Perm> {
        self.eval_str(text)?.resolve_in(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        assert_eq!(parse_expr("Q-4").unwrap(), Expr::Atom(Atom::Q(-4)));
        assert_eq!(parse_expr("K1,4").unwrap(), Expr::Atom(Atom::K(1, 4)));
        assert_eq!(parse_expr("Q7*K1,4").unwrap().to_string(), "Q7*K1,4");
        assert_eq!(parse_expr("fbar^-1").unwrap(), Expr::Pow(Box::new(Expr::Name("fbar".into())), -1));
        assert_eq!(parse_expr("(L*R)^3").unwrap().to_string(), "(L*R)^3");
        assert_eq!(parse_expr("Lbar").unwrap(), Expr::Name("Lbar".into()));
        assert!(matches!(parse_expr("K1"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_expr("T3)"), Err(Error::Parse { position: 2, .. })));
        assert!(parse_expr("").is_err());
    }
}
