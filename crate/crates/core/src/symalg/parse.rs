//! Tokenizer and recursive-descent parser for the expression grammar.
//!
//! The same syntax tree serves plain polynomials and, in the checkfile
//! language, forms and vector fields. `a^b` with a natural-number exponent is
//! a power; any other right operand of `^` is a wedge product.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::expr::Expr;
use super::patch::Patch;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(BigRational),
    Sym(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Wedge(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Nat(u32),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = src[start..i].parse().expect("digits");
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(syntax(i, "expected denominator after `/`"));
                    }
                    let den: BigInt = src[dstart..j].parse().expect("digits");
                    if den.is_zero() {
                        return Err(syntax(dstart, "zero denominator"));
                    }
                    out.push((start, Tok::Num(BigRational::new(num, den))));
                    i = j;
                } else {
                    let tok = match u32::try_from(&num) {
                        Ok(n) => Tok::Nat(n),
                        Err(_) => Tok::Num(BigRational::from_integer(num)),
                    };
                    out.push((start, tok));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Caret) => {
                    self.bump();
                    lhs = Node::Wedge(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Node::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if let (Some(Tok::Caret), Some((_, Tok::Nat(n)))) =
            (self.peek(), self.toks.get(self.pos + 1))
        {
            let n = *n;
            self.pos += 2;
            return Ok(Node::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Node> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Nat(n)) => Ok(Node::Num(BigRational::from_integer(n.into()))),
            Some(Tok::Num(q)) => Ok(Node::Num(q)),
            Some(Tok::Ident(s)) => Ok(Node::Sym(s)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(syntax(at, "unclosed parenthesis")),
                }
            }
            Some(t) => Err(syntax(at, format!("unexpected token {t:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parse source text into a syntax tree.
pub fn parse_node(src: &str) -> Result<Node> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        end: src.len(),
    };
    let node = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "trailing input"));
    }
    Ok(node)
}

/// Evaluate a syntax tree to a polynomial, resolving names against `patch`.
pub fn node_to_expr(node: &Node, patch: &Patch) -> Result<Expr> {
    Ok(match node {
        Node::Num(q) => Expr::constant(patch, q.clone()),
        Node::Sym(s) => Expr::coord(patch, s)?,
        Node::Neg(a) => -node_to_expr(a, patch)?,
        Node::Add(a, b) => node_to_expr(a, patch)? + node_to_expr(b, patch)?,
        Node::Sub(a, b) => node_to_expr(a, patch)? - node_to_expr(b, patch)?,
        Node::Mul(a, b) => node_to_expr(a, patch)? * node_to_expr(b, patch)?,
        Node::Pow(a, n) => node_to_expr(a, patch)?.pow(*n),
        Node::Wedge(..) => {
            return Err(syntax(0, "wedge product in a scalar expression"));
        }
    })
}

pub fn parse_expr(src: &str, patch: &Patch) -> Result<Expr> {
    node_to_expr(&parse_node(src)?, patch)
}
