//! Check-file syntax: parser and printer.
//!
//! ```text
//! # comment
//! patch M = (x, y, z)
//! use M
//! let omega = z*dx^dy
//! check dirac graph_two_form(omega) expect fail
//! ```
//!
//! Arguments are constructor calls `name(args)`, lists `[a, b]`, or
//! expressions in the polynomial grammar, where `dx` is a 1-form, `Dx` a
//! vector field and `^` between them a wedge product.

use std::fmt;

use num_traits::{One, Signed};

use crate::symalg::{is_identifier, parse_node, Node};

#[derive(Clone, Debug, PartialEq)]
pub enum VExpr {
    Call { name: String, args: Vec<VExpr> },
    List(Vec<VExpr>),
    Lit(Node),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Fail,
    Error,
}

impl Expect {
    pub fn as_str(self) -> &'static str {
        match self {
            Expect::Pass => "pass",
            Expect::Fail => "fail",
            Expect::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Patch { name: String, coords: Vec<String> },
    Use(String),
    Let { name: String, value: VExpr },
    Check {
        kind: String,
        args: Vec<VExpr>,
        expect: Expect,
        label: Option<String>,
    },
}

/// A statement with its 1-based source line.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub line: usize,
    pub stmt: Stmt,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckFile {
    pub lines: Vec<Line>,
}

impl CheckFile {
    /// Statements only, for comparisons that ignore layout.
    pub fn statements(&self) -> Vec<&Stmt> {
        self.lines.iter().map(|l| &l.stmt).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

struct ArgParser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col0: usize,
}

impl ArgParser<'_> {
    fn err(&self, at: usize, m: impl Into<String>) -> ParseError {
        perr(self.line, self.col0 + at + 1, m)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
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

    fn ident_at(&self, at: usize) -> Option<(String, usize)> {
        let rest = &self.src[at..];
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        let id = &rest[..len];
        is_identifier(id).then(|| (id.to_string(), at + len))
    }

    fn args(&mut self, close: Option<char>) -> Result<Vec<VExpr>, ParseError> {
        let mut out = Vec::new();
        self.skip_ws();
        if let Some(c) = close {
            if self.peek() == Some(c) {
                self.pos += 1;
                return Ok(out);
            }
        } else if self.pos >= self.src.len() {
            return Ok(out);
        }
        loop {
            out.push(self.vexpr()?);
            self.skip_ws();
            match (self.peek(), close) {
                (Some(','), _) => {
                    self.pos += 1;
                }
                (Some(c), Some(cl)) if c == cl => {
                    self.pos += 1;
                    return Ok(out);
                }
                (None, None) => return Ok(out),
                (None, Some(cl)) => return Err(self.err(self.pos, format!("expected `{cl}`"))),
                (Some(c), _) => return Err(self.err(self.pos, format!("unexpected `{c}`"))),
            }
        }
    }

    fn vexpr(&mut self) -> Result<VExpr, ParseError> {
        self.skip_ws();
        if self.peek() == Some('[') {
            self.pos += 1;
            return Ok(VExpr::List(self.args(Some(']'))?));
        }
        if let Some((name, end)) = self.ident_at(self.pos) {
            let mut after = end;
            while self.src[after..].starts_with(' ') {
                after += 1;
            }
            if self.src[after..].starts_with('(') {
                self.pos = after + 1;
                let args = self.args(Some(')'))?;
                return Ok(VExpr::Call { name, args });
            }
        }
        // literal: up to a top-level `,`, `)` or `]`
        let start = self.pos;
        let mut depth = 0i32;
        let mut end = self.src.len();
        for (i, c) in self.src[start..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' | ']' if depth == 0 => {
                    end = start + i;
                    break;
                }
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    end = start + i;
                    break;
                }
                '[' => return Err(self.err(start + i, "unexpected `[` in an expression")),
                _ => {}
            }
        }
        let text = &self.src[start..end];
        if text.trim().is_empty() {
            return Err(self.err(start, "expected an argument"));
        }
        let node = parse_node(text).map_err(|e| match e {
            crate::Error::Syntax { pos, message } => self.err(start + pos, message),
            other => self.err(start, other.to_string()),
        })?;
        self.pos = end;
        Ok(VExpr::Lit(node))
    }
}

fn parse_args(src: &str, line: usize, col0: usize) -> Result<Vec<VExpr>, ParseError> {
    let mut p = ArgParser {
        src,
        pos: 0,
        line,
        col0,
    };
    p.args(None)
}

fn parse_value(src: &str, line: usize, col0: usize) -> Result<VExpr, ParseError> {
    let mut args = parse_args(src, line, col0)?;
    if args.len() != 1 {
        return Err(perr(line, col0 + 1, "expected exactly one value"));
    }
    Ok(args.remove(0))
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    }
}

fn parse_line(raw: &str, line: usize) -> Result<Option<Stmt>, ParseError> {
    let text = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    if text.trim().is_empty() {
        return Ok(None);
    }
    let indent = text.len() - text.trim_start().len();
    let (kw, rest) = split_word(text);
    let col_of = |s: &str| raw.len() - s.len();
    let want_ident = |s: &str, what: &str| -> Result<String, ParseError> {
        let t = s.trim();
        if is_identifier(t) {
            Ok(t.to_string())
        } else {
            Err(perr(line, col_of(s.trim_start()) + 1, format!("expected {what}, found `{t}`")))
        }
    };
    let stmt = match kw {
        "patch" => {
            let (name, rhs) = rest
                .split_once('=')
                .ok_or_else(|| perr(line, indent + 1, "expected `patch NAME = (coords)`"))?;
            let name = want_ident(name, "a patch name")?;
            let rhs_t = rhs.trim();
            let inner = rhs_t
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| perr(line, col_of(rhs.trim_start()) + 1, "expected `(coords)`"))?;
            let coords = inner
                .split(',')
                .map(|c| want_ident(c, "a coordinate name"))
                .collect::<Result<Vec<_>, _>>()?;
            Stmt::Patch { name, coords }
        }
        "use" => Stmt::Use(want_ident(rest, "a name")?),
        "let" => {
            let (name, rhs) = rest
                .split_once('=')
                .ok_or_else(|| perr(line, indent + 1, "expected `let NAME = value`"))?;
            let name = want_ident(name, "a name")?;
            Stmt::Let {
                name,
                value: parse_value(rhs, line, col_of(rhs))?,
            }
        }
        "check" => {
            let (kind, mut args_src) = split_word(rest);
            if !is_identifier(kind) {
                return Err(perr(line, col_of(rest.trim_start()) + 1, "expected a check kind"));
            }
            let mut label = None;
            {
                let t = args_src.trim_end();
                if let Some(i) = t.rfind(char::is_whitespace) {
                    let (head, last) = (&t[..i], &t[i + 1..]);
                    let head_t = head.trim_end();
                    if let Some(before) = head_t.strip_suffix("as") {
                        if before.is_empty() || before.ends_with(char::is_whitespace) {
                            label = Some(last.to_string());
                            args_src = before;
                        }
                    }
                }
            }
            let mut expect = Expect::Pass;
            let trimmed = args_src.trim_end();
            for (word, e) in [("pass", Expect::Pass), ("fail", Expect::Fail), ("error", Expect::Error)] {
                let suffix = format!("expect {word}");
                if let Some(head) = trimmed.strip_suffix(&suffix) {
                    if head.is_empty() || head.ends_with(char::is_whitespace) {
                        expect = e;
                        args_src = head;
                        break;
                    }
                }
            }
            Stmt::Check {
                kind: kind.to_string(),
                args: parse_args(args_src, line, col_of(args_src))?,
                expect,
                label,
            }
        }
        other => {
            return Err(perr(line, indent + 1, format!("unknown statement `{other}`")));
        }
    };
    Ok(Some(stmt))
}

pub fn parse_checkfile(src: &str) -> Result<CheckFile, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        if let Some(stmt) = parse_line(raw, i + 1)? {
            lines.push(Line { line: i + 1, stmt });
        }
    }
    Ok(CheckFile { lines })
}

// ---- printing ----

type Body<'a> = Box<dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result + 'a>;

fn write_node(f: &mut fmt::Formatter<'_>, n: &Node, level: u8) -> fmt::Result {
    let (own, body): (u8, Body<'_>) = match n {
        Node::Num(q) => (
            4,
            Box::new(move |f: &mut fmt::Formatter<'_>| {
                if q.is_negative() {
                    // not produced by the parser; keep it readable
                    write!(f, "(0 - {})", -q)
                } else if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }),
        ),
        Node::Sym(s) => (4, Box::new(move |f: &mut fmt::Formatter<'_>| f.write_str(s))),
        Node::Add(a, b) | Node::Sub(a, b) => {
            let op = if matches!(n, Node::Add(..)) { " + " } else { " - " };
            (
                1,
                Box::new(move |f: &mut fmt::Formatter<'_>| {
                    write_node(f, a, 1)?;
                    f.write_str(op)?;
                    write_node(f, b, 2)
                }),
            )
        }
        Node::Mul(a, b) => (
            2,
            Box::new(move |f: &mut fmt::Formatter<'_>| {
                write_node(f, a, 2)?;
                f.write_str("*")?;
                write_node(f, b, 3)
            }),
        ),
        Node::Wedge(a, b) => (
            2,
            Box::new(move |f: &mut fmt::Formatter<'_>| {
                write_node(f, a, 2)?;
                f.write_str("^")?;
                // `a^3` would read as a power
                let rhs = NodeDisplay(b).to_string();
                if rhs.starts_with(|c: char| c.is_ascii_digit()) {
                    write!(f, "({rhs})")
                } else {
                    write_node(f, b, 3)
                }
            }),
        ),
        Node::Neg(a) => (
            3,
            Box::new(move |f: &mut fmt::Formatter<'_>| {
                f.write_str("-")?;
                write_node(f, a, 3)
            }),
        ),
        Node::Pow(a, k) => (
            3,
            Box::new(move |f: &mut fmt::Formatter<'_>| {
                write_node(f, a, 4)?;
                write!(f, "^{k}")
            }),
        ),
    };
    if own < level {
        f.write_str("(")?;
        body(f)?;
        f.write_str(")")
    } else {
        body(f)
    }
}

/// Source form of a syntax tree that parses back to the same tree.
pub struct NodeDisplay<'a>(pub &'a Node);

impl fmt::Display for NodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self.0, 0)
    }
}

impl fmt::Display for VExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VExpr::Lit(n) => write!(f, "{}", NodeDisplay(n)),
            VExpr::List(items) => write!(f, "[{}]", join(items)),
            VExpr::Call { name, args } => write!(f, "{name}({})", join(args)),
        }
    }
}

fn join(items: &[VExpr]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Patch { name, coords } => write!(f, "patch {name} = ({})", coords.join(", ")),
            Stmt::Use(n) => write!(f, "use {n}"),
            Stmt::Let { name, value } => write!(f, "let {name} = {value}"),
            Stmt::Check {
                kind,
                args,
                expect,
                label,
            } => {
                write!(f, "check {kind}")?;
                if !args.is_empty() {
                    write!(f, " {}", join(args))?;
                }
                if *expect != Expect::Pass {
                    write!(f, " expect {}", expect.as_str())?;
                }
                if let Some(l) = label {
                    write!(f, " as {l}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for CheckFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{}", l.stmt)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_statements() {
        let src = "patch M = (x, y, z)\n\n# note\nuse M\nlet w = z*dx^dy\ncheck dirac graph_two_form(w) expect fail\ncheck lie_algebroid lie_algebra(3, [1, 2, 3, 1]) as so3/jacobi\n";
        let cf = parse_checkfile(src).unwrap();
        assert_eq!(cf.lines.len(), 5);
        assert_eq!(cf.lines[2].line, 5);
        match &cf.lines[3].stmt {
            Stmt::Check { kind, args, expect, .. } => {
                assert_eq!(kind, "dirac");
                assert_eq!(*expect, Expect::Fail);
                assert!(matches!(&args[0], VExpr::Call { name, .. } if name == "graph_two_form"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(&cf.lines[4].stmt, Stmt::Check { label: Some(l), .. } if l == "so3/jacobi"));
        let again = parse_checkfile(&cf.to_string()).unwrap();
        assert_eq!(again.statements(), cf.statements());
    }

    #[test]
    fn printer_round_trips_tricky_nodes() {
        for s in [
            "x^2^dy",
            "dx^(3)",
            "-x*-y",
            "(x + y)*(x - y)",
            "x - (y - z)",
            "1/2*x^3 - -dx",
            "(dx + dy)^dz",
            "(-x)^2",
            "x^(3^2)",
            "x^(2*y)",
        ] {
            let n = parse_node(s).unwrap();
            let printed = NodeDisplay(&n).to_string();
            assert_eq!(parse_node(&printed).unwrap(), n, "{s} -> {printed}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_checkfile("patch M = (x, y)\ncheck dirac graph_two_form(x*+)").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.column > 20, "{e}");
        let e = parse_checkfile("frobnicate").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(parse_checkfile("check dirac f(x").is_err());
    }

    #[test]
    fn empty_file() {
        assert!(parse_checkfile("# nothing\n\n").unwrap().lines.is_empty());
    }
}
