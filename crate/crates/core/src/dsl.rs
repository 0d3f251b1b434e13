//! S-expression syntax for diagrams.
//!
//! ```text
//! TERM := (gen NAME) | (omega NAME) | (delayn N TERM) | (init N) | (deriv N)
//!       | (id TYPE) | (swap TYPE TYPE) | (seq TERM...) | (par TERM...)
//!       | (dtrace TYPE TERM) | (delay TYPE)
//! TYPE := 0 | 1 | w | (d N TYPE) | (+ TYPE...)
//! ```
//! `;` starts a comment that runs to the end of the line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Node};
use crate::types::{Color, StreamType};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: {source}")]
    Type { line: usize, col: usize, source: DiagramError },
}

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(String, usize, usize),
    List(Vec<Sexp>, usize, usize),
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom(_, l, c) | Sexp::List(_, l, c) => (*l, *c),
        }
    }
}

fn err_at<T>(s: &Sexp, msg: impl Into<String>) -> Result<T, DslError> {
    let (line, col) = s.pos();
    Err(DslError::Parse { line, col, msg: msg.into() })
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader { chars: src.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn fail<T>(&self, msg: &str) -> Result<T, DslError> {
        Err(DslError::Parse { line: self.line, col: self.col, msg: msg.to_string() })
    }

    fn read(&mut self) -> Result<Sexp, DslError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        match self.chars.peek() {
            None => self.fail("unexpected end of input"),
            Some(')') => self.fail("unexpected `)`"),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        None => return Err(DslError::Parse { line, col, msg: "unclosed `(`".into() }),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, line, col));
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, line, col))
            }
        }
    }
}

/// Generator signature: name to `(inputs, outputs)`.
pub trait Signature {
    fn arity(&self, name: &str) -> Option<(usize, usize)>;
}

impl<F: Fn(&str) -> Option<(usize, usize)>> Signature for F {
    fn arity(&self, name: &str) -> Option<(usize, usize)> {
        self(name)
    }
}

impl<B: crate::backend::Backend> Signature for crate::backend::Gens<'_, B> {
    fn arity(&self, name: &str) -> Option<(usize, usize)> {
        crate::backend::Gens::arity(self, name)
    }
}

pub fn parse_type(src: &str) -> Result<StreamType, DslError> {
    let mut r = Reader::new(src);
    let s = r.read()?;
    r.skip_ws();
    if r.chars.peek().is_some() {
        return r.fail("trailing input after type");
    }
    type_of_sexp(&s)
}

fn number(s: &Sexp) -> Result<usize, DslError> {
    match s {
        Sexp::Atom(a, ..) => a.parse().or_else(|_| err_at(s, format!("expected a number, found `{a}`"))),
        _ => err_at(s, "expected a number"),
    }
}

fn type_of_sexp(s: &Sexp) -> Result<StreamType, DslError> {
    match s {
        Sexp::Atom(a, ..) => match a.as_str() {
            "0" => Ok(StreamType::unit()),
            "1" => Ok(StreamType::base(0)),
            "w" => Ok(StreamType::omega(0)),
            _ => err_at(s, format!("unknown type `{a}`")),
        },
        Sexp::List(items, ..) => {
            let Some(Sexp::Atom(head, ..)) = items.first() else {
                return err_at(s, "expected `d` or `+`");
            };
            match head.as_str() {
                "d" if items.len() == 3 => Ok(type_of_sexp(&items[2])?.delayed(number(&items[1])?)),
                "+" => {
                    let mut t = StreamType::unit();
                    for it in &items[1..] {
                        t = t.concat(&type_of_sexp(it)?);
                    }
                    Ok(t)
                }
                _ => err_at(s, format!("malformed type `({head} …)`")),
            }
        }
    }
}

pub fn parse(src: &str, sig: &dyn Signature) -> Result<Diagram, DslError> {
    let mut r = Reader::new(src);
    let s = r.read()?;
    r.skip_ws();
    if r.chars.peek().is_some() {
        return r.fail("trailing input after term");
    }
    term(&s, sig, &mut Vec::new())
}

fn type_err(s: &Sexp, path: &[usize], e: DiagramError) -> DslError {
    let (line, col) = s.pos();
    DslError::Type { line, col, source: e.prefixed(path) }
}

fn term(s: &Sexp, sig: &dyn Signature, path: &mut Vec<usize>) -> Result<Diagram, DslError> {
    let Sexp::List(items, ..) = s else {
        return err_at(s, "expected a parenthesized term");
    };
    let Some(Sexp::Atom(head, ..)) = items.first() else {
        return err_at(s, "expected a term head");
    };
    let args = &items[1..];
    let want = |n: usize| -> Result<(), DslError> {
        if args.len() == n {
            Ok(())
        } else {
            err_at(s, format!("`{head}` takes {n} argument(s), got {}", args.len()))
        }
    };
    let gen_name = |a: &Sexp| -> Result<(String, usize, usize), DslError> {
        let Sexp::Atom(name, ..) = a else { return err_at(a, "expected a generator name") };
        match sig.arity(name) {
            Some((i, o)) => Ok((name.clone(), i, o)),
            None => err_at(a, format!("unknown generator `{name}`")),
        }
    };
    let children = |path: &mut Vec<usize>| -> Result<Vec<Diagram>, DslError> {
        let mut out = Vec::new();
        for (i, a) in args.iter().enumerate() {
            path.push(i);
            out.push(term(a, sig, path)?);
            path.pop();
        }
        Ok(out)
    };
    match head.as_str() {
        "gen" => {
            want(1)?;
            let (n, i, o) = gen_name(&args[0])?;
            Ok(Diagram::gen_iota(&n, 0, i, o))
        }
        "omega" => {
            want(1)?;
            let (n, i, o) = gen_name(&args[0])?;
            Ok(Diagram::gen_omega(&n, 0, i, o))
        }
        "delayn" => {
            want(2)?;
            let k = number(&args[0])?;
            Ok(term(&args[1], sig, path)?.delayed(k))
        }
        "init" => {
            want(1)?;
            Ok(Diagram::init(number(&args[0])?))
        }
        "deriv" => {
            want(1)?;
            Ok(Diagram::deriv(number(&args[0])?))
        }
        "id" => {
            want(1)?;
            Ok(Diagram::id(type_of_sexp(&args[0])?))
        }
        "swap" => {
            want(2)?;
            Ok(Diagram::swap(type_of_sexp(&args[0])?, type_of_sexp(&args[1])?))
        }
        "delay" => {
            want(1)?;
            Ok(Diagram::delay(type_of_sexp(&args[0])?))
        }
        "seq" => {
            let kids = children(path)?;
            if kids.is_empty() {
                return Ok(Diagram::id(StreamType::unit()));
            }
            Diagram::seq_raw(kids).map_err(|e| type_err(s, path, e))
        }
        "par" => Ok(Diagram::par_raw(children(path)?)),
        "dtrace" => {
            want(2)?;
            let c = type_of_sexp(&args[0])?;
            path.push(0);
            let body = term(&args[1], sig, path)?;
            path.pop();
            Diagram::dtrace(c, body).map_err(|e| type_err(s, path, e))
        }
        other => err_at(s, format!("unknown term `{other}`")),
    }
}

fn color_str(c: Color) -> String {
    c.to_string()
}

pub fn print_type(t: &StreamType) -> String {
    match t.len() {
        0 => "0".into(),
        1 => color_str(t.colors()[0]),
        _ => {
            let parts: Vec<String> = t.colors().iter().map(|&c| color_str(c)).collect();
            format!("(+ {})", parts.join(" "))
        }
    }
}

/// Canonical text; `parse(print(d)) == d`.
pub fn print(d: &Diagram) -> String {
    let mut s = String::new();
    write_term(d, &mut s);
    s
}

fn write_term(d: &Diagram, out: &mut String) {
    let gen = |out: &mut String, kw: &str, name: &str, delay: usize| {
        if delay == 0 {
            let _ = write!(out, "({kw} {name})");
        } else {
            let _ = write!(out, "(delayn {delay} ({kw} {name}))");
        }
    };
    match d.node() {
        Node::GenIota { name, delay, .. } => gen(out, "gen", name, *delay),
        Node::GenOmega { name, delay, .. } => gen(out, "omega", name, *delay),
        Node::Id(a) => {
            let _ = write!(out, "(id {})", print_type(a));
        }
        Node::Swap(a, b) => {
            let _ = write!(out, "(swap {} {})", print_type(a), print_type(b));
        }
        Node::Init(n) => {
            let _ = write!(out, "(init {n})");
        }
        Node::Deriv(n) => {
            let _ = write!(out, "(deriv {n})");
        }
        Node::Delay(c) => {
            let _ = write!(out, "(delay {})", print_type(c));
        }
        Node::Seq(v) | Node::Par(v) => {
            out.push_str(if matches!(d.node(), Node::Seq(_)) { "(seq" } else { "(par" });
            for c in v {
                out.push(' ');
                write_term(c, out);
            }
            out.push(')');
        }
        Node::DTrace(c, body) => {
            let _ = write!(out, "(dtrace {} ", print_type(c));
            write_term(body, out);
            out.push(')');
        }
    }
}
