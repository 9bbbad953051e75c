//! Regular expressions for rule bodies and regular specs.
//!
//! Syntax: whitespace-separated symbol names combined with `|`, `*`, `+`,
//! `?` and parentheses. `[`, `]` and `⊙` are always single-character tokens,
//! so `[a` reads as two symbols. Compilation uses the position (Glushkov)
//! automaton.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fa::{Label, Nfa};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regex<L> {
    /// The empty language.
    Empty,
    Eps,
    Sym(L),
    Cat(Vec<Regex<L>>),
    Alt(Vec<Regex<L>>),
    Star(Box<Regex<L>>),
    Plus(Box<Regex<L>>),
    Opt(Box<Regex<L>>),
}

impl<L: Clone + PartialEq> Regex<L> {
    pub fn cat(parts: Vec<Regex<L>>) -> Regex<L> {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Regex::Empty => return Regex::Empty,
                Regex::Eps => {}
                Regex::Cat(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Regex::Eps,
            1 => out.pop().unwrap(),
            _ => Regex::Cat(out),
        }
    }

    pub fn alt(parts: Vec<Regex<L>>) -> Regex<L> {
        let mut out: Vec<Regex<L>> = Vec::new();
        let mut eps = false;
        for p in parts {
            match p {
                Regex::Empty => {}
                Regex::Eps => eps = true,
                Regex::Alt(inner) => {
                    for i in inner {
                        if !out.contains(&i) {
                            out.push(i);
                        }
                    }
                }
                other => {
                    if !out.contains(&other) {
                        out.push(other)
                    }
                }
            }
        }
        let body = match out.len() {
            0 => return if eps { Regex::Eps } else { Regex::Empty },
            1 => out.pop().unwrap(),
            _ => Regex::Alt(out),
        };
        if eps {
            Regex::opt(body)
        } else {
            body
        }
    }

    pub fn star(r: Regex<L>) -> Regex<L> {
        match r {
            Regex::Empty | Regex::Eps => Regex::Eps,
            Regex::Star(_) => r,
            Regex::Plus(inner) | Regex::Opt(inner) => Regex::Star(inner),
            other => Regex::Star(Box::new(other)),
        }
    }

    pub fn opt(r: Regex<L>) -> Regex<L> {
        match r {
            Regex::Empty | Regex::Eps => Regex::Eps,
            Regex::Star(_) | Regex::Opt(_) => r,
            Regex::Plus(inner) => Regex::Star(inner),
            other => Regex::Opt(Box::new(other)),
        }
    }

    pub fn plus(r: Regex<L>) -> Regex<L> {
        match r {
            Regex::Empty => Regex::Empty,
            Regex::Eps => Regex::Eps,
            Regex::Star(_) | Regex::Plus(_) => r,
            Regex::Opt(inner) => Regex::Star(inner),
            other => Regex::Plus(Box::new(other)),
        }
    }

    pub fn map<M, F: Fn(&L) -> M + Copy>(&self, f: F) -> Regex<M> {
        match self {
            Regex::Empty => Regex::Empty,
            Regex::Eps => Regex::Eps,
            Regex::Sym(l) => Regex::Sym(f(l)),
            Regex::Cat(v) => Regex::Cat(v.iter().map(|r| r.map(f)).collect()),
            Regex::Alt(v) => Regex::Alt(v.iter().map(|r| r.map(f)).collect()),
            Regex::Star(r) => Regex::Star(Box::new(r.map(f))),
            Regex::Plus(r) => Regex::Plus(Box::new(r.map(f))),
            Regex::Opt(r) => Regex::Opt(Box::new(r.map(f))),
        }
    }

    pub fn symbols(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Regex::Empty | Regex::Eps => {}
            Regex::Sym(l) => out.push(l),
            Regex::Cat(v) | Regex::Alt(v) => v.iter().for_each(|r| r.collect(out)),
            Regex::Star(r) | Regex::Plus(r) | Regex::Opt(r) => r.collect(out),
        }
    }
}

/// Position sets of a sub-expression.
struct Pos {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
    empty: bool,
}

impl<L: Label> Regex<L> {
    /// The position automaton: state 0 is initial, state i+1 is the i-th
    /// symbol occurrence.
    pub fn glushkov(&self) -> Nfa<L> {
        let mut labels = Vec::new();
        let mut follow: Vec<BTreeSet<usize>> = Vec::new();
        let top = self.positions(&mut labels, &mut follow);
        let mut m = Nfa::with_states(labels.len() + 1);
        if top.empty {
            return Nfa::new();
        }
        m.initial.insert(0);
        if top.nullable {
            m.finals.insert(0);
        }
        for &p in &top.last {
            m.finals.insert(p + 1);
        }
        for &p in &top.first {
            m.add_arc(0, labels[p].clone(), p + 1);
        }
        for (p, fs) in follow.iter().enumerate() {
            for &q in fs {
                m.add_arc(p + 1, labels[q].clone(), q + 1);
            }
        }
        m.trim()
    }

    fn positions(&self, labels: &mut Vec<L>, follow: &mut Vec<BTreeSet<usize>>) -> Pos {
        match self {
            Regex::Empty => Pos {
                nullable: false,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
                empty: true,
            },
            Regex::Eps => Pos {
                nullable: true,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
                empty: false,
            },
            Regex::Sym(l) => {
                labels.push(l.clone());
                follow.push(BTreeSet::new());
                let p = labels.len() - 1;
                Pos {
                    nullable: false,
                    first: BTreeSet::from([p]),
                    last: BTreeSet::from([p]),
                    empty: false,
                }
            }
            Regex::Cat(parts) => {
                let mut acc = Pos {
                    nullable: true,
                    first: BTreeSet::new(),
                    last: BTreeSet::new(),
                    empty: false,
                };
                for part in parts {
                    let p = part.positions(labels, follow);
                    if p.empty {
                        acc.empty = true;
                    }
                    for &l in &acc.last {
                        follow[l].extend(p.first.iter().copied());
                    }
                    if acc.nullable {
                        acc.first.extend(p.first.iter().copied());
                    }
                    if p.nullable {
                        acc.last.extend(p.last);
                    } else {
                        acc.last = p.last;
                    }
                    acc.nullable &= p.nullable;
                }
                acc
            }
            Regex::Alt(parts) => {
                let mut acc = Pos {
                    nullable: false,
                    first: BTreeSet::new(),
                    last: BTreeSet::new(),
                    empty: true,
                };
                for part in parts {
                    let p = part.positions(labels, follow);
                    if p.empty {
                        continue;
                    }
                    acc.empty = false;
                    acc.nullable |= p.nullable;
                    acc.first.extend(p.first);
                    acc.last.extend(p.last);
                }
                acc
            }
            Regex::Star(r) | Regex::Plus(r) => {
                let p = r.positions(labels, follow);
                for &l in &p.last {
                    follow[l].extend(p.first.iter().copied());
                }
                let star = matches!(self, Regex::Star(_));
                Pos {
                    nullable: p.nullable || star,
                    empty: p.empty && !star,
                    ..p
                }
            }
            Regex::Opt(r) => {
                let p = r.positions(labels, follow);
                Pos {
                    nullable: true,
                    empty: false,
                    ..p
                }
            }
        }
    }
}

impl<L> Regex<L> {
    fn prec(&self) -> u8 {
        match self {
            Regex::Alt(_) => 0,
            Regex::Cat(_) => 1,
            _ => 2,
        }
    }

    /// Renders with a symbol printer and separator between concatenated
    /// items (`" "` for files, `""` for compact display).
    pub fn render<F: Fn(&L) -> String>(&self, sym: &F, sep: &str) -> String {
        let wrap = |r: &Regex<L>, min: u8| {
            let s = r.render(sym, sep);
            if r.prec() < min {
                format!("({s})")
            } else {
                s
            }
        };
        match self {
            Regex::Empty => "∅".to_string(),
            Regex::Eps => "ε".to_string(),
            Regex::Sym(l) => sym(l),
            Regex::Cat(v) => v.iter().map(|r| wrap(r, 2)).collect::<Vec<_>>().join(sep),
            Regex::Alt(v) => v
                .iter()
                .map(|r| wrap(r, 1))
                .collect::<Vec<_>>()
                .join(if sep.is_empty() { "|" } else { " | " }),
            Regex::Star(r) => format!("{}*", wrap(r, 2)),
            Regex::Plus(r) => format!("{}+", wrap(r, 2)),
            Regex::Opt(r) => format!("{}?", wrap(r, 2)),
        }
    }
}

impl<L: fmt::Display> fmt::Display for Regex<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|l: &L| l.to_string(), " "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    Bar,
    Star,
    Plus,
    Opt,
}

fn tokenize(text: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<Tok>| {
        if !cur.is_empty() {
            out.push(Tok::Name(std::mem::take(cur)));
        }
    };
    for c in text.chars() {
        let tok = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '|' => Some(Tok::Bar),
            '*' => Some(Tok::Star),
            '+' => Some(Tok::Plus),
            '?' => Some(Tok::Opt),
            _ => None,
        };
        if let Some(t) = tok {
            flush(&mut cur, &mut out);
            out.push(t);
        } else if c.is_whitespace() {
            flush(&mut cur, &mut out);
        } else if c == '[' || c == ']' || c == '⊙' {
            flush(&mut cur, &mut out);
            out.push(Tok::Name(c.to_string()));
        } else {
            cur.push(c);
        }
    }
    flush(&mut cur, &mut out);
    out
}

/// Parses a regular expression over symbol names.
pub fn parse(text: &str) -> Result<Regex<String>> {
    let toks = tokenize(text);
    let mut pos = 0;
    let r = parse_alt(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(Error::Invalid(format!(
            "unexpected `{}` in `{}`",
            describe(&toks[pos]),
            text.trim()
        )));
    }
    Ok(r)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => n.clone(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Bar => "|".into(),
        Tok::Star => "*".into(),
        Tok::Plus => "+".into(),
        Tok::Opt => "?".into(),
    }
}

fn parse_alt(toks: &[Tok], pos: &mut usize) -> Result<Regex<String>> {
    let mut alts = vec![parse_cat(toks, pos)?];
    while toks.get(*pos) == Some(&Tok::Bar) {
        *pos += 1;
        alts.push(parse_cat(toks, pos)?);
    }
    Ok(if alts.len() == 1 {
        alts.pop().unwrap()
    } else {
        Regex::Alt(alts)
    })
}

fn parse_cat(toks: &[Tok], pos: &mut usize) -> Result<Regex<String>> {
    let mut parts = Vec::new();
    while let Some(t) = toks.get(*pos) {
        let atom = match t {
            Tok::Name(n) => {
                *pos += 1;
                Regex::Sym(n.clone())
            }
            Tok::LParen => {
                *pos += 1;
                let inner = parse_alt(toks, pos)?;
                if toks.get(*pos) != Some(&Tok::RParen) {
                    return Err(Error::Invalid("unbalanced parentheses".into()));
                }
                *pos += 1;
                inner
            }
            _ => break,
        };
        let mut atom = atom;
        while let Some(op) = toks.get(*pos) {
            atom = match op {
                Tok::Star => Regex::Star(Box::new(atom)),
                Tok::Plus => Regex::Plus(Box::new(atom)),
                Tok::Opt => Regex::Opt(Box::new(atom)),
                _ => break,
            };
            *pos += 1;
        }
        parts.push(atom);
    }
    match parts.len() {
        0 => Err(Error::Invalid("empty alternative".into())),
        1 => Ok(parts.pop().unwrap()),
        _ => Ok(Regex::Cat(parts)),
    }
}
