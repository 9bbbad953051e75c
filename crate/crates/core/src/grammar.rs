//! Extended context-free grammars with automaton-valued rule bodies.
//!
//! File format, one rule per line (or several separated by `;`):
//!
//! ```text
//! ; comment
//! axioms: S
//! S -> X b X | b X
//! X -> a a*
//! ```
//!
//! Names starting with an uppercase letter are nonterminals; `[`, `]` and
//! `o` (or `⊙`) are tags; everything else is a terminal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::fa::{escape, Nfa};
use crate::regex::{self, Regex};
use crate::symbol::{self, Symbol, Tag, Terminal};
use crate::tagged::Alphabet;

/// A rule-body letter: a terminal or tag, or a nonterminal index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GSym {
    T(Symbol),
    N(usize),
}

impl GSym {
    pub fn is_nonterminal(self) -> bool {
        matches!(self, GSym::N(_))
    }

    pub fn is_tag(self) -> bool {
        matches!(self, GSym::T(Symbol::Tag(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ECFGrammar {
    names: Vec<String>,
    rules: Vec<Nfa<GSym>>,
    axioms: BTreeSet<usize>,
}

/// A grammar over terminals and tags.
pub type TaggedGrammar = ECFGrammar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    Ambiguous(String),
    CopyRule(String),
    NotOperatorForm(String),
    EmptyWord(String),
    Unproductive(String),
    Unreachable(String),
    NoAxiom,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Ambiguous(x) => write!(f, "rule for {x} is ambiguous"),
            Issue::CopyRule(x) => write!(f, "rule for {x} is a copy rule"),
            Issue::NotOperatorForm(x) => write!(f, "rule for {x} has adjacent nonterminals"),
            Issue::EmptyWord(x) => write!(f, "rule for {x} accepts the empty word"),
            Issue::Unproductive(x) => write!(f, "warning: {x} derives no terminal word"),
            Issue::Unreachable(x) => write!(f, "warning: {x} is unreachable from the axioms"),
            Issue::NoAxiom => write!(f, "no axiom derives a terminal word"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }

    /// True if the only findings are trimming warnings.
    pub fn is_valid(&self) -> bool {
        self.issues
            .iter()
            .all(|i| matches!(i, Issue::Unproductive(_) | Issue::Unreachable(_)))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return writeln!(f, "ok");
        }
        for i in &self.issues {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

fn is_nonterminal_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_uppercase())
}

impl ECFGrammar {
    /// Assembles a grammar; rule automata are trimmed but not validated.
    pub fn new(names: Vec<String>, rules: Vec<Nfa<GSym>>, axioms: BTreeSet<usize>) -> ECFGrammar {
        assert_eq!(names.len(), rules.len());
        ECFGrammar {
            names,
            rules: rules.iter().map(|r| r.trim()).collect(),
            axioms,
        }
    }

    pub fn empty() -> ECFGrammar {
        ECFGrammar::new(Vec::new(), Vec::new(), BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty() || self.axioms.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn rule(&self, x: usize) -> &Nfa<GSym> {
        &self.rules[x]
    }

    pub fn rules(&self) -> &[Nfa<GSym>] {
        &self.rules
    }

    pub fn axioms(&self) -> &BTreeSet<usize> {
        &self.axioms
    }

    /// Terminals used by the rules (tags excluded).
    pub fn terminals(&self) -> Alphabet {
        Alphabet::new(
            self.rules
                .iter()
                .flat_map(|r| r.labels())
                .filter_map(|g| match g {
                    GSym::T(Symbol::Term(t)) => Some(t),
                    _ => None,
                }),
        )
    }

    /// True if some rule body mentions a tag.
    pub fn has_tags(&self) -> bool {
        self.rules.iter().any(|r| r.labels().iter().any(|g| g.is_tag()))
    }

    pub fn sym_name(&self, g: GSym) -> String {
        match g {
            GSym::T(s) => s.token().to_string(),
            GSym::N(x) => self.names[x].clone(),
        }
    }

    pub fn sym_glyph(&self, g: GSym) -> String {
        match g {
            GSym::T(s) => s.to_string(),
            GSym::N(x) => self.names[x].clone(),
        }
    }

    /// Rule body as a regular expression.
    pub fn rule_regex(&self, x: usize) -> Regex<GSym> {
        self.rules[x].minimize().to_regex()
    }

    /// Compact display, e.g. `[a(⊙|Y)c⊙(b⊙)*b]`.
    pub fn rule_display(&self, x: usize) -> String {
        self.rule_regex(x).render(&|g: &GSym| self.sym_glyph(*g), "")
    }

    /// Hard checks plus trimming warnings.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        for (x, rule) in self.rules.iter().enumerate() {
            let name = &self.names[x];
            if !rule.is_unambiguous() {
                issues.push(Issue::Ambiguous(name.clone()));
            }
            if rule.accepts_empty() {
                issues.push(Issue::EmptyWord(name.clone()));
            }
            if is_copy_rule(rule) {
                issues.push(Issue::CopyRule(name.clone()));
            }
            if !is_operator_form(rule) {
                issues.push(Issue::NotOperatorForm(name.clone()));
            }
        }
        let productive = self.productive();
        let reachable = self.reachable();
        for x in 0..self.len() {
            if !productive[x] {
                issues.push(Issue::Unproductive(self.names[x].clone()));
            } else if !reachable[x] {
                issues.push(Issue::Unreachable(self.names[x].clone()));
            }
        }
        if !self.axioms.iter().any(|&s| productive[s]) {
            issues.push(Issue::NoAxiom);
        }
        ValidationReport { issues }
    }

    fn require_valid(&self) -> Result<()> {
        for issue in self.validate().issues {
            return Err(match issue {
                Issue::Ambiguous(x) => Error::AmbiguousRule(x),
                Issue::CopyRule(x) => Error::CopyRule(x),
                Issue::NotOperatorForm(x) => Error::NotOperatorForm(x),
                Issue::EmptyWord(x) => Error::EmptyWordRule(x),
                _ => continue,
            });
        }
        Ok(())
    }

    /// Nonterminals deriving at least one terminal word.
    pub fn productive(&self) -> Vec<bool> {
        let mut prod = vec![false; self.len()];
        loop {
            let mut changed = false;
            for x in 0..self.len() {
                if prod[x] {
                    continue;
                }
                let usable = self.restrict(&self.rules[x], &prod);
                if !usable.is_empty() {
                    prod[x] = true;
                    changed = true;
                }
            }
            if !changed {
                return prod;
            }
        }
    }

    fn restrict(&self, rule: &Nfa<GSym>, keep: &[bool]) -> Nfa<GSym> {
        let mut m = Nfa::with_states(rule.num_states());
        m.initial = rule.initial.clone();
        m.finals = rule.finals.clone();
        for (p, g, q) in rule.arcs() {
            if let GSym::N(y) = g {
                if !keep[*y] {
                    continue;
                }
            }
            m.add_arc(*p, *g, *q);
        }
        m.trim()
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<usize> = self.axioms.iter().copied().collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(x) = stack.pop() {
            for (_, g, _) in self.rules[x].arcs() {
                if let GSym::N(y) = g {
                    if !seen[*y] {
                        seen[*y] = true;
                        stack.push(*y);
                    }
                }
            }
        }
        seen
    }

    /// Removes unproductive and unreachable nonterminals and trims every
    /// rule automaton. Nonterminals keep their relative order.
    pub fn trim(&self) -> ECFGrammar {
        self.trim_with_map().0
    }

    /// As [`trim`](Self::trim), also mapping old indices to new ones.
    pub fn trim_with_map(&self) -> (ECFGrammar, Vec<Option<usize>>) {
        let prod = self.productive();
        let rules: Vec<Nfa<GSym>> = self.rules.iter().map(|r| self.restrict(r, &prod)).collect();
        let step = ECFGrammar {
            names: self.names.clone(),
            rules,
            axioms: self.axioms.iter().copied().filter(|&s| prod[s]).collect(),
        };
        let reach = step.reachable();
        let keep: Vec<bool> = (0..self.len()).map(|x| prod[x] && reach[x]).collect();
        step.retain(&keep)
    }

    /// Keeps the flagged nonterminals, renumbering; arcs to dropped ones go.
    fn retain(&self, keep: &[bool]) -> (ECFGrammar, Vec<Option<usize>>) {
        let mut map = vec![None; self.len()];
        let mut n = 0;
        for x in 0..self.len() {
            if keep[x] {
                map[x] = Some(n);
                n += 1;
            }
        }
        let mut names = Vec::new();
        let mut rules = Vec::new();
        for x in 0..self.len() {
            if !keep[x] {
                continue;
            }
            names.push(self.names[x].clone());
            let r = &self.rules[x];
            let mut m = Nfa::with_states(r.num_states());
            m.initial = r.initial.clone();
            m.finals = r.finals.clone();
            for (p, g, q) in r.arcs() {
                match g {
                    GSym::N(y) => {
                        if let Some(y2) = map[*y] {
                            m.add_arc(*p, GSym::N(y2), *q);
                        }
                    }
                    t => m.add_arc(*p, *t, *q),
                }
            }
            rules.push(m.trim());
        }
        let axioms = self.axioms.iter().filter_map(|&s| map[s]).collect();
        let g = ECFGrammar {
            names,
            rules,
            axioms,
        };
        (g, map)
    }

    /// Shortest terminal word of every productive nonterminal.
    pub fn productivity_witnesses(&self) -> Vec<Option<Vec<Symbol>>> {
        let mut best: Vec<Option<Vec<Symbol>>> = vec![None; self.len()];
        loop {
            let mut changed = false;
            for x in 0..self.len() {
                if let Some(w) = self.shortest_word(x, &best) {
                    if best[x].as_ref().is_none_or(|b| w.len() < b.len()) {
                        best[x] = Some(w);
                        changed = true;
                    }
                }
            }
            if !changed {
                return best;
            }
        }
    }

    /// Dijkstra over rule states with nonterminals costed by `known`.
    fn shortest_word(&self, x: usize, known: &[Option<Vec<Symbol>>]) -> Option<Vec<Symbol>> {
        let rule = &self.rules[x];
        let adj = rule.adjacency();
        let mut dist: HashMap<usize, Vec<Symbol>> = HashMap::new();
        let mut frontier: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &s in &rule.initial {
            dist.insert(s, Vec::new());
            frontier.insert((0, s));
        }
        while let Some((d, p)) = frontier.pop_first() {
            if dist[&p].len() != d {
                continue;
            }
            if rule.finals.contains(&p) {
                return Some(dist[&p].clone());
            }
            for (g, q) in &adj[p] {
                let piece: Vec<Symbol> = match g {
                    GSym::T(s) => vec![*s],
                    GSym::N(y) => match &known[*y] {
                        Some(w) => w.clone(),
                        None => continue,
                    },
                };
                let mut w = dist[&p].clone();
                w.extend(piece);
                if dist.get(q).is_none_or(|old| w.len() < old.len()) {
                    frontier.insert((w.len(), *q));
                    dist.insert(*q, w);
                }
            }
        }
        None
    }

    /// Every word of length ≤ `max_len` derivable from each nonterminal.
    pub fn languages(&self, max_len: usize) -> Vec<BTreeSet<Vec<Symbol>>> {
        let mut lang: Vec<BTreeSet<Vec<Symbol>>> = vec![BTreeSet::new(); self.len()];
        let adj: Vec<_> = self.rules.iter().map(|r| r.adjacency()).collect();
        loop {
            let mut changed = false;
            for x in 0..self.len() {
                let words = rule_words(&self.rules[x], &adj[x], &lang, max_len);
                if words.len() != lang[x].len() {
                    lang[x] = words;
                    changed = true;
                }
            }
            if !changed {
                return lang;
            }
        }
    }

    /// L(G) restricted to words of length ≤ `max_len` (tags count).
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<Vec<Symbol>> {
        let lang = self.languages(max_len);
        self.axioms
            .iter()
            .flat_map(|&s| lang[s].iter().cloned())
            .collect()
    }

    /// Terminal words only, for grammars without tags.
    pub fn enumerate_plain(&self, max_len: usize) -> BTreeSet<Vec<Terminal>> {
        self.enumerate(max_len)
            .into_iter()
            .map(|w| symbol::project(&w))
            .collect()
    }

    /// The parenthesis grammar: every rule body is wrapped in `(` … `)`.
    pub fn parenthesize(&self) -> Result<ECFGrammar> {
        let open = Terminal::new("(");
        let close = Terminal::new(")");
        let alpha = self.terminals();
        if alpha.contains(open) || alpha.contains(close) {
            return Err(Error::ParenthesesPresent);
        }
        let rules = self
            .rules
            .iter()
            .map(|r| {
                let mut m = r.clone();
                let s = m.add_state();
                let f = m.add_state();
                for &i in &r.initial {
                    m.add_arc(s, GSym::T(Symbol::Term(open)), i);
                }
                for &t in &r.finals {
                    m.add_arc(t, GSym::T(Symbol::Term(close)), f);
                }
                m.initial = BTreeSet::from([s]);
                m.finals = BTreeSet::from([f]);
                m.trim()
            })
            .collect();
        Ok(ECFGrammar::new(self.names.clone(), rules, self.axioms.clone()))
    }

    /// Renames nonterminals; `f` must be injective.
    pub fn renamed<F: Fn(&str) -> String>(&self, f: F) -> ECFGrammar {
        ECFGrammar {
            names: self.names.iter().map(|n| f(n)).collect(),
            rules: self.rules.clone(),
            axioms: self.axioms.clone(),
        }
    }

    /// Renames nonterminals by position.
    pub fn renamed_by_index<F: Fn(usize) -> String>(&self, f: F) -> ECFGrammar {
        ECFGrammar {
            names: (0..self.len()).map(f).collect(),
            rules: self.rules.clone(),
            axioms: self.axioms.clone(),
        }
    }

    /// The grammar with a different axiom set.
    pub fn with_axioms(&self, axioms: BTreeSet<usize>) -> ECFGrammar {
        ECFGrammar {
            axioms,
            ..self.clone()
        }
    }

    /// Grammar file text; re-parses to an equivalent grammar.
    pub fn to_file(&self) -> String {
        let axioms: Vec<&str> = self.axioms.iter().map(|&s| self.names[s].as_str()).collect();
        let mut out = format!("axioms: {}\n", axioms.join(" "));
        for x in 0..self.len() {
            let body = self
                .rule_regex(x)
                .render(&|g: &GSym| self.sym_name(*g), " ");
            out.push_str(&format!("{} -> {}\n", self.names[x], body));
        }
        out
    }

    /// Compact listing, one rule per line.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for x in 0..self.len() {
            let mark = if self.axioms.contains(&x) { " (axiom)" } else { "" };
            out.push_str(&format!("{} → {}{}\n", self.names[x], self.rule_display(x), mark));
        }
        out
    }

    /// DOT with one cluster per rule automaton.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph Grammar {\n  rankdir=LR;\n");
        for x in 0..self.len() {
            let r = &self.rules[x];
            out.push_str(&format!(
                "  subgraph cluster_{x} {{\n    label=\"{}\";\n",
                escape(&self.names[x])
            ));
            for s in 0..r.num_states() {
                let shape = if r.finals.contains(&s) {
                    "doublecircle"
                } else {
                    "circle"
                };
                out.push_str(&format!("    r{x}_{s} [label=\"{s}\", shape={shape}];\n"));
            }
            for &s in &r.initial {
                out.push_str(&format!(
                    "    r{x}_init{s} [shape=point];\n    r{x}_init{s} -> r{x}_{s};\n"
                ));
            }
            for (p, g, q) in r.arcs() {
                out.push_str(&format!(
                    "    r{x}_{p} -> r{x}_{q} [label=\"{}\"];\n",
                    escape(&self.sym_glyph(*g))
                ));
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for ECFGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Words of one rule body with nonterminals replaced by their current sets.
fn rule_words(
    rule: &Nfa<GSym>,
    adj: &[Vec<(GSym, usize)>],
    lang: &[BTreeSet<Vec<Symbol>>],
    max_len: usize,
) -> BTreeSet<Vec<Symbol>> {
    let mut out = BTreeSet::new();
    let mut seen: BTreeSet<(usize, Vec<Symbol>)> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<Symbol>)> = rule.initial.iter().map(|&s| (s, Vec::new())).collect();
    while let Some((p, w)) = stack.pop() {
        if !seen.insert((p, w.clone())) {
            continue;
        }
        if rule.finals.contains(&p) && !w.is_empty() {
            out.insert(w.clone());
        }
        for (g, q) in &adj[p] {
            match g {
                GSym::T(s) => {
                    if w.len() < max_len {
                        let mut w2 = w.clone();
                        w2.push(*s);
                        stack.push((*q, w2));
                    }
                }
                GSym::N(y) => {
                    for u in &lang[*y] {
                        if w.len() + u.len() <= max_len {
                            let mut w2 = w.clone();
                            w2.extend_from_slice(u);
                            stack.push((*q, w2));
                        }
                    }
                }
            }
        }
    }
    out
}

fn is_copy_rule(rule: &Nfa<GSym>) -> bool {
    let adj = rule.adjacency();
    rule.initial.iter().any(|&s| {
        adj[s]
            .iter()
            .any(|(g, q)| g.is_nonterminal() && rule.finals.contains(q))
    })
}

fn is_operator_form(rule: &Nfa<GSym>) -> bool {
    let r = rule.trim();
    let adj = r.adjacency();
    let adjacent = r
        .arcs()
        .any(|(_, g, q)| g.is_nonterminal() && adj[*q].iter().any(|(h, _)| h.is_nonterminal()));
    !adjacent
}

/// First-symbol classification of a name in a rule body.
fn resolve(name: &str, index: &HashMap<String, usize>) -> Result<GSym> {
    if let Some(t) = Tag::from_token(name) {
        return Ok(GSym::T(Symbol::Tag(t)));
    }
    if is_nonterminal_name(name) {
        return index
            .get(name)
            .map(|&x| GSym::N(x))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()));
    }
    if name == "#" {
        return Err(Error::Invalid("`#` is reserved for end-words".into()));
    }
    Ok(GSym::T(Symbol::term(name)))
}

/// Parses and validates a grammar file.
pub fn parse_grammar(text: &str) -> Result<ECFGrammar> {
    let mut axiom_names: Option<(usize, Vec<String>)> = None;
    let mut raw: Vec<(usize, String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("axioms:") {
            axiom_names = Some((lineno, rest.split_whitespace().map(String::from).collect()));
            continue;
        }
        for part in line.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (lhs, rhs) = part
                .split_once("->")
                .or_else(|| part.split_once('→'))
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: format!("expected `Name -> body`, found `{part}`"),
                })?;
            let lhs = lhs.trim();
            if !is_nonterminal_name(lhs) || lhs.split_whitespace().count() != 1 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("`{lhs}` is not a nonterminal name"),
                });
            }
            if raw.iter().any(|(_, n, _)| n == lhs) {
                return Err(Error::DuplicateRule(lhs.to_string()));
            }
            raw.push((lineno, lhs.to_string(), rhs.trim().to_string()));
        }
    }
    if raw.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no rules".into(),
        });
    }
    let index: HashMap<String, usize> = raw
        .iter()
        .enumerate()
        .map(|(i, (_, n, _))| (n.clone(), i))
        .collect();
    let mut rules = Vec::new();
    for (lineno, _, rhs) in &raw {
        let re = regex::parse(rhs).map_err(|e| Error::Parse {
            line: *lineno,
            msg: e.to_string(),
        })?;
        let mut resolved: BTreeMap<String, GSym> = BTreeMap::new();
        for name in re.symbols() {
            resolved.insert(name.clone(), resolve(name, &index)?);
        }
        rules.push(re.map(|n| resolved[n]).glushkov());
    }
    let axioms = match axiom_names {
        Some((lineno, names)) => {
            if names.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "empty axiom list".into(),
                });
            }
            names
                .iter()
                .map(|n| {
                    index
                        .get(n)
                        .copied()
                        .ok_or_else(|| Error::UnknownSymbol(n.clone()))
                })
                .collect::<Result<BTreeSet<usize>>>()?
        }
        None => BTreeSet::from([0]),
    };
    let names = raw.into_iter().map(|(_, n, _)| n).collect();
    let g = ECFGrammar::new(names, rules, axioms);
    g.require_valid()?;
    Ok(g)
}

/// Compares bounded languages; returns the shortest differing word.
pub fn bounded_language_equal(
    g1: &ECFGrammar,
    g2: &ECFGrammar,
    max_len: usize,
) -> (bool, Option<Vec<Symbol>>) {
    let a = g1.enumerate(max_len);
    let b = g2.enumerate(max_len);
    let witness = a
        .symmetric_difference(&b)
        .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
        .cloned();
    (witness.is_none(), witness)
}

/// Disjoint union of two grammars; clashing names of `g2` get a numeric
/// suffix.
pub fn disjoint_union(g1: &ECFGrammar, g2: &ECFGrammar) -> ECFGrammar {
    let mut taken: BTreeSet<String> = g1.names.iter().cloned().collect();
    let mut rename = Vec::new();
    for n in &g2.names {
        let mut cand = n.clone();
        let mut i = 2;
        while taken.contains(&cand) {
            cand = format!("{n}{i}");
            i += 1;
        }
        taken.insert(cand.clone());
        rename.push(cand);
    }
    let off = g1.len();
    let mut names = g1.names.clone();
    names.extend(rename);
    let mut rules = g1.rules.clone();
    rules.extend(g2.rules.iter().map(|r| {
        r.map_labels(|g| match g {
            GSym::N(y) => GSym::N(y + off),
            t => *t,
        })
    }));
    let mut axioms = g1.axioms.clone();
    axioms.extend(g2.axioms.iter().map(|s| s + off));
    ECFGrammar::new(names, rules, axioms)
}
