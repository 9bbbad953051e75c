//! Tagged k-words of a grammar by a fixpoint over bounded factor summaries,
//! the HOP(k) decision, and precedence relations.
//!
//! A word derived from a nonterminal is summarized exactly when it has at
//! most k symbols and by its (k−1)-prefix and (k−1)-suffix otherwise: no
//! k-window crossing the word's boundary can see more than that.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::fa::Nfa;
use crate::grammar::{ECFGrammar, GSym, TaggedGrammar};
use crate::symbol::{Symbol, Tag, Terminal};
use crate::tagged::{check_conflicts, end_word, Alphabet, ConflictReport, TagSet, TaggedWord};
use crate::tagging::tagged_grammar;

/// Bounded summary of one derived word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Partial {
    Exact(Vec<Symbol>),
    Long { pre: Vec<Symbol>, suf: Vec<Symbol> },
}

impl Partial {
    fn tail(&self) -> &[Symbol] {
        match self {
            Partial::Exact(w) => w,
            Partial::Long { suf, .. } => suf,
        }
    }

    pub fn prefix(&self, n: usize) -> &[Symbol] {
        match self {
            Partial::Exact(w) => &w[..w.len().min(n)],
            Partial::Long { pre, .. } => &pre[..pre.len().min(n)],
        }
    }

    pub fn suffix(&self, n: usize) -> &[Symbol] {
        let t = self.tail();
        &t[t.len().saturating_sub(n)..]
    }

    fn normalized(w: Vec<Symbol>, k: usize) -> Partial {
        if w.len() <= k {
            Partial::Exact(w)
        } else {
            Partial::Long {
                pre: w[..k - 1].to_vec(),
                suf: w[w.len() - (k - 1)..].to_vec(),
            }
        }
    }

    /// Appends one symbol, reporting the k-window it completes.
    fn push(&self, x: Symbol, k: usize, out: &mut BTreeSet<Vec<Symbol>>) -> Partial {
        let mut t = self.tail().to_vec();
        t.push(x);
        if t.len() >= k {
            let win = &t[t.len() - k..];
            if win[0].is_terminal() {
                out.insert(win.to_vec());
            }
        }
        match self {
            Partial::Exact(_) => Partial::normalized(t, k),
            Partial::Long { pre, .. } => Partial::Long {
                pre: pre.clone(),
                suf: t[1..].to_vec(),
            },
        }
    }

    /// Appends a whole summarized word.
    fn append(&self, v: &Partial, k: usize, out: &mut BTreeSet<Vec<Symbol>>) -> Partial {
        match v {
            Partial::Exact(w) => w.iter().fold(self.clone(), |p, &x| p.push(x, k, out)),
            Partial::Long { pre: pre2, suf: suf2 } => {
                let tail = self.tail();
                let mut s = tail.to_vec();
                s.extend_from_slice(pre2);
                for i in 0..tail.len() {
                    if i + k <= s.len() && s[i].is_terminal() {
                        out.insert(s[i..i + k].to_vec());
                    }
                }
                let pre = match self {
                    Partial::Exact(w) => {
                        let mut p = w.clone();
                        p.extend_from_slice(pre2);
                        p.truncate(k - 1);
                        p
                    }
                    Partial::Long { pre, .. } => pre.clone(),
                };
                Partial::Long {
                    pre,
                    suf: suf2.clone(),
                }
            }
        }
    }
}

impl fmt::Display for Partial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Partial::Exact(w) => f.write_str(&crate::symbol::pretty(w)),
            Partial::Long { pre, suf } => write!(
                f,
                "{}…{}",
                crate::symbol::pretty(pre),
                crate::symbol::pretty(suf)
            ),
        }
    }
}

/// Factor summary of one nonterminal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorAbstraction {
    pub summaries: BTreeSet<Partial>,
    /// Terminal-aligned k-windows lying inside some derived word.
    pub interior: BTreeSet<Vec<Symbol>>,
}

impl FactorAbstraction {
    pub fn shorts(&self) -> BTreeSet<Vec<Symbol>> {
        self.summaries
            .iter()
            .filter_map(|p| match p {
                Partial::Exact(w) => Some(w.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn prefixes(&self, k: usize) -> BTreeSet<Vec<Symbol>> {
        self.summaries.iter().map(|p| p.prefix(k - 1).to_vec()).collect()
    }

    pub fn suffixes(&self, k: usize) -> BTreeSet<Vec<Symbol>> {
        self.summaries.iter().map(|p| p.suffix(k - 1).to_vec()).collect()
    }
}

type Config = (usize, Partial);

/// One pass over a rule automaton given the current summaries.
fn analyze_rule(
    rule: &Nfa<GSym>,
    adj: &[Vec<(GSym, usize)>],
    current: &[FactorAbstraction],
    k: usize,
) -> FactorAbstraction {
    let mut index: HashMap<Config, usize> = HashMap::new();
    let mut configs: Vec<Config> = Vec::new();
    // (source, target, windows, nonterminal used)
    let mut edges: Vec<(usize, usize, BTreeSet<Vec<Symbol>>, Option<usize>)> = Vec::new();
    let mut stack = Vec::new();
    let mut intern = |c: Config, configs: &mut Vec<Config>, stack: &mut Vec<usize>| -> usize {
        if let Some(&i) = index.get(&c) {
            return i;
        }
        let i = configs.len();
        index.insert(c.clone(), i);
        configs.push(c);
        stack.push(i);
        i
    };
    for &s in &rule.initial {
        intern((s, Partial::Exact(Vec::new())), &mut configs, &mut stack);
    }
    while let Some(i) = stack.pop() {
        let (p, part) = configs[i].clone();
        for (g, q) in &adj[p] {
            match g {
                GSym::T(x) => {
                    let mut wins = BTreeSet::new();
                    let next = part.push(*x, k, &mut wins);
                    let j = intern((*q, next), &mut configs, &mut stack);
                    edges.push((i, j, wins, None));
                }
                GSym::N(y) => {
                    for v in &current[*y].summaries {
                        let mut wins = BTreeSet::new();
                        let next = part.append(v, k, &mut wins);
                        let j = intern((*q, next), &mut configs, &mut stack);
                        edges.push((i, j, wins, Some(*y)));
                    }
                }
            }
        }
    }
    let mut useful: Vec<bool> = configs.iter().map(|(p, _)| rule.finals.contains(p)).collect();
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); configs.len()];
    for (i, j, _, _) in &edges {
        back[*j].push(*i);
    }
    let mut work: Vec<usize> = (0..configs.len()).filter(|&i| useful[i]).collect();
    while let Some(j) = work.pop() {
        for &i in &back[j] {
            if !useful[i] {
                useful[i] = true;
                work.push(i);
            }
        }
    }
    let mut out = FactorAbstraction::default();
    for (i, (p, part)) in configs.iter().enumerate() {
        if rule.finals.contains(p) && !matches!(part, Partial::Exact(w) if w.is_empty()) && useful[i] {
            out.summaries.insert(part.clone());
        }
    }
    for (i, j, wins, used) in edges {
        if useful[i] && useful[j] {
            out.interior.extend(wins);
            if let Some(y) = used {
                out.interior.extend(current[y].interior.iter().cloned());
            }
        }
    }
    out
}

/// Least fixpoint of the per-rule propagation over a tagged grammar.
pub fn factor_abstraction(tg: &TaggedGrammar, k: usize) -> Vec<FactorAbstraction> {
    assert!(k % 2 == 1, "window width must be odd");
    let adj: Vec<_> = tg.rules().iter().map(|r| r.adjacency()).collect();
    let mut current = vec![FactorAbstraction::default(); tg.len()];
    loop {
        let mut changed = false;
        for x in 0..tg.len() {
            let next = analyze_rule(tg.rule(x), &adj[x], &current, k);
            if next != current[x] {
                current[x] = next;
                changed = true;
            }
        }
        if !changed {
            return current;
        }
    }
}

fn aligned_windows(s: &[Symbol], k: usize, out: &mut BTreeSet<Vec<Symbol>>) {
    if s.len() < k {
        return;
    }
    for i in 0..=s.len() - k {
        if s[i].is_terminal() {
            out.insert(s[i..i + k].to_vec());
        }
    }
}

/// φ_k of the wrapped sentences of a tagged grammar.
pub fn tagged_kwords_of_tagged(tg: &TaggedGrammar, k: usize) -> TagSet {
    let abs = factor_abstraction(tg, k);
    let e = end_word(k).into_symbols();
    let mut windows = BTreeSet::new();
    for &s in tg.axioms() {
        for p in &abs[s].summaries {
            match p {
                Partial::Exact(v) => {
                    let mut full = e.clone();
                    full.extend_from_slice(v);
                    full.extend_from_slice(&e);
                    aligned_windows(&full, k, &mut windows);
                }
                Partial::Long { pre, suf } => {
                    let mut left = e.clone();
                    left.extend_from_slice(pre);
                    aligned_windows(&left, k, &mut windows);
                    let mut right = suf.clone();
                    right.extend_from_slice(&e);
                    aligned_windows(&right, k, &mut windows);
                }
            }
        }
        windows.extend(abs[s].interior.iter().cloned());
    }
    to_tagset(k, windows, tg.terminals())
}

fn to_tagset(k: usize, windows: BTreeSet<Vec<Symbol>>, alphabet: Alphabet) -> TagSet {
    TagSet::new(
        k,
        windows.into_iter().map(TaggedWord::new_unchecked),
        alphabet,
    )
    .expect("windows have width k")
}

/// φ_k(⍟# L(Ḡ) ⍟#), possibly conflictual.
pub fn tagged_kwords_of_grammar(g: &ECFGrammar, k: usize) -> TagSet {
    tagged_kwords_of_tagged(&tagged_grammar(g), k)
}

/// Brute-force φ_k over the sentences of `tg` up to `max_len` symbols.
pub fn enumerated_kwords(tg: &TaggedGrammar, k: usize, max_len: usize) -> TagSet {
    let e = end_word(k).into_symbols();
    let mut windows = BTreeSet::new();
    for w in tg.enumerate(max_len) {
        let mut full = e.clone();
        full.extend(w);
        full.extend_from_slice(&e);
        aligned_windows(&full, k, &mut windows);
    }
    to_tagset(k, windows, tg.terminals())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopVerdict {
    pub k: usize,
    pub is_hop: bool,
    /// The tagged k-words, when conflict-free.
    pub phi: Option<TagSet>,
    /// Conflicting groups, when not.
    pub conflicts: Option<ConflictReport>,
}

impl HopVerdict {
    pub fn conflict_pairs(&self) -> Vec<(TaggedWord, TaggedWord)> {
        self.conflicts.as_ref().map(|c| c.pairs()).unwrap_or_default()
    }
}

impl fmt::Display for HopVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_hop {
            let n = self.phi.as_ref().map_or(0, |p| p.len());
            writeln!(f, "HOP({}): yes, {} tagged {}-words", self.k, n, self.k)
        } else {
            writeln!(f, "HOP({}): no", self.k)?;
            for g in &self.conflicts.as_ref().expect("conflicts").groups {
                let ws: Vec<String> = g.words.iter().map(|w| w.to_string()).collect();
                writeln!(
                    f,
                    "conflict: {}  (projection {})",
                    ws.join(" / "),
                    crate::symbol::plain_compact(&g.projection)
                )?;
            }
            Ok(())
        }
    }
}

fn verdict(kwords: TagSet) -> HopVerdict {
    let report = check_conflicts(&kwords);
    let k = kwords.k();
    if report.is_empty() {
        HopVerdict {
            k,
            is_hop: true,
            phi: Some(kwords),
            conflicts: None,
        }
    } else {
        HopVerdict {
            k,
            is_hop: false,
            phi: None,
            conflicts: Some(report),
        }
    }
}

pub fn hop_check(g: &ECFGrammar, k: usize) -> HopVerdict {
    verdict(tagged_kwords_of_grammar(g, k))
}

/// HOP check of a grammar that already carries its tags.
pub fn hop_check_tagged(tg: &TaggedGrammar, k: usize) -> HopVerdict {
    verdict(tagged_kwords_of_tagged(tg, k))
}

/// Smallest odd k ≤ `k_max` for which `g` is HOP(k).
pub fn minimal_k(g: &ECFGrammar, k_max: usize) -> Option<usize> {
    let tg = tagged_grammar(g);
    (3..=k_max)
        .step_by(2)
        .find(|&k| check_conflicts(&tagged_kwords_of_tagged(&tg, k)).is_empty())
}

/// Precedence relation glyph of a tag.
pub fn relation_glyph(t: Tag) -> &'static str {
    match t {
        Tag::Open => "⋖",
        Tag::Dot => "≐",
        Tag::Close => "⋗",
    }
}

/// Operator-precedence relations between terminals (with `#`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecedenceMatrix {
    pub terminals: Vec<Terminal>,
    pub cells: BTreeMap<(Terminal, Terminal), BTreeSet<Tag>>,
}

impl PrecedenceMatrix {
    pub fn relations(&self, a: Terminal, b: Terminal) -> BTreeSet<Tag> {
        self.cells.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn is_conflict_free(&self) -> bool {
        self.cells.values().all(|r| r.len() <= 1)
    }

    /// Every single relation as `a⋖b` strings, in table order.
    pub fn entries(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (&(a, b), rels) in &self.cells {
            for &t in rels {
                out.push(format!("{}{}{}", a.name(), relation_glyph(t), b.name()));
            }
        }
        out
    }

    pub fn cell_text(&self, a: Terminal, b: Terminal) -> String {
        let r = self.relations(a, b);
        match r.len() {
            0 => ".".into(),
            1 => relation_glyph(*r.iter().next().unwrap()).into(),
            _ => r.iter().map(|&t| relation_glyph(t)).collect::<Vec<_>>().join(""),
        }
    }

    /// Table with rows for the left terminal and columns for the right.
    pub fn table(&self) -> String {
        let width = self
            .terminals
            .iter()
            .map(|t| t.name().chars().count())
            .max()
            .unwrap_or(1)
            .max(3);
        let pad = |s: &str| format!("{s:<width$} ");
        let mut out = pad("");
        for &b in &self.terminals {
            out.push_str(&pad(b.name()));
        }
        out = out.trim_end().to_string();
        out.push('\n');
        for &a in &self.terminals {
            let mut line = pad(a.name());
            for &b in &self.terminals {
                line.push_str(&pad(&self.cell_text(a, b)));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Reads the relations off a set of tagged 3-words.
pub fn precedence_of(phi3: &TagSet, alphabet: &Alphabet) -> PrecedenceMatrix {
    let mut terminals: Vec<Terminal> = alphabet.proper();
    terminals.push(Terminal::hash());
    let mut cells: BTreeMap<(Terminal, Terminal), BTreeSet<Tag>> = BTreeMap::new();
    for w in phi3.words() {
        if let (Some(a), Some(t), Some(b)) = (w[0].as_terminal(), w[1].as_tag(), w[2].as_terminal()) {
            cells.entry((a, b)).or_default().insert(t);
        }
    }
    PrecedenceMatrix { terminals, cells }
}

pub fn op_relations(g: &ECFGrammar) -> PrecedenceMatrix {
    precedence_of(&tagged_kwords_of_grammar(g, 3), &g.terminals())
}
