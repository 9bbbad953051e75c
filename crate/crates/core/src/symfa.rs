//! The k-symmetrical automaton of a window set.
//!
//! A state pairs the look-back and look-ahead (k-1)-windows around the
//! reading head. The automaton reads the content between the two end-words,
//! i.e. `[x]` for a tagged word `x`, or `⊙` for the final string; `#` is
//! never read.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::fa::{escape, Nfa};
use crate::symbol::{self, Symbol, Tag, Terminal};
use crate::tagged::{self, derive_window_set, end_word, TagSet, TaggedWord, WindowSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymState {
    pub lookback: Vec<Symbol>,
    pub lookahead: Vec<Symbol>,
}

impl fmt::Display for SymState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})",
            symbol::pretty(&self.lookback),
            symbol::pretty(&self.lookahead)
        )
    }
}

impl fmt::Debug for SymState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct SymFA {
    k: usize,
    states: Vec<SymState>,
    index: HashMap<SymState, usize>,
    out: Vec<Vec<(Symbol, usize)>>,
    initial: Vec<usize>,
    finals: Vec<bool>,
}

impl SymFA {
    /// Assembles an automaton from explicit parts without checking any of
    /// the structural invariants. Useful for counterexamples.
    pub fn from_parts(
        k: usize,
        states: Vec<SymState>,
        arcs: &[(usize, Symbol, usize)],
        initial: &[usize],
        finals: &[usize],
    ) -> SymFA {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut out = vec![Vec::new(); states.len()];
        for &(p, a, q) in arcs {
            out[p].push((a, q));
        }
        let mut fin = vec![false; states.len()];
        for &f in finals {
            fin[f] = true;
        }
        SymFA {
            k,
            states,
            index,
            out,
            initial: initial.to_vec(),
            finals: fin,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.out.iter().map(|o| o.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[SymState] {
        &self.states
    }

    pub fn state(&self, id: usize) -> &SymState {
        &self.states[id]
    }

    pub fn id(&self, s: &SymState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_final(&self, id: usize) -> bool {
        self.finals[id]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&i| self.finals[i])
    }

    pub fn out(&self, id: usize) -> &[(Symbol, usize)] {
        &self.out[id]
    }

    pub fn step(&self, id: usize, a: Symbol) -> impl Iterator<Item = usize> + '_ {
        self.out[id]
            .iter()
            .filter(move |(b, _)| *b == a)
            .map(|(_, q)| *q)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, Symbol, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(p, o)| o.iter().map(move |(a, q)| (p, *a, *q)))
    }

    pub fn to_nfa(&self) -> Nfa<Symbol> {
        let mut m = Nfa::with_states(self.states.len());
        m.initial.extend(self.initial.iter().copied());
        m.finals.extend(self.finals());
        for (p, a, q) in self.arcs() {
            m.add_arc(p, a, q);
        }
        m
    }

    /// Runs the automaton on the content between end-words.
    pub fn accepts_content(&self, content: &[Symbol]) -> bool {
        let mut cur: BTreeSet<usize> = self.initial.iter().copied().collect();
        for &a in content {
            cur = cur.iter().flat_map(|&p| self.step(p, a)).collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&p| self.finals[p])
    }

    /// The unique tagging `x` of `w` such that `[x]` is accepted.
    pub fn tag(&self, w: &[Terminal]) -> Option<TaggedWord> {
        if w.is_empty() || w.iter().any(|t| t.is_hash()) {
            return None;
        }
        let n = self.states.len();
        // back[i][q] = (previous state, tag read before w[i]) for the state
        // reached right after reading w[i].
        let mut back: Vec<Vec<Option<(usize, Option<Tag>)>>> = Vec::with_capacity(w.len());
        let mut cur: Vec<usize> = Vec::new();
        let mut layer = vec![None; n];
        for &q0 in &self.initial {
            for q1 in self.step(q0, Symbol::Tag(Tag::Open)) {
                for q2 in self.step(q1, Symbol::Term(w[0])) {
                    if layer[q2].is_none() {
                        layer[q2] = Some((q0, None));
                        cur.push(q2);
                    }
                }
            }
        }
        back.push(layer);
        for &a in &w[1..] {
            if cur.is_empty() {
                return None;
            }
            let mut layer = vec![None; n];
            let mut next = Vec::new();
            for &p in &cur {
                for t in Tag::ALL {
                    for q1 in self.step(p, Symbol::Tag(t)) {
                        for q2 in self.step(q1, Symbol::Term(a)) {
                            if layer[q2].is_none() {
                                layer[q2] = Some((p, Some(t)));
                                next.push(q2);
                            }
                        }
                    }
                }
            }
            back.push(layer);
            cur = next;
        }
        let end = cur.iter().copied().find(|&p| {
            self.step(p, Symbol::Tag(Tag::Close))
                .any(|q| self.finals[q])
        })?;
        let mut tags = Vec::with_capacity(w.len());
        let mut q = end;
        for i in (0..w.len()).rev() {
            let (p, t) = back[i][q].expect("backpointer");
            if let Some(t) = t {
                tags.push(t);
            }
            q = p;
        }
        tags.reverse();
        let mut out = Vec::with_capacity(2 * w.len() - 1);
        for (i, a) in w.iter().enumerate() {
            if i > 0 {
                out.push(Symbol::Tag(tags[i - 1]));
            }
            out.push(Symbol::Term(*a));
        }
        Some(TaggedWord::new_unchecked(out))
    }

    /// Deterministic DOT rendering; states are labelled `(β,α)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph SymFA {\n  rankdir=LR;\n  node [shape=box];\n");
        for (i, s) in self.states.iter().enumerate() {
            let extra = if self.finals[i] { ", peripheries=2" } else { "" };
            out.push_str(&format!(
                "  s{i} [label=\"{}\"{extra}];\n",
                escape(&s.to_string())
            ));
        }
        for (j, &i) in self.initial.iter().enumerate() {
            out.push_str(&format!("  init{j} [shape=point];\n  init{j} -> s{i};\n"));
        }
        for (p, a, q) in self.arcs() {
            out.push_str(&format!(
                "  s{p} -> s{q} [label=\"{}\"];\n",
                escape(&a.to_string())
            ));
        }
        out.push_str("}\n");
        out
    }

    /// One transition per line as `(β|α) symbol (β'|α')`, then the initial
    /// and final state lists.
    pub fn dump(&self) -> String {
        let show = |id: usize| {
            let s = &self.states[id];
            format!(
                "({}|{})",
                symbol::tokens(&s.lookback),
                symbol::tokens(&s.lookahead)
            )
        };
        let mut out = String::new();
        for (p, a, q) in self.arcs() {
            out.push_str(&format!("{} {} {}\n", show(p), a.token(), show(q)));
        }
        let init: Vec<String> = self.initial.iter().map(|&i| show(i)).collect();
        let fin: Vec<String> = self.finals().map(show).collect();
        out.push_str(&format!("initial: {}\n", init.join(" ")));
        out.push_str(&format!("final: {}\n", fin.join(" ")));
        out
    }
}

/// Builds and trims the symmetrical automaton of `f`.
pub fn build_symmetrical_fa(f: &WindowSet) -> SymFA {
    let k = f.k;
    let e = end_word(k);
    let start_back = e[1..].to_vec();
    let end_ahead = e[..k - 1].to_vec();
    let subs = f.sub_windows();
    let alphabet = f.symbols();
    let valid = |beta: &[Symbol], alpha: &[Symbol]| {
        let mut s = beta.to_vec();
        s.extend_from_slice(alpha);
        s.windows(k).all(|w| f.contains(w))
    };

    let mut states: Vec<SymState> = Vec::new();
    let mut index: HashMap<SymState, usize> = HashMap::new();
    let mut arcs: Vec<(usize, Symbol, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::new();
    let mut intern = |s: SymState, states: &mut Vec<SymState>, queue: &mut VecDeque<usize>| {
        *index.entry(s.clone()).or_insert_with(|| {
            states.push(s);
            queue.push_back(states.len() - 1);
            states.len() - 1
        })
    };
    if subs.contains(&start_back) {
        for alpha in &subs {
            if valid(&start_back, alpha) {
                let s = SymState {
                    lookback: start_back.clone(),
                    lookahead: alpha.clone(),
                };
                initial.push(intern(s, &mut states, &mut queue));
            }
        }
    }
    while let Some(id) = queue.pop_front() {
        let SymState {
            lookback: beta,
            lookahead: alpha,
        } = states[id].clone();
        let a = alpha[0];
        // Content never contains `#`; reading one would splice end-words
        // into the middle of a word.
        if a.is_hash() {
            continue;
        }
        let mut beta2 = beta[1..].to_vec();
        beta2.push(a);
        for &c in &alphabet {
            let mut alpha2 = alpha[1..].to_vec();
            alpha2.push(c);
            if subs.contains(&alpha2) && valid(&beta2, &alpha2) {
                let s = SymState {
                    lookback: beta2.clone(),
                    lookahead: alpha2,
                };
                let t = intern(s, &mut states, &mut queue);
                arcs.push((id, a, t));
            }
        }
    }
    let finals: Vec<usize> = (0..states.len())
        .filter(|&i| states[i].lookahead == end_ahead)
        .collect();

    let raw = SymFA::from_parts(k, states, &arcs, &initial, &finals);
    let (trimmed, map) = raw.to_nfa().trim_with_map();
    let mut kept = vec![None; trimmed.num_states()];
    for (old, new) in map.iter().enumerate() {
        if let Some(n) = new {
            kept[*n] = Some(raw.states[old].clone());
        }
    }
    let states: Vec<SymState> = kept.into_iter().map(|s| s.expect("kept")).collect();
    let arcs: Vec<(usize, Symbol, usize)> = trimmed.arcs().cloned().collect();
    let initial: Vec<usize> = trimmed.initial.iter().copied().collect();
    let finals: Vec<usize> = trimmed.finals.iter().copied().collect();
    SymFA::from_parts(k, states, &arcs, &initial, &finals)
}

/// The symmetrical automaton of Loc(Φ).
pub fn automaton_of(phi: &TagSet) -> SymFA {
    build_symmetrical_fa(&derive_window_set(phi))
}

/// Whether the full string `s` (end-words included) is accepted.
pub fn fa_membership(a: &SymFA, s: &[Symbol]) -> bool {
    match tagged::strip_end_words(s, a.k) {
        Some(content) => a.accepts_content(content),
        None => false,
    }
}

/// True iff no word labels two distinct accepting paths.
pub fn check_unambiguity(a: &SymFA) -> bool {
    a.to_nfa().is_unambiguous()
}

/// The unique tagging of `w` valid under Φ, if any.
pub fn tag_word(phi: &TagSet, w: &[Terminal]) -> Option<TaggedWord> {
    automaton_of(phi).tag(w)
}

pub fn emit_fa_dot(a: &SymFA) -> String {
    a.to_dot()
}
