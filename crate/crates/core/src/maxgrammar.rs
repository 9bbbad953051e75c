//! Max-grammar synthesis from a tag set, and the embedding of strictly
//! locally testable languages.
//!
//! A nonterminal is a pair of states `(q1, q2)` of the symmetrical automaton
//! where `q1` looks ahead at `[` and `q2` looks back at `]`. Its rule
//! automaton is carved out of the automaton starting at `q1` and ending at
//! `q2`: `[` may only leave `q1`, `]` may only enter `q2`, and every tag arc
//! may be shadowed by a nonterminal whose outer windows match its ends.
//!
//! The construction runs over the product with an overlay automaton; the
//! plain max-grammar uses a one-state overlay.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fa::{escape, Nfa};
use crate::grammar::{ECFGrammar, GSym, TaggedGrammar};
use crate::reduction::{slt_member, Recognizer};
use crate::symbol::{self, Symbol, Tag, Terminal};
use crate::symfa::{automaton_of, SymFA};
use crate::tagged::{end_word, Alphabet, TagSet, TaggedWord};

/// Automaton run in lockstep with the symmetrical automaton.
#[derive(Clone, Debug)]
pub struct Overlay {
    pub nfa: Nfa<Symbol>,
    /// Overlay states allowed at the start of an axiom.
    pub start: BTreeSet<usize>,
    /// Overlay states allowed at the end of an axiom.
    pub end: BTreeSet<usize>,
}

impl Overlay {
    /// One state looping on every symbol.
    pub fn trivial<I: IntoIterator<Item = Symbol>>(symbols: I) -> Overlay {
        let mut nfa = Nfa::with_states(1);
        nfa.initial.insert(0);
        nfa.finals.insert(0);
        for s in symbols {
            nfa.add_arc(0, s, 0);
        }
        Overlay {
            nfa,
            start: BTreeSet::from([0]),
            end: BTreeSet::from([0]),
        }
    }

    fn is_trivial(&self) -> bool {
        self.nfa.num_states() == 1
    }
}

type PState = (usize, usize);

/// The 4-tuple of windows identifying a max-grammar nonterminal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaxNonterminal {
    pub start: usize,
    pub end: usize,
    pub beta1: Vec<Symbol>,
    pub alpha1: Vec<Symbol>,
    pub beta2: Vec<Symbol>,
    pub alpha2: Vec<Symbol>,
    /// Overlay states at both ends, when an overlay is used.
    pub overlay: Option<(usize, usize)>,
}

impl fmt::Display for MaxNonterminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            symbol::pretty(&self.beta1),
            symbol::pretty(&self.alpha1),
            symbol::pretty(&self.beta2),
            symbol::pretty(&self.alpha2)
        )?;
        if let Some((m1, m2)) = self.overlay {
            write!(f, "@{m1},{m2}")?;
        }
        Ok(())
    }
}

/// Display name of the i-th synthesized nonterminal: X, Y, Z, X1, …
pub fn nonterminal_name(i: usize) -> String {
    let base = ["X", "Y", "Z"][i % 3];
    match i / 3 {
        0 => base.to_string(),
        n => format!("{base}{n}"),
    }
}

#[derive(Clone, Debug)]
pub struct MaxGrammar {
    pub k: usize,
    pub nonterminals: Vec<MaxNonterminal>,
    /// Rule bodies with tags.
    pub tagged: TaggedGrammar,
    /// Tags erased.
    pub plain: ECFGrammar,
}

impl MaxGrammar {
    pub fn is_empty(&self) -> bool {
        self.plain.is_empty()
    }

    /// Rule listing with the window tuples of every nonterminal.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (i, nt) in self.nonterminals.iter().enumerate() {
            let mark = if self.tagged.axioms().contains(&i) {
                " (axiom)"
            } else {
                ""
            };
            out.push_str(&format!(
                "{} = {}{}\n  {} → {}\n",
                self.tagged.name(i),
                nt,
                mark,
                self.tagged.name(i),
                self.tagged.rule_display(i)
            ));
        }
        out
    }
}

struct Synth<'a> {
    a: &'a SymFA,
    overlay: &'a Overlay,
    m_adj: Vec<Vec<(Symbol, usize)>>,
    /// A-states looking ahead at `[`, keyed by look-back.
    opens_by_beta: HashMap<Vec<Symbol>, Vec<usize>>,
    /// A-states looking back at `]`, keyed by look-ahead.
    closes_by_alpha: HashMap<Vec<Symbol>, Vec<usize>>,
    nts: Vec<(PState, PState)>,
    index: HashMap<(PState, PState), usize>,
}

impl<'a> Synth<'a> {
    fn new(a: &'a SymFA, overlay: &'a Overlay) -> Synth<'a> {
        let mut opens_by_beta: HashMap<Vec<Symbol>, Vec<usize>> = HashMap::new();
        let mut closes_by_alpha: HashMap<Vec<Symbol>, Vec<usize>> = HashMap::new();
        for (i, s) in a.states().iter().enumerate() {
            if s.lookahead[0] == Symbol::Tag(Tag::Open) {
                opens_by_beta.entry(s.lookback.clone()).or_default().push(i);
            }
            if s.lookback.last() == Some(&Symbol::Tag(Tag::Close)) {
                closes_by_alpha.entry(s.lookahead.clone()).or_default().push(i);
            }
        }
        Synth {
            a,
            overlay,
            m_adj: overlay.nfa.adjacency(),
            opens_by_beta,
            closes_by_alpha,
            nts: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, nt: (PState, PState)) -> usize {
        if let Some(&i) = self.index.get(&nt) {
            return i;
        }
        self.nts.push(nt);
        self.index.insert(nt, self.nts.len() - 1);
        self.nts.len() - 1
    }

    fn rule(&mut self, x: usize) -> Nfa<GSym> {
        let (x1, x2) = self.nts[x];
        let mut states: Vec<PState> = vec![x1];
        let mut idx: HashMap<PState, usize> = HashMap::from([(x1, 0)]);
        let mut arcs: Vec<(usize, GSym, PState)> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let s = states[i];
            let (sa, sm) = s;
            i += 1;
            if s == x2 {
                continue;
            }
            let mut next: Vec<(GSym, PState)> = Vec::new();
            for &(sym, ta) in self.a.out(sa) {
                let tag = sym.as_tag();
                if tag == Some(Tag::Open) && s != x1 {
                    continue;
                }
                for &(msym, tm) in &self.m_adj[sm] {
                    if msym == sym {
                        next.push((GSym::T(sym), (ta, tm)));
                    }
                }
                let Some(tag) = tag else { continue };
                let beta = &self.a.state(sa).lookback;
                let alpha = &self.a.state(ta).lookahead;
                let y1s = self.opens_by_beta.get(beta).cloned().unwrap_or_default();
                let y2s = self.closes_by_alpha.get(alpha).cloned().unwrap_or_default();
                for &y1a in &y1s {
                    for &y2a in &y2s {
                        for m2 in 0..self.overlay.nfa.num_states() {
                            let t = (ta, m2);
                            if tag == Tag::Close && t != x2 {
                                continue;
                            }
                            let y = self.intern(((y1a, sm), (y2a, m2)));
                            next.push((GSym::N(y), t));
                        }
                    }
                }
            }
            for (g, t) in next {
                if t == x1 {
                    continue;
                }
                if g == GSym::T(Symbol::Tag(Tag::Close)) && t != x2 {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = idx.entry(t) {
                    e.insert(states.len());
                    states.push(t);
                }
                arcs.push((i - 1, g, t));
            }
        }
        let mut m = Nfa::with_states(states.len());
        m.initial.insert(0);
        if let Some(&f) = idx.get(&x2) {
            m.finals.insert(f);
        }
        for (p, g, t) in arcs {
            m.add_arc(p, g, idx[&t]);
        }
        m.trim()
    }
}

/// Max-grammar of the symmetrical automaton `a` run against `overlay`.
pub fn synthesize(a: &SymFA, overlay: &Overlay) -> MaxGrammar {
    let k = a.k();
    let mut syn = Synth::new(a, overlay);
    let finals: Vec<usize> = a.finals().collect();
    let mut axioms = BTreeSet::new();
    for &i in a.initial() {
        for &t in &finals {
            for &ms in &overlay.start {
                for &me in &overlay.end {
                    axioms.insert(syn.intern(((i, ms), (t, me))));
                }
            }
        }
    }
    let mut rules = Vec::new();
    let mut x = 0;
    while x < syn.nts.len() {
        rules.push(syn.rule(x));
        x += 1;
    }
    let names: Vec<String> = (0..rules.len()).map(|i| format!("N{i}")).collect();
    let raw = ECFGrammar::new(names, rules, axioms);
    let (trimmed, map) = raw.trim_with_map();
    let mut nonterminals = vec![None; trimmed.len()];
    for (old, new) in map.iter().enumerate() {
        if let Some(n) = new {
            let ((a1, m1), (a2, m2)) = syn.nts[old];
            let (s1, s2) = (a.state(a1), a.state(a2));
            nonterminals[*n] = Some(MaxNonterminal {
                start: a1,
                end: a2,
                beta1: s1.lookback.clone(),
                alpha1: s1.lookahead.clone(),
                beta2: s2.lookback.clone(),
                alpha2: s2.lookahead.clone(),
                overlay: (!overlay.is_trivial()).then_some((m1, m2)),
            });
        }
    }
    let nonterminals: Vec<MaxNonterminal> = nonterminals.into_iter().map(|n| n.expect("kept")).collect();
    let tagged = trimmed.renamed_by_index(nonterminal_name);
    let plain = erase_tags(&tagged);
    MaxGrammar {
        k,
        nonterminals,
        tagged,
        plain,
    }
}

/// σ applied to every rule body.
pub fn erase_tags(tg: &TaggedGrammar) -> ECFGrammar {
    let rules = tg.rules().iter().map(|r| r.erase(|g| g.is_tag())).collect();
    ECFGrammar::new(tg.names().to_vec(), rules, tg.axioms().clone())
}

/// The tagged max-grammar Ḡ_Φ and the max-grammar G_Φ.
pub fn max_grammar(phi: &TagSet) -> Result<MaxGrammar> {
    phi.require_conflict_free()?;
    let a = automaton_of(phi);
    let overlay = Overlay::trivial(a.arcs().map(|(_, s, _)| s));
    Ok(synthesize(&a, &overlay))
}

/// The symmetrical automaton with nonterminal-labeled arcs added.
#[derive(Clone, Debug)]
pub struct GrammarGraph {
    pub fa: SymFA,
    pub names: Vec<String>,
    /// (source, nonterminal, target) over automaton states.
    pub nonterminal_arcs: BTreeSet<(usize, usize, usize)>,
}

impl GrammarGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph GrammarGraph {\n  rankdir=LR;\n  node [shape=box];\n");
        for (i, s) in self.fa.states().iter().enumerate() {
            let extra = if self.fa.is_final(i) {
                ", peripheries=2"
            } else {
                ""
            };
            out.push_str(&format!("  s{i} [label=\"{}\"{extra}];\n", escape(&s.to_string())));
        }
        for (j, &i) in self.fa.initial().iter().enumerate() {
            out.push_str(&format!("  init{j} [shape=point];\n  init{j} -> s{i};\n"));
        }
        for (p, a, q) in self.fa.arcs() {
            out.push_str(&format!("  s{p} -> s{q} [label=\"{}\"];\n", escape(&a.to_string())));
        }
        for &(p, y, q) in &self.nonterminal_arcs {
            out.push_str(&format!(
                "  s{p} -> s{q} [label=\"{}\", style=dashed];\n",
                escape(&self.names[y])
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Grammar graph of the synthesized max-grammar of Φ.
pub fn build_grammar_graph(phi: &TagSet) -> Result<GrammarGraph> {
    let mg = max_grammar(phi)?;
    let fa = automaton_of(phi);
    Ok(grammar_graph_of(&fa, &mg))
}

pub fn grammar_graph_of(fa: &SymFA, mg: &MaxGrammar) -> GrammarGraph {
    let mut nonterminal_arcs = BTreeSet::new();
    for (p, a, q) in fa.arcs() {
        if !a.is_tag() {
            continue;
        }
        for (y, nt) in mg.nonterminals.iter().enumerate() {
            if fa.state(p).lookback == nt.beta1 && fa.state(q).lookahead == nt.alpha2 {
                nonterminal_arcs.insert((p, y, q));
            }
        }
    }
    GrammarGraph {
        fa: fa.clone(),
        names: mg.tagged.names().to_vec(),
        nonterminal_arcs,
    }
}

/// Every word of L(G) up to `max_len` is in Red(Φ).
pub fn verify_max_inclusion(g: &ECFGrammar, phi: &TagSet, max_len: usize) -> Result<bool> {
    let rec = Recognizer::new(phi)?;
    Ok(g.enumerate_plain(max_len).iter().all(|w| rec.accepts(w)))
}

/// Words of L(G) up to `max_len` that Red(Φ) rejects.
pub fn max_inclusion_failures(g: &ECFGrammar, phi: &TagSet, max_len: usize) -> Result<Vec<Vec<Terminal>>> {
    let rec = Recognizer::new(phi)?;
    Ok(g.enumerate_plain(max_len)
        .into_iter()
        .filter(|w| !rec.accepts(w))
        .collect())
}

fn tilde(v: &[Terminal]) -> Vec<Symbol> {
    let mut out = Vec::new();
    for (i, &t) in v.iter().enumerate() {
        if i > 0 {
            out.push(Symbol::Tag(Tag::Dot));
        }
        out.push(Symbol::Term(t));
    }
    out
}

/// Tagged (2j−1)-word of one j-word of an SLT window set.
pub fn embed_word(w: &[Terminal]) -> Result<TaggedWord> {
    let k = 2 * w.len() - 1;
    if w.iter().all(|t| t.is_hash()) {
        return Ok(end_word(k));
    }
    let j1 = w.iter().take_while(|t| t.is_hash()).count();
    let j2 = w.iter().rev().take_while(|t| t.is_hash()).count();
    let v = &w[j1..w.len() - j2];
    if v.iter().any(|t| t.is_hash()) {
        return Err(Error::MalformedBoundary(symbol::plain_compact(w)));
    }
    let hash = Symbol::hash();
    let dot = Symbol::Tag(Tag::Dot);
    let mut out = Vec::new();
    if j1 > 0 {
        for _ in 1..j1 {
            out.extend([hash, dot]);
        }
        out.extend([hash, Symbol::Tag(Tag::Open)]);
    }
    out.extend(tilde(v));
    if j2 > 0 {
        out.extend([Symbol::Tag(Tag::Close), hash]);
        for _ in 1..j2 {
            out.extend([dot, hash]);
        }
    }
    TaggedWord::new(out)
}

/// Tagged (2j−1)-words whose max-language is the SLT language of `f`.
pub fn slt_embed(f: &BTreeSet<Vec<Terminal>>) -> Result<TagSet> {
    let j = f
        .iter()
        .next()
        .map(|w| w.len())
        .ok_or_else(|| Error::Invalid("empty window set".into()))?;
    if j < 2 {
        return Err(Error::BadWidth(j));
    }
    let k = 2 * j - 1;
    let mut words = BTreeSet::from([end_word(k)]);
    for w in f {
        if w.len() != j {
            return Err(Error::WrongLength {
                word: symbol::plain_compact(w),
                len: w.len(),
                k: j,
            });
        }
        words.insert(embed_word(w)?);
    }
    let alphabet = Alphabet::new(f.iter().flatten().copied());
    TagSet::new(k, words, alphabet)
}

/// Parses a plain window set: one word per line, `;` comments.
pub fn parse_slt(text: &str) -> Result<BTreeSet<Vec<Terminal>>> {
    let mut out = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let w = if line.contains(char::is_whitespace) {
            symbol::plain_word(line)
        } else {
            line.chars().map(|c| Terminal::new(&c.to_string())).collect()
        };
        if w.iter().any(|t| Tag::from_token(t.name()).is_some()) {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("tag in plain window `{line}`"),
            });
        }
        out.insert(w);
    }
    Ok(out)
}

/// All words over `alphabet` of length 1 ..= `max_len`.
pub fn all_words(alphabet: &[Terminal], max_len: usize) -> Vec<Vec<Terminal>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Terminal>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &a in alphabet {
                let mut w2 = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Outcome of the exhaustive search over tag assignments.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub examined: usize,
    pub matches: Vec<TagSet>,
}

/// Tries every assignment of at most one tag to each ordered pair of
/// symbols over `terminals ∪ {#}` (with `#⊙#` fixed) and keeps the tag sets
/// whose max-language agrees with `target` on words up to `max_len`.
/// `probes` are checked first to discard candidates early.
pub fn search_phi3<F>(terminals: &[Terminal], target: F, max_len: usize, probes: &[Vec<Terminal>]) -> SearchOutcome
where
    F: Fn(&[Terminal]) -> bool + Sync,
{
    let hash = Terminal::hash();
    let mut symbols: Vec<Terminal> = terminals.to_vec();
    symbols.push(hash);
    let pairs: Vec<(Terminal, Terminal)> = symbols
        .iter()
        .flat_map(|&x| symbols.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| !(x.is_hash() && y.is_hash()))
        .collect();
    let options = [None, Some(Tag::Open), Some(Tag::Dot), Some(Tag::Close)];
    let total = 4usize.pow(pairs.len() as u32);
    let words = all_words(terminals, max_len);
    let matches: Vec<(usize, TagSet)> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut ws = vec![end_word(3)];
            let mut c = code;
            for &(x, y) in &pairs {
                if let Some(t) = options[c % 4] {
                    ws.push(TaggedWord::new(vec![Symbol::Term(x), Symbol::Tag(t), Symbol::Term(y)]).ok()?);
                }
                c /= 4;
            }
            let phi = TagSet::new(3, ws, Alphabet::new(terminals.iter().copied())).ok()?;
            let rec = Recognizer::new(&phi).ok()?;
            if probes.iter().any(|w| rec.accepts(w) != target(w)) {
                return None;
            }
            words
                .iter()
                .all(|w| rec.accepts(w) == target(w))
                .then_some((code, phi))
        })
        .collect();
    let mut matches = matches;
    matches.sort_by_key(|(c, _)| *c);
    SearchOutcome {
        examined: total,
        matches: matches.into_iter().map(|(_, p)| p).collect(),
    }
}

/// Words up to `max_len` on which Loc(F) and Red(slt_embed(F)) disagree.
pub fn slt_disagreements(f: &BTreeSet<Vec<Terminal>>, max_len: usize) -> Result<Vec<Vec<Terminal>>> {
    let phi = slt_embed(f)?;
    let j = (phi.k() + 1) / 2;
    let rec = Recognizer::new(&phi)?;
    let alphabet: Vec<Terminal> = Alphabet::new(f.iter().flatten().copied()).proper();
    Ok(all_words(&alphabet, max_len)
        .into_iter()
        .filter(|w| slt_member(f, j, w) != rec.accepts(w))
        .collect())
}

/// Bounded language of the max-grammar against the recognizer.
pub fn max_grammar_disagreements(phi: &TagSet, max_len: usize) -> Result<Vec<Vec<Terminal>>> {
    let mg = max_grammar(phi)?;
    let rec = Recognizer::new(phi)?;
    let from_grammar = mg.plain.enumerate_plain(max_len);
    let alphabet = phi.alphabet().proper();
    let mut out: BTreeMap<usize, Vec<Vec<Terminal>>> = BTreeMap::new();
    for w in all_words(&alphabet, max_len) {
        if rec.accepts(&w) != from_grammar.contains(&w) {
            out.entry(w.len()).or_default().push(w);
        }
    }
    Ok(out.into_values().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, phi};
    use crate::regex;
    use crate::symbol::plain_word;

    fn body(text: &str, names: &[&str]) -> Nfa<GSym> {
        regex::parse(text)
            .unwrap()
            .map(|n: &String| match names.iter().position(|m| m == n) {
                Some(x) => GSym::N(x),
                None => GSym::T(Symbol::from_token(n)),
            })
            .glushkov()
    }

    #[test]
    fn nested_acb_has_two_nonterminals() {
        let mg = max_grammar(&phi(3, fixtures::ACB)).unwrap();
        assert_eq!(mg.tagged.names(), &["X".to_string(), "Y".to_string()]);
        assert_eq!(mg.tagged.axioms(), &BTreeSet::from([0]));
        assert_eq!(mg.nonterminals[0].to_string(), "(⊙#,[a,b],#⊙)");
        assert_eq!(mg.nonterminals[1].to_string(), "([a,[a,b],c⊙)");
        let expect = body("[ a (o | Y) c o (b o)* b ]", &["X", "Y"]);
        for x in 0..2 {
            assert!(mg.tagged.rule(x).equivalent(&expect), "{}", mg.tagged.rule_display(x));
            assert!(mg.tagged.rule(x).is_unambiguous());
        }
        assert!(mg.tagged.validate().is_clean());
        assert!(mg.plain.validate().is_clean());
    }

    #[test]
    fn nested_acb_graph_arc() {
        let p = phi(3, fixtures::ACB);
        let g = build_grammar_graph(&p).unwrap();
        let id = |b: &str, a: &str| {
            let s = crate::symfa::SymState {
                lookback: symbol::compact(b),
                lookahead: symbol::compact(a),
            };
            g.fa.id(&s).unwrap()
        };
        assert!(g.nonterminal_arcs.contains(&(id("[a", "⊙c"), 1, id("a⊙", "c⊙"))));
        assert!(g.to_dot().contains("style=dashed"));
    }

    #[test]
    fn grammar_agrees_with_recognizer() {
        for (k, ws) in [
            (3, fixtures::ACB),
            (3, fixtures::DYCK),
            (3, fixtures::A_B_A),
            (5, fixtures::AAB5),
            (3, fixtures::ANBN_C),
        ] {
            let bad = max_grammar_disagreements(&phi(k, ws), 9).unwrap();
            assert!(bad.is_empty(), "{ws:?}: {bad:?}");
        }
    }

    #[test]
    fn end_words_only_give_an_empty_grammar() {
        let mg = max_grammar(&phi(3, &["#⊙#"])).unwrap();
        assert!(mg.is_empty());
        assert!(mg.plain.enumerate(6).is_empty());
    }

    #[test]
    fn conflictual_phi_is_rejected() {
        assert!(matches!(
            max_grammar(&phi(3, &["#[a", "a]#", "a[a", "a]a"])),
            Err(Error::Conflict(_))
        ));
    }

    #[test]
    fn inclusion_of_split_grammar() {
        let g = fixtures::grammar(fixtures::SPLIT);
        let p = phi(3, fixtures::A_B_A);
        assert!(verify_max_inclusion(&g, &p, 8).unwrap());
        assert!(!verify_max_inclusion(&g, &phi(3, fixtures::A_STAR_B), 8).unwrap());
        assert!(verify_max_inclusion(&ECFGrammar::empty(), &p, 8).unwrap());
    }

    #[test]
    fn names_cycle() {
        let names: Vec<String> = (0..7).map(nonterminal_name).collect();
        assert_eq!(names, ["X", "Y", "Z", "X1", "Y1", "Z1", "X2"]);
    }

    #[test]
    fn embeds_a_plus() {
        let f: BTreeSet<Vec<Terminal>> = ["# a", "a a", "a #"].iter().map(|w| plain_word(w)).collect();
        let p = slt_embed(&f).unwrap();
        assert_eq!(p, phi(3, &["#[a", "a⊙a", "a]#", "#⊙#"]));
        assert!(slt_disagreements(&f, 8).unwrap().is_empty());
    }

    #[test]
    fn embeds_boundary_words() {
        let w = plain_word("# # a b");
        assert_eq!(embed_word(&w).unwrap().to_string(), "#⊙#[a⊙b");
        let w = plain_word("a # #");
        assert_eq!(embed_word(&w).unwrap().to_string(), "a]#⊙#");
        assert!(matches!(embed_word(&plain_word("a # b")), Err(Error::MalformedBoundary(_))));
    }

    #[test]
    fn search_finds_a_plus_b() {
        let a = Terminal::new("a");
        let b = Terminal::new("b");
        let target = |w: &[Terminal]| w.len() >= 2 && w[..w.len() - 1].iter().all(|&t| t == a) && w[w.len() - 1] == b;
        let out = search_phi3(&[a, b], target, 5, &[]);
        assert_eq!(out.examined, 4usize.pow(8));
        assert!(!out.matches.is_empty());
        for p in &out.matches {
            let rec = Recognizer::new(p).unwrap();
            assert!(rec.accepts(&plain_word("a a b")));
        }
    }
}
