//! The tagged grammar Ḡ: tags substituted into every rule body, then cut
//! down to the shape `(N|[) Σ ((N|⊙) Σ)* (N|])`.

use std::collections::BTreeSet;

use crate::fa::Nfa;
use crate::grammar::{ECFGrammar, GSym, TaggedGrammar};
use crate::symbol::{Symbol, Tag, Terminal};

/// Shape automaton R over the given nonterminals and terminals.
pub fn shape_automaton(nonterminals: usize, terminals: &[Terminal]) -> Nfa<GSym> {
    let tag = |t| GSym::T(Symbol::Tag(t));
    let mut r = Nfa::with_states(4);
    r.initial.insert(0);
    r.finals.insert(3);
    r.add_arc(0, tag(Tag::Open), 1);
    r.add_arc(2, tag(Tag::Dot), 1);
    r.add_arc(2, tag(Tag::Close), 3);
    for x in 0..nonterminals {
        r.add_arc(0, GSym::N(x), 1);
        r.add_arc(2, GSym::N(x), 1);
        r.add_arc(2, GSym::N(x), 3);
    }
    for &a in terminals {
        r.add_arc(1, GSym::T(Symbol::Term(a)), 2);
    }
    r
}

/// Tag substitution on one rule automaton: an optional tag before the
/// body, an optional tag after each terminal, any tag for a nonterminal.
fn substitute(rule: &Nfa<GSym>) -> Nfa<GSym> {
    let mut m = Nfa::with_states(rule.num_states());
    m.finals = rule.finals.clone();
    m.initial = rule.initial.clone();
    let start = m.add_state();
    m.initial.insert(start);
    for &i in &rule.initial {
        for t in Tag::ALL {
            m.add_arc(start, GSym::T(Symbol::Tag(t)), i);
        }
    }
    for &(p, g, q) in rule.arcs() {
        m.add_arc(p, g, q);
        match g {
            GSym::T(Symbol::Term(_)) => {
                let mid = m.add_state();
                m.add_arc(p, g, mid);
                for t in Tag::ALL {
                    m.add_arc(mid, GSym::T(Symbol::Tag(t)), q);
                }
            }
            GSym::N(_) => {
                for t in Tag::ALL {
                    m.add_arc(p, GSym::T(Symbol::Tag(t)), q);
                }
            }
            GSym::T(Symbol::Tag(_)) => {}
        }
    }
    m
}

/// Builds Ḡ and lists the nonterminals whose tagged body came out empty.
pub fn tagged_grammar_report(g: &ECFGrammar) -> (TaggedGrammar, Vec<String>) {
    let terminals = g.terminals().proper();
    let r = shape_automaton(g.len(), &terminals);
    let rules: Vec<Nfa<GSym>> = g
        .rules()
        .iter()
        .map(|rule| substitute(rule).intersect(&r).determinize().trim())
        .collect();
    let removed: Vec<String> = (0..g.len())
        .filter(|&x| rules[x].is_empty())
        .map(|x| g.name(x).to_string())
        .collect();
    let tagged = ECFGrammar::new(g.names().to_vec(), rules, g.axioms().clone()).trim();
    (tagged, removed)
}

/// The tagged grammar Ḡ of `g`.
pub fn tagged_grammar(g: &ECFGrammar) -> TaggedGrammar {
    tagged_grammar_report(g).0
}

/// Sentences of Ḡ with the tags erased.
pub fn erased_sentences(tg: &TaggedGrammar, max_len: usize) -> BTreeSet<Vec<Terminal>> {
    tg.enumerate(2 * max_len + 1)
        .iter()
        .map(|w| crate::symbol::project(w))
        .filter(|w| w.len() <= max_len)
        .collect()
}
