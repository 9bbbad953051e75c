//! Union of structurally compatible grammars and intersection of a
//! max-language with a regular language.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fa::Nfa;
use crate::grammar::{disjoint_union, ECFGrammar};
use crate::hop::hop_check;
use crate::maxgrammar::{synthesize, MaxGrammar, Overlay};
use crate::regex;
use crate::symbol::{Symbol, Tag, Terminal};
use crate::symfa::automaton_of;
use crate::tagged::{check_conflicts, TagSet};

/// A regular language over plain terminals, kept as a trim DFA.
#[derive(Clone, Debug)]
pub struct RegularSpec {
    dfa: Nfa<Terminal>,
}

impl RegularSpec {
    pub fn from_nfa(nfa: &Nfa<Terminal>) -> Result<RegularSpec> {
        if nfa.labels().iter().any(|t| t.is_hash()) {
            return Err(Error::HashInContent("regular language".into()));
        }
        Ok(RegularSpec {
            dfa: nfa.determinize().trim(),
        })
    }

    /// Regex over terminal names, in grammar-body syntax.
    pub fn parse(text: &str) -> Result<RegularSpec> {
        let body: String = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with(';'))
            .collect::<Vec<_>>()
            .join(" ");
        let re = regex::parse(&body)?;
        for name in re.symbols() {
            if Tag::from_token(name).is_some() || name == "#" {
                return Err(Error::Invalid(format!("`{name}` is not a plain terminal")));
            }
        }
        RegularSpec::from_nfa(&re.map(|n: &String| Terminal::new(n)).glushkov())
    }

    pub fn empty() -> RegularSpec {
        RegularSpec { dfa: Nfa::new() }
    }

    pub fn dfa(&self) -> &Nfa<Terminal> {
        &self.dfa
    }

    pub fn accepts(&self, w: &[Terminal]) -> bool {
        self.dfa.accepts(w)
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }
}

/// η(R₀): every pair of adjacent terminals separated by any tag.
pub fn tag_interleave(r0: &RegularSpec) -> Nfa<Symbol> {
    let (m, _, _) = interleave_states(r0);
    m.trim()
}

/// States `2q` (before a terminal) and `2q+1` (after one).
fn interleave_states(r0: &RegularSpec) -> (Nfa<Symbol>, Vec<usize>, Vec<usize>) {
    let d = &r0.dfa;
    let mut m = Nfa::with_states(2 * d.num_states());
    for &(p, a, q) in d.arcs() {
        m.add_arc(2 * p, Symbol::Term(a), 2 * q + 1);
    }
    for q in 0..d.num_states() {
        for t in Tag::ALL {
            m.add_arc(2 * q + 1, Symbol::Tag(t), 2 * q);
        }
    }
    let pre: Vec<usize> = d.initial.iter().map(|&q| 2 * q).collect();
    let post: Vec<usize> = d.finals.iter().map(|&q| 2 * q + 1).collect();
    m.initial = pre.iter().copied().collect();
    m.finals = post.iter().copied().collect();
    (m, pre, post)
}

/// `[` η(R₀) `]` with dedicated start and end states.
fn bracketed_overlay(r0: &RegularSpec) -> Overlay {
    let (mut m, pre, post) = interleave_states(r0);
    let start = m.add_state();
    let end = m.add_state();
    for &p in &pre {
        m.add_arc(start, Symbol::Tag(Tag::Open), p);
    }
    for &p in &post {
        m.add_arc(p, Symbol::Tag(Tag::Close), end);
    }
    m.initial = BTreeSet::from([start]);
    m.finals = BTreeSet::from([end]);
    Overlay {
        nfa: m,
        start: BTreeSet::from([start]),
        end: BTreeSet::from([end]),
    }
}

/// Max-grammar generating Red(Φ) ∩ L(R₀).
pub fn intersect_regular_max(phi: &TagSet, r0: &RegularSpec) -> Result<MaxGrammar> {
    phi.require_conflict_free()?;
    let a = automaton_of(phi);
    Ok(synthesize(&a, &bracketed_overlay(r0)))
}

/// Union of two HOP(k) grammars whose tagged k-words are jointly
/// conflict-free. Clashing nonterminal names of `g2` are renamed.
pub fn union(g1: &ECFGrammar, g2: &ECFGrammar, k: usize) -> Result<ECFGrammar> {
    let phi = joint_phi(g1, g2, k)?;
    let report = check_conflicts(&phi);
    if !report.is_empty() {
        return Err(Error::Conflict(report.to_string()));
    }
    Ok(disjoint_union(g1, g2))
}

/// Φ₁ ∪ Φ₂, after checking each grammar on its own.
pub fn joint_phi(g1: &ECFGrammar, g2: &ECFGrammar, k: usize) -> Result<TagSet> {
    let mut sets = Vec::new();
    for (i, g) in [g1, g2].into_iter().enumerate() {
        let v = hop_check(g, k);
        match v.phi {
            Some(p) => sets.push(p),
            None => {
                return Err(Error::Invalid(format!(
                    "grammar {} is not HOP({k}): {}",
                    i + 1,
                    v.conflicts.expect("conflicts")
                )))
            }
        }
    }
    sets[0].union(&sets[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, grammar, phi};
    use crate::grammar::bounded_language_equal;
    use crate::hop::hop_check;
    use crate::reduction::Recognizer;
    use crate::symbol::{compact, plain_word};

    #[test]
    fn interleave_ab() {
        let r = RegularSpec::parse("a b").unwrap();
        let got: BTreeSet<String> = tag_interleave(&r)
            .enumerate(5)
            .iter()
            .map(|w| crate::symbol::pretty(w))
            .collect();
        assert_eq!(got, BTreeSet::from(["a[b".into(), "a]b".into(), "a⊙b".into()]));
        let single = tag_interleave(&RegularSpec::parse("a").unwrap()).enumerate(3);
        assert_eq!(single, BTreeSet::from([compact("a")]));
    }

    #[test]
    fn interleave_even_runs() {
        let m = tag_interleave(&RegularSpec::parse("(a a)+").unwrap());
        for w in m.enumerate(7) {
            assert_eq!(w.iter().filter(|s| s.is_terminal()).count() % 2, 0);
        }
        assert!(m.accepts(&compact("a[a]a⊙a")));
        assert!(!m.accepts(&compact("a[a]a")));
    }

    fn check_intersection(r: &str, n: usize) {
        let p = phi(3, fixtures::ACB);
        let r0 = RegularSpec::parse(r).unwrap();
        let mg = intersect_regular_max(&p, &r0).unwrap();
        let rec = Recognizer::new(&p).unwrap();
        let oracle: BTreeSet<Vec<Terminal>> =
            rec.language(n).into_iter().filter(|w| r0.accepts(w)).collect();
        assert_eq!(mg.plain.enumerate_plain(n), oracle, "{r}");
        if !mg.is_empty() {
            assert!(mg.plain.validate().is_clean(), "{r}: {}{}", mg.plain.validate(), mg.report());
            let v = hop_check(&mg.plain, 3);
            assert!(v.is_hop);
            assert!(v.phi.unwrap().is_subset(&p));
        }
    }

    #[test]
    fn intersections_with_regular_languages() {
        check_intersection("a+ (c b+)+", 12);
        check_intersection("(a | b)* c (a | b)*", 12);
        check_intersection("a a a (a | b | c)*", 12);
        check_intersection("b", 12);
    }

    #[test]
    fn empty_regular_language() {
        let mg = intersect_regular_max(&phi(3, fixtures::ACB), &RegularSpec::empty()).unwrap();
        assert!(mg.is_empty());
    }

    #[test]
    fn union_with_renamed_copy() {
        let g = grammar(fixtures::SPLIT);
        let u = union(&g, &g, 3).unwrap();
        assert_eq!(u.len(), 4);
        assert!(bounded_language_equal(&u, &g, 9).0);
    }

    #[test]
    fn union_of_compatible_grammars() {
        let g1 = grammar(fixtures::SPLIT);
        let g2 = grammar("S -> b");
        let u = union(&g1, &g2, 3).unwrap();
        let mut want = g1.enumerate_plain(7);
        want.insert(plain_word("b"));
        assert_eq!(u.enumerate_plain(7), want);
        assert!(hop_check(&u, 3).is_hop);
    }

    #[test]
    fn union_rejects_joint_conflict() {
        let g1 = grammar(fixtures::SPLIT);
        let g2 = grammar("S -> X a ; X -> a");
        assert!(hop_check(&g2, 3).is_hop);
        assert!(matches!(union(&g1, &g2, 3), Err(Error::Conflict(_))));
        assert!(matches!(
            union(&g1, &grammar(fixtures::PALINDROME), 3),
            Err(Error::Invalid(_))
        ));
    }
}
