//! Nondeterministic finite automata over an arbitrary label type.
//!
//! Rule bodies, the tagging substitution, regular specs and the symmetrical
//! automaton's exports all share this representation. Arcs are kept in an
//! ordered set so every derived construction is deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Display;
use std::hash::Hash;

use crate::regex::Regex;

pub trait Label: Clone + Ord + Hash + std::fmt::Debug {}
impl<T: Clone + Ord + Hash + std::fmt::Debug> Label for T {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa<L: Label> {
    states: usize,
    pub initial: BTreeSet<usize>,
    pub finals: BTreeSet<usize>,
    arcs: BTreeSet<(usize, L, usize)>,
}

impl<L: Label> Default for Nfa<L> {
    fn default() -> Self {
        Nfa::new()
    }
}

impl<L: Label> Nfa<L> {
    pub fn new() -> Nfa<L> {
        Nfa {
            states: 0,
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
            arcs: BTreeSet::new(),
        }
    }

    pub fn with_states(n: usize) -> Nfa<L> {
        Nfa {
            states: n,
            ..Nfa::new()
        }
    }

    /// Accepts exactly the one-letter words in `labels`.
    pub fn letters<I: IntoIterator<Item = L>>(labels: I) -> Nfa<L> {
        let mut m = Nfa::with_states(2);
        m.initial.insert(0);
        m.finals.insert(1);
        for l in labels {
            m.add_arc(0, l, 1);
        }
        m
    }

    /// Accepts exactly `word` (which must be non-empty to avoid ε).
    pub fn word(word: &[L]) -> Nfa<L> {
        let mut m = Nfa::with_states(word.len() + 1);
        m.initial.insert(0);
        m.finals.insert(word.len());
        for (i, l) in word.iter().enumerate() {
            m.add_arc(i, l.clone(), i + 1);
        }
        m
    }

    pub fn add_state(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    pub fn add_arc(&mut self, from: usize, label: L, to: usize) {
        debug_assert!(from < self.states && to < self.states);
        self.arcs.insert((from, label, to));
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = &(usize, L, usize)> {
        self.arcs.iter()
    }

    pub fn labels(&self) -> BTreeSet<L> {
        self.arcs.iter().map(|(_, l, _)| l.clone()).collect()
    }

    /// Outgoing arcs per state.
    pub fn adjacency(&self) -> Vec<Vec<(L, usize)>> {
        let mut adj = vec![Vec::new(); self.states];
        for (p, l, q) in &self.arcs {
            adj[*p].push((l.clone(), *q));
        }
        adj
    }

    fn reach(&self, from: &BTreeSet<usize>, forward: bool) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.states];
        for (p, _, q) in &self.arcs {
            if forward {
                adj[*p].push(*q);
            } else {
                adj[*q].push(*p);
            }
        }
        let mut seen = vec![false; self.states];
        let mut stack: Vec<usize> = from.iter().copied().collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(p) = stack.pop() {
            for &q in &adj[p] {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// States on some initial→final path.
    pub fn useful_states(&self) -> Vec<bool> {
        let fwd = self.reach(&self.initial, true);
        let bwd = self.reach(&self.finals, false);
        fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect()
    }

    /// Keeps the useful states, renumbered in their original order.
    /// Returns the old→new map alongside.
    pub fn trim_with_map(&self) -> (Nfa<L>, Vec<Option<usize>>) {
        let useful = self.useful_states();
        let mut map = vec![None; self.states];
        let mut n = 0;
        for (i, u) in useful.iter().enumerate() {
            if *u {
                map[i] = Some(n);
                n += 1;
            }
        }
        let mut out = Nfa::with_states(n);
        out.initial = self.initial.iter().filter_map(|&s| map[s]).collect();
        out.finals = self.finals.iter().filter_map(|&s| map[s]).collect();
        for (p, l, q) in &self.arcs {
            if let (Some(p), Some(q)) = (map[*p], map[*q]) {
                out.arcs.insert((p, l.clone(), q));
            }
        }
        (out, map)
    }

    pub fn trim(&self) -> Nfa<L> {
        self.trim_with_map().0
    }

    pub fn is_trim(&self) -> bool {
        self.useful_states().iter().all(|u| *u)
    }

    pub fn is_empty(&self) -> bool {
        !self.useful_states().iter().any(|u| *u)
    }

    /// True if some initial state is final (the empty word is accepted).
    pub fn accepts_empty(&self) -> bool {
        self.initial.iter().any(|s| self.finals.contains(s))
    }

    pub fn accepts(&self, word: &[L]) -> bool {
        self.count_paths(word) > 0
    }

    /// Number of accepting paths spelling `word`.
    pub fn count_paths(&self, word: &[L]) -> usize {
        let adj = self.adjacency();
        let mut cur: BTreeMap<usize, usize> = self.initial.iter().map(|&s| (s, 1)).collect();
        for l in word {
            let mut next: BTreeMap<usize, usize> = BTreeMap::new();
            for (&p, &c) in &cur {
                for (al, q) in &adj[p] {
                    if al == l {
                        *next.entry(*q).or_default() += c;
                    }
                }
            }
            cur = next;
        }
        cur.iter()
            .filter(|(s, _)| self.finals.contains(s))
            .map(|(_, c)| c)
            .sum()
    }

    /// Reachable part of the synchronized product. `combine` decides whether
    /// two labels match and what the product arc is labelled with. Returns
    /// the automaton and the pair behind each product state.
    pub fn product<M: Label, N: Label, F>(
        &self,
        other: &Nfa<M>,
        combine: F,
    ) -> (Nfa<N>, Vec<(usize, usize)>)
    where
        F: Fn(&L, &M) -> Option<N>,
    {
        let adj1 = self.adjacency();
        let adj2 = other.adjacency();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut out: Nfa<N> = Nfa::new();
        let mut queue = VecDeque::new();
        let mut intern = |pair: (usize, usize),
                          out: &mut Nfa<N>,
                          pairs: &mut Vec<(usize, usize)>,
                          queue: &mut VecDeque<usize>| {
            *index.entry(pair).or_insert_with(|| {
                let id = out.add_state();
                pairs.push(pair);
                queue.push_back(id);
                id
            })
        };
        for &a in &self.initial {
            for &b in &other.initial {
                let id = intern((a, b), &mut out, &mut pairs, &mut queue);
                out.initial.insert(id);
            }
        }
        while let Some(id) = queue.pop_front() {
            let (a, b) = pairs[id];
            if self.finals.contains(&a) && other.finals.contains(&b) {
                out.finals.insert(id);
            }
            for (l1, a2) in &adj1[a] {
                for (l2, b2) in &adj2[b] {
                    if let Some(l) = combine(l1, l2) {
                        let t = intern((*a2, *b2), &mut out, &mut pairs, &mut queue);
                        out.arcs.insert((id, l, t));
                    }
                }
            }
        }
        (out, pairs)
    }

    /// Intersection over a shared alphabet.
    pub fn intersect(&self, other: &Nfa<L>) -> Nfa<L> {
        self.product(other, |a, b| (a == b).then(|| a.clone())).0
    }

    /// True iff no word labels two distinct accepting paths, decided by
    /// looking for useful off-diagonal states in the self-product.
    pub fn is_unambiguous(&self) -> bool {
        let me = self.trim();
        let (prod, pairs) = me.product(&me, |a, b| (a == b).then(|| a.clone()));
        let useful = prod.useful_states();
        !pairs
            .iter()
            .zip(useful)
            .any(|((p, q), u)| u && p != q)
    }

    /// Subset construction; the result is complete over the labels used
    /// only where arcs exist (no sink state).
    pub fn determinize(&self) -> Nfa<L> {
        let adj = self.adjacency();
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut out = Nfa::new();
        let start: BTreeSet<usize> = self.initial.clone();
        if start.is_empty() {
            return out;
        }
        index.insert(start.clone(), out.add_state());
        subsets.push(start);
        out.initial.insert(0);
        let mut i = 0;
        while i < subsets.len() {
            let set = subsets[i].clone();
            if set.iter().any(|s| self.finals.contains(s)) {
                out.finals.insert(i);
            }
            let mut by_label: BTreeMap<L, BTreeSet<usize>> = BTreeMap::new();
            for &p in &set {
                for (l, q) in &adj[p] {
                    by_label.entry(l.clone()).or_default().insert(*q);
                }
            }
            for (l, target) in by_label {
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = out.add_state();
                        index.insert(target.clone(), id);
                        subsets.push(target);
                        id
                    }
                };
                out.arcs.insert((i, l, id));
            }
            i += 1;
        }
        out
    }

    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        let mut seen = BTreeSet::new();
        self.arcs.iter().all(|(p, l, _)| seen.insert((*p, l.clone())))
    }

    /// Relabels every arc.
    pub fn map_labels<M: Label, F: Fn(&L) -> M>(&self, f: F) -> Nfa<M> {
        Nfa {
            states: self.states,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            arcs: self.arcs.iter().map(|(p, l, q)| (*p, f(l), *q)).collect(),
        }
    }

    /// Treats arcs whose label satisfies `silent` as ε-moves and removes them.
    pub fn erase<F: Fn(&L) -> bool>(&self, silent: F) -> Nfa<L> {
        let mut eps = vec![Vec::new(); self.states];
        let mut solid = vec![Vec::new(); self.states];
        for (p, l, q) in &self.arcs {
            if silent(l) {
                eps[*p].push(*q);
            } else {
                solid[*p].push((l.clone(), *q));
            }
        }
        let mut out = Nfa::with_states(self.states);
        out.initial = self.initial.clone();
        for p in 0..self.states {
            let mut closure = BTreeSet::from([p]);
            let mut stack = vec![p];
            while let Some(x) = stack.pop() {
                for &y in &eps[x] {
                    if closure.insert(y) {
                        stack.push(y);
                    }
                }
            }
            for &x in &closure {
                if self.finals.contains(&x) {
                    out.finals.insert(p);
                }
                for (l, q) in &solid[x] {
                    out.arcs.insert((p, l.clone(), *q));
                }
            }
        }
        out.trim()
    }

    pub fn reverse(&self) -> Nfa<L> {
        Nfa {
            states: self.states,
            initial: self.finals.clone(),
            finals: self.initial.clone(),
            arcs: self.arcs.iter().map(|(p, l, q)| (*q, l.clone(), *p)).collect(),
        }
    }

    /// Disjoint union.
    pub fn union(&self, other: &Nfa<L>) -> Nfa<L> {
        let off = self.states;
        let mut out = self.clone();
        out.states += other.states;
        out.initial.extend(other.initial.iter().map(|s| s + off));
        out.finals.extend(other.finals.iter().map(|s| s + off));
        out.arcs
            .extend(other.arcs.iter().map(|(p, l, q)| (p + off, l.clone(), q + off)));
        out
    }

    /// All accepted words of length at most `max_len`.
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<Vec<L>> {
        let adj = self.adjacency();
        let mut out = BTreeSet::new();
        let mut layer: BTreeSet<(usize, Vec<L>)> =
            self.initial.iter().map(|&s| (s, Vec::new())).collect();
        for len in 0..=max_len {
            let mut next = BTreeSet::new();
            for (s, w) in &layer {
                if self.finals.contains(s) {
                    out.insert(w.clone());
                }
                if len < max_len {
                    for (l, q) in &adj[*s] {
                        let mut w2 = w.clone();
                        w2.push(l.clone());
                        next.insert((*q, w2));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// Exact language equivalence. Returns a shortest distinguishing word.
    pub fn difference_witness(&self, other: &Nfa<L>) -> Option<Vec<L>> {
        let a = self.determinize();
        let b = other.determinize();
        let adj_a = a.adjacency();
        let adj_b = b.adjacency();
        let step = |adj: &Vec<Vec<(L, usize)>>, s: Option<usize>, l: &L| -> Option<usize> {
            s.and_then(|s| adj[s].iter().find(|(x, _)| x == l).map(|(_, q)| *q))
        };
        let labels: BTreeSet<L> = a.labels().union(&other.labels()).cloned().collect();
        let start = (a.initial.first().copied(), b.initial.first().copied());
        let mut seen: HashMap<(Option<usize>, Option<usize>), ()> = HashMap::new();
        let mut queue = VecDeque::from([(start, Vec::new())]);
        seen.insert(start, ());
        while let Some(((sa, sb), w)) = queue.pop_front() {
            let fa = sa.is_some_and(|s| a.finals.contains(&s));
            let fb = sb.is_some_and(|s| b.finals.contains(&s));
            if fa != fb {
                return Some(w);
            }
            for l in &labels {
                let next = (step(&adj_a, sa, l), step(&adj_b, sb, l));
                if next == (None, None) || seen.contains_key(&next) {
                    continue;
                }
                seen.insert(next, ());
                let mut w2 = w.clone();
                w2.push(l.clone());
                queue.push_back((next, w2));
            }
        }
        None
    }

    pub fn equivalent(&self, other: &Nfa<L>) -> bool {
        self.difference_witness(other).is_none()
    }

    /// Minimal DFA (Brzozowski).
    pub fn minimize(&self) -> Nfa<L> {
        self.reverse().determinize().reverse().determinize().trim()
    }

    /// A regular expression for the language, by state elimination.
    pub fn to_regex(&self) -> Regex<L> {
        let me = self.trim();
        let n = me.states;
        let (src, dst) = (n, n + 1);
        let mut edge: BTreeMap<(usize, usize), Regex<L>> = BTreeMap::new();
        let add = |edge: &mut BTreeMap<(usize, usize), Regex<L>>, p, q, r: Regex<L>| {
            let cur = edge.remove(&(p, q));
            edge.insert((p, q), match cur {
                Some(c) => Regex::alt(vec![c, r]),
                None => r,
            });
        };
        for &s in &me.initial {
            add(&mut edge, src, s, Regex::Eps);
        }
        for &s in &me.finals {
            add(&mut edge, s, dst, Regex::Eps);
        }
        for (p, l, q) in &me.arcs {
            add(&mut edge, *p, *q, Regex::Sym(l.clone()));
        }
        let mut left: BTreeSet<usize> = (0..n).collect();
        while !left.is_empty() {
            // Cheapest state first keeps the expression small.
            let degree = |r: usize| {
                let i = edge.keys().filter(|(p, q)| *q == r && *p != r).count();
                let o = edge.keys().filter(|(p, q)| *p == r && *q != r).count();
                i * o
            };
            let r = *left.iter().min_by_key(|&&r| (degree(r), r)).expect("nonempty");
            left.remove(&r);
            let self_loop = edge.remove(&(r, r));
            let ins: Vec<(usize, Regex<L>)> = edge
                .iter()
                .filter(|((_, q), _)| *q == r)
                .map(|((p, _), e)| (*p, e.clone()))
                .collect();
            let outs: Vec<(usize, Regex<L>)> = edge
                .iter()
                .filter(|((p, _), _)| *p == r)
                .map(|((_, q), e)| (*q, e.clone()))
                .collect();
            edge.retain(|(p, q), _| *p != r && *q != r);
            let mid = self_loop.map(Regex::star);
            for (p, e_in) in &ins {
                for (q, e_out) in &outs {
                    let mut parts = vec![e_in.clone()];
                    if let Some(m) = &mid {
                        parts.push(m.clone());
                    }
                    parts.push(e_out.clone());
                    add(&mut edge, *p, *q, Regex::cat(parts));
                }
            }
        }
        edge.remove(&(src, dst)).unwrap_or(Regex::Empty)
    }
}

impl<L: Label + Display> Nfa<L> {
    /// Graphviz rendering with numbered states.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{}\" {{\n  rankdir=LR;\n", escape(name));
        for s in 0..self.states {
            let shape = if self.finals.contains(&s) {
                "doublecircle"
            } else {
                "circle"
            };
            out.push_str(&format!("  q{s} [shape={shape}];\n"));
        }
        for (i, s) in self.initial.iter().enumerate() {
            out.push_str(&format!(
                "  init{i} [shape=point];\n  init{i} -> q{s};\n"
            ));
        }
        for (p, l, q) in &self.arcs {
            out.push_str(&format!("  q{p} -> q{q} [label=\"{}\"];\n", escape(&l.to_string())));
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nfa(n: usize, init: &[usize], fin: &[usize], arcs: &[(usize, char, usize)]) -> Nfa<char> {
        let mut m = Nfa::with_states(n);
        m.initial.extend(init);
        m.finals.extend(fin);
        for &(p, l, q) in arcs {
            m.add_arc(p, l, q);
        }
        m
    }

    #[test]
    fn trimming_drops_dead_and_unreachable_states() {
        let m = nfa(4, &[0], &[1], &[(0, 'a', 1), (0, 'b', 2), (3, 'a', 1)]);
        let t = m.trim();
        assert_eq!(t.num_states(), 2);
        assert_eq!(t.num_arcs(), 1);
        assert!(t.is_trim());
    }

    #[test]
    fn ambiguity_via_self_product() {
        let amb = nfa(3, &[0], &[2], &[(0, 'a', 1), (0, 'a', 2), (1, 'b', 2), (2, 'b', 2)]);
        // "ab" has two paths: 0→1→2 and 0→2→2.
        assert_eq!(amb.count_paths(&['a', 'b']), 2);
        assert!(!amb.is_unambiguous());
        let det = amb.determinize();
        assert!(det.is_deterministic());
        assert!(det.is_unambiguous());
        assert!(det.equivalent(&amb));
        assert!(Nfa::<char>::new().is_unambiguous());
    }

    #[test]
    fn duplicated_state_is_ambiguous() {
        let m = nfa(3, &[0], &[1, 2], &[(0, 'a', 1), (0, 'a', 2)]);
        assert!(!m.is_unambiguous());
    }

    #[test]
    fn epsilon_removal() {
        // a (x)? b where x is silent.
        let m = nfa(4, &[0], &[3], &[(0, 'a', 1), (1, 'x', 2), (2, 'b', 3), (1, 'b', 3)]);
        let e = m.erase(|l| *l == 'x');
        assert!(e.accepts(&['a', 'b']));
        assert!(!e.accepts(&['a', 'x', 'b']));
        assert_eq!(e.enumerate(5).len(), 1);
    }

    #[test]
    fn equivalence_and_witness() {
        let a_star_b = nfa(2, &[0], &[1], &[(0, 'a', 0), (0, 'b', 1)]);
        let a_plus_b = nfa(3, &[0], &[2], &[(0, 'a', 1), (1, 'a', 1), (1, 'b', 2)]);
        assert_eq!(a_star_b.difference_witness(&a_plus_b), Some(vec!['b']));
        assert!(a_star_b.equivalent(&a_star_b.reverse().reverse()));
    }

    #[test]
    fn state_elimination_preserves_language() {
        let m = nfa(
            3,
            &[0],
            &[2],
            &[(0, 'a', 1), (1, 'b', 1), (1, 'c', 2), (0, 'c', 2), (2, 'a', 1)],
        );
        let r = m.to_regex();
        let back = r.glushkov();
        assert!(back.equivalent(&m), "{r:?}");
    }

    #[test]
    fn enumeration_is_length_bounded() {
        let m = nfa(1, &[0], &[0], &[(0, 'a', 0)]);
        let words = m.enumerate(3);
        assert_eq!(words.len(), 4);
        assert!(words.contains(&vec![]));
    }
}
