//! Tagged words, tagged k-word sets and strict local testing.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::symbol::{self, Symbol, Tag, Terminal};

/// Terminal alphabet. Always contains `#`; tags are never members.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Alphabet {
    terminals: BTreeSet<Terminal>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Terminal>>(terminals: I) -> Alphabet {
        let mut set: BTreeSet<Terminal> = terminals.into_iter().collect();
        set.insert(Terminal::hash());
        Alphabet { terminals: set }
    }

    /// Builds an alphabet from names, rejecting tag tokens.
    pub fn from_names<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Result<Alphabet> {
        let mut set = BTreeSet::new();
        for n in names {
            if Tag::from_token(n).is_some() {
                return Err(Error::Invalid(format!("`{n}` is a tag, not a terminal")));
            }
            set.insert(Terminal::new(n));
        }
        Ok(Alphabet::new(set))
    }

    pub fn contains(&self, t: Terminal) -> bool {
        self.terminals.contains(&t)
    }

    pub fn insert(&mut self, t: Terminal) {
        self.terminals.insert(t);
    }

    pub fn terminals(&self) -> impl Iterator<Item = Terminal> + '_ {
        self.terminals.iter().copied()
    }

    /// Terminals other than `#`.
    pub fn proper(&self) -> Vec<Terminal> {
        self.terminals.iter().copied().filter(|t| !t.is_hash()).collect()
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::new(self.terminals().chain(other.terminals()))
    }
}

/// A word of `Σ(ΔΣ)*`: terminals at even offsets, tags at odd offsets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedWord(Vec<Symbol>);

/// Full parse states (end-words, brackets, content) obey the same
/// alternation discipline as tagged words.
pub type MixedString = TaggedWord;

impl TaggedWord {
    pub fn new(symbols: Vec<Symbol>) -> Result<TaggedWord> {
        if !is_tagged(&symbols) {
            return Err(Error::Alternation(symbol::pretty(&symbols)));
        }
        Ok(TaggedWord(symbols))
    }

    pub(crate) fn new_unchecked(symbols: Vec<Symbol>) -> TaggedWord {
        debug_assert!(is_tagged(&symbols), "{}", symbol::pretty(&symbols));
        TaggedWord(symbols)
    }

    /// Parses compact text (see [`symbol::compact`]).
    pub fn compact(text: &str) -> Result<TaggedWord> {
        TaggedWord::new(symbol::compact(text))
    }

    /// The fully-⊙ tagging `z(1)⊙z(2)⊙…⊙z(n)` of a non-empty plain word.
    pub fn dotted(word: &[Terminal]) -> Result<TaggedWord> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for (i, t) in word.iter().enumerate() {
            if i > 0 {
                out.push(Symbol::Tag(Tag::Dot));
            }
            out.push(Symbol::Term(*t));
        }
        TaggedWord::new(out)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn project(&self) -> Vec<Terminal> {
        symbol::project(&self.0)
    }

    pub fn tokens(&self) -> String {
        symbol::tokens(&self.0)
    }
}

impl Deref for TaggedWord {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl Borrow<[Symbol]> for TaggedWord {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for TaggedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&symbol::pretty(&self.0))
    }
}

impl fmt::Debug for TaggedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// True if `s` is non-empty, of odd length and alternates terminal/tag.
pub fn is_tagged(s: &[Symbol]) -> bool {
    s.len() % 2 == 1
        && s.iter()
            .enumerate()
            .all(|(i, sym)| sym.is_terminal() == (i % 2 == 0))
}

/// Strict alternation, allowing the sequence to start with either kind.
pub fn alternates(s: &[Symbol]) -> bool {
    s.windows(2).all(|w| w[0].is_terminal() != w[1].is_terminal())
}

/// Checks `k` is odd and at least 3.
pub fn check_width(k: usize) -> Result<()> {
    if k < 3 || k % 2 == 0 {
        Err(Error::BadWidth(k))
    } else {
        Ok(())
    }
}

/// Parses whitespace-separated tokens into a tagged word over `alphabet`.
pub fn parse_tagged_word(text: &str, alphabet: &Alphabet) -> Result<TaggedWord> {
    let mut syms = Vec::new();
    for tok in text.split_whitespace() {
        let sym = Symbol::from_token(tok);
        if let Symbol::Term(t) = sym {
            if !alphabet.contains(t) {
                return Err(Error::UnknownSymbol(tok.to_string()));
            }
        }
        syms.push(sym);
    }
    if syms.len() % 2 == 0 {
        return Err(Error::Alternation(format!(
            "`{}` has even length {}",
            text.trim(),
            syms.len()
        )));
    }
    TaggedWord::new(syms)
}

/// σ on a mixed string.
pub fn project(s: &[Symbol]) -> Vec<Terminal> {
    symbol::project(s)
}

/// φ_k(s): all length-k factors of `s` that start and end at terminals.
pub fn extract_tagged_kwords(s: &[Symbol], k: usize) -> BTreeSet<TaggedWord> {
    if s.len() < k {
        return BTreeSet::new();
    }
    s.windows(k)
        .filter(|w| w[0].is_terminal() && w[k - 1].is_terminal() && alternates(w))
        .map(|w| TaggedWord(w.to_vec()))
        .collect()
}

/// f_k(s): all length-k factors.
pub fn extract_windows(s: &[Symbol], k: usize) -> WindowSet {
    let windows = if s.len() < k {
        BTreeSet::new()
    } else {
        s.windows(k).map(|w| w.to_vec()).collect()
    };
    WindowSet { k, windows }
}

/// The end-word of width `k`: `(k+1)/2` hashes joined by `⊙`.
pub fn end_word(k: usize) -> TaggedWord {
    end_word_with(k.div_ceil(2))
}

/// `(#⊙)^(hashes-1)#`.
pub fn end_word_with(hashes: usize) -> TaggedWord {
    let mut out = Vec::with_capacity(hashes * 2);
    for i in 0..hashes {
        if i > 0 {
            out.push(Symbol::Tag(Tag::Dot));
        }
        out.push(Symbol::hash());
    }
    TaggedWord(out)
}

/// `⍟# [ w ] ⍟#`.
pub fn wrap(w: &TaggedWord, k: usize) -> Result<MixedString> {
    if w.iter().any(|s| s.is_hash()) {
        return Err(Error::HashInContent(w.to_string()));
    }
    Ok(wrap_content(&bracketed(w), k))
}

/// `[ w ]`.
pub fn bracketed(w: &[Symbol]) -> Vec<Symbol> {
    let mut c = Vec::with_capacity(w.len() + 2);
    c.push(Symbol::Tag(Tag::Open));
    c.extend_from_slice(w);
    c.push(Symbol::Tag(Tag::Close));
    c
}

/// `⍟# · content · ⍟#` for a content that starts and ends with a tag.
pub fn wrap_content(content: &[Symbol], k: usize) -> MixedString {
    let e = end_word(k);
    let mut out = Vec::with_capacity(content.len() + 2 * e.len());
    out.extend_from_slice(&e);
    out.extend_from_slice(content);
    out.extend_from_slice(&e);
    TaggedWord::new_unchecked(out)
}

/// The final string `⍟# ⊙ ⍟#` of an accepting reduction.
pub fn final_string(k: usize) -> MixedString {
    wrap_content(&[Symbol::Tag(Tag::Dot)], k)
}

/// Strips the two end-words of width `k`, returning the content in between.
pub fn strip_end_words(s: &[Symbol], k: usize) -> Option<&[Symbol]> {
    let e = end_word(k);
    if s.len() < 2 * e.len() + 1 || !s.starts_with(&e) || !s.ends_with(&e) {
        return None;
    }
    Some(&s[e.len()..s.len() - e.len()])
}

/// A set Φ of tagged k-words over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagSet {
    k: usize,
    words: BTreeSet<TaggedWord>,
    alphabet: Alphabet,
}

impl TagSet {
    /// Builds a tag set; the alphabet is extended with every terminal used.
    pub fn new<I: IntoIterator<Item = TaggedWord>>(
        k: usize,
        words: I,
        alphabet: Alphabet,
    ) -> Result<TagSet> {
        check_width(k)?;
        let mut alphabet = alphabet;
        let mut set = BTreeSet::new();
        for w in words {
            if w.len() != k {
                return Err(Error::WrongLength {
                    word: w.to_string(),
                    len: w.len(),
                    k,
                });
            }
            for t in w.project() {
                alphabet.insert(t);
            }
            set.insert(w);
        }
        Ok(TagSet {
            k,
            words: set,
            alphabet,
        })
    }

    /// Builds a tag set from compact words, e.g. `["#⊙#", "#[a"]`.
    pub fn compact(k: usize, words: &[&str]) -> Result<TagSet> {
        let ws = words
            .iter()
            .map(|w| TaggedWord::compact(w))
            .collect::<Result<Vec<_>>>()?;
        TagSet::new(k, ws, Alphabet::default())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> &BTreeSet<TaggedWord> {
        &self.words
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.words.contains(w)
    }

    pub fn is_subset(&self, other: &TagSet) -> bool {
        self.words.is_subset(&other.words)
    }

    pub fn union(&self, other: &TagSet) -> Result<TagSet> {
        if self.k != other.k {
            return Err(Error::Invalid(format!(
                "cannot merge tag sets of widths {} and {}",
                self.k, other.k
            )));
        }
        TagSet::new(
            self.k,
            self.words.iter().chain(other.words.iter()).cloned(),
            self.alphabet.union(&other.alphabet),
        )
    }

    pub fn is_conflict_free(&self) -> bool {
        let mut seen = HashSet::new();
        self.words.iter().all(|w| seen.insert(w.project()))
    }

    /// Returns an error naming the conflicts, if any.
    pub fn require_conflict_free(&self) -> Result<()> {
        let report = check_conflicts(self);
        if report.is_empty() {
            Ok(())
        } else {
            Err(Error::Conflict(report.to_string()))
        }
    }
}

impl fmt::Display for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.words.iter().map(|w| w.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Tagged k-words sharing one projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGroup {
    pub projection: Vec<Terminal>,
    pub words: Vec<TaggedWord>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConflictReport {
    pub groups: Vec<ConflictGroup>,
}

impl ConflictReport {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Every unordered conflicting pair.
    pub fn pairs(&self) -> Vec<(TaggedWord, TaggedWord)> {
        let mut out = Vec::new();
        for g in &self.groups {
            for i in 0..g.words.len() {
                for j in i + 1..g.words.len() {
                    out.push((g.words[i].clone(), g.words[j].clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for ConflictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                let ws: Vec<String> = g.words.iter().map(|w| w.to_string()).collect();
                format!("{} ({})", ws.join(" / "), symbol::plain_compact(&g.projection))
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Groups the members of Φ by projection and reports every shared one.
pub fn check_conflicts(phi: &TagSet) -> ConflictReport {
    conflicts_among(phi.words.iter())
}

pub(crate) fn conflicts_among<'a, I: Iterator<Item = &'a TaggedWord>>(words: I) -> ConflictReport {
    let mut by_proj: BTreeMap<Vec<Terminal>, Vec<TaggedWord>> = BTreeMap::new();
    for w in words {
        by_proj.entry(w.project()).or_default().push(w.clone());
    }
    let groups = by_proj
        .into_iter()
        .filter(|(_, ws)| ws.len() > 1)
        .map(|(projection, words)| ConflictGroup { projection, words })
        .collect();
    ConflictReport { groups }
}

/// For a tagged word `w = a₁…` and distinct tags `s1`, `s2`, the two
/// h-words ending `… s1 a₁` and `… s2 a₁`, provided both occur in
/// φ_h(w s1 w s2 w) and conflict.
pub fn mixed_tag_witness(w: &TaggedWord, s1: Tag, s2: Tag, h: usize) -> Option<(TaggedWord, TaggedWord)> {
    if s1 == s2 || h < 3 || h % 2 == 0 || h > w.len() + 2 {
        return None;
    }
    let a1 = w[0];
    let tail = |s: Tag| {
        let mut x = w.symbols().to_vec();
        x.extend([Symbol::Tag(s), a1]);
        TaggedWord::new_unchecked(x[x.len() - h..].to_vec())
    };
    let (u1, u2) = (tail(s1), tail(s2));
    let mut z = w.symbols().to_vec();
    z.push(Symbol::Tag(s1));
    z.extend_from_slice(w);
    z.push(Symbol::Tag(s2));
    z.extend_from_slice(w);
    let phi = extract_tagged_kwords(&z, h);
    (phi.contains(&u1) && phi.contains(&u2) && u1 != u2 && u1.project() == u2.project())
        .then_some((u1, u2))
}

/// True iff every tagged k-word of the full string `s` belongs to Φ.
pub fn locally_valid(s: &[Symbol], phi: &TagSet) -> bool {
    let k = phi.k;
    if s.len() < k {
        return false;
    }
    s.windows(k)
        .filter(|w| w[0].is_terminal())
        .all(|w| phi.words.contains(w))
}

/// A set of length-k windows over terminals and tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    pub k: usize,
    pub windows: BTreeSet<Vec<Symbol>>,
}

impl WindowSet {
    pub fn new(k: usize) -> WindowSet {
        WindowSet {
            k,
            windows: BTreeSet::new(),
        }
    }

    pub fn from_compact(k: usize, windows: &[&str]) -> WindowSet {
        WindowSet {
            k,
            windows: windows.iter().map(|w| symbol::compact(w)).collect(),
        }
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.windows.contains(w)
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn is_subset(&self, other: &WindowSet) -> bool {
        self.windows.is_subset(&other.windows)
    }

    /// All symbols occurring in some window.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.windows.iter().flatten().copied().collect()
    }

    /// f_{k-1} of the set.
    pub fn sub_windows(&self) -> BTreeSet<Vec<Symbol>> {
        self.windows
            .iter()
            .flat_map(|w| [w[..w.len() - 1].to_vec(), w[1..].to_vec()])
            .collect()
    }
}

impl fmt::Display for WindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.windows.iter().map(|w| symbol::pretty(w)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The two-sided local extension of Φ: Φ plus every tag-led window `s x s'`
/// whose terminal-aligned neighbours `a s x` and `x s' b` are both in Φ.
pub fn local_extension(phi: &TagSet) -> WindowSet {
    let k = phi.k;
    let mut windows: BTreeSet<Vec<Symbol>> =
        phi.words.iter().map(|w| w.symbols().to_vec()).collect();
    // x ↦ tags s such that some `a s x` is in Φ, and likewise on the right.
    let mut left: HashMap<&[Symbol], BTreeSet<Symbol>> = HashMap::new();
    let mut right: HashMap<&[Symbol], BTreeSet<Symbol>> = HashMap::new();
    for w in &phi.words {
        left.entry(&w[2..]).or_default().insert(w[1]);
        right.entry(&w[..k - 2]).or_default().insert(w[k - 2]);
    }
    for (x, ls) in &left {
        if let Some(rs) = right.get(x) {
            for s in ls {
                for s2 in rs {
                    let mut win = Vec::with_capacity(k);
                    win.push(*s);
                    win.extend_from_slice(x);
                    win.push(*s2);
                    windows.insert(win);
                }
            }
        }
    }
    WindowSet { k, windows }
}

/// F_k: the windows occurring in the wrapped members of Loc(Φ).
///
/// End-words of 1 up to (k+1)/2 hashes are considered. Candidates come from
/// [`local_extension`]; only those lying on a complete valid wrapped string
/// survive.
pub fn derive_window_set(phi: &TagSet) -> WindowSet {
    let k = phi.k;
    let candidates = local_extension(phi);
    let mut found = BTreeSet::new();
    for hashes in 1..=k.div_ceil(2) {
        found.extend(valid_path_windows(phi, hashes));
    }
    let windows = found
        .into_iter()
        .filter(|w| candidates.contains(w))
        .collect();
    WindowSet { k, windows }
}

/// Windows of every string `E [x] E` in which all tagged k-words are in Φ,
/// where `E` has `hashes` hashes. Explores the finite graph of
/// (last k-1 symbols, expected kind) and keeps only completable paths.
fn valid_path_windows(phi: &TagSet, hashes: usize) -> BTreeSet<Vec<Symbol>> {
    let k = phi.k;
    let pad = end_word_with(hashes);
    let open = Symbol::Tag(Tag::Open);
    let close = Symbol::Tag(Tag::Close);
    let terminals: Vec<Symbol> = phi.alphabet.proper().into_iter().map(Symbol::Term).collect();

    // Appends `sym` to a lookback, returning the new lookback and the window
    // completed by it, or None if that window is a tagged k-word outside Φ.
    let push = |look: &[Symbol], sym: Symbol| -> Option<(Vec<Symbol>, Option<Vec<Symbol>>)> {
        let mut buf = look.to_vec();
        buf.push(sym);
        let window = if buf.len() == k {
            let w = buf.clone();
            if w[0].is_terminal() && !phi.words.contains(w.as_slice()) {
                return None;
            }
            buf.remove(0);
            Some(w)
        } else {
            None
        };
        Some((buf, window))
    };
    let feed = |look: &[Symbol], syms: &[Symbol]| -> Option<(Vec<Symbol>, Vec<Vec<Symbol>>)> {
        let mut cur = look.to_vec();
        let mut wins = Vec::new();
        for &s in syms {
            let (next, w) = push(&cur, s)?;
            cur = next;
            wins.extend(w);
        }
        Some((cur, wins))
    };

    let mut prefix = pad.symbols().to_vec();
    prefix.push(open);
    let Some((start_look, prefix_windows)) = feed(&[], &prefix) else {
        return BTreeSet::new();
    };
    let mut suffix = vec![close];
    suffix.extend_from_slice(&pad);

    // Node: (lookback, expects a terminal next).
    type Node = (Vec<Symbol>, bool);
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut edges: Vec<(usize, usize, Option<Vec<Symbol>>)> = Vec::new();
    let mut finish: Vec<(usize, Vec<Vec<Symbol>>)> = Vec::new();
    let start: Node = (start_look, true);
    index.insert(start.clone(), 0);
    nodes.push(start);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let (look, expect_term) = nodes[id].clone();
        let choices: Vec<Symbol> = if expect_term {
            terminals.clone()
        } else {
            Tag::ALL.iter().map(|&t| Symbol::Tag(t)).collect()
        };
        for sym in choices {
            if let Some((next_look, win)) = push(&look, sym) {
                let node = (next_look, !expect_term);
                let nid = *index.entry(node.clone()).or_insert_with(|| {
                    nodes.push(node);
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                });
                edges.push((id, nid, win));
            }
        }
        if !expect_term {
            if let Some((_, wins)) = feed(&look, &suffix) {
                finish.push((id, wins));
            }
        }
    }

    let mut useful = vec![false; nodes.len()];
    let mut stack: Vec<usize> = finish.iter().map(|(id, _)| *id).collect();
    for &id in &stack {
        useful[id] = true;
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (from, to, _) in &edges {
        preds[*to].push(*from);
    }
    while let Some(id) = stack.pop() {
        for &p in &preds[id] {
            if !useful[p] {
                useful[p] = true;
                stack.push(p);
            }
        }
    }
    if !useful[0] {
        return BTreeSet::new();
    }
    let mut out: BTreeSet<Vec<Symbol>> = prefix_windows.into_iter().collect();
    for (from, to, win) in edges {
        if useful[from] && useful[to] {
            out.extend(win);
        }
    }
    for (id, wins) in finish {
        if useful[id] {
            out.extend(wins);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(k: usize, ws: &[&str]) -> TagSet {
        TagSet::compact(k, ws).unwrap()
    }

    fn nested_acb() -> TagSet {
        set(3, &["#⊙#", "#[a", "b]#", "b]c", "c⊙b", "b⊙b", "a⊙c", "a[a"])
    }

    #[test]
    fn parse_tagged_word_accepts_alternation() {
        let alpha = Alphabet::from_names(["a", "b"]).unwrap();
        let w = parse_tagged_word("a o b", &alpha).unwrap();
        assert_eq!(w.to_string(), "a⊙b");
        let w = parse_tagged_word("# [ a", &alpha).unwrap();
        assert_eq!(w.to_string(), "#[a");
    }

    #[test]
    fn parse_tagged_word_errors() {
        let alpha = Alphabet::from_names(["a", "b"]).unwrap();
        assert!(matches!(
            parse_tagged_word("a o o b", &alpha),
            Err(Error::Alternation(_))
        ));
        assert!(matches!(
            parse_tagged_word("a o z", &alpha),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_tagged_word("a o", &alpha),
            Err(Error::Alternation(_))
        ));
    }

    #[test]
    fn tagged_kwords_of_a_wrapped_string() {
        let s = TaggedWord::compact("#⊙#[a⊙b]#⊙#").unwrap();
        let got: Vec<String> = extract_tagged_kwords(&s, 3)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(got, vec!["#[a", "#⊙#", "a⊙b", "b]#"]);
        let single = extract_tagged_kwords(&TaggedWord::compact("a⊙b").unwrap(), 3);
        assert_eq!(single.len(), 1);
        assert!(extract_tagged_kwords(&TaggedWord::compact("a").unwrap(), 3).is_empty());
    }

    #[test]
    fn sliding_windows() {
        let s = symbol::compact("a⊙b⊙a");
        assert_eq!(
            extract_windows(&s, 3),
            WindowSet::from_compact(3, &["a⊙b", "⊙b⊙", "b⊙a"])
        );
        assert!(extract_windows(&symbol::compact("a⊙b"), 5).is_empty());
    }

    #[test]
    fn conflicts() {
        let r = check_conflicts(&set(3, &["a[b", "a]b"]));
        assert_eq!(r.groups.len(), 1);
        assert_eq!(symbol::plain_compact(&r.groups[0].projection), "ab");
        assert_eq!(r.pairs().len(), 1);
        assert!(check_conflicts(&nested_acb()).is_empty());
        assert!(check_conflicts(&set(3, &["a[a", "a⊙b"])).is_empty());
    }

    #[test]
    fn end_words() {
        assert_eq!(end_word(3).to_string(), "#⊙#");
        assert_eq!(end_word(5).to_string(), "#⊙#⊙#");
        assert_eq!(end_word(7).to_string(), "#⊙#⊙#⊙#");
    }

    #[test]
    fn wrapping() {
        let w = TaggedWord::compact("a⊙b").unwrap();
        assert_eq!(wrap(&w, 3).unwrap().to_string(), "#⊙#[a⊙b]#⊙#");
        let w = TaggedWord::compact("a").unwrap();
        assert_eq!(wrap(&w, 3).unwrap().to_string(), "#⊙#[a]#⊙#");
        let w = TaggedWord::compact("a⊙#").unwrap();
        assert!(matches!(wrap(&w, 3), Err(Error::HashInContent(_))));
    }

    #[test]
    fn local_validity() {
        let phi = nested_acb();
        let start = TaggedWord::compact("#⊙#[a[a[a⊙c⊙b⊙b⊙b⊙b]c⊙b]c⊙b⊙b⊙b]#⊙#").unwrap();
        assert!(locally_valid(&start, &phi));
        let bad = TaggedWord::compact("#⊙#[a⊙a]#⊙#").unwrap();
        assert!(!locally_valid(&bad, &phi));
        let acb = wrap(&TaggedWord::compact("a⊙c⊙b").unwrap(), 3).unwrap();
        assert!(locally_valid(&acb, &phi));
    }

    #[test]
    fn window_set_of_alternating_ab() {
        let phi = set(3, &["#[a", "a⊙b", "b⊙a", "a]#"]);
        let f = derive_window_set(&phi);
        let expected = WindowSet::from_compact(
            3,
            &["#[a", "a⊙b", "b⊙a", "a]#", "[a⊙", "[a]", "⊙b⊙", "⊙a⊙", "⊙a]"],
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn window_set_trims_unusable_words() {
        assert!(derive_window_set(&set(3, &["a⊙b"])).is_empty());
        // No tagged word can be wrapped when only the end-word is allowed.
        assert!(derive_window_set(&set(3, &["#⊙#"])).is_empty());
    }

    #[test]
    fn derived_windows_lie_within_local_extension() {
        let phi = nested_acb();
        let f = derive_window_set(&phi);
        assert!(f.is_subset(&local_extension(&phi)));
        // Pure end-word windows and bracket windows from both sides appear.
        assert!(f.contains(&symbol::compact("⊙#[")));
        assert!(f.contains(&symbol::compact("]#⊙")));
        assert!(!f.contains(&symbol::compact("]#[")));
    }
}
