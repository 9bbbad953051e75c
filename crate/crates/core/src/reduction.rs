//! Handles, the reduction relation and the max-language recognizer.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{self, Symbol, Tag, Terminal};
use crate::symfa::{automaton_of, SymFA};
use crate::tagged::{
    check_width, final_string, locally_valid, wrap, MixedString, TagSet, TaggedWord,
};

/// Inclusive span of a handle `[x]` in a mixed string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HandleSpan {
    pub start: usize,
    pub end: usize,
}

impl HandleSpan {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub before: MixedString,
    pub span: HandleSpan,
    pub replacement: Tag,
    pub after: MixedString,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StuckReason {
    /// The wrapped word is not locally valid to begin with.
    NotLocallyValid,
    /// No handle left, yet the final string was not reached.
    NoHandle,
    /// The chosen handle admits no replacement tag.
    Irreducible(HandleSpan),
    /// A given-order strategy named a handle that does not exist.
    NoSuchHandle(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Stuck(StuckReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub k: usize,
    pub start: MixedString,
    pub steps: Vec<ReductionStep>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// At step i reduce the handle with index `order[i]` (0 = leftmost);
    /// once the list runs out, continue leftmost.
    Given(Vec<usize>),
}

/// All handles `[x]` of `s`, left to right: `x` alternates non-`#`
/// terminals and `⊙` tags.
pub fn find_handles(s: &[Symbol]) -> Vec<HandleSpan> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        if let Some(end) = handle_at(s, i) {
            out.push(HandleSpan { start: i, end });
            i = end + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// End of the handle opening at `i`, if one does.
fn handle_at(s: &[Symbol], i: usize) -> Option<usize> {
    if s.get(i) != Some(&Symbol::Tag(Tag::Open)) {
        return None;
    }
    let mut j = i + 1;
    loop {
        match s.get(j) {
            Some(Symbol::Term(t)) if !t.is_hash() => {}
            _ => return None,
        }
        match s.get(j + 1) {
            Some(Symbol::Tag(Tag::Dot)) => j += 2,
            Some(Symbol::Tag(Tag::Close)) => return Some(j + 1),
            _ => return None,
        }
    }
}

fn leftmost_handle(s: &[Symbol]) -> Option<HandleSpan> {
    (0..s.len()).find_map(|i| handle_at(s, i).map(|end| HandleSpan { start: i, end }))
}

/// Checks only the tagged k-words that cover position `p`.
fn valid_around(s: &[Symbol], p: usize, phi: &TagSet) -> bool {
    let k = phi.k();
    if s.len() < k {
        return false;
    }
    let lo = p.saturating_sub(k - 1);
    let hi = p.min(s.len() - k);
    (lo..=hi)
        .filter(|&i| s[i].is_terminal())
        .all(|i| phi.contains(&s[i..i + k]))
}

fn replace(s: &[Symbol], span: HandleSpan, t: Tag) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(s.len() - span.len() + 1);
    out.extend_from_slice(&s[..span.start]);
    out.push(Symbol::Tag(t));
    out.extend_from_slice(&s[span.end + 1..]);
    out
}

/// The tag that may replace the handle at `span`, probing `[`, `⊙`, `]`.
/// Fails if two tags qualify, which only a conflictual Φ allows.
pub fn replacement_tag(s: &[Symbol], span: HandleSpan, phi: &TagSet) -> Result<Option<Tag>> {
    let mut found = None;
    for t in Tag::ALL {
        let cand = replace(s, span, t);
        if valid_around(&cand, span.start, phi) {
            if let Some(prev) = found {
                return Err(Error::Conflict(format!(
                    "both {prev} and {t} may replace the handle {}",
                    symbol::pretty(&s[span.start..=span.end])
                )));
            }
            found = Some(t);
        }
    }
    Ok(found)
}

/// One reduction step at `span`, or `None` if the handle is irreducible.
pub fn reduce_once(s: &MixedString, span: HandleSpan, phi: &TagSet) -> Result<Option<ReductionStep>> {
    if handle_at(s, span.start) != Some(span.end) {
        return Err(Error::Invalid(format!(
            "no handle at {}..{} of {s}",
            span.start, span.end
        )));
    }
    Ok(replacement_tag(s, span, phi)?.map(|t| ReductionStep {
        before: s.clone(),
        span,
        replacement: t,
        after: TaggedWord::new_unchecked(replace(s, span, t)),
    }))
}

/// Reduces the wrapped `w` until the final string or a dead end.
pub fn reduce_to_end(phi: &TagSet, w: &TaggedWord, strategy: &Strategy) -> Result<ReductionTrace> {
    let k = phi.k();
    check_width(k)?;
    let start = wrap(w, k)?;
    let goal = final_string(k);
    let mut trace = ReductionTrace {
        k,
        start: start.clone(),
        steps: Vec::new(),
        verdict: Verdict::Accepted,
    };
    if !locally_valid(&start, phi) {
        trace.verdict = Verdict::Stuck(StuckReason::NotLocallyValid);
        return Ok(trace);
    }
    let mut cur = start;
    loop {
        if cur == goal {
            return Ok(trace);
        }
        let handles = find_handles(&cur);
        if handles.is_empty() {
            trace.verdict = Verdict::Stuck(StuckReason::NoHandle);
            return Ok(trace);
        }
        let span = match strategy {
            Strategy::Leftmost => handles[0],
            Strategy::Rightmost => *handles.last().unwrap(),
            Strategy::Given(order) => {
                let i = order.get(trace.steps.len()).copied().unwrap_or(0);
                match handles.get(i) {
                    Some(h) => *h,
                    None => {
                        trace.verdict = Verdict::Stuck(StuckReason::NoSuchHandle(i));
                        return Ok(trace);
                    }
                }
            }
        };
        match reduce_once(&cur, span, phi)? {
            Some(step) => {
                cur = step.after.clone();
                trace.steps.push(step);
            }
            None => {
                trace.verdict = Verdict::Stuck(StuckReason::Irreducible(span));
                return Ok(trace);
            }
        }
    }
}

impl ReductionTrace {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    /// The last string of the trace.
    pub fn last(&self) -> &MixedString {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.start)
    }

    /// Every string of the trace, start first.
    pub fn strings(&self) -> Vec<&MixedString> {
        std::iter::once(&self.start)
            .chain(self.steps.iter().map(|s| &s.after))
            .collect()
    }

    /// Human display: each string followed by a line underlining the handle
    /// and naming the replacement tag.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&format!("{}\n", step.before));
            out.push_str(&format!(
                "{} ⇝ {}\n",
                underline(&step.before, step.span),
                step.replacement
            ));
        }
        let last = self.last();
        match &self.verdict {
            Verdict::Accepted => out.push_str(&format!("{last}\naccepted\n")),
            Verdict::Stuck(StuckReason::Irreducible(span)) => {
                out.push_str(&format!("{last}\n"));
                out.push_str(&format!(
                    "{} stuck: no tag may replace {}\n",
                    underline(last, *span),
                    symbol::pretty(&last[span.start..=span.end])
                ));
            }
            Verdict::Stuck(reason) => {
                out.push_str(&format!("{last}\nstuck: {}\n", describe(reason)))
            }
        }
        out
    }

    /// Line-oriented records for tools.
    pub fn records(&self) -> String {
        let mut out = format!("start {}\n", self.start.tokens());
        for (i, step) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {} {} {} {} {}\n",
                i + 1,
                step.span.start,
                step.span.end,
                step.replacement.token(),
                step.after.tokens()
            ));
        }
        match &self.verdict {
            Verdict::Accepted => out.push_str("accepted\n"),
            Verdict::Stuck(StuckReason::Irreducible(span)) => {
                out.push_str(&format!("stuck irreducible {} {}\n", span.start, span.end))
            }
            Verdict::Stuck(StuckReason::NoSuchHandle(i)) => {
                out.push_str(&format!("stuck no-such-handle {i}\n"))
            }
            Verdict::Stuck(StuckReason::NoHandle) => out.push_str("stuck no-handle\n"),
            Verdict::Stuck(StuckReason::NotLocallyValid) => {
                out.push_str("stuck not-locally-valid\n")
            }
        }
        out
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn describe(reason: &StuckReason) -> String {
    match reason {
        StuckReason::NotLocallyValid => "the wrapped word is not locally valid".into(),
        StuckReason::NoHandle => "no handle left".into(),
        StuckReason::Irreducible(span) => format!("irreducible handle at {}..{}", span.start, span.end),
        StuckReason::NoSuchHandle(i) => format!("there is no handle number {i}"),
    }
}

fn underline(s: &[Symbol], span: HandleSpan) -> String {
    let width = |x: &Symbol| x.to_string().chars().count();
    let pad: usize = s[..span.start].iter().map(width).sum();
    let mark: usize = s[span.start..=span.end].iter().map(width).sum();
    format!("{}{}", " ".repeat(pad), "^".repeat(mark))
}

/// A tag set together with its symmetrical automaton, for repeated queries.
#[derive(Clone, Debug)]
pub struct Recognizer {
    phi: TagSet,
    fa: SymFA,
}

impl Recognizer {
    /// Fails on a conflictual Φ.
    pub fn new(phi: &TagSet) -> Result<Recognizer> {
        phi.require_conflict_free()?;
        Ok(Recognizer {
            phi: phi.clone(),
            fa: automaton_of(phi),
        })
    }

    pub fn phi(&self) -> &TagSet {
        &self.phi
    }

    pub fn automaton(&self) -> &SymFA {
        &self.fa
    }

    pub fn tag(&self, w: &[Terminal]) -> Option<TaggedWord> {
        self.fa.tag(w)
    }

    /// Membership plus the reduction trace of the chosen strategy.
    pub fn member_with(&self, w: &[Terminal], strategy: &Strategy) -> (bool, Option<ReductionTrace>) {
        match self.tag(w) {
            None => (false, None),
            Some(x) => {
                let trace = reduce_to_end(&self.phi, &x, strategy).expect("conflict-free Φ");
                (trace.accepted(), Some(trace))
            }
        }
    }

    pub fn member(&self, w: &[Terminal]) -> (bool, Option<ReductionTrace>) {
        self.member_with(w, &Strategy::Leftmost)
    }

    /// Fast membership without recording a trace.
    pub fn accepts(&self, w: &[Terminal]) -> bool {
        let Some(x) = self.tag(w) else {
            return false;
        };
        let k = self.phi.k();
        let mut cur: Vec<Symbol> = wrap(&x, k).expect("no # in w").into_symbols();
        let goal = final_string(k);
        while let Some(span) = leftmost_handle(&cur) {
            match replacement_tag(&cur, span, &self.phi).expect("conflict-free Φ") {
                Some(t) => cur = replace(&cur, span, t),
                None => return false,
            }
        }
        cur.as_slice() == goal.symbols()
    }

    /// Red(Φ) up to `max_len` terminals, drawn from the locally valid
    /// words and filtered by reduction.
    pub fn language(&self, max_len: usize) -> BTreeSet<Vec<Terminal>> {
        self.fa
            .to_nfa()
            .enumerate(2 * max_len + 1)
            .iter()
            .map(|s| symbol::project(s))
            .filter(|w| !w.is_empty() && self.accepts(w))
            .collect()
    }

    /// Explores every reduction order; true iff they all agree.
    pub fn confluent(&self, w: &[Terminal]) -> bool {
        let Some(x) = self.tag(w) else {
            return true;
        };
        let start = wrap(&x, self.phi.k()).expect("no # in w").into_symbols();
        let goal = final_string(self.phi.k()).into_symbols();
        let mut memo = HashMap::new();
        let outcomes = self.outcomes(start, &goal, &mut memo);
        outcomes.len() == 1
    }

    fn outcomes(
        &self,
        s: Vec<Symbol>,
        goal: &[Symbol],
        memo: &mut HashMap<Vec<Symbol>, BTreeSet<bool>>,
    ) -> BTreeSet<bool> {
        if let Some(o) = memo.get(&s) {
            return o.clone();
        }
        let mut out = BTreeSet::new();
        let handles = find_handles(&s);
        if handles.is_empty() {
            out.insert(s.as_slice() == goal);
        }
        for span in handles {
            match replacement_tag(&s, span, &self.phi).expect("conflict-free Φ") {
                Some(t) => out.extend(self.outcomes(replace(&s, span, t), goal, memo)),
                None => {
                    out.insert(false);
                }
            }
        }
        memo.insert(s, out.clone());
        out
    }
}

/// Membership in Red(Φ), with the leftmost trace when a tagging exists.
pub fn member_max(phi: &TagSet, w: &[Terminal]) -> Result<(bool, Option<ReductionTrace>)> {
    Ok(Recognizer::new(phi)?.member(w))
}

/// Whether every reduction order of `w` reaches the same verdict.
pub fn check_confluence(phi: &TagSet, w: &[Terminal]) -> Result<bool> {
    Ok(Recognizer::new(phi)?.confluent(w))
}

/// Plain strict local testing: every j-factor of `#^(j-1) w #^(j-1)` is in `f`.
pub fn slt_member(f: &BTreeSet<Vec<Terminal>>, j: usize, w: &[Terminal]) -> bool {
    let pad = vec![Terminal::hash(); j.saturating_sub(1)];
    let mut s = pad.clone();
    s.extend_from_slice(w);
    s.extend_from_slice(&pad);
    s.len() >= j && s.windows(j).all(|x| f.contains(x))
}

/// σ(Φ) as a plain word set of width (k+1)/2.
pub fn projected_words(phi: &TagSet) -> BTreeSet<Vec<Terminal>> {
    phi.words().iter().map(|w| w.project()).collect()
}

/// Every accepted sample lies in Loc(σ(Φ)).
pub fn slt_refinement_check(phi: &TagSet, samples: &[Vec<Terminal>]) -> Result<bool> {
    let rec = Recognizer::new(phi)?;
    let f = projected_words(phi);
    let h = phi.k().div_ceil(2);
    Ok(samples
        .iter()
        .filter(|w| rec.accepts(w))
        .all(|w| slt_member(&f, h, w)))
}
