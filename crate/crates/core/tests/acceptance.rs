//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use hopkit::closures::{intersect_regular_max, RegularSpec};
use hopkit::fixtures::{self, grammar, phi};
use hopkit::grammar::GSym;
use hopkit::hop::{enumerated_kwords, hop_check, op_relations, tagged_kwords_of_tagged};
use hopkit::maxgrammar::{all_words, max_grammar, max_grammar_disagreements, search_phi3, slt_embed};
use hopkit::props;
use hopkit::reduction::{slt_member, Recognizer, Strategy, StuckReason, Verdict};
use hopkit::symbol::{self, plain, plain_word};
use hopkit::symfa::{automaton_of, check_unambiguity};
use hopkit::tagged::{derive_window_set, extract_tagged_kwords, extract_windows, mixed_tag_witness, wrap};
use hopkit::tagging::tagged_grammar;
use hopkit::{regex, Symbol, Tag, TagSet, Terminal, WindowSet};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn t(name: &str) -> Terminal {
    Terminal::new(name)
}

fn render(strings: &[&hopkit::MixedString]) -> Vec<String> {
    strings.iter().map(|s| s.to_string()).collect()
}

/// Glyph normalization for expected traces: `′` is spelled `'`.
fn norm(lines: &[&str]) -> Vec<String> {
    lines.iter().map(|l| l.replace('′', "'")).collect()
}

fn brute<F: Fn(&[Terminal]) -> bool + Sync>(rec: &Recognizer, alphabet: &[Terminal], n: usize, oracle: F) -> Vec<Vec<Terminal>> {
    all_words(alphabet, n)
        .into_par_iter()
        .filter(|w| rec.accepts(w) != oracle(w))
        .collect()
}

fn show(ws: &[Vec<Terminal>]) -> String {
    ws.iter().take(5).map(|w| plain(w)).collect::<Vec<_>>().join(", ")
}

// Counting oracles.

fn runs(w: &[Terminal]) -> Vec<(Terminal, usize)> {
    let mut out: Vec<(Terminal, usize)> = Vec::new();
    for &x in w {
        match out.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn matches_runs(w: &[Terminal], pattern: &str, check: impl Fn(&[usize]) -> bool) -> bool {
    // pattern letters in order; each letter's count may be zero
    let letters: Vec<Terminal> = plain_word(pattern);
    let mut counts = vec![0; letters.len()];
    let mut i = 0;
    for (x, n) in runs(w) {
        while i < letters.len() && letters[i] != x {
            i += 1;
        }
        if i == letters.len() {
            return false;
        }
        counts[i] = n;
        i += 1;
    }
    check(&counts)
}

fn is_dyck(w: &[Terminal]) -> bool {
    let mut stack = Vec::new();
    for x in w {
        match x.name() {
            "a" | "b" => stack.push(x.name()),
            "a'" => {
                if stack.pop() != Some("a") {
                    return false;
                }
            }
            "b'" => {
                if stack.pop() != Some("b") {
                    return false;
                }
            }
            _ => return false,
        }
    }
    !w.is_empty() && stack.is_empty()
}

fn aab_plus(w: &[Terminal]) -> bool {
    !w.is_empty() && w.len() % 3 == 0 && w.chunks(3).all(|c| plain(c) == "a a b")
}

// 1
fn nested_acb_trace() -> Outcome {
    let clock = Instant::now();
    let rec = Recognizer::new(&phi(3, fixtures::ACB)).map_err(|e| e.to_string())?;
    let (ok, trace) = rec.member_with(&plain_word("aaacbbbbcbcbbb"), &Strategy::Leftmost);
    ensure!(ok, "aaacbbbbcbcbbb rejected");
    let trace = trace.ok_or("no trace")?;
    let want = norm(&[
        "#⊙#[a[a[a⊙c⊙b⊙b⊙b⊙b]c⊙b]c⊙b⊙b⊙b]#⊙#",
        "#⊙#[a[a⊙c⊙b]c⊙b⊙b⊙b]#⊙#",
        "#⊙#[a⊙c⊙b⊙b⊙b]#⊙#",
        "#⊙#⊙#⊙#",
    ]);
    let got = render(&trace.strings());
    ensure!(got == want, "trace {got:?}");
    let (ok, trace) = rec.member(&plain_word("aacbb"));
    ensure!(!ok, "aacbb accepted");
    let trace = trace.ok_or("aacbb has no tagging")?;
    let Verdict::Stuck(StuckReason::Irreducible(span)) = trace.verdict else {
        return Err(format!("aacbb verdict {:?}", trace.verdict));
    };
    ensure!(trace.start.to_string() == "#⊙#[a[a⊙c⊙b⊙b]#⊙#", "aacbb start {}", trace.start);
    let handle = symbol::pretty(&trace.last()[span.start..=span.end]);
    ensure!(handle == "[a⊙c⊙b⊙b]", "stuck handle {handle}");
    let took = clock.elapsed();
    ensure!(took < Duration::from_secs(1), "took {took:?}");
    Ok(format!("3 steps; aacbb stuck at {handle}; {took:.2?}"))
}

// 2
fn dyck() -> Outcome {
    let rec = Recognizer::new(&phi(3, fixtures::DYCK)).map_err(|e| e.to_string())?;
    let alphabet = [t("a"), t("a'"), t("b"), t("b'")];
    let words = all_words(&alphabet, 10);
    let positives = words.iter().filter(|w| is_dyck(w)).count();
    let bad: Vec<Vec<Terminal>> = words
        .into_par_iter()
        .filter(|w| rec.accepts(w) != is_dyck(w))
        .collect();
    ensure!(bad.is_empty(), "{} disagreements: {}", bad.len(), show(&bad));
    let w = plain_word("aaa′a′aa′");
    let start = "#⊙#[a[a⊙a′]a′[a⊙a′]#⊙#";
    let columns = [
        (Strategy::Leftmost, norm(&[start, "#⊙#[a⊙a′[a⊙a′]#⊙#", "#⊙#[a⊙a′]#⊙#", "#⊙#⊙#⊙#"])),
        (Strategy::Rightmost, norm(&[start, "#⊙#[a[a⊙a′]a′]#⊙#", "#⊙#[a⊙a′]#⊙#", "#⊙#⊙#⊙#"])),
    ];
    for (strategy, want) in columns {
        let (ok, trace) = rec.member_with(&w, &strategy);
        ensure!(ok, "{strategy:?} rejects");
        let got = render(&trace.ok_or("no trace")?.strings());
        ensure!(got == want, "{strategy:?} trace {got:?}");
    }
    Ok(format!("{positives} Dyck words up to length 10 (bracket-matching oracle); both traces match"))
}

// 3
fn window_set() -> Outcome {
    let p = phi(3, &["#[a", "a⊙b", "b⊙a", "a]#"]);
    let got = derive_window_set(&p);
    let want = WindowSet::from_compact(3, &["#[a", "a⊙b", "b⊙a", "a]#", "[a⊙", "[a]", "⊙b⊙", "⊙a⊙", "⊙a]"]);
    ensure!(got == want, "got {:?}", got.windows.iter().map(|w| symbol::pretty(w)).collect::<Vec<_>>());
    Ok(format!("{} windows", got.len()))
}

// 4
fn op_extraction() -> Outcome {
    let split = grammar(fixtures::SPLIT);
    let mut got = op_relations(&split).entries();
    got.sort();
    let mut want: Vec<String> = ["a≐a", "a⋗b", "b⋖a", "#⋖a", "#⋖b", "a⋗#", "b⋗#", "#≐#"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    want.sort();
    ensure!(got == want, "relations {got:?}");
    let v = hop_check(&split, 3);
    ensure!(v.is_hop, "not HOP(3): {v}");
    let p = v.phi.ok_or("no Φ")?;
    // a⋗b and b⋖a are the tags a]b and b[a.
    let want = phi(3, &["a⊙a", "a]b", "b[a", "#[a", "a]#", "#⊙#", "#[b", "b]#"]);
    ensure!(p.words() == want.words(), "Φ₃ = {p}");
    Ok(format!("{} relations; Φ₃ has {} words", got.len(), p.len()))
}

// 5
fn hop7() -> Outcome {
    let g2 = grammar(fixtures::NESTED);
    let v = hop_check(&g2, 7);
    ensure!(v.is_hop, "not HOP(7): {v}");
    let p = v.phi.ok_or("no Φ")?;
    ensure!(p.words() == phi(7, fixtures::NESTED7).words(), "Φ₇ = {p}");
    let tg = tagged_grammar(&g2);
    let mut witnesses = Vec::new();
    for k in [3, 5] {
        let v = hop_check(&g2, k);
        ensure!(!v.is_hop, "HOP({k})");
        let pairs = v.conflict_pairs();
        ensure!(!pairs.is_empty(), "k={k}: no witness");
        let oracle = enumerated_kwords(&tg, k, 41);
        for (u, w) in &pairs {
            ensure!(u != w && u.project() == w.project(), "k={k}: {u} / {w} is no conflict");
            ensure!(oracle.contains(u) && oracle.contains(w), "k={k}: {u} / {w} not generated");
        }
        witnesses.push(format!("k={k}: {} / {}", pairs[0].0, pairs[0].1));
    }
    Ok(format!("{} 7-words; {}", p.len(), witnesses.join("; ")))
}

// 6
fn synthesis() -> Outcome {
    let p = phi(3, fixtures::ACB);
    let mg = max_grammar(&p).map_err(|e| e.to_string())?;
    ensure!(mg.tagged.len() == 2, "{} nonterminals", mg.tagged.len());
    let names: Vec<&str> = mg.tagged.names().iter().map(String::as_str).collect();
    let want = regex::parse("[ a (o | Y) c o (b o)* b ]")
        .map_err(|e| e.to_string())?
        .map(|n: &String| match names.iter().position(|m| m == n) {
            Some(x) => GSym::N(x),
            None => GSym::T(Symbol::from_token(n)),
        })
        .glushkov();
    for x in 0..2 {
        ensure!(mg.tagged.rule(x).equivalent(&want), "{} -> {}", mg.tagged.name(x), mg.tagged.rule_display(x));
    }
    let bad = max_grammar_disagreements(&p, 14).map_err(|e| e.to_string())?;
    ensure!(bad.is_empty(), "disagree on {}", show(&bad));
    Ok(format!("{} ≡ [a(⊙|Y)c⊙(b⊙)*b]; agreement up to 14", names.join(", ")))
}

// 7
fn dominance() -> Outcome {
    let split = grammar(fixtures::SPLIT);
    let p = hop_check(&split, 3).phi.ok_or("split grammar not HOP(3)")?;
    let rec = Recognizer::new(&p).map_err(|e| e.to_string())?;
    let lg = split.enumerate_plain(10);
    let missing: Vec<Vec<Terminal>> = lg.iter().filter(|w| !rec.accepts(w)).cloned().collect();
    ensure!(missing.is_empty(), "not in Red: {}", show(&missing));
    let aaa = plain_word("aaa");
    ensure!(rec.accepts(&aaa) && !lg.contains(&aaa), "aaa is no strictness witness");
    let (a, b) = (t("a"), t("b"));
    let oracle = |w: &[Terminal]| {
        let nb = w.iter().filter(|&&x| x == b).count();
        !w.is_empty() && nb <= 1
    };
    let bad = brute(&rec, &[a, b], 10, oracle);
    ensure!(bad.is_empty(), "Red ≠ a*ba* ∪ a⁺ on {}", show(&bad));
    Ok(format!("{} split-grammar words ⊆ Red; aaa ∈ Red − L", lg.len()))
}

// 8
fn hierarchy() -> Outcome {
    let clock = Instant::now();
    let (a, b) = (t("a"), t("b"));
    let rec = Recognizer::new(&phi(5, fixtures::AAB5)).map_err(|e| e.to_string())?;
    let bad = brute(&rec, &[a, b], 12, aab_plus);
    ensure!(bad.is_empty(), "Φ₅ disagrees with (aab)⁺ on {}", show(&bad));
    let probes: Vec<Vec<Terminal>> = ["aab", "aabaab", "aabaabaab"].iter().map(|w| plain_word(w)).collect();
    let out = search_phi3(&[a, b], aab_plus, 9, &probes);
    ensure!(out.examined == 4usize.pow(8), "examined {}", out.examined);
    ensure!(out.matches.is_empty(), "found {}", out.matches[0]);
    let took = clock.elapsed();
    ensure!(took < Duration::from_secs(300), "took {took:?}");
    Ok(format!("Φ₅ exact up to 12; 0 of {} Φ₃ candidates match; {took:.1?}", out.examined))
}

// 9
fn negative_hop() -> Outcome {
    let g = grammar(fixtures::PALINDROME);
    let a = Symbol::term("a");
    let mut shown = Vec::new();
    for k in [3, 5, 7, 9] {
        let v = hop_check(&g, k);
        ensure!(!v.is_hop, "HOP({k})");
        let pair = v.conflict_pairs().into_iter().find(|(u, w)| {
            u.project() == w.project()
                && (1..u.len() - 1).any(|i| u[i - 1] == a && u[i + 1] == a && w[i - 1] == a && w[i + 1] == a && u[i] != w[i])
        });
        let (u, w) = pair.ok_or(format!("k={k}: no pair with distinct tags between a's"))?;
        shown.push(format!("{u} / {w}"));
    }
    Ok(shown.join("; "))
}

// 10
fn non_closure() -> Outcome {
    let (a, b, c) = (t("a"), t("b"), t("c"));
    let cases: [(&str, &[&str], Vec<Terminal>, Box<dyn Fn(&[Terminal]) -> bool + Sync>); 4] = [
        ("aⁿbⁿc*", fixtures::ANBN_C, vec![a, b, c], Box::new(|w| matches_runs(w, "abc", |n| n[0] >= 1 && n[0] == n[1]))),
        ("a*bⁿcⁿ", fixtures::A_BNCN, vec![a, b, c], Box::new(|w| matches_runs(w, "abc", |n| n[1] >= 1 && n[1] == n[2]))),
        ("a*b", fixtures::A_STAR_B, vec![a, b], Box::new(|w| matches_runs(w, "ab", |n| n[1] == 1))),
        (
            "a*ba* ∪ a⁺",
            fixtures::A_B_A,
            vec![a, b],
            Box::new(|w| !w.is_empty() && w.iter().filter(|&&x| x == b).count() <= 1),
        ),
    ];
    let mut counts = Vec::new();
    for (name, ws, alphabet, oracle) in cases {
        let rec = Recognizer::new(&phi(3, ws)).map_err(|e| e.to_string())?;
        let bad = brute(&rec, &alphabet, 12, &oracle);
        ensure!(bad.is_empty(), "{name}: disagree on {}", show(&bad));
        counts.push(format!("{name}: {}", all_words(&alphabet, 12).iter().filter(|w| oracle(w)).count()));
    }
    Ok(format!("exact up to 12 ({})", counts.join(", ")))
}

// 11
fn slt() -> Outcome {
    let sets: [(&str, &[&str]); 3] = [
        ("a⁺", &["# a", "a a", "a #"]),
        ("(ab)⁺", &["# a", "a b", "b a", "b #"]),
        ("a⁺b⁺ 3-windows", &["# # a", "# a a", "# a b", "a a a", "a a b", "a b b", "a b #", "b b b", "b b #", "b # #"]),
    ];
    let mut out = Vec::new();
    for (name, words) in sets {
        let f: BTreeSet<Vec<Terminal>> = words.iter().map(|w| plain_word(w)).collect();
        let j = f.first().map_or(0, Vec::len);
        let p = slt_embed(&f).map_err(|e| e.to_string())?;
        let rec = Recognizer::new(&p).map_err(|e| e.to_string())?;
        let alphabet = [t("a"), t("b")];
        let bad = brute(&rec, &alphabet, 10, |w| slt_member(&f, j, w));
        ensure!(bad.is_empty(), "{name}: disagree on {}", show(&bad));
        out.push(format!("{name} → Φ{}", p.k()));
    }
    Ok(format!("Loc = Red up to 10 for {}", out.join(", ")))
}

// 12
fn properties() -> Outcome {
    let mut rng = props::rng(props::DEFAULT_SEED);
    let ab = [t("a"), t("b"), t("c")];
    for i in 0..1000 {
        let len = 2 * (i % 10) + 1;
        let w = props::random_tagged_word(&mut rng, &ab, len);
        let k = [3, 5, 7][i % 3];
        let s = wrap(&w, k).map_err(|e| e.to_string())?;
        let windows = extract_windows(&s, k).windows;
        for x in extract_tagged_kwords(&s, k) {
            ensure!(windows.contains(x.symbols()), "φ_{k}({s}) ∌ {x}");
        }
    }
    for _ in 0..200 {
        let len = 2 * rand::Rng::gen_range(&mut rng, 0..6) + 1;
        let w = props::random_tagged_word(&mut rng, &ab, len);
        let (s1, s2) = props::random_tag_pair(&mut rng);
        let h = 2 * rand::Rng::gen_range(&mut rng, 1..=(len + 1) / 2) + 1;
        ensure!(mixed_tag_witness(&w, s1, s2, h).is_some(), "no witness for {w} {s1} {s2} h={h}");
    }
    let mut automata = 0;
    let fixture_sets = [
        (3, fixtures::DYCK),
        (3, fixtures::ACB),
        (3, fixtures::A_B_A),
        (5, fixtures::AAB5),
        (3, fixtures::ANBN_C),
        (3, fixtures::A_BNCN),
        (3, fixtures::A_STAR_B),
        (7, fixtures::NESTED7),
    ];
    for (k, ws) in fixture_sets {
        ensure!(check_unambiguity(&automaton_of(&phi(k, ws))), "ambiguous automaton for {ws:?}");
        automata += 1;
    }
    let random = random_conflict_free_sets(&mut rng, 300);
    for p in &random {
        ensure!(check_unambiguity(&automaton_of(p)), "ambiguous automaton for {p}");
        automata += 1;
    }
    let mut confluent = 0;
    for ws in [fixtures::DYCK, fixtures::ACB] {
        let rec = Recognizer::new(&phi(3, ws)).map_err(|e| e.to_string())?;
        for w in rec.language(10) {
            ensure!(rec.confluent(&w), "{} is not confluent", plain(&w));
            confluent += 1;
        }
    }
    for (text, depth) in [(fixtures::SPLIT, 17), (fixtures::NESTED, 41), (fixtures::PALINDROME, 17)] {
        let tg = tagged_grammar(&grammar(text));
        for k in [3, 5, 7] {
            let fix = tagged_kwords_of_tagged(&tg, k);
            let oracle = enumerated_kwords(&tg, k, depth);
            ensure!(fix.words() == oracle.words(), "{text}: fixpoint ≠ enumeration at k={k}");
        }
    }
    Ok(format!(
        "1000 strings; 200 witnesses; {automata} automata unambiguous; {confluent} words confluent; 3 grammars × k∈{{3,5,7}}"
    ))
}

/// Random conflict-free 3-word sets over {a, b, #}.
fn random_conflict_free_sets(rng: &mut rand::rngs::StdRng, n: usize) -> Vec<TagSet> {
    let syms = [t("a"), t("b"), Terminal::hash()];
    let mut out = Vec::new();
    while out.len() < n {
        let mut words = vec!["#⊙#".to_string()];
        for &x in &syms {
            for &y in &syms {
                if x.is_hash() && y.is_hash() {
                    continue;
                }
                let choice: usize = rand::Rng::gen_range(rng, 0..4);
                if let Some(tag) = [None, Some(Tag::Open), Some(Tag::Dot), Some(Tag::Close)][choice] {
                    words.push(format!("{}{}{}", x.name(), tag.glyph(), y.name()));
                }
            }
        }
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        if let Ok(p) = TagSet::compact(3, &refs) {
            if p.is_conflict_free() {
                out.push(p);
            }
        }
    }
    out
}

// 13
fn regular_intersection() -> Outcome {
    let p = phi(3, fixtures::ACB);
    let rec = Recognizer::new(&p).map_err(|e| e.to_string())?;
    let red = rec.language(14);
    let mut sizes = Vec::new();
    for r in ["(a | b)* c (a | b)*", "a+ (c b+)+", "a a (a | b | c)*"] {
        let r0 = RegularSpec::parse(r).map_err(|e| e.to_string())?;
        let mg = intersect_regular_max(&p, &r0).map_err(|e| e.to_string())?;
        let oracle: BTreeSet<Vec<Terminal>> = red.iter().filter(|w| r0.accepts(w)).cloned().collect();
        let got = mg.plain.enumerate_plain(14);
        ensure!(got == oracle, "{r}: {} vs {} words", got.len(), oracle.len());
        ensure!(!got.is_empty(), "{r}: empty");
        let v = hop_check(&mg.plain, 3);
        ensure!(v.is_hop, "{r}: not HOP(3)");
        ensure!(v.phi.as_ref().is_some_and(|q| q.is_subset(&p)), "{r}: Φ ⊄ Φ(ACB)");
        sizes.push(format!("{r}: {}", got.len()));
    }
    Ok(sizes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("nested acb trace and stuck handle", nested_acb_trace),
        ("Dyck fixture", dyck),
        ("window-set derivation", window_set),
        ("OP extraction", op_extraction),
        ("HOP(7) fixture", hop7),
        ("max-grammar synthesis", synthesis),
        ("max dominance", dominance),
        ("hierarchy", hierarchy),
        ("negative HOP", negative_hop),
        ("non-closure fixtures", non_closure),
        ("SLT embedding", slt),
        ("property suites", properties),
        ("intersection with regular", regular_intersection),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = clock.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({took:.1?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({took:.1?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
