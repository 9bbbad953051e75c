//! Standard tag sets and grammars shared by tests, benchmarks and the CLI
//! self-check.

use crate::grammar::{parse_grammar, ECFGrammar};
use crate::tagged::TagSet;

/// Balanced words over two bracket pairs `a a′` and `b b′`.
pub const DYCK: &[&str] = &[
    "#⊙#", "b′]a′", "a′]b′", "#[b", "b′[b", "b[b", "a′]a′", "#[a", "b′]#", "a⊙a′", "a[b", "b[a",
    "b′[a", "a′[b", "b′]b′", "a′]#", "b⊙b′", "a′[a", "a[a",
];

/// Nested `a … c b…` words, e.g. `aaacbbbbcbcbbb`.
pub const ACB: &[&str] = &["#⊙#", "#[a", "b]#", "b]c", "c⊙b", "b⊙b", "a⊙c", "a[a"];

/// a*ba* ∪ a⁺.
pub const A_B_A: &[&str] = &["#[b", "a]b", "#⊙#", "#[a", "b]#", "a⊙a", "b[a", "a]#"];

/// (aab)⁺ with 5-words.
pub const AAB5: &[&str] = &[
    "#⊙#[a", "b]#⊙#", "b]a⊙a", "a⊙b]a", "a⊙a⊙b", "#[a⊙a", "a⊙b]#", "#⊙#⊙#",
];

/// aⁿbⁿc*.
pub const ANBN_C: &[&str] = &["b[c", "c]#", "a⊙b", "c⊙c", "#⊙#", "#[a", "b]#", "b]b", "a[a"];

/// a*bⁿcⁿ.
pub const A_BNCN: &[&str] = &["#[b", "a]b", "c]#", "c]c", "#⊙#", "b[b", "#[a", "a⊙a", "b⊙c"];

/// a*b.
pub const A_STAR_B: &[&str] = &["#[b", "a⊙b", "#⊙#", "#[a", "b]#", "a⊙a"];

/// Tagged 7-words of [`NESTED`].
pub const NESTED7: &[&str] = &[
    "#⊙#[a⊙b", "a⊙a⊙b]#", "#[a[a⊙b", "a[a⊙b⊙a", "b]b⊙a⊙a", "a⊙b]b⊙a", "a⊙a⊙b]b", "a⊙b]#⊙#",
    "a[a[a[a", "b⊙a⊙a⊙b", "#[a⊙b⊙a", "#⊙#⊙#⊙#", "a[a[a⊙b", "#⊙#⊙#[a", "b]#⊙#⊙#", "#⊙#[a[a",
    "#[a[a[a", "a⊙b⊙a⊙a",
];

/// a⁺ba⁺ ∪ ba⁺ with the a-runs as a nonterminal.
pub const SPLIT: &str = "S -> X b X | b X ; X -> a a*";

/// aⁿ abaab (baab)ⁿ: HOP(7) but not HOP(5).
pub const NESTED: &str = "S -> a S b a a b | a b a a b";

/// aⁿbaⁿ: not HOP for any k.
pub const PALINDROME: &str = "S -> a S a | b";

pub fn phi(k: usize, words: &[&str]) -> TagSet {
    TagSet::compact(k, words).expect("fixture tag set")
}

pub fn grammar(text: &str) -> ECFGrammar {
    parse_grammar(text).expect("fixture grammar")
}
