//! Seeded random inputs for property checks.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::symbol::{Symbol, Tag, Terminal};
use crate::tagged::TaggedWord;

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_tag<R: Rng>(rng: &mut R) -> Tag {
    *Tag::ALL.choose(rng).expect("tags")
}

/// Two different tags.
pub fn random_tag_pair<R: Rng>(rng: &mut R) -> (Tag, Tag) {
    let mut tags = Tag::ALL.to_vec();
    tags.shuffle(rng);
    (tags[0], tags[1])
}

/// Plain word of exactly `len` terminals.
pub fn random_word<R: Rng>(rng: &mut R, terminals: &[Terminal], len: usize) -> Vec<Terminal> {
    (0..len)
        .map(|_| *terminals.choose(rng).expect("terminals"))
        .collect()
}

/// Plain word of 1 ..= `max_len` terminals.
pub fn random_word_upto<R: Rng>(rng: &mut R, terminals: &[Terminal], max_len: usize) -> Vec<Terminal> {
    let len = rng.gen_range(1..=max_len);
    random_word(rng, terminals, len)
}

/// Tagged word of odd length `len`.
pub fn random_tagged_word<R: Rng>(rng: &mut R, terminals: &[Terminal], len: usize) -> TaggedWord {
    assert!(len % 2 == 1);
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        if i % 2 == 0 {
            out.push(Symbol::Term(*terminals.choose(rng).expect("terminals")));
        } else {
            out.push(Symbol::Tag(random_tag(rng)));
        }
    }
    TaggedWord::new(out).expect("alternating")
}

/// Arbitrary string over terminals and tags, alternation not enforced.
pub fn random_mixed<R: Rng>(rng: &mut R, terminals: &[Terminal], len: usize) -> Vec<Symbol> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Symbol::Term(*terminals.choose(rng).expect("terminals"))
            } else {
                Symbol::Tag(random_tag(rng))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let ts = [Terminal::new("a"), Terminal::new("b")];
        let a = random_tagged_word(&mut rng(7), &ts, 9);
        let b = random_tagged_word(&mut rng(7), &ts, 9);
        assert_eq!(a, b);
        assert_eq!(a.len(), 9);
        let (s, t) = random_tag_pair(&mut rng(1));
        assert_ne!(s, t);
    }
}
