//! Higher-order operator precedence (HOP) languages.
//!
//! Tagged words and tagged k-word sets, the symmetrical automaton of a
//! strictly locally testable tagged language, handle reduction and the
//! max-language recognizer, extended CF grammars with the HOP(k) check,
//! max-grammar synthesis and the supported closure constructions.

pub mod closures;
pub mod error;
pub mod fa;
pub mod fixtures;
pub mod grammar;
pub mod hop;
pub mod maxgrammar;
pub mod phi_file;
pub mod props;
pub mod reduction;
pub mod regex;
pub mod symbol;
pub mod symfa;
pub mod tagging;
pub mod tagged;

pub use error::{Error, Result};
pub use symbol::{Symbol, Tag, Terminal};
pub use tagged::{Alphabet, MixedString, TagSet, TaggedWord, WindowSet};
