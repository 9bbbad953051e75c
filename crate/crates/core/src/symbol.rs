//! Terminals, tags and the symbols of tagged words.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// A terminal symbol, identified by its name.
///
/// Names are interned for the lifetime of the process, so terminals are
/// `Copy` and compare by content.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Terminal(&'static str);

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static INTERNER: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(HashSet::new()))
}

impl Terminal {
    pub fn new(name: &str) -> Terminal {
        let mut set = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = set.get(name) {
            return Terminal(existing);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        set.insert(leaked);
        Terminal(leaked)
    }

    /// The end-word symbol `#`.
    pub fn hash() -> Terminal {
        Terminal("#")
    }

    pub fn name(self) -> &'static str {
        self.0
    }

    pub fn is_hash(self) -> bool {
        self.0 == "#"
    }
}

impl fmt::Debug for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// One of the three structure tags.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tag {
    /// `[`, yield precedence.
    Open,
    /// `⊙`, equal precedence.
    Dot,
    /// `]`, take precedence.
    Close,
}

impl Tag {
    /// Probing order used wherever a tag has to be chosen.
    pub const ALL: [Tag; 3] = [Tag::Open, Tag::Dot, Tag::Close];

    /// Pretty glyph, as used in traces and DOT labels.
    pub fn glyph(self) -> &'static str {
        match self {
            Tag::Open => "[",
            Tag::Dot => "⊙",
            Tag::Close => "]",
        }
    }

    /// ASCII token used in Φ and grammar files.
    pub fn token(self) -> &'static str {
        match self {
            Tag::Open => "[",
            Tag::Dot => "o",
            Tag::Close => "]",
        }
    }

    /// Parses a tag token; accepts both the ASCII and the pretty form of `⊙`.
    pub fn from_token(tok: &str) -> Option<Tag> {
        match tok {
            "[" => Some(Tag::Open),
            "]" => Some(Tag::Close),
            "o" | "⊙" => Some(Tag::Dot),
            _ => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.glyph())
    }
}

/// A letter of a tagged word: a terminal or a tag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Term(Terminal),
    Tag(Tag),
}

impl Symbol {
    pub fn term(name: &str) -> Symbol {
        Symbol::Term(Terminal::new(name))
    }

    pub fn hash() -> Symbol {
        Symbol::Term(Terminal::hash())
    }

    pub fn is_tag(self) -> bool {
        matches!(self, Symbol::Tag(_))
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, Symbol::Term(_))
    }

    pub fn is_hash(self) -> bool {
        matches!(self, Symbol::Term(t) if t.is_hash())
    }

    pub fn as_tag(self) -> Option<Tag> {
        match self {
            Symbol::Tag(t) => Some(t),
            Symbol::Term(_) => None,
        }
    }

    pub fn as_terminal(self) -> Option<Terminal> {
        match self {
            Symbol::Term(t) => Some(t),
            Symbol::Tag(_) => None,
        }
    }

    /// File token (`o` for `⊙`).
    pub fn token(self) -> &'static str {
        match self {
            Symbol::Term(t) => t.name(),
            Symbol::Tag(t) => t.token(),
        }
    }

    /// Parses one file token. Tag tokens are reserved and never terminals.
    pub fn from_token(tok: &str) -> Symbol {
        match Tag::from_token(tok) {
            Some(tag) => Symbol::Tag(tag),
            None => Symbol::term(tok),
        }
    }
}

impl From<Tag> for Symbol {
    fn from(t: Tag) -> Symbol {
        Symbol::Tag(t)
    }
}

impl From<Terminal> for Symbol {
    fn from(t: Terminal) -> Symbol {
        Symbol::Term(t)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Term(t) => f.write_str(t.name()),
            Symbol::Tag(t) => f.write_str(t.glyph()),
        }
    }
}

/// Renders a symbol sequence compactly with pretty glyphs, e.g. `#⊙#[a⊙b]#⊙#`.
pub fn pretty(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.to_string()).collect()
}

/// Renders a symbol sequence as whitespace-separated file tokens.
pub fn tokens(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.token()).collect::<Vec<_>>().join(" ")
}

/// Splits compact text into symbols: every character is a symbol, tags are
/// `[`, `]`, `⊙` (and `o`), and a trailing `'` or `′` is glued to the
/// preceding terminal. Whitespace is ignored.
///
/// Handy when all terminals are single characters (`--chars`).
pub fn compact(text: &str) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    for c in text.chars() {
        if c.is_whitespace() {
            continue;
        }
        if c == '\'' || c == '′' {
            if let Some(Symbol::Term(prev)) = out.last().copied() {
                let name = format!("{}'", prev.name());
                *out.last_mut().unwrap() = Symbol::term(&name);
                continue;
            }
        }
        let s = c.to_string();
        out.push(Symbol::from_token(&s));
    }
    out
}

/// Projection σ: erases every tag.
pub fn project(symbols: &[Symbol]) -> Vec<Terminal> {
    symbols.iter().filter_map(|s| s.as_terminal()).collect()
}

/// Renders a plain word of terminals, space separated.
pub fn plain(word: &[Terminal]) -> String {
    word.iter().map(|t| t.name()).collect::<Vec<_>>().join(" ")
}

/// Renders a plain word without separators.
pub fn plain_compact(word: &[Terminal]) -> String {
    word.iter().map(|t| t.name()).collect()
}

/// Splits compact text into plain terminals (see [`compact`]).
pub fn plain_word(text: &str) -> Vec<Terminal> {
    compact(text).into_iter().filter_map(|s| s.as_terminal()).collect()
}
