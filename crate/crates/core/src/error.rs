use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("not a tagged word: {0}")]
    Alternation(String),

    #[error("width k must be an odd integer >= 3, got {0}")]
    BadWidth(usize),

    #[error("tagged word `{word}` has length {len}, expected {k}")]
    WrongLength { word: String, len: usize, k: usize },

    #[error("the end-word symbol # may not occur inside `{0}`")]
    HashInContent(String),

    #[error("conflictual tag set: {0}")]
    Conflict(String),

    #[error("rule for {0} is ambiguous")]
    AmbiguousRule(String),

    #[error("rule for {0} is a copy rule")]
    CopyRule(String),

    #[error("rule for {0} places two nonterminals side by side")]
    NotOperatorForm(String),

    #[error("rule for {0} accepts the empty word")]
    EmptyWordRule(String),

    #[error("nonterminal {0} has more than one rule")]
    DuplicateRule(String),

    #[error("grammar already uses parentheses as terminals")]
    ParenthesesPresent,

    #[error("malformed boundary word `{0}`")]
    MalformedBoundary(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
