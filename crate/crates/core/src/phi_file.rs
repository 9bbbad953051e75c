//! Tag-set files.
//!
//! ```text
//! ; nested a…c b… words
//! k: 3
//! terminals: a b c
//! # o #
//! # [ a
//! a o c
//! ```
//!
//! A line without whitespace is read in compact form (`a⊙c`, `#[a`).

use crate::error::{Error, Result};
use crate::symbol::compact;
use crate::tagged::{check_width, parse_tagged_word, Alphabet, TagSet, TaggedWord};

pub fn parse_phi(text: &str) -> Result<TagSet> {
    let mut k: Option<usize> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut words: Vec<(usize, TaggedWord)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        let at = |e: Error| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        };
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("k:") {
            let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad width `{}`", rest.trim()),
            })?;
            check_width(n).map_err(at)?;
            k = Some(n);
            continue;
        }
        if let Some(rest) = line.strip_prefix("terminals:") {
            alphabet = Some(Alphabet::from_names(rest.split_whitespace()).map_err(at)?);
            continue;
        }
        let w = if line.contains(char::is_whitespace) {
            let alpha = match &alphabet {
                Some(a) => a.clone(),
                None => Alphabet::new(
                    line.split_whitespace()
                        .map(crate::symbol::Symbol::from_token)
                        .filter_map(|s| s.as_terminal()),
                ),
            };
            parse_tagged_word(line, &alpha).map_err(at)?
        } else {
            let w = TaggedWord::new(compact(line)).map_err(at)?;
            if let Some(a) = &alphabet {
                if let Some(t) = w.project().into_iter().find(|t| !a.contains(*t)) {
                    return Err(at(Error::UnknownSymbol(t.name().to_string())));
                }
            }
            w
        };
        words.push((lineno, w));
    }
    let k = match k {
        Some(k) => k,
        None => match words.first() {
            Some((_, w)) => w.len(),
            None => {
                return Err(Error::Parse {
                    line: 0,
                    msg: "no `k:` directive and no words".into(),
                })
            }
        },
    };
    if let Some((line, w)) = words.iter().find(|(_, w)| w.len() != k) {
        return Err(Error::Parse {
            line: *line,
            msg: Error::WrongLength {
                word: w.to_string(),
                len: w.len(),
                k,
            }
            .to_string(),
        });
    }
    TagSet::new(k, words.into_iter().map(|(_, w)| w), alphabet.unwrap_or_default())
}

/// File text that re-parses to the same tag set.
pub fn phi_to_file(phi: &TagSet) -> String {
    let names: Vec<&str> = phi.alphabet().proper().iter().map(|t| t.name()).collect();
    let mut out = format!("k: {}\nterminals: {}\n", phi.k(), names.join(" "));
    for w in phi.words() {
        out.push_str(&w.tokens());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, phi};

    #[test]
    fn parses_both_word_forms() {
        let p = parse_phi("; c\nk: 3\nterminals: a b c\n# o #\n#[a\na o c\n").unwrap();
        let want = TagSet::new(
            3,
            phi(3, &["#⊙#", "#[a", "a⊙c"]).words().iter().cloned(),
            Alphabet::from_names(["a", "b", "c"]).unwrap(),
        )
        .unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn round_trips() {
        for (k, ws) in [(3, fixtures::DYCK), (5, fixtures::AAB5), (7, fixtures::NESTED7)] {
            let p = phi(k, ws);
            assert_eq!(parse_phi(&phi_to_file(&p)).unwrap(), p);
        }
    }

    #[test]
    fn infers_width() {
        assert_eq!(parse_phi("#⊙#⊙#\n").unwrap().k(), 5);
    }

    #[test]
    fn reports_line_numbers() {
        let bad = [
            ("k: 4\n", 1),
            ("k: 3\n#⊙#\na b\n", 3),
            ("k: 3\nterminals: a\n#[b\n", 3),
            ("k: 3\n#⊙#⊙#\n", 2),
            ("k: 3\na [ ] b\n", 2),
        ];
        for (text, line) in bad {
            match parse_phi(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
