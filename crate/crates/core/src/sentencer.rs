//! Sentence splitting and word tokenization.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use crate::error::{data_lines, read_to_string, Error, Result};

pub(crate) const BUNDLED_ACRONYMS: &str = include_str!("../data/acronyms.txt");
pub(crate) const BUNDLED_CONTRACTIONS: &str = include_str!("../data/contractions.tsv");

const LEADING_PUNCT: &[char] = &['(', '[', '{', '"', '\'', '`'];
const TRAILING_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '}', '"', '\'', '…'];
const CLOSERS: &[char] = &[')', ']', '}', '"', '\''];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    /// Character (not byte) index of the sentence start in the abstract.
    pub source_offset: usize,
}

/// Period-final words that do not end a sentence ("Dr.", "e.g."), matched case-sensitively.
#[derive(Debug, Clone, Default)]
pub struct Acronyms(HashSet<String>);

impl Acronyms {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_ACRONYMS)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&read_to_string(path.as_ref())?))
    }

    pub fn parse(text: &str) -> Self {
        Acronyms(data_lines(text).map(|(_, l)| l.to_string()).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Acronyms {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Acronyms(iter.into_iter().map(Into::into).collect())
    }
}

/// Closed map from a lowercased clitic form to its token pieces ("don't" -> "do", "n't").
#[derive(Debug, Clone, Default)]
pub struct Contractions {
    pieces: HashMap<String, Vec<String>>,
    clitics: HashSet<String>,
}

impl Contractions {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_CONTRACTIONS, "bundled contractions")
            .expect("bundled contractions are valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_to_string(path)?, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut out = Contractions::default();
        for (line, row) in data_lines(text) {
            let Some((surface, expansion)) = row.split_once('\t') else {
                return Err(Error::parse(
                    origin,
                    line,
                    "expected `surface<TAB>expansion`",
                ));
            };
            let surface = surface.trim().to_lowercase();
            let pieces: Vec<String> = expansion
                .split_whitespace()
                .map(str::to_lowercase)
                .collect();
            if pieces.len() < 2 || pieces.concat() != surface {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("expansion of `{surface}` must be two or more pieces that concatenate back to it"),
                ));
            }
            out.clitics.extend(pieces[1..].iter().cloned());
            out.pieces.insert(surface, pieces);
        }
        Ok(out)
    }

    /// Splits `word` into its pieces, preserving the original casing.
    fn split<'a>(&self, word: &'a str) -> Option<Vec<&'a str>> {
        let pieces = self.pieces.get(&word.to_lowercase())?;
        let mut out = Vec::with_capacity(pieces.len());
        let mut rest = word;
        for piece in pieces {
            let len: usize = rest
                .chars()
                .take(piece.chars().count())
                .map(char::len_utf8)
                .sum();
            out.push(&rest[..len]);
            rest = &rest[len..];
        }
        rest.is_empty().then_some(out)
    }

    fn is_clitic(&self, word: &str) -> bool {
        self.clitics.contains(&word.to_lowercase())
    }
}

/// Splits `abstract_text` after words ending in `.`, `?`, `!` or an ellipsis,
/// unless the word is a listed acronym. Delimiters stay with their sentence.
pub fn split_sentences(abstract_text: &str, acronyms: &Acronyms) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut start: Option<usize> = None;
    let mut chars_before = 0;
    let mut counted_to = 0;
    let mut char_offset = |byte: usize| {
        chars_before += abstract_text[counted_to..byte].chars().count();
        counted_to = byte;
        chars_before
    };

    for (byte, word) in whitespace_chunks(abstract_text) {
        let begin = *start.get_or_insert(byte);
        if ends_sentence(word, acronyms) {
            let end = byte + word.len();
            sentences.push(Sentence {
                text: abstract_text[begin..end].to_string(),
                source_offset: char_offset(begin),
            });
            start = None;
        }
    }
    if let Some(begin) = start {
        sentences.push(Sentence {
            text: abstract_text[begin..].trim_end().to_string(),
            source_offset: char_offset(begin),
        });
    }
    sentences
}

fn whitespace_chunks(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split(char::is_whitespace)
        .filter(|w| !w.is_empty())
        .map(move |w| (w.as_ptr() as usize - text.as_ptr() as usize, w))
}

fn ends_sentence(word: &str, acronyms: &Acronyms) -> bool {
    let core = word
        .trim_end_matches(CLOSERS)
        .trim_start_matches(LEADING_PUNCT);
    let terminal = core.ends_with(['.', '?', '!', '…']);
    terminal && !acronyms.contains(core)
}

fn number_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // Superset of the currency form `$` digits `.` digits: any digit group
    // sequence joined by `.` or `,`, optionally dollar-prefixed.
    RE.get_or_init(|| Regex::new(r"^\$?[0-9]+([.,][0-9]+)*$").unwrap())
}

/// Splits a sentence into word and punctuation tokens.
pub fn tokenize(sentence: &str, acronyms: &Acronyms, contractions: &Contractions) -> Vec<String> {
    let mut tokens = Vec::new();
    for (_, chunk) in whitespace_chunks(sentence) {
        split_chunk(chunk, acronyms, contractions, &mut tokens);
    }
    tokens
}

fn split_chunk(
    chunk: &str,
    acronyms: &Acronyms,
    contractions: &Contractions,
    out: &mut Vec<String>,
) {
    let protected = |w: &str| {
        w == "..."
            || acronyms.contains(w)
            || number_pattern().is_match(w)
            || contractions.is_clitic(w)
    };

    let mut core = chunk;
    while !protected(core) && core.chars().count() > 1 && core.starts_with(LEADING_PUNCT) {
        let first = core.chars().next().unwrap();
        out.push(first.to_string());
        core = &core[first.len_utf8()..];
    }

    let mut trailing = Vec::new();
    while !protected(core) {
        if core.ends_with("...") && core != "..." {
            trailing.push("...");
            core = &core[..core.len() - 3];
        } else if core.chars().count() > 1 && core.ends_with(TRAILING_PUNCT) {
            let last = core.chars().next_back().unwrap();
            let at = core.len() - last.len_utf8();
            trailing.push(&core[at..]);
            core = &core[..at];
        } else {
            break;
        }
    }

    match contractions.split(core) {
        Some(pieces) => out.extend(pieces.into_iter().map(str::to_string)),
        None => out.push(core.to_string()),
    }
    out.extend(trailing.into_iter().rev().map(str::to_string));
}
