//! Dictionary-driven entity normalization.
//!
//! Multi-word biological names are replaced by their abbreviation so that the
//! tagger sees one noun instead of a phrase. Matching is case-insensitive,
//! delimited by word boundaries, and longest-match-first at every position,
//! scanning left to right without revisiting substituted text.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{data_lines, read_to_string, Error, Result};

/// Entries scoring at or below this value are discarded on load.
pub const SCORE_CUTOFF: f64 = 0.88;

#[derive(Debug, Clone, PartialEq)]
pub struct AbbreviationEntry {
    pub long_form: String,
    pub abbreviation: String,
    pub score: f64,
}

/// An immutable long-form to abbreviation table, iterated longest long form first.
#[derive(Debug, Clone, Default)]
pub struct AbbreviationDictionary {
    entries: Vec<AbbreviationEntry>,
    patterns: Vec<Vec<char>>,
    by_first_char: HashMap<char, Vec<usize>>,
}

fn fold(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Lowercased long form with whitespace runs collapsed to single spaces.
fn match_key(long_form: &str) -> Vec<char> {
    let joined = long_form.split_whitespace().collect::<Vec<_>>().join(" ");
    joined.chars().map(fold).collect()
}

impl AbbreviationDictionary {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_to_string(path)?, &path.display().to_string())
    }

    /// Parses tab-separated `long_form, abbreviation, score` rows.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut retained: Vec<(usize, AbbreviationEntry)> = Vec::new();
        let mut seen: HashMap<Vec<char>, usize> = HashMap::new();

        for (line, row) in data_lines(text) {
            let fields: Vec<&str> = row.split('\t').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                ));
            }
            let score: f64 = fields[2].parse().map_err(|_| {
                Error::parse(origin, line, format!("unparseable score `{}`", fields[2]))
            })?;
            if !(0.0..=1.0).contains(&score) {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("score {score} outside [0, 1]"),
                ));
            }
            let (long_form, abbreviation) = (fields[0], fields[1]);
            if long_form.is_empty() || abbreviation.is_empty() {
                return Err(Error::parse(
                    origin,
                    line,
                    "empty long form or abbreviation",
                ));
            }
            if abbreviation.chars().any(char::is_whitespace) {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("abbreviation `{abbreviation}` contains whitespace"),
                ));
            }
            if long_form == abbreviation {
                return Err(Error::parse(
                    origin,
                    line,
                    "long form equals its abbreviation",
                ));
            }
            if score <= SCORE_CUTOFF {
                continue;
            }

            let key = match_key(long_form);
            if let Some(&idx) = seen.get(&key) {
                let (first_line, first) = &retained[idx];
                if first.abbreviation != abbreviation {
                    return Err(Error::parse(
                        origin,
                        line,
                        format!(
                            "long form `{long_form}` maps to `{abbreviation}` but line {first_line} maps it to `{}`",
                            first.abbreviation
                        ),
                    ));
                }
                continue;
            }
            seen.insert(key, retained.len());
            retained.push((
                line,
                AbbreviationEntry {
                    long_form: long_form.to_string(),
                    abbreviation: abbreviation.to_string(),
                    score,
                },
            ));
        }

        Ok(Self::from_entries(
            retained.into_iter().map(|(_, e)| e).collect(),
        ))
    }

    fn from_entries(mut entries: Vec<AbbreviationEntry>) -> Self {
        entries.sort_by(|a, b| {
            let (ka, kb) = (match_key(&a.long_form), match_key(&b.long_form));
            kb.len()
                .cmp(&ka.len())
                .then_with(|| a.long_form.cmp(&b.long_form))
        });
        let patterns: Vec<Vec<char>> = entries.iter().map(|e| match_key(&e.long_form)).collect();
        let mut by_first_char: HashMap<char, Vec<usize>> = HashMap::new();
        for (idx, pattern) in patterns.iter().enumerate() {
            by_first_char.entry(pattern[0]).or_default().push(idx);
        }
        Self {
            entries,
            patterns,
            by_first_char,
        }
    }

    /// Retained entries, longest long form first (ties lexicographic).
    pub fn entries(&self) -> &[AbbreviationEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Replaces every long form in `text` with its abbreviation.
    pub fn normalize(&self, text: &str) -> String {
        if self.entries.is_empty() {
            return text.to_string();
        }
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut out = String::with_capacity(text.len());
        let mut copied_to = 0;
        let mut i = 0;
        while i < chars.len() {
            let (byte, c) = chars[i];
            let prev_is_word = i > 0 && chars[i - 1].1.is_alphanumeric();
            let hit = self.by_first_char.get(&fold(c)).and_then(|candidates| {
                candidates.iter().find_map(|&idx| {
                    let pattern = &self.patterns[idx];
                    if pattern[0].is_alphanumeric() && prev_is_word {
                        return None;
                    }
                    match_at(&chars, i, pattern).map(|end| (idx, end))
                })
            });
            match hit {
                Some((idx, end)) => {
                    out.push_str(&text[copied_to..byte]);
                    out.push_str(&self.entries[idx].abbreviation);
                    copied_to = chars.get(end).map_or(text.len(), |&(b, _)| b);
                    i = end;
                }
                None => i += 1,
            }
        }
        out.push_str(&text[copied_to..]);
        out
    }
}

/// Matches `pattern` at char index `start`; a space in the pattern matches any
/// whitespace run. Returns the exclusive end index on success.
fn match_at(chars: &[(usize, char)], start: usize, pattern: &[char]) -> Option<usize> {
    let mut i = start;
    for &p in pattern {
        if p == ' ' {
            let ws_start = i;
            while i < chars.len() && chars[i].1.is_whitespace() {
                i += 1;
            }
            if i == ws_start {
                return None;
            }
        } else {
            if i >= chars.len() || fold(chars[i].1) != p {
                return None;
            }
            i += 1;
        }
    }
    let last = *pattern.last()?;
    if last.is_alphanumeric() && i < chars.len() && chars[i].1.is_alphanumeric() {
        return None;
    }
    Some(i)
}
