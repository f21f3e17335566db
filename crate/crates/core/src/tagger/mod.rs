//! Two-phase transformation-based part-of-speech tagging.
//!
//! Each token first receives its most likely tag from the lexicon (or a default
//! for unknown words). Lexical rules then correct tags from word shape, and
//! contextual rules correct them from neighbouring tags and words. Every rule
//! runs once, in file order, scanning left to right over the current tags.

mod rules;

use std::collections::HashMap;
use std::path::Path;

pub use rules::{ContextualRule, LexicalKind, LexicalRule, Trigger};

use crate::error::{data_lines, read_to_string, Error, Result};
use crate::tags::Tag;

pub(crate) const BUNDLED_LEXICON: &str = include_str!("../../data/lexicon.txt");
pub(crate) const BUNDLED_LEXICAL_RULES: &str = include_str!("../../data/lexical_rules.txt");
pub(crate) const BUNDLED_CONTEXTUAL_RULES: &str = include_str!("../../data/contextual_rules.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub text: String,
    pub tag: Tag,
}

pub type TaggedSentence = Vec<TaggedToken>;

#[derive(Debug, Clone, Default)]
pub struct TaggerModel {
    lexicon: HashMap<String, Tag>,
    lexical_rules: Vec<LexicalRule>,
    contextual_rules: Vec<ContextualRule>,
}

impl TaggerModel {
    /// The small model shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(
            (BUNDLED_LEXICON, "bundled lexicon"),
            (BUNDLED_LEXICAL_RULES, "bundled lexical rules"),
            (BUNDLED_CONTEXTUAL_RULES, "bundled contextual rules"),
        )
        .expect("bundled tagger model is valid")
    }

    pub fn load(lexicon: &Path, lexical_rules: &Path, contextual_rules: &Path) -> Result<Self> {
        let read = |p: &Path| Ok::<_, Error>((read_to_string(p)?, p.display().to_string()));
        let (lex, lex_origin) = read(lexicon)?;
        let (lr, lr_origin) = read(lexical_rules)?;
        let (cr, cr_origin) = read(contextual_rules)?;
        Self::parse((&lex, &lex_origin), (&lr, &lr_origin), (&cr, &cr_origin))
    }

    /// Builds a model from `(text, origin)` pairs for the lexicon and both rule files.
    pub fn parse(
        lexicon: (&str, &str),
        lexical_rules: (&str, &str),
        contextual_rules: (&str, &str),
    ) -> Result<Self> {
        Ok(TaggerModel {
            lexicon: parse_lexicon(lexicon.0, lexicon.1)?,
            lexical_rules: data_lines(lexical_rules.0)
                .map(|(n, l)| LexicalRule::parse(l, lexical_rules.1, n))
                .collect::<Result<_>>()?,
            contextual_rules: data_lines(contextual_rules.0)
                .map(|(n, l)| ContextualRule::parse(l, contextual_rules.1, n))
                .collect::<Result<_>>()?,
        })
    }

    /// Swaps in a different lexicon, keeping the rules.
    pub fn with_lexicon(mut self, lexicon: HashMap<String, Tag>) -> Self {
        self.lexicon = lexicon;
        self
    }

    pub fn lexicon(&self) -> &HashMap<String, Tag> {
        &self.lexicon
    }

    pub fn lexical_rules(&self) -> &[LexicalRule] {
        &self.lexical_rules
    }

    pub fn contextual_rules(&self) -> &[ContextualRule] {
        &self.contextual_rules
    }

    pub fn tag_initial(&self, tokens: &[String]) -> TaggedSentence {
        tokens
            .iter()
            .map(|t| TaggedToken {
                text: t.clone(),
                tag: self.initial_tag(t),
            })
            .collect()
    }

    fn initial_tag(&self, token: &str) -> Tag {
        if let Some(&tag) = self.lexicon.get(token) {
            return tag;
        }
        if let Some(tag) = punctuation_tag(token) {
            return tag;
        }
        if is_numeric(token) {
            return Tag::CD;
        }
        if let Some(&tag) = self.lexicon.get(&token.to_lowercase()) {
            return tag;
        }
        if token.chars().next().is_some_and(char::is_uppercase) {
            Tag::NNP
        } else {
            Tag::NN
        }
    }

    pub fn apply_lexical_rules(&self, sentence: &mut TaggedSentence) {
        apply_lexical_rules(sentence, &self.lexical_rules, &self.lexicon);
    }

    pub fn apply_contextual_rules(&self, sentence: &mut TaggedSentence) {
        apply_contextual_rules(sentence, &self.contextual_rules);
    }

    pub fn tag(&self, tokens: &[String]) -> TaggedSentence {
        let mut sentence = self.tag_initial(tokens);
        self.apply_lexical_rules(&mut sentence);
        self.apply_contextual_rules(&mut sentence);
        sentence
    }
}

fn parse_lexicon(text: &str, origin: &str) -> Result<HashMap<String, Tag>> {
    let mut lexicon = HashMap::new();
    for (line, row) in data_lines(text) {
        let mut fields = row.split_whitespace();
        let word = fields.next().unwrap();
        let mut tags = fields
            .map(|t| {
                t.parse::<Tag>()
                    .map_err(|e| Error::parse(origin, line, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        if tags.is_empty() {
            return Err(Error::parse(origin, line, format!("`{word}` has no tags")));
        }
        lexicon
            .entry(word.to_string())
            .or_insert(tags.swap_remove(0));
    }
    Ok(lexicon)
}

/// Applies each rule in order, one left-to-right pass per rule.
pub fn apply_lexical_rules(
    sentence: &mut TaggedSentence,
    rules: &[LexicalRule],
    lexicon: &HashMap<String, Tag>,
) {
    for rule in rules {
        for token in sentence.iter_mut() {
            if rule.fires(token, lexicon) {
                token.tag = rule.to_tag;
            }
        }
    }
}

/// Applies each rule in order; a retag is visible to later positions of the same pass.
pub fn apply_contextual_rules(sentence: &mut TaggedSentence, rules: &[ContextualRule]) {
    for rule in rules {
        for i in 0..sentence.len() {
            if rule.fires(sentence, i) {
                sentence[i].tag = rule.to_tag;
            }
        }
    }
}

/// Tag for a token made only of punctuation characters.
pub fn punctuation_tag(token: &str) -> Option<Tag> {
    if token.is_empty() || token.chars().any(char::is_alphanumeric) {
        return None;
    }
    let tag = match token {
        "," => Tag::Comma,
        "." | "?" | "!" => Tag::Period,
        "..." | "…" | ":" | ";" | "-" | "--" => Tag::Colon,
        "(" | "[" | "{" => Tag::LeftParen,
        ")" | "]" | "}" => Tag::RightParen,
        "`" | "``" => Tag::OpenQuote,
        "'" | "''" | "\"" => Tag::CloseQuote,
        "$" => Tag::Dollar,
        "#" => Tag::Pound,
        _ => Tag::SYM,
    };
    Some(tag)
}

/// Numerals: at least one digit, otherwise only number punctuation.
fn is_numeric(token: &str) -> bool {
    token.chars().any(|c| c.is_ascii_digit())
        && token
            .chars()
            .all(|c| c.is_ascii_digit() || ".,-+/%$".contains(c))
}
