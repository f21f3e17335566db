//! Noun and verb group chunking over tag sequences.
//!
//! Chunking runs in four steps: past/participle verb tags (VBD, VBG, VBN) are
//! protected with a suffix so the noun-phrase pattern cannot absorb them, noun
//! phrases (NX) are recognized, the verb tags are unprotected, and verb phrases
//! (VX) are recognized among the tokens not already inside an NX.

mod pattern;

use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

pub use pattern::TagPattern;

use crate::tagger::TaggedSentence;
use crate::tags::Tag;

/// Noun-phrase pattern over space-terminated tags.
pub const NP_PATTERN: &str = concat!(
    "((((PDT )?(DT |PRP[$] |WDT |WP[$] )(VBG |VBD |VBN |JJ |JJR |JJS |, |CC |NN |NNS |NNP |NNPS |CD )*",
    "(NN |NNS |NNP |NNPS |CD )+)|((PDT )?(JJ |JJR |JJS |, |CC |NN |NNS |NNP |NNPS |CD )*",
    "(NN |NNS |NNP |NNPS |CD )+)|EX |PRP |WP |WDT )POS )?",
    "(((PDT )?(DT |PRP[$] |WDT |WP[$] )(VBG |VBD |VBN |JJ |JJR |JJS |, |CC |NN |NNS |NNP |NNPS |CD )*",
    "(NN |NNS |NNP |NNPS |CD )+)|((PDT )?(JJ |JJR |JJS |, |CC |NN |NNS |NNP |NNPS |CD )*",
    "(NN |NNS |NNP |NNPS |CD )+)|EX |PRP |WP |WDT )",
);

/// Verb-phrase pattern over space-terminated tags.
pub const VP_PATTERN: &str = concat!(
    "(RB |RBR |RBS |WRB )*(MD )?(RB |RBR |RBS |WRB )*(VB |VBD |VBG |VBN |VBP |VBZ )",
    "(VB |VBD |VBG |VBN |VBP |VBZ |RB |RBR |RBS |WRB )*(RP )?(TO (RB )*(VB |VBN )(RP )?)?",
);

/// Appended to protected verb tags; not a character any tag contains.
pub const PROTECTION_SUFFIX: char = '§';

/// Stand-in for tokens already inside a noun phrase when matching verb phrases.
const MASKED: &str = "§";

fn np() -> &'static TagPattern {
    static P: OnceLock<TagPattern> = OnceLock::new();
    P.get_or_init(|| TagPattern::new(NP_PATTERN).expect("noun-phrase pattern compiles"))
}

fn vp() -> &'static TagPattern {
    static P: OnceLock<TagPattern> = OnceLock::new();
    P.get_or_init(|| TagPattern::new(VP_PATTERN).expect("verb-phrase pattern compiles"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChunkLabel {
    NX,
    VX,
}

impl fmt::Display for ChunkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChunkLabel::NX => "NX",
            ChunkLabel::VX => "VX",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChunkItem {
    Chunk {
        label: ChunkLabel,
        span: Range<usize>,
    },
    Outside(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkedSentence {
    pub tokens: TaggedSentence,
    pub items: Vec<ChunkItem>,
}

impl ChunkedSentence {
    /// The labelled spans, in sentence order.
    pub fn chunks(&self) -> impl Iterator<Item = (ChunkLabel, Range<usize>)> + '_ {
        self.items.iter().filter_map(|item| match item {
            ChunkItem::Chunk { label, span } => Some((*label, span.clone())),
            ChunkItem::Outside(_) => None,
        })
    }

    /// Bracketed debug form: `(NX the/DT kinase/NN NX) (VX binds/VBZ VX) ./.`
    pub fn bracketed(&self) -> String {
        let word = |i: usize| format!("{}/{}", self.tokens[i].text, self.tokens[i].tag);
        self.items
            .iter()
            .map(|item| match item {
                ChunkItem::Chunk { label, span } => {
                    let inner: Vec<String> = span.clone().map(word).collect();
                    format!("({label} {} {label})", inner.join(" "))
                }
                ChunkItem::Outside(i) => word(*i),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn protect_verbs(tags: &[Tag]) -> Vec<String> {
    tags.iter()
        .map(|&t| match t {
            Tag::VBD | Tag::VBG | Tag::VBN => format!("{t}{PROTECTION_SUFFIX}"),
            _ => t.as_str().to_string(),
        })
        .collect()
}

pub fn unprotect_verbs<S: AsRef<str>>(tags: &[S]) -> Vec<String> {
    tags.iter()
        .map(|t| t.as_ref().trim_end_matches(PROTECTION_SUFFIX).to_string())
        .collect()
}

/// Noun-phrase spans over a (protected) tag sequence.
pub fn find_noun_phrases<S: AsRef<str>>(tags: &[S]) -> Vec<Range<usize>> {
    np().find_all(tags)
}

/// Verb-phrase spans over an unprotected tag sequence, never entering `noun_phrases`.
pub fn find_verb_phrases<S: AsRef<str>>(
    tags: &[S],
    noun_phrases: &[Range<usize>],
) -> Vec<Range<usize>> {
    let mut masked: Vec<&str> = tags.iter().map(AsRef::as_ref).collect();
    for span in noun_phrases {
        masked[span.clone()].fill(MASKED);
    }
    vp().find_all(&masked)
}

pub fn chunk(tokens: TaggedSentence) -> ChunkedSentence {
    let tags: Vec<Tag> = tokens.iter().map(|t| t.tag).collect();
    let protected = protect_verbs(&tags);
    let nouns = find_noun_phrases(&protected);
    let unprotected = unprotect_verbs(&protected);
    let verbs = find_verb_phrases(&unprotected, &nouns);

    let mut spans: Vec<(ChunkLabel, Range<usize>)> = nouns
        .into_iter()
        .map(|s| (ChunkLabel::NX, s))
        .chain(verbs.into_iter().map(|s| (ChunkLabel::VX, s)))
        .collect();
    spans.sort_by_key(|(_, s)| s.start);

    let mut items = Vec::with_capacity(tokens.len());
    let mut next = 0;
    for (label, span) in spans {
        items.extend((next..span.start).map(ChunkItem::Outside));
        next = span.end;
        items.push(ChunkItem::Chunk { label, span });
    }
    items.extend((next..tokens.len()).map(ChunkItem::Outside));
    ChunkedSentence { tokens, items }
}
