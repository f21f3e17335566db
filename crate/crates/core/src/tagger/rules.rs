//! Transformation rules and their line formats.
//!
//! Lexical rules follow the classic transformation-tagger layout:
//! `affix kind length to_tag` for unconditional kinds, and
//! `from_tag affix fkind length to_tag` for kinds conditioned on the current tag.
//! Contextual rules are `from_tag to_tag TRIGGER value [value]`.
//! A trailing numeric score column, as written by rule learners, is ignored.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tags::Tag;

use super::TaggedToken;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexicalKind {
    HasSuffix,
    HasPrefix,
    /// Removing the suffix leaves a lexicon word.
    DeleteSuffix,
    /// Removing the prefix leaves a lexicon word.
    DeletePrefix,
    /// Appending the affix gives a lexicon word.
    AddSuffix,
    /// Prepending the affix gives a lexicon word.
    AddPrefix,
    /// The word contains the (single-character) affix.
    HasChar,
}

impl LexicalKind {
    fn from_keyword(word: &str) -> Option<(Self, bool)> {
        let (conditioned, base) = match word.strip_prefix('f') {
            Some(rest) => (true, rest),
            None => (false, word),
        };
        let kind = match base {
            "hassuf" => LexicalKind::HasSuffix,
            "haspref" => LexicalKind::HasPrefix,
            "deletesuf" => LexicalKind::DeleteSuffix,
            "deletepref" => LexicalKind::DeletePrefix,
            "addsuf" => LexicalKind::AddSuffix,
            "addpref" => LexicalKind::AddPrefix,
            "char" => LexicalKind::HasChar,
            _ => return None,
        };
        Some((kind, conditioned))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexicalRule {
    /// `None` for unconditional kinds, which fire whatever the current tag.
    pub from_tag: Option<Tag>,
    pub affix: String,
    pub kind: LexicalKind,
    pub affix_length: usize,
    pub to_tag: Tag,
}

impl LexicalRule {
    pub fn parse(line: &str, origin: &str, line_no: usize) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::parse(origin, line_no, msg);
        let tag = |s: &str| s.parse::<Tag>().map_err(|e| err(e.to_string()));

        let kind_at = fields
            .iter()
            .take(3)
            .position(|f| LexicalKind::from_keyword(f).is_some())
            .ok_or_else(|| err(format!("no known lexical rule keyword in `{line}`")))?;
        let (kind, conditioned) = LexicalKind::from_keyword(fields[kind_at]).unwrap();
        let expected_at = if conditioned { 2 } else { 1 };
        if kind_at != expected_at {
            return Err(err(format!("misplaced keyword `{}`", fields[kind_at])));
        }
        let from_tag = if conditioned {
            Some(tag(fields[0])?)
        } else {
            None
        };
        let affix = fields[kind_at - 1].to_string();
        let rest = &fields[kind_at + 1..];

        let (affix_length, to_tag, extra) = if kind == LexicalKind::HasChar {
            let to = rest
                .first()
                .ok_or_else(|| err("missing target tag".into()))?;
            (1, tag(to)?, &rest[1..])
        } else {
            if rest.len() < 2 {
                return Err(err("expected affix length and target tag".into()));
            }
            let length: usize = rest[0]
                .parse()
                .map_err(|_| err(format!("bad affix length `{}`", rest[0])))?;
            (length, tag(rest[1])?, &rest[2..])
        };
        if affix.chars().count() != affix_length {
            return Err(err(format!(
                "affix `{affix}` has {} characters but length {affix_length} was given",
                affix.chars().count()
            )));
        }
        check_score_column(extra, line).map_err(err)?;
        Ok(LexicalRule {
            from_tag,
            affix,
            kind,
            affix_length,
            to_tag,
        })
    }

    pub(super) fn fires(&self, token: &TaggedToken, lexicon: &HashMap<String, Tag>) -> bool {
        if self.from_tag.is_some_and(|t| t != token.tag) {
            return false;
        }
        let word = token.text.as_str();
        let affix = self.affix.as_str();
        match self.kind {
            LexicalKind::HasSuffix => word.ends_with(affix),
            LexicalKind::HasPrefix => word.starts_with(affix),
            LexicalKind::DeleteSuffix => word
                .strip_suffix(affix)
                .is_some_and(|w| !w.is_empty() && lexicon.contains_key(w)),
            LexicalKind::DeletePrefix => word
                .strip_prefix(affix)
                .is_some_and(|w| !w.is_empty() && lexicon.contains_key(w)),
            LexicalKind::AddSuffix => lexicon.contains_key(&format!("{word}{affix}")),
            LexicalKind::AddPrefix => lexicon.contains_key(&format!("{affix}{word}")),
            LexicalKind::HasChar => word.contains(affix),
        }
    }
}

fn check_score_column(extra: &[&str], line: &str) -> std::result::Result<(), String> {
    match extra {
        [] => Ok(()),
        [score] if score.parse::<f64>().is_ok() => Ok(()),
        _ => Err(format!("unexpected trailing fields in `{line}`")),
    }
}

/// The condition under which a contextual rule fires at a position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trigger {
    PrevTag(Tag),
    NextTag(Tag),
    Prev1Or2Tag(Tag),
    Next1Or2Tag(Tag),
    Prev1Or2Or3Tag(Tag),
    Next1Or2Or3Tag(Tag),
    Prev2Tag(Tag),
    Next2Tag(Tag),
    SurroundTag(Tag, Tag),
    PrevBigram(Tag, Tag),
    NextBigram(Tag, Tag),
    CurWord(String),
    PrevWord(String),
    NextWord(String),
    Prev1Or2Word(String),
    Next1Or2Word(String),
    Prev2Word(String),
    Next2Word(String),
    /// Previous tag, then current word.
    WordPrevTag(Tag, String),
    /// Current word, then next tag.
    WordNextTag(String, Tag),
    /// Previous word, then current word.
    LeftBigram(String, String),
    /// Current word, then next word.
    RightBigram(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualRule {
    pub from_tag: Tag,
    pub to_tag: Tag,
    pub trigger: Trigger,
}

impl ContextualRule {
    pub fn parse(line: &str, origin: &str, line_no: usize) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::parse(origin, line_no, msg);
        let tag = |s: &str| s.parse::<Tag>().map_err(|e| err(e.to_string()));
        if fields.len() < 4 {
            return Err(err(format!(
                "expected `from to TRIGGER value`, got `{line}`"
            )));
        }
        let (from_tag, to_tag, keyword, args) =
            (tag(fields[0])?, tag(fields[1])?, fields[2], &fields[3..]);

        let arity = match keyword {
            "SURROUNDTAG" | "PREVBIGRAM" | "NEXTBIGRAM" | "WDPREVTAG" | "WDNEXTTAG" | "LBIGRAM"
            | "RBIGRAM" => 2,
            _ => 1,
        };
        if args.len() < arity {
            return Err(err(format!("{keyword} takes {arity} value(s)")));
        }
        check_score_column(&args[arity..], line).map_err(err)?;
        let word = |i: usize| args[i].to_string();

        let trigger = match keyword {
            "PREVTAG" => Trigger::PrevTag(tag(args[0])?),
            "NEXTTAG" => Trigger::NextTag(tag(args[0])?),
            "PREV1OR2TAG" => Trigger::Prev1Or2Tag(tag(args[0])?),
            "NEXT1OR2TAG" => Trigger::Next1Or2Tag(tag(args[0])?),
            "PREV1OR2OR3TAG" => Trigger::Prev1Or2Or3Tag(tag(args[0])?),
            "NEXT1OR2OR3TAG" => Trigger::Next1Or2Or3Tag(tag(args[0])?),
            "PREV2TAG" => Trigger::Prev2Tag(tag(args[0])?),
            "NEXT2TAG" => Trigger::Next2Tag(tag(args[0])?),
            "SURROUNDTAG" => Trigger::SurroundTag(tag(args[0])?, tag(args[1])?),
            "PREVBIGRAM" => Trigger::PrevBigram(tag(args[0])?, tag(args[1])?),
            "NEXTBIGRAM" => Trigger::NextBigram(tag(args[0])?, tag(args[1])?),
            "CURWD" => Trigger::CurWord(word(0)),
            "PREVWD" => Trigger::PrevWord(word(0)),
            "NEXTWD" => Trigger::NextWord(word(0)),
            "PREV1OR2WD" => Trigger::Prev1Or2Word(word(0)),
            "NEXT1OR2WD" => Trigger::Next1Or2Word(word(0)),
            "PREV2WD" => Trigger::Prev2Word(word(0)),
            "NEXT2WD" => Trigger::Next2Word(word(0)),
            "WDPREVTAG" => Trigger::WordPrevTag(tag(args[0])?, word(1)),
            "WDNEXTTAG" => Trigger::WordNextTag(word(0), tag(args[1])?),
            "LBIGRAM" => Trigger::LeftBigram(word(0), word(1)),
            "RBIGRAM" => Trigger::RightBigram(word(0), word(1)),
            other => return Err(err(format!("unknown contextual trigger `{other}`"))),
        };
        Ok(ContextualRule {
            from_tag,
            to_tag,
            trigger,
        })
    }

    pub(super) fn fires(&self, tokens: &[TaggedToken], i: usize) -> bool {
        if tokens[i].tag != self.from_tag {
            return false;
        }
        let at = |offset: isize| {
            let j = i as isize + offset;
            (j >= 0).then(|| tokens.get(j as usize)).flatten()
        };
        let tag_is = |offset: isize, t: Tag| at(offset).is_some_and(|tok| tok.tag == t);
        let word_is = |offset: isize, w: &str| at(offset).is_some_and(|tok| tok.text == w);

        match &self.trigger {
            Trigger::PrevTag(t) => tag_is(-1, *t),
            Trigger::NextTag(t) => tag_is(1, *t),
            Trigger::Prev1Or2Tag(t) => tag_is(-1, *t) || tag_is(-2, *t),
            Trigger::Next1Or2Tag(t) => tag_is(1, *t) || tag_is(2, *t),
            Trigger::Prev1Or2Or3Tag(t) => (1..=3).any(|k| tag_is(-k, *t)),
            Trigger::Next1Or2Or3Tag(t) => (1..=3).any(|k| tag_is(k, *t)),
            Trigger::Prev2Tag(t) => tag_is(-2, *t),
            Trigger::Next2Tag(t) => tag_is(2, *t),
            Trigger::SurroundTag(l, r) => tag_is(-1, *l) && tag_is(1, *r),
            Trigger::PrevBigram(a, b) => tag_is(-2, *a) && tag_is(-1, *b),
            Trigger::NextBigram(a, b) => tag_is(1, *a) && tag_is(2, *b),
            Trigger::CurWord(w) => word_is(0, w),
            Trigger::PrevWord(w) => word_is(-1, w),
            Trigger::NextWord(w) => word_is(1, w),
            Trigger::Prev1Or2Word(w) => word_is(-1, w) || word_is(-2, w),
            Trigger::Next1Or2Word(w) => word_is(1, w) || word_is(2, w),
            Trigger::Prev2Word(w) => word_is(-2, w),
            Trigger::Next2Word(w) => word_is(2, w),
            Trigger::WordPrevTag(t, w) => tag_is(-1, *t) && word_is(0, w),
            Trigger::WordNextTag(w, t) => word_is(0, w) && tag_is(1, *t),
            Trigger::LeftBigram(a, b) => word_is(-1, a) && word_is(0, b),
            Trigger::RightBigram(a, b) => word_is(0, a) && word_is(1, b),
        }
    }
}
