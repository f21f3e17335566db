//! Three-stage stemming: (word, tag class) rules, irregular forms, affix stripping.
//!
//! Stems are lowercase. Every target of the specific and irregular tables is a
//! known root and is returned unchanged, which keeps the stemmer idempotent.
//! Affix stripping repeats until no affix applies, consulting both tables after
//! each step, so "bindings" reaches "bind" through "binding".

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{data_lines, read_to_string, Error, Result};
use crate::tags::Tag;

pub(crate) const BUNDLED_STEM_RULES: &str = include_str!("../data/stem_rules.txt");
pub(crate) const BUNDLED_IRREGULARS: &str = include_str!("../data/irregulars.txt");
pub(crate) const BUNDLED_SUFFIXES: &str = include_str!("../data/suffixes.txt");
pub(crate) const BUNDLED_PREFIXES: &str = include_str!("../data/prefixes.txt");

/// Affix stripping never leaves fewer characters than this.
pub const MIN_STEM_LEN: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagClass {
    Verb,
    Noun,
    Any,
}

impl TagClass {
    pub fn of(tag: Tag) -> Option<TagClass> {
        if tag.is_verb() {
            Some(TagClass::Verb)
        } else if tag.is_noun() {
            Some(TagClass::Noun)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affix {
    pub text: String,
    pub min_stem: usize,
    pub replacement: String,
}

/// Source text and origin label for each of the four rule files.
#[derive(Debug, Clone, Copy)]
pub struct StemRuleSources<'a> {
    pub specific: (&'a str, &'a str),
    pub irregulars: (&'a str, &'a str),
    pub suffixes: (&'a str, &'a str),
    pub prefixes: (&'a str, &'a str),
}

#[derive(Debug, Clone, Default)]
pub struct StemRuleSet {
    specific: HashMap<(String, TagClass), String>,
    irregulars: HashMap<String, String>,
    suffixes: Vec<Affix>,
    prefixes: Vec<Affix>,
    roots: HashSet<String>,
}

impl StemRuleSet {
    pub fn bundled() -> Self {
        Self::parse(StemRuleSources {
            specific: (BUNDLED_STEM_RULES, "bundled stem rules"),
            irregulars: (BUNDLED_IRREGULARS, "bundled irregulars"),
            suffixes: (BUNDLED_SUFFIXES, "bundled suffixes"),
            prefixes: (BUNDLED_PREFIXES, "bundled prefixes"),
        })
        .expect("bundled stem rules are valid")
    }

    pub fn load(
        specific: &Path,
        irregulars: &Path,
        suffixes: &Path,
        prefixes: &Path,
    ) -> Result<Self> {
        let texts = [specific, irregulars, suffixes, prefixes]
            .map(|p| read_to_string(p).map(|t| (t, p.display().to_string())));
        let [s, i, su, p] = texts;
        let (s, i, su, p) = (s?, i?, su?, p?);
        Self::parse(StemRuleSources {
            specific: (&s.0, &s.1),
            irregulars: (&i.0, &i.1),
            suffixes: (&su.0, &su.1),
            prefixes: (&p.0, &p.1),
        })
    }

    pub fn parse(sources: StemRuleSources<'_>) -> Result<Self> {
        let mut rules = StemRuleSet::default();

        let (text, origin) = sources.specific;
        for (line, row) in data_lines(text) {
            let fields: Vec<&str> = row.split_whitespace().collect();
            let [word, class, stem] = fields[..] else {
                return Err(Error::parse(origin, line, "expected `word tagclass stem`"));
            };
            let class = match class {
                "verb" => TagClass::Verb,
                "noun" => TagClass::Noun,
                "any" => TagClass::Any,
                other => {
                    return Err(Error::parse(
                        origin,
                        line,
                        format!("tag class must be verb, noun or any, not `{other}`"),
                    ))
                }
            };
            rules
                .specific
                .insert((word.to_lowercase(), class), stem.to_lowercase());
        }

        let (text, origin) = sources.irregulars;
        for (line, row) in data_lines(text) {
            let fields: Vec<&str> = row.split_whitespace().collect();
            let [word, stem] = fields[..] else {
                return Err(Error::parse(origin, line, "expected `word stem`"));
            };
            rules
                .irregulars
                .insert(word.to_lowercase(), stem.to_lowercase());
        }

        rules.suffixes = parse_affixes(sources.suffixes.0, sources.suffixes.1)?;
        rules.prefixes = parse_affixes(sources.prefixes.0, sources.prefixes.1)?;

        rules.roots = rules
            .specific
            .values()
            .chain(rules.irregulars.values())
            .cloned()
            .collect();
        for root in &rules.roots {
            let remapped = rules
                .irregulars
                .get(root)
                .into_iter()
                .chain(
                    rules
                        .specific
                        .iter()
                        .filter(|((w, _), _)| w == root)
                        .map(|(_, s)| s),
                )
                .find(|s| *s != root);
            if let Some(other) = remapped {
                return Err(Error::Config(format!(
                    "stem `{root}` is itself mapped to `{other}`; stems must be final"
                )));
            }
        }
        Ok(rules)
    }

    pub fn suffixes(&self) -> &[Affix] {
        &self.suffixes
    }

    /// Reduces `word` to its lowercase root form.
    pub fn stem(&self, word: &str, tag: Tag) -> String {
        let class = TagClass::of(tag);
        let mut current = word.to_lowercase();
        loop {
            if let Some(stem) = self.lookup(&current, class) {
                return stem.clone();
            }
            if self.roots.contains(&current) {
                return current;
            }
            match self.strip_once(&current) {
                Some(next) => current = next,
                None => return current,
            }
        }
    }

    fn lookup(&self, word: &str, class: Option<TagClass>) -> Option<&String> {
        let key = |c: TagClass| (word.to_string(), c);
        class
            .and_then(|c| self.specific.get(&key(c)))
            .or_else(|| self.specific.get(&key(TagClass::Any)))
            .or_else(|| self.irregulars.get(word))
    }

    fn strip_once(&self, word: &str) -> Option<String> {
        for affix in &self.suffixes {
            let Some(stem) = word.strip_suffix(affix.text.as_str()) else {
                continue;
            };
            if !acceptable_stem(stem, affix.min_stem) {
                continue;
            }
            let blocked = match affix.text.as_str() {
                // "class", "status", "analysis" are not plurals.
                "s" => stem.ends_with(['s', 'u', 'i']),
                // "need", "agreed" keep their double e.
                "ed" => stem.ends_with('e'),
                _ => false,
            };
            if blocked {
                continue;
            }
            let mut out = format!("{stem}{}", affix.replacement);
            if affix.replacement.is_empty() && (affix.text == "ed" || affix.text == "ing") {
                restore_after_inflection(&mut out);
            }
            return Some(out);
        }
        for affix in &self.prefixes {
            let Some(stem) = word.strip_prefix(affix.text.as_str()) else {
                continue;
            };
            if acceptable_stem(stem, affix.min_stem) {
                return Some(format!("{}{stem}", affix.replacement));
            }
        }
        None
    }
}

fn parse_affixes(text: &str, origin: &str) -> Result<Vec<Affix>> {
    let mut affixes = Vec::new();
    for (line, row) in data_lines(text) {
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() > 3 {
            return Err(Error::parse(
                origin,
                line,
                "expected `affix [min_stem] [replacement]`",
            ));
        }
        let min_stem = match fields.get(1) {
            Some(n) => n.parse().map_err(|_| {
                Error::parse(origin, line, format!("bad minimum stem length `{n}`"))
            })?,
            None => MIN_STEM_LEN,
        };
        let affix = Affix {
            text: fields[0].to_lowercase(),
            min_stem,
            replacement: fields.get(2).map(|r| r.to_lowercase()).unwrap_or_default(),
        };
        // Each step must shorten the word, or stripping to a fixpoint could loop.
        if affix.replacement.chars().count() >= affix.text.chars().count() {
            return Err(Error::parse(
                origin,
                line,
                "replacement must be shorter than the affix",
            ));
        }
        affixes.push(affix);
    }
    affixes.sort_by_key(|a| std::cmp::Reverse(a.text.chars().count()));
    Ok(affixes)
}

fn acceptable_stem(stem: &str, min_stem: usize) -> bool {
    stem.chars().count() >= min_stem.max(MIN_STEM_LEN)
        && stem.chars().enumerate().any(|(i, _)| is_vowel(stem, i))
}

fn is_vowel(word: &str, i: usize) -> bool {
    let chars: Vec<char> = word.chars().collect();
    match chars[i] {
        'a' | 'e' | 'i' | 'o' | 'u' => true,
        'y' => i > 0 && !is_vowel(word, i - 1),
        _ => false,
    }
}

fn is_consonant(word: &str, i: usize) -> bool {
    word.chars().nth(i).is_some_and(char::is_alphabetic) && !is_vowel(word, i)
}

/// Number of vowel-consonant sequences, as in `[C](VC){m}[V]`.
fn measure(word: &str) -> usize {
    let n = word.chars().count();
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..n {
        let vowel = is_vowel(word, i);
        if prev_vowel && !vowel {
            m += 1;
        }
        prev_vowel = vowel;
    }
    m
}

/// Ends consonant-vowel-consonant, the last not w, x or y ("hop", not "bow").
fn ends_cvc(word: &str) -> bool {
    let n = word.chars().count();
    n >= 3
        && is_consonant(word, n - 3)
        && is_vowel(word, n - 2)
        && is_consonant(word, n - 1)
        && !word.ends_with(['w', 'x', 'y'])
}

/// Repairs a stem left by removing "ed" or "ing": "activat" -> "activate",
/// "stopp" -> "stop", "hop" -> "hope".
fn restore_after_inflection(stem: &mut String) {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if stem.ends_with("bl") || stem.ends_with("iz") || (stem.ends_with("at") && measure(stem) >= 2)
    {
        stem.push('e');
    } else if n >= 2
        && chars[n - 1] == chars[n - 2]
        && is_consonant(stem, n - 1)
        && !"lsz".contains(chars[n - 1])
    {
        stem.pop();
    } else if measure(stem) == 1 && ends_cvc(stem) {
        stem.push('e');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rules() -> StemRuleSet {
        StemRuleSet::bundled()
    }

    fn with(specific: &str, irregulars: &str, suffixes: &str) -> Result<StemRuleSet> {
        StemRuleSet::parse(StemRuleSources {
            specific: (specific, "s"),
            irregulars: (irregulars, "i"),
            suffixes: (suffixes, "su"),
            prefixes: ("", "p"),
        })
    }

    #[test]
    fn bind_forms() {
        let r = rules();
        assert_eq!(r.stem("binds", Tag::VBZ), "bind");
        assert_eq!(r.stem("binding", Tag::VBG), "bind");
        assert_eq!(r.stem("bounded", Tag::VBD), "bind");
        assert_eq!(r.stem("bound", Tag::VBN), "bind");
        assert_eq!(r.stem("bind", Tag::VB), "bind");
        assert_eq!(r.stem("Binds", Tag::VBZ), "bind");
    }

    #[test]
    fn specific_rules_and_irregulars() {
        let r = rules();
        assert_eq!(r.stem("dehydrogenised", Tag::VBD), "dehydrogenate");
        assert_eq!(r.stem("calves", Tag::NNS), "calf");
        assert_eq!(r.stem("cervices", Tag::NNS), "cervix");
        assert_eq!(r.stem("was", Tag::VBD), "be");
        assert_eq!(r.stem("known", Tag::VBN), "know");
    }

    #[test]
    fn affix_stripping() {
        let r = rules();
        let cases = [
            ("regards", Tag::VBZ, "regard"),
            ("regarding", Tag::VBG, "regard"),
            ("activates", Tag::VBZ, "activate"),
            ("activated", Tag::VBN, "activate"),
            ("activating", Tag::VBG, "activate"),
            ("phosphorylates", Tag::VBZ, "phosphorylate"),
            ("phosphorylated", Tag::VBD, "phosphorylate"),
            ("inhibits", Tag::VBZ, "inhibit"),
            ("treated", Tag::VBN, "treat"),
            ("reported", Tag::VBD, "report"),
            ("stopped", Tag::VBD, "stop"),
            ("hoping", Tag::VBG, "hope"),
            ("enabled", Tag::VBD, "enable"),
            ("called", Tag::VBD, "call"),
            ("processes", Tag::VBZ, "process"),
            ("studies", Tag::NNS, "study"),
            ("rapidly", Tag::RB, "rapid"),
            ("needed", Tag::VBD, "need"),
            ("class", Tag::NN, "class"),
            ("status", Tag::NN, "status"),
            ("analysis", Tag::NN, "analysis"),
            ("this", Tag::DT, "this"),
            ("thing", Tag::NN, "thing"),
            ("bindings", Tag::NNS, "bind"),
        ];
        for (word, tag, stem) in cases {
            assert_eq!(r.stem(word, tag), stem, "{word}/{tag}");
        }
    }

    #[test]
    fn tag_class_gates_specific_rules() {
        let r = with("leaves verb leave\nleaves noun leaf\n", "", "s 3\n").unwrap();
        assert_eq!(r.stem("leaves", Tag::VBZ), "leave");
        assert_eq!(r.stem("leaves", Tag::NNS), "leaf");
        assert_eq!(r.stem("leaves", Tag::JJ), "leave");
    }

    #[test]
    fn specific_rule_beats_conflicting_suffix() {
        let r = with("bounded verb bind\n", "", "ed 2\nded 2\n").unwrap();
        assert_eq!(r.stem("bounded", Tag::VBD), "bind");
        assert_eq!(r.stem("bounded", Tag::JJ), "boun");
    }

    #[test]
    fn min_length_guard() {
        let r = with("", "", "ing 2\nes 1\n").unwrap();
        assert_eq!(r.stem("sing", Tag::VBG), "sing");
        assert_eq!(r.stem("oes", Tag::NNS), "oes");
        assert_eq!(r.stem("shoes", Tag::NNS), "sho");
    }

    #[test]
    fn rejects_bad_files() {
        assert!(with("binds verbish bind\n", "", "").is_err());
        assert!(with("", "mice\n", "").is_err());
        assert!(with("", "", "s x y z\n").is_err());
        assert!(with("", "", "s 1 sss\n").is_err());
        let err = with("", "bound bind\nbind tie\n", "").unwrap_err();
        assert!(err.to_string().contains("`bind`"), "{err}");
    }

    #[test]
    fn bundled_tables_are_idempotent() {
        let r = rules();
        let words: Vec<&str> = BUNDLED_IRREGULARS
            .lines()
            .chain(BUNDLED_STEM_RULES.lines())
            .filter(|l| !l.starts_with('#'))
            .flat_map(str::split_whitespace)
            .collect();
        for word in words {
            for tag in [Tag::VBZ, Tag::NNS, Tag::JJ] {
                let once = r.stem(word, tag);
                assert_eq!(r.stem(&once, tag), once, "{word}/{tag}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn idempotent_and_non_empty(word in "[a-zA-Z]{1,14}", tag_idx in 0usize..36) {
            let r = rules();
            let tag = Tag::word_tags()[tag_idx];
            let once = r.stem(&word, tag);
            prop_assert!(!once.is_empty());
            prop_assert_eq!(r.stem(&once, tag), once);
        }
    }
}
