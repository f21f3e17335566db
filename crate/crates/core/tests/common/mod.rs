//! Reference implementations and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::ops::Range;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use regex::Regex;
use svomine::harness::Document;
use svomine::svo::AtomicAssertion;
use svomine::tags::Tag;

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn read_golden(name: &str) -> String {
    std::fs::read_to_string(golden(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

/// Noun-phrase pattern laid out as originally typeset, line breaks included.
pub const PRINTED_NP: &str = "((((PDT )?(DT |PRP[$] |WDT |WP[$] ) (VBG |VBD |VBN |JJ |
JJR |JJS | , |CC |NN |NNS |NNP |NNPS |CD )*(NN |NNS |NNP
|NNPS |CD )+)|((PDT )?(JJ |JJR |JJS | , |CC |NN |NNS |
NNP |NNPS |CD )*(NN |NNS |NNP |NNPS |CD )+)|EX |PRP |WP
|WDT )POS )?(((PDT )?(DT |PRP[$] |WDT |WP[$] ) (VBG |VBD
|VBN |JJ |JJR |JJS | , |CC |NN |NNS |NNP |NNPS |CD )*(NN
|NNS |NNP |NNPS |CD )+)|((PDT )?(JJ |JJR |JJS | , |CC |
NN |NNS |NNP |NNPS |CD )*(NN |NNS |NNP |NNPS |CD )+)|EX
|PRP |WP |WDT )";

/// Verb-phrase pattern laid out as originally typeset.
pub const PRINTED_VP: &str = "(RB |RBR |RBS |WRB )*(MD )?(RB |RBR |RBS |WRB )*(VB |
VBD |VBG |VBN |VBP |VBZ ) (VB |VBD |VBG |VBN |VBP |VBZ |
RB |RBR |RBS |WRB )*(RP )?(TO (RB )*(VB |VBN ) (RP )?)?";

/// Drops typesetting whitespace: every whitespace run becomes one space, and a
/// space survives only when it terminates a tag literal (follows a tag character).
pub fn canonical_pattern(printed: &str) -> String {
    let collapsed = printed.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    for c in collapsed.chars() {
        if c == ' ' && matches!(out.chars().last(), None | Some('(' | ')' | '|')) {
            continue;
        }
        out.push(c);
    }
    out
}

/// Chunker reference built on the `regex` crate, anchored per candidate span.
pub struct RegexChunker {
    np: Regex,
    vp: Regex,
}

impl RegexChunker {
    pub fn new() -> Self {
        let anchored = |p: &str| Regex::new(&format!("^(?:{})$", canonical_pattern(p))).unwrap();
        RegexChunker {
            np: anchored(PRINTED_NP),
            vp: anchored(PRINTED_VP),
        }
    }

    /// Leftmost-longest non-empty matches found by trying every token-aligned substring.
    fn scan(re: &Regex, symbols: &[String]) -> Vec<Range<usize>> {
        let mut spans = Vec::new();
        let mut i = 0;
        while i < symbols.len() {
            let best = (i + 1..=symbols.len()).rev().find(|&j| {
                re.is_match(
                    &symbols[i..j]
                        .iter()
                        .map(|s| format!("{s} "))
                        .collect::<String>(),
                )
            });
            match best {
                Some(j) => {
                    spans.push(i..j);
                    i = j;
                }
                None => i += 1,
            }
        }
        spans
    }

    pub fn noun_phrases(&self, tags: &[Tag]) -> Vec<Range<usize>> {
        let protected: Vec<String> = tags
            .iter()
            .map(|t| match t {
                Tag::VBD | Tag::VBG | Tag::VBN => format!("{t}#PROTECTED"),
                _ => t.to_string(),
            })
            .collect();
        Self::scan(&self.np, &protected)
    }

    pub fn verb_phrases(&self, tags: &[Tag], noun_phrases: &[Range<usize>]) -> Vec<Range<usize>> {
        let symbols: Vec<String> = tags
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if noun_phrases.iter().any(|s| s.contains(&i)) {
                    "#MASKED".to_string()
                } else {
                    t.to_string()
                }
            })
            .collect();
        Self::scan(&self.vp, &symbols)
    }
}

pub fn random_tags(rng: &mut impl Rng, max_len: usize) -> Vec<Tag> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *Tag::ALL.choose(rng).unwrap()).collect()
}

/// Direct execution of the nested entity loops: for every (subject entity,
/// object entity) pair, every assertion with the verb whose subject clause
/// contains the first and whose object clause contains the second yields
/// (doc, subject, object). Containment is whole-token and case-insensitive.
pub fn nested_loop_relations(
    assertions: &[AtomicAssertion],
    entities: &[&str],
    verb: &str,
) -> BTreeSet<(String, String, String)> {
    let contains = |clause: &str, entity: &str| {
        clause
            .split_whitespace()
            .any(|t| t.to_lowercase() == entity.to_lowercase())
    };
    let mut out = BTreeSet::new();
    for &s in entities {
        for &o in entities {
            for a in assertions.iter().filter(|a| a.verb == verb) {
                if contains(&a.subject, s) && contains(&a.object, o) {
                    out.insert((a.doc_id.clone(), s.to_string(), o.to_string()));
                }
            }
        }
    }
    out
}

/// Checks the subset of DOT the exporter emits: a header, quoted node
/// statements, quoted edge statements with `label` and `confidence`
/// attributes, and a closing brace. Every edge endpoint must be declared.
pub fn validate_dot(text: &str) -> Result<(), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty document")?;
    let edge_op = match header {
        "digraph interactions {" => "->",
        "graph interactions {" => "--",
        other => return Err(format!("bad header `{other}`")),
    };
    if !text.ends_with("}\n") {
        return Err("missing closing brace".into());
    }
    let id = r#""(?:[^"\\]|\\.)*""#;
    let node = Regex::new(&format!("^  ({id});$")).unwrap();
    let edge = Regex::new(&format!(
        r"^  ({id}) {} ({id}) \[label={id}, confidence=(0\.[0-9]{{6}}|1\.000000)\];$",
        regex::escape(edge_op)
    ))
    .unwrap();
    let mut declared = BTreeSet::new();
    let body: Vec<&str> = lines.collect();
    let (closing, body) = body.split_last().ok_or("missing closing brace")?;
    if *closing != "}" {
        return Err(format!("bad closing line `{closing}`"));
    }
    let mut seen_edge = false;
    for line in body {
        if let Some(c) = node.captures(line) {
            if seen_edge {
                return Err(format!("node after edges: `{line}`"));
            }
            declared.insert(c[1].to_string());
        } else if let Some(c) = edge.captures(line) {
            seen_edge = true;
            for end in [&c[1], &c[2]] {
                if !declared.contains(end) {
                    return Err(format!("undeclared node {end}"));
                }
            }
        } else {
            return Err(format!("unrecognized line `{line}`"));
        }
    }
    Ok(())
}

const MINER_NAMES: &[&str] = &[
    "MAPK", "Akt", "p53", "IRS-1", "Ras", "CREB", "PTEN", "SOS", "Grb2", "PI3K", "TNF", "JNK",
];
const MINER_FILLER: &[&str] = &[
    "the",
    "in",
    "cytoplasm",
    "and",
    "kinase",
    "of",
    "MAPKs",
    "Akt-1",
    "cells",
];
const MINER_VERBS: &[&str] = &["bind", "activate", "inhibit"];

fn random_case(rng: &mut impl Rng, word: &str) -> String {
    match rng.gen_range(0..3) {
        0 => word.to_lowercase(),
        1 => word.to_uppercase(),
        _ => word.to_string(),
    }
}

fn random_clause(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(1..=6);
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.4) {
                let name = MINER_NAMES.choose(rng).unwrap();
                random_case(rng, name)
            } else {
                MINER_FILLER.choose(rng).unwrap().to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub struct MinerInstance {
    pub entities: Vec<&'static str>,
    pub assertions: Vec<AtomicAssertion>,
    pub verb: &'static str,
}

/// Up to 10 entities and 50 assertions; clauses mix entity names in random
/// case with filler words and near-miss tokens.
pub fn random_miner_instance(rng: &mut impl Rng) -> MinerInstance {
    let k = rng.gen_range(1..=10);
    let entities = MINER_NAMES.choose_multiple(rng, k).copied().collect();
    let count = rng.gen_range(0..=50);
    let assertions = (0..count)
        .map(|_| {
            let doc = rng.gen_range(1..=8).to_string();
            let (s, o) = (random_clause(rng), random_clause(rng));
            AtomicAssertion::new(&doc, &s, MINER_VERBS.choose(rng).unwrap(), &o)
        })
        .collect();
    MinerInstance {
        entities,
        assertions,
        verb: MINER_VERBS.choose(rng).unwrap(),
    }
}

/// Runs the miner on `instance` and compares with [`nested_loop_relations`].
pub fn check_miner_instance(instance: &MinerInstance) -> Result<(), String> {
    use svomine::miner::{find_entity_relations, EntityList};
    let list = EntityList::try_from(instance.entities.as_slice()).map_err(|e| e.to_string())?;
    let rows = find_entity_relations(&instance.assertions, &list, instance.verb);
    let got: BTreeSet<(String, String, String)> = rows
        .iter()
        .map(|r| (r.doc_id.clone(), r.subject.clone(), r.object.clone()))
        .collect();
    if got.len() != rows.len() {
        return Err("duplicate rows".into());
    }
    if rows.iter().any(|r| r.verb != instance.verb) {
        return Err("row with the wrong verb".into());
    }
    let expected = nested_loop_relations(&instance.assertions, &instance.entities, instance.verb);
    if got != expected {
        return Err(format!("got {got:?}, expected {expected:?}"));
    }
    Ok(())
}

const PROTEINS: &[&str] = &[
    "MAPK", "MEK-1", "Raf-1", "Ras", "SOS", "Akt", "PI3K", "CREB", "PTEN", "IRS-1", "Grb2",
    "insulin", "p53", "cyclin", "Bcl-2", "NF-kB", "TNF", "JNK", "STAT3", "EGFR",
];
const VERBS: &[&str] = &[
    "binds",
    "activates",
    "inhibits",
    "phosphorylates",
    "regulates",
    "induces",
];
const PLACES: &[&str] = &[
    "the cytoplasm",
    "the nucleus",
    "vitro",
    "vivo",
    "neurons",
    "the membrane",
];
const PLAIN: &[&str] = &[
    "These results suggest a role for {a} in neuronal survival.",
    "Expression of {a} was measured in {p}.",
    "We observed that {a} is required for signaling.",
    "The {a} pathway was studied in 12 patients.",
];

/// Seeded synthetic abstracts, each about eight sentences mixing
/// interaction statements with background prose.
pub fn synthetic_corpus(n: usize, rng: &mut impl Rng) -> Vec<Document> {
    (0..n)
        .map(|i| {
            let sentences: Vec<String> = (0..8)
                .map(|_| {
                    let a = PROTEINS.choose(rng).unwrap();
                    let b = PROTEINS.choose(rng).unwrap();
                    let c = PROTEINS.choose(rng).unwrap();
                    let p = PLACES.choose(rng).unwrap();
                    match rng.gen_range(0..4) {
                        0 => format!("{a} {} {b} in {p}.", VERBS.choose(rng).unwrap()),
                        1 => format!("{a} and {b} {} {c}.", VERBS.choose(rng).unwrap()),
                        2 => format!(
                            "The kinase {a} strongly {} {b} and {c} in {p}.",
                            VERBS.choose(rng).unwrap()
                        ),
                        _ => PLAIN
                            .choose(rng)
                            .unwrap()
                            .replace("{a}", a)
                            .replace("{p}", p),
                    }
                })
                .collect();
            Document::new((100_000 + i).to_string(), sentences.join(" "))
        })
        .collect()
}
