//! Subject-verb-object extraction from chunked sentences.
//!
//! The first NX is the subject and the first VX after it supplies the verb;
//! every NX after that verb, up to the next VX, is an object. Each later VX
//! starts a new clause whose subject is the nearest NX before it, so an object
//! of one clause can be the subject of the next. Tokens outside chunks (such as
//! prepositions) are skipped: "binds to Y" still has object Y.

use std::ops::Range;

use crate::chunker::{ChunkLabel, ChunkedSentence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvoSpans {
    pub subject: Range<usize>,
    /// The whole verb group.
    pub verb: Range<usize>,
    /// Index of the verb group's last verb-tagged token, whose stem is the verb.
    pub head: usize,
    pub objects: Vec<Range<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvoAssertion {
    pub doc_id: String,
    pub subject: String,
    pub verb: String,
    pub objects: Vec<String>,
    pub spans: SvoSpans,
}

impl SvoAssertion {
    /// `doc_id, subject, verb, objects...`, tab separated.
    pub fn to_tsv_line(&self) -> String {
        let mut fields = vec![
            self.doc_id.as_str(),
            self.subject.as_str(),
            self.verb.as_str(),
        ];
        fields.extend(self.objects.iter().map(String::as_str));
        fields.join("\t")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicAssertion {
    pub doc_id: String,
    pub subject: String,
    pub verb: String,
    pub object: String,
}

impl AtomicAssertion {
    pub fn new(doc_id: &str, subject: &str, verb: &str, object: &str) -> Self {
        AtomicAssertion {
            doc_id: doc_id.into(),
            subject: subject.into(),
            verb: verb.into(),
            object: object.into(),
        }
    }
}

/// Extracts assertions from one sentence. `stems[i]` is the stem of token `i`.
///
/// # Panics
///
/// If `stems` is shorter than the sentence.
pub fn extract_svos(
    doc_id: &str,
    sentence: &ChunkedSentence,
    stems: &[String],
) -> Vec<SvoAssertion> {
    assert!(stems.len() >= sentence.tokens.len(), "one stem per token");
    let chunks: Vec<(ChunkLabel, Range<usize>)> = sentence.chunks().collect();
    let surface = |span: &Range<usize>| {
        sentence.tokens[span.clone()]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let is = |i: usize, label: ChunkLabel| chunks[i].0 == label;

    let Some(first_subject) = (0..chunks.len()).find(|&i| is(i, ChunkLabel::NX)) else {
        return Vec::new();
    };
    let mut verb_groups = (first_subject + 1..chunks.len()).filter(|&i| is(i, ChunkLabel::VX));
    let Some(first_verb) = verb_groups.next() else {
        return Vec::new();
    };

    let mut assertions = Vec::new();
    let mut clause = Some((first_subject, first_verb));
    while let Some((subject, verb)) = clause {
        let next_verb = (verb + 1..chunks.len()).find(|&i| is(i, ChunkLabel::VX));
        let objects: Vec<&Range<usize>> = (verb + 1..next_verb.unwrap_or(chunks.len()))
            .filter(|&i| is(i, ChunkLabel::NX))
            .map(|i| &chunks[i].1)
            .collect();

        let verb_span = &chunks[verb].1;
        let head = verb_span
            .clone()
            .rev()
            .find(|&i| sentence.tokens[i].tag.is_verb())
            .unwrap_or(verb_span.end - 1);
        if !objects.is_empty() {
            let subject_span = &chunks[subject].1;
            assertions.push(SvoAssertion {
                doc_id: doc_id.to_string(),
                subject: surface(subject_span),
                verb: stems[head].clone(),
                objects: objects.iter().map(|s| surface(s)).collect(),
                spans: SvoSpans {
                    subject: subject_span.clone(),
                    verb: verb_span.clone(),
                    head,
                    objects: objects.into_iter().cloned().collect(),
                },
            });
        }

        clause = next_verb.map(|v| {
            let nearest = (0..v)
                .rev()
                .find(|&i| is(i, ChunkLabel::NX))
                .unwrap_or(first_subject);
            (nearest, v)
        });
    }
    assertions
}

/// One assertion per object, in object order.
pub fn atomize(assertion: &SvoAssertion) -> Vec<AtomicAssertion> {
    assertion
        .objects
        .iter()
        .map(|object| AtomicAssertion {
            doc_id: assertion.doc_id.clone(),
            subject: assertion.subject.clone(),
            verb: assertion.verb.clone(),
            object: object.clone(),
        })
        .collect()
}
