//! JSON-lines corpus ingestion: one `{"pmid": ..., "abstract": ...}` object per line.

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            doc_id: doc_id.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
    /// One message per duplicate document id.
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
struct Record {
    pmid: Value,
    #[serde(rename = "abstract")]
    text: String,
}

pub fn ingest_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    parse_corpus(&read_to_string(path)?, &path.display().to_string())
}

/// Documents in file order. A repeated id keeps the position of its first
/// occurrence and the text of its last, and records a warning.
pub fn parse_corpus(text: &str, origin: &str) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    let mut positions: HashMap<String, usize> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record =
            serde_json::from_str(line).map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        let doc_id = match record.pmid {
            Value::String(s) => s.trim().to_string(),
            Value::Number(n) => n.to_string(),
            other => {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("pmid must be a string or number, got {other}"),
                ))
            }
        };
        if doc_id.is_empty() || doc_id.contains(char::is_whitespace) || doc_id.contains(',') {
            return Err(Error::parse(
                origin,
                line_no,
                format!("pmid `{doc_id}` must be non-empty without whitespace or commas"),
            ));
        }
        let document = Document::new(doc_id.clone(), record.text);
        match positions.get(&doc_id) {
            Some(&at) => {
                let warning = format!(
                    "{origin}:{line_no}: duplicate pmid {doc_id}, keeping the later abstract"
                );
                log::warn!("{warning}");
                corpus.warnings.push(warning);
                corpus.documents[at] = document;
            }
            None => {
                positions.insert(doc_id, corpus.documents.len());
                corpus.documents.push(document);
            }
        }
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_in_file_order() {
        let corpus = parse_corpus(
            "{\"pmid\": \"2\", \"abstract\": \"B.\"}\n\n{\"pmid\": 1, \"abstract\": \"A.\", \"title\": \"t\"}\n",
            "c",
        )
        .unwrap();
        assert_eq!(
            corpus.documents,
            vec![Document::new("2", "B."), Document::new("1", "A.")]
        );
        assert!(corpus.warnings.is_empty());
    }

    #[test]
    fn duplicate_keeps_last_text() {
        let corpus = parse_corpus(
            "{\"pmid\": \"7\", \"abstract\": \"old\"}\n{\"pmid\": \"8\", \"abstract\": \"x\"}\n{\"pmid\": 7, \"abstract\": \"new\"}\n",
            "c",
        )
        .unwrap();
        assert_eq!(
            corpus.documents,
            vec![Document::new("7", "new"), Document::new("8", "x")]
        );
        assert_eq!(corpus.warnings.len(), 1);
        assert!(corpus.warnings[0].contains("duplicate pmid 7"));
    }

    #[test]
    fn empty_input() {
        assert!(parse_corpus("", "c").unwrap().documents.is_empty());
    }

    #[test]
    fn malformed_records_name_the_line() {
        for bad in [
            "{\"pmid\": \"1\", \"abstract\": \"a\"}\nnot json\n",
            "{\"pmid\": \"1\", \"abstract\": \"a\"}\n{\"abstract\": \"a\"}\n",
            "{\"pmid\": \"1\", \"abstract\": \"a\"}\n{\"pmid\": \"\", \"abstract\": \"a\"}\n",
            "{\"pmid\": \"1\", \"abstract\": \"a\"}\n{\"pmid\": [1], \"abstract\": \"a\"}\n",
        ] {
            let err = parse_corpus(bad, "corpus.jsonl").unwrap_err();
            assert!(err.to_string().starts_with("corpus.jsonl:2:"), "{err}");
        }
    }
}
