//! In-memory assertion store with a TSV file format.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use crate::error::{data_lines, read_to_string, Error, Result};
use crate::svo::AtomicAssertion;

/// Atomic assertions grouped by document, with a verb index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssertionStore {
    by_doc: BTreeMap<String, Vec<AtomicAssertion>>,
    by_verb: HashMap<String, BTreeSet<String>>,
}

impl AssertionStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores a document's assertions, replacing any it already had.
    pub fn insert_document(&mut self, doc_id: &str, assertions: Vec<AtomicAssertion>) {
        self.remove_document(doc_id);
        if assertions.is_empty() {
            return;
        }
        for a in &assertions {
            self.by_verb
                .entry(a.verb.clone())
                .or_default()
                .insert(doc_id.to_string());
        }
        self.by_doc.insert(doc_id.to_string(), assertions);
    }

    pub fn remove_document(&mut self, doc_id: &str) {
        let Some(old) = self.by_doc.remove(doc_id) else {
            return;
        };
        for a in old {
            if let Some(docs) = self.by_verb.get_mut(&a.verb) {
                docs.remove(doc_id);
                if docs.is_empty() {
                    self.by_verb.remove(&a.verb);
                }
            }
        }
    }

    /// All records, ordered by document id and then extraction order.
    pub fn records(&self) -> impl Iterator<Item = &AtomicAssertion> {
        self.by_doc.values().flatten()
    }

    pub fn document(&self, doc_id: &str) -> &[AtomicAssertion] {
        self.by_doc.get(doc_id).map_or(&[], Vec::as_slice)
    }

    pub fn by_verb(&self, verb: &str) -> Vec<&AtomicAssertion> {
        let Some(docs) = self.by_verb.get(verb) else {
            return Vec::new();
        };
        docs.iter()
            .flat_map(|d| self.by_doc[d].iter())
            .filter(|a| a.verb == verb)
            .collect()
    }

    pub fn verbs(&self) -> BTreeSet<&str> {
        self.by_verb.keys().map(String::as_str).collect()
    }

    pub fn len(&self) -> usize {
        self.by_doc.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_doc.is_empty()
    }

    /// `doc_id<TAB>subject<TAB>verb<TAB>object`, one record per line.
    pub fn dump(&self) -> String {
        self.records()
            .map(|a| format!("{}\t{}\t{}\t{}\n", a.doc_id, a.subject, a.verb, a.object))
            .collect()
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut grouped: BTreeMap<String, Vec<AtomicAssertion>> = BTreeMap::new();
        for (line, row) in data_lines(text) {
            let fields: Vec<&str> = row.split('\t').collect();
            let [doc_id, subject, verb, object] = fields[..] else {
                return Err(Error::parse(
                    origin,
                    line,
                    "expected doc_id, subject, verb, object",
                ));
            };
            grouped
                .entry(doc_id.to_string())
                .or_default()
                .push(AtomicAssertion::new(doc_id, subject, verb, object));
        }
        let mut store = AssertionStore::new();
        for (doc_id, assertions) in grouped {
            store.insert_document(&doc_id, assertions);
        }
        Ok(store)
    }

    pub fn persist(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.dump()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_to_string(path)?, &path.display().to_string())
    }
}
