//! Relation mining over atomic assertions.
//!
//! Assertions are filtered by stemmed verb, their subject and object clauses are
//! reduced to the known entities they mention, and the resulting entity pairs
//! are aggregated across documents with an occurrence-based confidence:
//! if one extraction is right with probability `p`, then `n` independent
//! supporting documents are all wrong with probability `(1 - p)^n`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use crate::error::{data_lines, read_to_string, Error, Result};
use crate::svo::AtomicAssertion;

/// Default per-extraction precision.
pub const DEFAULT_BASE_PRECISION: f64 = 0.82;

/// Entities of interest, matched case-insensitively against whole clause tokens.
#[derive(Debug, Clone, Default)]
pub struct EntityList {
    names: Vec<String>,
    by_lowercase: HashMap<String, usize>,
}

impl EntityList {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_to_string(path)?, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut list = EntityList::default();
        for (line, name) in data_lines(text) {
            if name.contains(char::is_whitespace) {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("entity `{name}` contains whitespace"),
                ));
            }
            list.insert(name)
                .map_err(|m| Error::parse(origin, line, m))?;
        }
        Ok(list)
    }

    fn insert(&mut self, name: &str) -> std::result::Result<(), String> {
        let key = name.to_lowercase();
        match self.by_lowercase.get(&key) {
            Some(&i) if self.names[i] == name => Ok(()),
            Some(&i) => Err(format!(
                "entity `{name}` differs from `{}` only by case",
                self.names[i]
            )),
            None => {
                self.by_lowercase.insert(key, self.names.len());
                self.names.push(name.to_string());
                Ok(())
            }
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The canonical name of `token`, if it is a listed entity.
    pub fn get(&self, token: &str) -> Option<&str> {
        self.by_lowercase
            .get(&token.to_lowercase())
            .map(|&i| self.names[i].as_str())
    }
}

impl TryFrom<&[&str]> for EntityList {
    type Error = Error;

    fn try_from(names: &[&str]) -> Result<Self> {
        Self::parse(&names.join("\n"), "entity list")
    }
}

/// Assertions whose verb is exactly `verb`.
pub fn filter_by_verb<'a>(
    assertions: &'a [AtomicAssertion],
    verb: &str,
) -> Vec<&'a AtomicAssertion> {
    assertions.iter().filter(|a| a.verb == verb).collect()
}

/// Distinct entities occurring as whole tokens in `clause`, in order of first occurrence.
/// Empty when the clause names no entity.
pub fn clean_clause<'e>(clause: &str, entities: &'e EntityList) -> Vec<&'e str> {
    let mut seen = Vec::new();
    for entity in clause.split_whitespace().filter_map(|t| entities.get(t)) {
        if !seen.contains(&entity) {
            seen.push(entity);
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationRow {
    pub doc_id: String,
    pub subject: String,
    pub verb: String,
    pub object: String,
}

/// One row per (document, subject entity, object entity) among assertions
/// with the given verb; a clause naming several entities yields every pair.
pub fn find_entity_relations(
    assertions: &[AtomicAssertion],
    entities: &EntityList,
    verb: &str,
) -> Vec<RelationRow> {
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for assertion in filter_by_verb(assertions, verb) {
        let objects = clean_clause(&assertion.object, entities);
        if objects.is_empty() {
            continue;
        }
        for subject in clean_clause(&assertion.subject, entities) {
            for &object in &objects {
                let row = RelationRow {
                    doc_id: assertion.doc_id.clone(),
                    subject: subject.to_string(),
                    verb: verb.to_string(),
                    object: object.to_string(),
                };
                if seen.insert(row.clone()) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

pub fn validate_base_precision(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "base precision must lie strictly between 0 and 1, got {p}"
        )))
    }
}

/// Probability that at least one of `n` independent extractions is right.
pub fn confidence(p: f64, n: usize) -> f64 {
    1.0 - (1.0 - p).powi(n as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionRecord {
    pub subject: String,
    pub verb: String,
    pub object: String,
    pub doc_ids: BTreeSet<String>,
    pub confidence: f64,
}

impl InteractionRecord {
    pub fn support(&self) -> usize {
        self.doc_ids.len()
    }

    /// Subject and object are the same entity (homodimer-style binding).
    pub fn is_self_loop(&self) -> bool {
        self.subject == self.object
    }

    /// `subject, verb, object, n, confidence, doc ids`, tab separated.
    pub fn to_tsv_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{:.6}\t{}",
            self.subject,
            self.verb,
            self.object,
            self.support(),
            self.confidence,
            self.doc_ids.iter().cloned().collect::<Vec<_>>().join(",")
        )
    }
}

/// Groups rows by (verb, subject, object), or by the unordered entity pair
/// when `directional` is false, and scores each group by its document count.
/// Undirected records list the pair in byte order. Output is sorted by
/// (subject, verb, object).
pub fn aggregate(
    rows: &[RelationRow],
    p: f64,
    directional: bool,
) -> Result<Vec<InteractionRecord>> {
    validate_base_precision(p)?;
    let mut groups: BTreeMap<(String, String, String), BTreeSet<String>> = BTreeMap::new();
    for row in rows {
        let (s, o) = if directional || row.subject <= row.object {
            (&row.subject, &row.object)
        } else {
            (&row.object, &row.subject)
        };
        groups
            .entry((s.clone(), row.verb.clone(), o.clone()))
            .or_default()
            .insert(row.doc_id.clone());
    }
    Ok(groups
        .into_iter()
        .map(|((subject, verb, object), doc_ids)| InteractionRecord {
            confidence: confidence(p, doc_ids.len()),
            subject,
            verb,
            object,
            doc_ids,
        })
        .collect())
}

/// Histogram bucket: exact support counts up to 7, then one pooled bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bucket {
    Count(usize),
    MoreThanSeven,
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bucket::Count(n) => write!(f, "{n}"),
            Bucket::MoreThanSeven => f.write_str(">7"),
        }
    }
}

pub fn occurrence_histogram(records: &[InteractionRecord]) -> BTreeMap<Bucket, usize> {
    let mut histogram = BTreeMap::new();
    for record in records {
        let bucket = match record.support() {
            n if n > 7 => Bucket::MoreThanSeven,
            n => Bucket::Count(n),
        };
        *histogram.entry(bucket).or_insert(0) += 1;
    }
    histogram
}

pub fn write_interactions(records: &[InteractionRecord]) -> String {
    records.iter().map(|r| r.to_tsv_line() + "\n").collect()
}

/// Reads back the output of [`write_interactions`].
pub fn parse_interactions(text: &str, origin: &str) -> Result<Vec<InteractionRecord>> {
    let mut records = Vec::new();
    for (line, row) in data_lines(text) {
        let fields: Vec<&str> = row.split('\t').collect();
        let [subject, verb, object, n, confidence, doc_ids] = fields[..] else {
            return Err(Error::parse(
                origin,
                line,
                "expected 6 tab-separated fields",
            ));
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::parse(origin, line, format!("bad support count `{n}`")))?;
        let confidence: f64 = confidence
            .parse()
            .map_err(|_| Error::parse(origin, line, format!("bad confidence `{confidence}`")))?;
        let doc_ids: BTreeSet<String> = doc_ids.split(',').map(String::from).collect();
        if doc_ids.len() != n {
            return Err(Error::parse(
                origin,
                line,
                "support count disagrees with document ids",
            ));
        }
        records.push(InteractionRecord {
            subject: subject.into(),
            verb: verb.into(),
            object: object.into(),
            doc_ids,
            confidence,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entities(names: &[&str]) -> EntityList {
        EntityList::try_from(names).unwrap()
    }

    fn atom(doc: &str, s: &str, v: &str, o: &str) -> AtomicAssertion {
        AtomicAssertion::new(doc, s, v, o)
    }

    fn row(doc: &str, s: &str, v: &str, o: &str) -> RelationRow {
        RelationRow {
            doc_id: doc.into(),
            subject: s.into(),
            verb: v.into(),
            object: o.into(),
        }
    }

    #[test]
    fn filters_on_exact_verb() {
        let all = [atom("1", "A", "bind", "B"), atom("1", "A", "activate", "C")];
        assert_eq!(filter_by_verb(&all, "bind"), vec![&all[0]]);
        assert_eq!(filter_by_verb(&all, "activate"), vec![&all[1]]);
        assert!(filter_by_verb(&[], "bind").is_empty());
    }

    #[test]
    fn clause_cleaning() {
        let e = entities(&["MAPK", "MEK"]);
        assert_eq!(clean_clause("MAPK in the cytoplasm", &e), ["MAPK"]);
        assert!(clean_clause("the green fluorescent tag", &e).is_empty());
        assert_eq!(clean_clause("MEK and MAPK complex", &e), ["MEK", "MAPK"]);
        assert!(clean_clause("SMEK and MEK-1's partner", &e).is_empty());
        assert_eq!(clean_clause("mapk , and MAPK", &e), ["MAPK"]);
    }

    #[test]
    fn entity_list_validation() {
        assert!(EntityList::parse("Ras\nRAS\n", "e").is_err());
        assert!(EntityList::parse("two words\n", "e").is_err());
        assert_eq!(EntityList::parse("Ras\nRas\n# c\n", "e").unwrap().len(), 1);
    }

    #[test]
    fn relation_rows() {
        let e = entities(&["MAPK", "MEK"]);
        let rows = find_entity_relations(
            &[atom(
                "1",
                "MAPK in the cytoplasm",
                "bind",
                "the MEK complex",
            )],
            &e,
            "bind",
        );
        assert_eq!(rows, vec![row("1", "MAPK", "bind", "MEK")]);
        assert!(
            find_entity_relations(&[atom("1", "MAPK", "bind", "MEK")], &entities(&[]), "bind")
                .is_empty()
        );
        let rows = find_entity_relations(&[atom("2", "MEK", "bind", "MEK")], &e, "bind");
        assert_eq!(rows, vec![row("2", "MEK", "bind", "MEK")]);
    }

    #[test]
    fn duplicate_rows_collapse_per_document() {
        let e = entities(&["A", "B"]);
        let atoms = [
            atom("1", "A", "bind", "B"),
            atom("1", "A cells", "bind", "B"),
            atom("2", "A", "bind", "B"),
        ];
        assert_eq!(find_entity_relations(&atoms, &e, "bind").len(), 2);
    }

    #[test]
    fn confidence_values() {
        assert!((confidence(0.82, 1) - 0.82).abs() < 1e-12);
        assert!((confidence(0.82, 2) - 0.9676).abs() < 1e-12);
        assert!((confidence(0.82, 5) - 0.999_811_043_2).abs() < 1e-12);
        assert!((confidence(0.82, 7) - 0.999_993_877_799_68).abs() < 1e-12);
    }

    #[test]
    fn base_precision_must_be_open_unit_interval() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(
                matches!(aggregate(&[], p, true), Err(Error::Config(_))),
                "{p}"
            );
        }
        assert!(aggregate(&[], 0.5, true).unwrap().is_empty());
    }

    #[test]
    fn aggregation_modes() {
        let rows = [
            row("1", "B", "bind", "A"),
            row("2", "A", "bind", "B"),
            row("2", "A", "bind", "A"),
            row("3", "A", "bind", "B"),
        ];
        let directional = aggregate(&rows, 0.82, true).unwrap();
        let summary: Vec<(&str, &str, usize)> = directional
            .iter()
            .map(|r| (r.subject.as_str(), r.object.as_str(), r.support()))
            .collect();
        assert_eq!(summary, [("A", "A", 1), ("A", "B", 2), ("B", "A", 1)]);
        assert!(directional[0].is_self_loop());

        let undirected = aggregate(&rows, 0.82, false).unwrap();
        assert_eq!(undirected.len(), 2);
        assert_eq!(
            undirected[1].doc_ids,
            BTreeSet::from(["1".into(), "2".into(), "3".into()])
        );
        assert_eq!(
            undirected[1].to_tsv_line(),
            "A\tbind\tB\t3\t0.994168\t1,2,3"
        );
    }

    #[test]
    fn histogram_buckets() {
        let record = |n: usize| InteractionRecord {
            subject: "A".into(),
            verb: "bind".into(),
            object: "B".into(),
            doc_ids: (0..n).map(|i| i.to_string()).collect(),
            confidence: confidence(0.82, n),
        };
        let h = occurrence_histogram(&[record(1), record(1), record(2)]);
        assert_eq!(
            h,
            BTreeMap::from([(Bucket::Count(1), 2), (Bucket::Count(2), 1)])
        );
        assert!(occurrence_histogram(&[]).is_empty());
        let h = occurrence_histogram(&(1..=9).map(record).collect::<Vec<_>>());
        let mut expected: BTreeMap<Bucket, usize> =
            (1..=7).map(|n| (Bucket::Count(n), 1)).collect();
        expected.insert(Bucket::MoreThanSeven, 2);
        assert_eq!(h, expected);
        assert_eq!(Bucket::MoreThanSeven.to_string(), ">7");
    }

    #[test]
    fn interaction_tsv_round_trip() {
        let rows = [
            row("1", "A", "bind", "B"),
            row("2", "A", "bind", "B"),
            row("2", "C", "bind", "A"),
        ];
        let records = aggregate(&rows, 0.82, true).unwrap();
        let text = write_interactions(&records);
        let back = parse_interactions(&text, "t").unwrap();
        assert_eq!(write_interactions(&back), text);
        assert!(parse_interactions("A\tbind\tB\t2\t0.9\t1\n", "t").is_err());
    }

    proptest! {
        #[test]
        fn confidence_is_monotone_and_bounded(p in 0.01f64..0.99, n in 1usize..60) {
            prop_assert!(confidence(p, n + 1) >= confidence(p, n));
            prop_assert!(confidence(p, n) <= 1.0);
            prop_assert!(confidence(p, n) >= p - 1e-15);
        }

        #[test]
        fn undirected_records_union_directional_ones(
            raw in proptest::collection::vec((0usize..5, 0usize..4, 0usize..4), 0..40)
        ) {
            let names = ["A", "B", "C", "D"];
            let rows: Vec<RelationRow> = raw
                .iter()
                .map(|&(d, s, o)| row(&d.to_string(), names[s], "bind", names[o]))
                .collect();
            let directional = aggregate(&rows, 0.82, true).unwrap();
            let undirected = aggregate(&rows, 0.82, false).unwrap();
            prop_assert!(undirected.len() <= directional.len());
            for u in &undirected {
                let union: BTreeSet<String> = directional
                    .iter()
                    .filter(|d| {
                        (d.subject == u.subject && d.object == u.object)
                            || (d.subject == u.object && d.object == u.subject)
                    })
                    .flat_map(|d| d.doc_ids.iter().cloned())
                    .collect();
                prop_assert_eq!(&union, &u.doc_ids);
            }
        }
    }
}
