//! Scoring predicted interactions against a gold standard, and percentile
//! bootstrap intervals for precision.

use std::collections::HashSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{read_to_string, Error, Result};

/// Minimum number of bootstrap resamples accepted.
pub const MIN_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldPair {
    pub agent: String,
    pub target: String,
    pub doc_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldSet {
    pairs: Vec<GoldPair>,
    directional: bool,
}

fn unordered<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl GoldSet {
    /// Builds a gold set, dropping pairs that repeat an earlier one under the
    /// given mode (in undirected mode, (B, A) repeats (A, B)).
    pub fn new(pairs: impl IntoIterator<Item = GoldPair>, directional: bool) -> Self {
        let mut seen = HashSet::new();
        let pairs = pairs
            .into_iter()
            .filter(|p| {
                let key = if directional {
                    (p.agent.clone(), p.target.clone())
                } else {
                    let (a, b) = unordered(&p.agent, &p.target);
                    (a.to_string(), b.to_string())
                };
                seen.insert(key)
            })
            .collect();
        GoldSet { pairs, directional }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_to_string(path)?, &path.display().to_string())
    }

    /// Parses `agent<TAB>target[<TAB>doc_id]` rows after a required
    /// `#mode: directional` or `#mode: undirected` header.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut directional = None;
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let row = raw.trim();
            if let Some(mode) = row.strip_prefix("#mode:") {
                directional = Some(match mode.trim() {
                    "directional" => true,
                    "undirected" => false,
                    other => {
                        return Err(Error::parse(
                            origin,
                            line,
                            format!("mode must be directional or undirected, not `{other}`"),
                        ))
                    }
                });
                continue;
            }
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            if directional.is_none() {
                return Err(Error::parse(
                    origin,
                    line,
                    "`#mode:` header must precede the pairs",
                ));
            }
            let fields: Vec<&str> = row.split('\t').map(str::trim).collect();
            let (agent, target, doc_id) = match fields[..] {
                [a, t] => (a, t, None),
                [a, t, d] => (a, t, Some(d.to_string())),
                _ => {
                    return Err(Error::parse(
                        origin,
                        line,
                        "expected `agent<TAB>target[<TAB>doc_id]`",
                    ))
                }
            };
            if agent.is_empty() || target.is_empty() {
                return Err(Error::parse(origin, line, "empty agent or target"));
            }
            pairs.push(GoldPair {
                agent: agent.into(),
                target: target.into(),
                doc_id,
            });
        }
        let directional =
            directional.ok_or_else(|| Error::parse(origin, 0, "missing `#mode:` header"))?;
        Ok(GoldSet::new(pairs, directional))
    }

    pub fn pairs(&self) -> &[GoldPair] {
        &self.pairs
    }

    pub fn is_directional(&self) -> bool {
        self.directional
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    /// Distinct predictions that match at least one gold pair.
    pub true_positives: usize,
    /// Gold pairs matched by at least one prediction.
    pub gold_matched: usize,
    pub predicted_count: usize,
    pub gold_count: usize,
}

fn matches(s: &str, o: &str, gold: &GoldPair, directional: bool) -> bool {
    if directional {
        s == gold.agent && o == gold.target
    } else {
        unordered(s, o) == unordered(&gold.agent, &gold.target)
    }
}

fn distinct(predicted: &[(String, String)]) -> Vec<&(String, String)> {
    let mut seen = HashSet::new();
    predicted.iter().filter(|p| seen.insert(*p)).collect()
}

/// Per distinct prediction, in first-occurrence order: does it match some gold pair?
pub fn correct_flags(
    predicted: &[(String, String)],
    gold: &GoldSet,
    directional: bool,
) -> Vec<bool> {
    distinct(predicted)
        .into_iter()
        .map(|(s, o)| gold.pairs.iter().any(|g| matches(s, o, g, directional)))
        .collect()
}

/// Precision over distinct predictions and recall over gold pairs. Gold doc ids are ignored.
///
/// Both sides keep their own orientation; in undirected mode a prediction
/// (A, B) and its flip (B, A) are still two predictions, so undirected scores
/// never fall below directional ones.
pub fn score(predicted: &[(String, String)], gold: &GoldSet, directional: bool) -> Metrics {
    let flags = correct_flags(predicted, gold, directional);
    let true_positives = flags.iter().filter(|&&f| f).count();
    let predicted_count = flags.len();
    let distinct_predictions = distinct(predicted);
    let gold_matched = gold
        .pairs
        .iter()
        .filter(|g| {
            distinct_predictions
                .iter()
                .any(|(s, o)| matches(s, o, g, directional))
        })
        .count();
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    Metrics {
        precision: ratio(true_positives, predicted_count),
        recall: ratio(gold_matched, gold.len()),
        true_positives,
        gold_matched,
        predicted_count,
        gold_count: gold.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
    pub point: f64,
}

/// Percentile bootstrap interval for the proportion of `true` flags.
///
/// Each of `resamples` draws takes `flags.len()` flags with replacement from a
/// ChaCha8 generator seeded with `seed`; the bounds are the `(1 - level) / 2`
/// and `(1 + level) / 2` quantiles of the resampled proportions, linearly
/// interpolated between order statistics.
pub fn bootstrap_ci(flags: &[bool], resamples: usize, level: f64, seed: u64) -> Result<Interval> {
    if flags.is_empty() {
        return Err(Error::InvalidInput(
            "bootstrap needs a non-empty sample".into(),
        ));
    }
    if resamples < MIN_RESAMPLES {
        return Err(Error::InvalidInput(format!(
            "bootstrap needs at least {MIN_RESAMPLES} resamples, got {resamples}"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidInput(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    let n = flags.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut proportions: Vec<f64> = (0..resamples)
        .map(|_| (0..n).filter(|_| flags[rng.gen_range(0..n)]).count() as f64 / n as f64)
        .collect();
    proportions.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok(Interval {
        low: quantile(&proportions, tail),
        high: quantile(&proportions, 1.0 - tail),
        point: flags.iter().filter(|&&f| f).count() as f64 / n as f64,
    })
}

/// Quantile of sorted data, interpolating between the two nearest order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let below = h.floor() as usize;
    let above = (below + 1).min(sorted.len() - 1);
    sorted[below] + (h - below as f64) * (sorted[above] - sorted[below])
}
