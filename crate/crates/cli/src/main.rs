use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use svomine::evaluation::{bootstrap_ci, correct_flags, score, GoldSet};
use svomine::harness::{emit_dot, ingest_corpus, AssertionStore, Pipeline, PipelineConfig};
use svomine::miner::{
    aggregate, find_entity_relations, occurrence_histogram, parse_interactions, write_interactions,
    EntityList,
};
use svomine::normalizer::AbbreviationDictionary;
use svomine::svo::AtomicAssertion;

/// Exit code when some documents failed but the run finished.
const PARTIAL_FAILURE: u8 = 1;
/// Exit code for unusable configuration, resources or inputs.
const CONFIG_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "svomine",
    version,
    about = "Extract subject-verb-object assertions from abstracts and mine interaction networks"
)]
struct Cli {
    #[command(flatten)]
    resources: Resources,

    /// Log progress (-v) or everything (-vv)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

/// Resource files. Each flag overrides the matching key of `--config`.
#[derive(Args, Debug)]
struct Resources {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Abbreviation dictionary (long form, abbreviation, score)
    #[arg(long, global = true)]
    abbrev_dict: Option<PathBuf>,
    /// Acronyms that never end a sentence, one per line
    #[arg(long, global = true)]
    acronyms: Option<PathBuf>,
    /// Clitic splits: contraction, then its pieces
    #[arg(long, global = true)]
    contractions: Option<PathBuf>,
    /// Tagger lexicon: word, then tags by likelihood
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Tagger lexical (affix) rules
    #[arg(long, global = true)]
    lexical_rules: Option<PathBuf>,
    /// Tagger contextual rules
    #[arg(long, global = true)]
    contextual_rules: Option<PathBuf>,
    /// Stemmer rules for (word, tag class) pairs
    #[arg(long, global = true)]
    stem_rules: Option<PathBuf>,
    /// Irregular forms and their stems
    #[arg(long, global = true)]
    irregulars: Option<PathBuf>,
    /// Suffixes to strip, with minimum stem length
    #[arg(long, global = true)]
    suffixes: Option<PathBuf>,
    /// Prefixes to strip, with minimum stem length
    #[arg(long, global = true)]
    prefixes: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Replace long forms in text with their dictionary abbreviations
    Normalize {
        /// Input text (default: stdin)
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },

    /// Run the corpus through the pipeline and dump atomic assertions
    Parse {
        /// JSON-lines corpus with `pmid` and `abstract` fields
        #[arg(long)]
        corpus: PathBuf,
        /// Assertion TSV (default: stdout)
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write multi-object SVOs here
        #[arg(long)]
        svo_out: Option<PathBuf>,
        /// Also write bracketed chunk structure here
        #[arg(long)]
        chunks_out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },

    /// Mine an interaction network for one verb from an assertion dump
    Mine {
        #[arg(long)]
        assertions: PathBuf,
        /// Stemmed verb to mine, e.g. bind or activate
        #[arg(long)]
        verb: String,
        /// Entity names, one per line
        #[arg(long)]
        entities: PathBuf,
        /// Treat (A, B) and (B, A) as one interaction
        #[arg(long)]
        undirected: bool,
        /// Precision of a single extraction (default: config value, else 0.82)
        #[arg(long)]
        base_precision: Option<f64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Write support-count histogram here
        #[arg(long)]
        histogram: Option<PathBuf>,
    },

    /// Score an interaction file against a gold standard
    Eval {
        /// Interaction TSV produced by `mine`
        #[arg(long)]
        predicted: PathBuf,
        /// Gold pairs with a `#mode:` header
        #[arg(long)]
        gold: PathBuf,
        /// Score direction-sensitively (default: the gold file's mode)
        #[arg(long, conflicts_with = "undirected")]
        directional: bool,
        #[arg(long)]
        undirected: bool,
        /// Bootstrap resamples for a precision interval
        #[arg(long)]
        bootstrap: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },

    /// Export an interaction file as a DOT graph
    Graph {
        #[arg(long)]
        interactions: PathBuf,
        /// DOT output (default: stdout)
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        undirected: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(CONFIG_ERROR)
        }
    }
}

fn load_config(resources: &Resources) -> Result<PipelineConfig> {
    let mut config = match &resources.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    let overrides = [
        ("abbrev_dict", &resources.abbrev_dict),
        ("acronyms", &resources.acronyms),
        ("contractions", &resources.contractions),
        ("lexicon", &resources.lexicon),
        ("lexical_rules", &resources.lexical_rules),
        ("contextual_rules", &resources.contextual_rules),
        ("stem_rules", &resources.stem_rules),
        ("irregulars", &resources.irregulars),
        ("suffixes", &resources.suffixes),
        ("prefixes", &resources.prefixes),
    ];
    for (key, value) in overrides {
        if let Some(path) = value {
            config.set(key, &path.to_string_lossy(), Path::new(""))?;
        }
    }
    Ok(config)
}

fn output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout"),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = load_config(&cli.resources)?;
    match cli.command {
        Command::Normalize { input, out } => {
            let dictionary = match &config.abbrev_dict {
                Some(path) => AbbreviationDictionary::load(path)?,
                None => {
                    log::warn!("no abbreviation dictionary given; text passes through unchanged");
                    AbbreviationDictionary::default()
                }
            };
            let text = match input {
                Some(path) => std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?,
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .context("reading stdin")?;
                    buf
                }
            };
            output(out.as_deref(), &dictionary.normalize(&text))?;
        }

        Command::Parse {
            corpus,
            out,
            svo_out,
            chunks_out,
            threads,
        } => {
            let pipeline = Pipeline::from_config(&config)?;
            let corpus = ingest_corpus(&corpus)?;
            log::info!(
                "parsing {} documents on {} thread(s)",
                corpus.documents.len(),
                threads.max(1)
            );
            let result = pipeline.run(&corpus.documents, threads)?;
            output(out.as_deref(), &result.store.dump())?;
            if let Some(path) = svo_out {
                let text: String = result
                    .analyses
                    .iter()
                    .flat_map(|a| a.svos())
                    .map(|s| s.to_tsv_line() + "\n")
                    .collect();
                output(Some(&path), &text)?;
            }
            if let Some(path) = chunks_out {
                let text: String = result
                    .analyses
                    .iter()
                    .flat_map(|a| {
                        a.sentences
                            .iter()
                            .map(move |s| format!("{}\t{}\n", a.doc_id, s.chunked.bracketed()))
                    })
                    .collect();
                output(Some(&path), &text)?;
            }
            if !result.failures.is_empty() {
                eprintln!(
                    "{} of {} documents failed",
                    result.failures.len(),
                    corpus.documents.len()
                );
                return Ok(ExitCode::from(PARTIAL_FAILURE));
            }
        }

        Command::Mine {
            assertions,
            verb,
            entities,
            undirected,
            base_precision,
            out,
            histogram,
        } => {
            let store = AssertionStore::load(&assertions)?;
            let atoms: Vec<AtomicAssertion> = store.records().cloned().collect();
            let entities = EntityList::load(&entities)?;
            let p = base_precision.unwrap_or(config.base_precision);
            let rows = find_entity_relations(&atoms, &entities, &verb);
            let records = aggregate(&rows, p, !undirected)?;
            log::info!(
                "{} rows, {} interactions for `{verb}`",
                rows.len(),
                records.len()
            );
            output(out.as_deref(), &write_interactions(&records))?;
            if let Some(path) = histogram {
                let text: String = occurrence_histogram(&records)
                    .iter()
                    .map(|(bucket, count)| format!("{bucket}\t{count}\n"))
                    .collect();
                output(Some(&path), &text)?;
            }
        }

        Command::Eval {
            predicted,
            gold,
            directional,
            undirected,
            bootstrap,
            seed,
            level,
        } => {
            let text = std::fs::read_to_string(&predicted)
                .with_context(|| format!("reading {}", predicted.display()))?;
            let predictions: Vec<(String, String)> =
                parse_interactions(&text, &predicted.display().to_string())?
                    .into_iter()
                    .map(|r| (r.subject, r.object))
                    .collect();
            let gold = GoldSet::load(&gold)?;
            let directional = if directional || undirected {
                directional
            } else {
                gold.is_directional()
            };
            let m = score(&predictions, &gold, directional);
            let mut report = format!(
                "mode\t{}\nprecision\t{:.6}\t{}/{}\nrecall\t{:.6}\t{}/{}\n",
                if directional {
                    "directional"
                } else {
                    "undirected"
                },
                m.precision,
                m.true_positives,
                m.predicted_count,
                m.recall,
                m.gold_matched,
                m.gold_count
            );
            if let Some(resamples) = bootstrap {
                let flags = correct_flags(&predictions, &gold, directional);
                let ci = bootstrap_ci(&flags, resamples, level, seed)?;
                report += &format!(
                    "precision_interval\t{:.6}\t{:.6}\tlevel={level}\n",
                    ci.low, ci.high
                );
            }
            output(None, &report)?;
        }

        Command::Graph {
            interactions,
            dot,
            undirected,
        } => {
            let text = std::fs::read_to_string(&interactions)
                .with_context(|| format!("reading {}", interactions.display()))?;
            let records = parse_interactions(&text, &interactions.display().to_string())?;
            output(dot.as_deref(), &emit_dot(&records, !undirected))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
