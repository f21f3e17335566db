//! Document processing: normalize, split, tokenize, tag, chunk, stem, extract, atomize.

use rayon::prelude::*;

use crate::chunker::{chunk, ChunkedSentence};
use crate::error::{Error, Result};
use crate::normalizer::AbbreviationDictionary;
use crate::sentencer::{split_sentences, tokenize, Acronyms, Contractions};
use crate::sentencer::{BUNDLED_ACRONYMS, BUNDLED_CONTRACTIONS};
use crate::stemmer::{
    StemRuleSet, StemRuleSources, BUNDLED_IRREGULARS, BUNDLED_PREFIXES, BUNDLED_STEM_RULES,
    BUNDLED_SUFFIXES,
};
use crate::svo::{atomize, extract_svos, AtomicAssertion, SvoAssertion};
use crate::tagger::{
    TaggerModel, BUNDLED_CONTEXTUAL_RULES, BUNDLED_LEXICAL_RULES, BUNDLED_LEXICON,
};

use super::config::{source, PipelineConfig, DEFAULT_MAX_SENTENCE_TOKENS};
use super::corpus::Document;
use super::store::AssertionStore;

/// Everything the pipeline needs, loaded once and shared read-only.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub dictionary: AbbreviationDictionary,
    pub acronyms: Acronyms,
    pub contractions: Contractions,
    pub tagger: TaggerModel,
    pub stems: StemRuleSet,
    pub max_sentence_tokens: usize,
}

#[derive(Debug, Clone)]
pub struct SentenceAnalysis {
    pub chunked: ChunkedSentence,
    /// Stem of each token, parallel to `chunked.tokens`.
    pub stems: Vec<String>,
    pub svos: Vec<SvoAssertion>,
}

#[derive(Debug, Clone)]
pub struct DocumentAnalysis {
    pub doc_id: String,
    pub sentences: Vec<SentenceAnalysis>,
}

impl DocumentAnalysis {
    pub fn svos(&self) -> impl Iterator<Item = &SvoAssertion> {
        self.sentences.iter().flat_map(|s| s.svos.iter())
    }

    pub fn atoms(&self) -> Vec<AtomicAssertion> {
        self.svos().flat_map(atomize).collect()
    }
}

#[derive(Debug, Default)]
pub struct RunOutput {
    pub store: AssertionStore,
    /// Successful analyses, in corpus order.
    pub analyses: Vec<DocumentAnalysis>,
    /// Documents that failed, in corpus order.
    pub failures: Vec<Error>,
}

impl Pipeline {
    /// Bundled model and rules, no abbreviation dictionary.
    pub fn bundled() -> Self {
        Pipeline {
            dictionary: AbbreviationDictionary::default(),
            acronyms: Acronyms::bundled(),
            contractions: Contractions::bundled(),
            tagger: TaggerModel::bundled(),
            stems: StemRuleSet::bundled(),
            max_sentence_tokens: DEFAULT_MAX_SENTENCE_TOKENS,
        }
    }

    pub fn from_config(config: &PipelineConfig) -> Result<Self> {
        let dictionary = match &config.abbrev_dict {
            Some(path) => AbbreviationDictionary::load(path)?,
            None => AbbreviationDictionary::default(),
        };
        let (acronyms, _) = source(&config.acronyms, BUNDLED_ACRONYMS, "acronyms")?;
        let (contractions, contractions_origin) =
            source(&config.contractions, BUNDLED_CONTRACTIONS, "contractions")?;
        let lexicon = source(&config.lexicon, BUNDLED_LEXICON, "lexicon")?;
        let lexical = source(
            &config.lexical_rules,
            BUNDLED_LEXICAL_RULES,
            "lexical rules",
        )?;
        let contextual = source(
            &config.contextual_rules,
            BUNDLED_CONTEXTUAL_RULES,
            "contextual rules",
        )?;
        let specific = source(&config.stem_rules, BUNDLED_STEM_RULES, "stem rules")?;
        let irregulars = source(&config.irregulars, BUNDLED_IRREGULARS, "irregulars")?;
        let suffixes = source(&config.suffixes, BUNDLED_SUFFIXES, "suffixes")?;
        let prefixes = source(&config.prefixes, BUNDLED_PREFIXES, "prefixes")?;

        Ok(Pipeline {
            dictionary,
            acronyms: Acronyms::parse(&acronyms),
            contractions: Contractions::parse(&contractions, &contractions_origin)?,
            tagger: TaggerModel::parse(pair(&lexicon), pair(&lexical), pair(&contextual))?,
            stems: StemRuleSet::parse(StemRuleSources {
                specific: pair(&specific),
                irregulars: pair(&irregulars),
                suffixes: pair(&suffixes),
                prefixes: pair(&prefixes),
            })?,
            max_sentence_tokens: config.max_sentence_tokens,
        })
    }

    pub fn process_document(&self, doc: &Document) -> Result<DocumentAnalysis> {
        let text = self.dictionary.normalize(&doc.text);
        let mut sentences = Vec::new();
        for sentence in split_sentences(&text, &self.acronyms) {
            let tokens = tokenize(&sentence.text, &self.acronyms, &self.contractions);
            if tokens.len() > self.max_sentence_tokens {
                return Err(Error::Document {
                    doc_id: doc.doc_id.clone(),
                    message: format!(
                        "sentence at character {} has {} tokens, more than the limit of {}",
                        sentence.source_offset,
                        tokens.len(),
                        self.max_sentence_tokens
                    ),
                });
            }
            let chunked = chunk(self.tagger.tag(&tokens));
            let stems: Vec<String> = chunked
                .tokens
                .iter()
                .map(|t| self.stems.stem(&t.text, t.tag))
                .collect();
            let svos = extract_svos(&doc.doc_id, &chunked, &stems);
            sentences.push(SentenceAnalysis {
                chunked,
                stems,
                svos,
            });
        }
        Ok(DocumentAnalysis {
            doc_id: doc.doc_id.clone(),
            sentences,
        })
    }

    /// Processes every document. With `threads > 1` documents run on a rayon
    /// pool of that size; results are merged in corpus order either way.
    /// A failing document is logged and skipped.
    pub fn run(&self, docs: &[Document], threads: usize) -> Result<RunOutput> {
        let results: Vec<Result<DocumentAnalysis>> = if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| {
                    Error::Config(format!("cannot start {threads} worker threads: {e}"))
                })?;
            pool.install(|| docs.par_iter().map(|d| self.process_document(d)).collect())
        } else {
            docs.iter().map(|d| self.process_document(d)).collect()
        };

        let mut output = RunOutput::default();
        for result in results {
            match result {
                Ok(analysis) => {
                    output
                        .store
                        .insert_document(&analysis.doc_id, analysis.atoms());
                    output.analyses.push(analysis);
                }
                Err(e) => {
                    log::error!("{e}");
                    output.failures.push(e);
                }
            }
        }
        Ok(output)
    }
}

fn pair(s: &(String, String)) -> (&str, &str) {
    (&s.0, &s.1)
}

/// Runs `pipeline` over `docs` on the calling thread.
pub fn run_pipeline(docs: &[Document], pipeline: &Pipeline) -> RunOutput {
    pipeline
        .run(docs, 1)
        .expect("single-threaded runs need no thread pool")
}
