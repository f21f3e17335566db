//! Pipeline configuration: a plain `key = value` file.
//!
//! Relative paths resolve against the directory of the file that names them.
//! Any resource left unset falls back to the data bundled with the crate,
//! except the abbreviation dictionary, which defaults to empty.

use std::path::{Path, PathBuf};

use crate::error::{data_lines, read_to_string, Error, Result};
use crate::miner::{validate_base_precision, DEFAULT_BASE_PRECISION};

pub const DEFAULT_MAX_SENTENCE_TOKENS: usize = 512;

/// Every key accepted in a configuration file.
pub const KEYS: &[&str] = &[
    "abbrev_dict",
    "acronyms",
    "contractions",
    "lexicon",
    "lexical_rules",
    "contextual_rules",
    "stem_rules",
    "irregulars",
    "suffixes",
    "prefixes",
    "base_precision",
    "max_sentence_tokens",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub abbrev_dict: Option<PathBuf>,
    pub acronyms: Option<PathBuf>,
    pub contractions: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub lexical_rules: Option<PathBuf>,
    pub contextual_rules: Option<PathBuf>,
    pub stem_rules: Option<PathBuf>,
    pub irregulars: Option<PathBuf>,
    pub suffixes: Option<PathBuf>,
    pub prefixes: Option<PathBuf>,
    pub base_precision: f64,
    /// Sentences with more tokens fail their document.
    pub max_sentence_tokens: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            abbrev_dict: None,
            acronyms: None,
            contractions: None,
            lexicon: None,
            lexical_rules: None,
            contextual_rules: None,
            stem_rules: None,
            irregulars: None,
            suffixes: None,
            prefixes: None,
            base_precision: DEFAULT_BASE_PRECISION,
            max_sentence_tokens: DEFAULT_MAX_SENTENCE_TOKENS,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&read_to_string(path)?, base, &path.display().to_string())
    }

    pub fn parse(text: &str, base_dir: &Path, origin: &str) -> Result<Self> {
        let mut config = PipelineConfig::default();
        for (line, row) in data_lines(text) {
            let Some((key, value)) = row.split_once('=') else {
                return Err(Error::parse(origin, line, "expected `key = value`"));
            };
            config
                .set(key.trim(), value.trim(), base_dir)
                .map_err(|e| Error::parse(origin, line, e.to_string()))?;
        }
        Ok(config)
    }

    /// Sets one key; path values are resolved against `base_dir`.
    pub fn set(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        let path = || Some(base_dir.join(value));
        match key {
            "abbrev_dict" => self.abbrev_dict = path(),
            "acronyms" => self.acronyms = path(),
            "contractions" => self.contractions = path(),
            "lexicon" => self.lexicon = path(),
            "lexical_rules" => self.lexical_rules = path(),
            "contextual_rules" => self.contextual_rules = path(),
            "stem_rules" => self.stem_rules = path(),
            "irregulars" => self.irregulars = path(),
            "suffixes" => self.suffixes = path(),
            "prefixes" => self.prefixes = path(),
            "base_precision" => {
                let p: f64 = value.parse().map_err(|_| {
                    Error::Config(format!("base_precision `{value}` is not a number"))
                })?;
                validate_base_precision(p)?;
                self.base_precision = p;
            }
            "max_sentence_tokens" => {
                self.max_sentence_tokens = value
                    .parse()
                    .ok()
                    .filter(|&n: &usize| n > 0)
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "max_sentence_tokens `{value}` is not a positive integer"
                        ))
                    })?;
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown key `{other}` (expected one of: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }
}

/// Reads `path` if set, otherwise returns the bundled text. Yields `(text, origin)`.
pub(crate) fn source(
    path: &Option<PathBuf>,
    bundled: &'static str,
    name: &str,
) -> Result<(String, String)> {
    match path {
        Some(p) => Ok((read_to_string(p)?, p.display().to_string())),
        None => Ok((bundled.to_string(), format!("bundled {name}"))),
    }
}
