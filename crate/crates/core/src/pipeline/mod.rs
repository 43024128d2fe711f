//! Phase 1: preprocessing and normalization.
//!
//! A raw message goes through five steps, in order: tokenization,
//! lowercasing, slang normalization against a lingo dictionary,
//! stop-word removal, and Porter stemming. Every step is a pure
//! function, so staged and fused execution agree and everything here is
//! safe to share across threads.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

pub mod porter;

const BUNDLED_STOPWORDS: &str = include_str!("../fixtures/stopwords.txt");
const BUNDLED_SLANG: &str = include_str!("../fixtures/slang.tsv");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed entry: {reason}")]
    Malformed {
        path: String,
        line: usize,
        reason: String,
    },
}

/// Split a message into tokens: maximal runs of Unicode letters, digits
/// and the apostrophe. Everything else separates; punctuation-only runs
/// yield no token. Source order is preserved.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() || ch == '\'' {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Case-fold every token; length and order are unchanged.
pub fn lowercase(tokens: &[String]) -> Vec<String> {
    tokens.iter().map(|t| t.to_lowercase()).collect()
}

/// Lingo dictionary mapping slang terms to their standard form.
///
/// Keys are stored lowercase; expansions are non-empty word lists, so a
/// multi-word expansion splices several tokens into the stream.
#[derive(Debug, Clone)]
pub struct SlangDictionary {
    entries: HashMap<String, Vec<String>>,
}

impl SlangDictionary {
    /// The dictionary bundled with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_SLANG, "<bundled slang>").expect("bundled slang dictionary is valid")
    }

    pub fn empty() -> Self {
        Self {
            entries: HashMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        let text = fs::read_to_string(path).map_err(|source| FixtureError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse `slang<TAB>expansion` lines; `#` lines and blank lines are
    /// ignored; keys are folded to lowercase.
    pub fn parse(text: &str, origin: &str) -> Result<Self, FixtureError> {
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |reason: &str| FixtureError::Malformed {
                path: origin.to_string(),
                line: idx + 1,
                reason: reason.to_string(),
            };
            let (key, expansion) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected slang<TAB>expansion"))?;
            let key = key.trim().to_lowercase();
            if key.is_empty() {
                return Err(malformed("empty slang term"));
            }
            let words: Vec<String> = expansion
                .split_whitespace()
                .map(|w| w.to_lowercase())
                .collect();
            if words.is_empty() {
                return Err(malformed("empty expansion"));
            }
            entries.insert(key, words);
        }
        Ok(Self { entries })
    }

    pub fn lookup(&self, term: &str) -> Option<&[String]> {
        self.entries.get(term).map(|v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Stop-word list; the bundled fixture carries 153 lowercase entries.
#[derive(Debug, Clone)]
pub struct StopWordList {
    words: HashSet<String>,
}

impl StopWordList {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS)
    }

    pub fn empty() -> Self {
        Self {
            words: HashSet::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        let text = fs::read_to_string(path).map_err(|source| FixtureError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&text))
    }

    /// One lowercase word per line; `#` lines ignored.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(|l| l.trim_end_matches('\r').trim())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        Self { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Replace each token found in the dictionary by its expansion words,
/// spliced in place; unknown tokens pass through unchanged. Expects
/// lowercased tokens.
pub fn normalize_slang(tokens: &[String], dict: &SlangDictionary) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    for token in tokens {
        match dict.lookup(token) {
            Some(words) => out.extend(words.iter().cloned()),
            None => out.push(token.clone()),
        }
    }
    out
}

/// Keep exactly the tokens not in `stop`, preserving order.
pub fn remove_stopwords(tokens: &[String], stop: &StopWordList) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !stop.contains(t))
        .cloned()
        .collect()
}

/// Porter-stem every token.
pub fn stem(tokens: &[String]) -> Vec<String> {
    tokens.iter().map(|t| porter::stem(t)).collect()
}

/// Pipeline configuration. `normalize = false` is the ablation arm:
/// only tokenization and lowercasing run (the classifier still needs
/// tokens), while slang normalization, stop-word removal and stemming
/// are skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineSettings {
    pub normalize: bool,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        Self { normalize: true }
    }
}

/// Run the full five-step pipeline on a raw message.
pub fn preprocess(text: &str, dict: &SlangDictionary, stop: &StopWordList) -> Vec<String> {
    preprocess_with(text, dict, stop, PipelineSettings::default())
}

/// Run the pipeline under explicit settings.
pub fn preprocess_with(
    text: &str,
    dict: &SlangDictionary,
    stop: &StopWordList,
    settings: PipelineSettings,
) -> Vec<String> {
    let tokens = lowercase(&tokenize(text));
    if !settings.normalize {
        return tokens;
    }
    stem(&remove_stopwords(&normalize_slang(&tokens, dict), stop))
}

/// All intermediate stages of the pipeline, for reporting and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineStages {
    pub tokenized: Vec<String>,
    pub lowercased: Vec<String>,
    pub normalized: Vec<String>,
    pub without_stopwords: Vec<String>,
    pub stemmed: Vec<String>,
}

pub fn preprocess_stages(
    text: &str,
    dict: &SlangDictionary,
    stop: &StopWordList,
) -> PipelineStages {
    let tokenized = tokenize(text);
    let lowercased = lowercase(&tokenized);
    let normalized = normalize_slang(&lowercased, dict);
    let without_stopwords = remove_stopwords(&normalized, stop);
    let stemmed = stem(&without_stopwords);
    PipelineStages {
        tokenized,
        lowercased,
        normalized,
        without_stopwords,
        stemmed,
    }
}
