//! Corpus ingestion and model persistence.
//!
//! Corpora are TSV files, one `<label>\t<text>` record per line, in the
//! SMS Spam Collection layout. Trained models persist as a directory of
//! three files: `ham.csv` and `smish.csv` with per-term counts, and a
//! `meta.txt` sidecar. Counts are the source of truth; probabilities in
//! the CSVs are derived prints, re-computed on load and never trusted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bayes::{
    ClassLabel, PriorMode, SmoothingConfig, SmoothingMode, TrainError, TrainedModel,
};
use crate::pipeline::PipelineSettings;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not valid UTF-8")]
    NotUtf8 { path: String },
    #[error("{path}:{line_no}: malformed line (expected <label>\\t<text> with label ham, smish or spam)")]
    MalformedLine { path: String, line_no: usize },
    #[error("{path}: no messages parsed")]
    EmptyCorpus { path: String },
    #[error("missing model file {path}")]
    MissingFile { path: String },
    #[error("{file}:{line_no}: malformed row")]
    MalformedRow { file: String, line_no: usize },
    #[error("inconsistent model metadata: {reason}")]
    InconsistentMeta { reason: String },
}

/// Label attached to an ingested message. `Unlabeled` only occurs on
/// classify-mode inputs, never in training corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageLabel {
    Ham,
    Smish,
    Unlabeled,
}

impl MessageLabel {
    pub fn as_class(self) -> Option<ClassLabel> {
        match self {
            MessageLabel::Ham => Some(ClassLabel::Ham),
            MessageLabel::Smish => Some(ClassLabel::Smish),
            MessageLabel::Unlabeled => None,
        }
    }
}

/// One raw SMS with its source line number and optional gold label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMessage {
    pub line_no: usize,
    pub label: MessageLabel,
    pub text: String,
}

/// An ordered collection of labeled messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub messages: Vec<LabeledMessage>,
    pub source_path: String,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn count(&self, class: ClassLabel) -> usize {
        self.messages
            .iter()
            .filter(|m| m.label.as_class() == Some(class))
            .count()
    }
}

/// Load a labeled corpus. Each non-empty line must read
/// `<label>\t<text>`; `ham` maps to ham, `smish` to smish, and `spam`
/// to smish only when `spam_as_smish` is set (otherwise spam lines are
/// rejected). Line order is preserved; line numbers are 1-based.
pub fn load_corpus(path: &Path, spam_as_smish: bool) -> Result<Corpus, CorpusError> {
    let display = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: display.clone(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|_| CorpusError::NotUtf8 {
        path: display.clone(),
    })?;
    parse_corpus(&text, &display, spam_as_smish)
}

/// Parse corpus text; `origin` only labels error messages.
pub fn parse_corpus(
    text: &str,
    origin: &str,
    spam_as_smish: bool,
) -> Result<Corpus, CorpusError> {
    let mut messages = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let malformed = || CorpusError::MalformedLine {
            path: origin.to_string(),
            line_no,
        };
        let (label, body) = line.split_once('\t').ok_or_else(malformed)?;
        let label = match label {
            "ham" => MessageLabel::Ham,
            "smish" => MessageLabel::Smish,
            "spam" if spam_as_smish => MessageLabel::Smish,
            _ => return Err(malformed()),
        };
        messages.push(LabeledMessage {
            line_no,
            label,
            text: body.to_string(),
        });
    }
    if messages.is_empty() {
        return Err(CorpusError::EmptyCorpus {
            path: origin.to_string(),
        });
    }
    Ok(Corpus {
        messages,
        source_path: origin.to_string(),
    })
}

/// Read classify-mode input: every line (including empty ones) becomes
/// one unlabeled message, 1:1 with the file's lines.
pub fn load_unlabeled(path: &Path) -> Result<Corpus, CorpusError> {
    let display = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: display.clone(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|_| CorpusError::NotUtf8 {
        path: display.clone(),
    })?;
    let messages = text
        .lines()
        .enumerate()
        .map(|(idx, raw)| LabeledMessage {
            line_no: idx + 1,
            label: MessageLabel::Unlabeled,
            text: raw.strip_suffix('\r').unwrap_or(raw).to_string(),
        })
        .collect();
    Ok(Corpus {
        messages,
        source_path: display,
    })
}

/// Render a labeled corpus back to TSV. Inverse of [`parse_corpus`] on
/// (label, text) pairs; unlabeled messages cannot be rendered.
pub fn to_tsv(corpus: &Corpus) -> String {
    let mut out = String::new();
    for message in &corpus.messages {
        let label = match message.label {
            MessageLabel::Ham => "ham",
            MessageLabel::Smish => "smish",
            MessageLabel::Unlabeled => panic!("cannot render unlabeled message to labeled TSV"),
        };
        let _ = writeln!(out, "{label}\t{}", message.text);
    }
    out
}

/// Paths of the three files a model persists to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFiles {
    pub ham_file: PathBuf,
    pub smish_file: PathBuf,
    pub meta_file: PathBuf,
}

impl ModelFiles {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            ham_file: dir.join("ham.csv"),
            smish_file: dir.join("smish.csv"),
            meta_file: dir.join("meta.txt"),
        }
    }
}

fn render_class_csv(model: &TrainedModel, class: ClassLabel) -> String {
    let total = f64::from(model.total(class));
    let mut out = String::from("term,count,probability\n");
    for (term, count) in model.counts(class) {
        let probability = f64::from(count) / total;
        let _ = writeln!(out, "{term},{count},{probability:.6}");
    }
    out
}

/// Write `ham.csv`, `smish.csv` and `meta.txt` under `dir`. Rows are
/// sorted by term and probabilities printed with six fractional digits,
/// so output is byte-deterministic for a fixed model.
pub fn export_model(
    model: &TrainedModel,
    settings: PipelineSettings,
    dir: &Path,
) -> Result<ModelFiles, CorpusError> {
    fs::create_dir_all(dir).map_err(|source| CorpusError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let files = ModelFiles::in_dir(dir);
    let write = |path: &Path, contents: &str| {
        fs::write(path, contents).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
    };

    write(&files.ham_file, &render_class_csv(model, ClassLabel::Ham))?;
    write(
        &files.smish_file,
        &render_class_csv(model, ClassLabel::Smish),
    )?;

    let smoothing = model.smoothing();
    let mode = match smoothing.mode {
        SmoothingMode::SkipUnknown => "skip_unknown",
        SmoothingMode::Laplace => "laplace",
    };
    let prior = match model.prior_mode() {
        PriorMode::Uniform => "uniform",
        PriorMode::ClassFrequency => "class_frequency",
    };
    let meta = format!(
        "total_ham={}\ntotal_smish={}\nsmoothing={}\nalpha={}\nprior_mode={}\nnormalize={}\n",
        model.total(ClassLabel::Ham),
        model.total(ClassLabel::Smish),
        mode,
        smoothing.alpha,
        prior,
        settings.normalize,
    );
    write(&files.meta_file, &meta)?;
    Ok(files)
}

fn read_model_file(path: &Path) -> Result<String, CorpusError> {
    if !path.exists() {
        return Err(CorpusError::MissingFile {
            path: path.display().to_string(),
        });
    }
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_class_csv(path: &Path) -> Result<BTreeMap<String, u32>, CorpusError> {
    let file = path.display().to_string();
    let text = read_model_file(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == "term,count,probability" => {}
        _ => {
            return Err(CorpusError::MalformedRow {
                file,
                line_no: 1,
            })
        }
    }
    let mut counts = BTreeMap::new();
    for (idx, raw) in lines {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let malformed = || CorpusError::MalformedRow {
            file: file.clone(),
            line_no: idx + 1,
        };
        let mut fields = line.split(',');
        let term = fields.next().ok_or_else(malformed)?;
        let count: u32 = fields
            .next()
            .ok_or_else(malformed)?
            .parse()
            .map_err(|_| malformed())?;
        let _probability: f64 = fields
            .next()
            .ok_or_else(malformed)?
            .parse()
            .map_err(|_| malformed())?;
        if term.is_empty() || fields.next().is_some() {
            return Err(malformed());
        }
        counts.insert(term.to_string(), count);
    }
    Ok(counts)
}

/// Reconstruct a model (and the pipeline settings it was trained with)
/// from a model directory. Probabilities are re-derived from counts.
pub fn load_model(dir: &Path) -> Result<(TrainedModel, PipelineSettings), CorpusError> {
    let files = ModelFiles::in_dir(dir);
    let ham_df = parse_class_csv(&files.ham_file)?;
    let smish_df = parse_class_csv(&files.smish_file)?;

    let meta_path = files.meta_file.display().to_string();
    let meta_text = read_model_file(&files.meta_file)?;
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for raw in meta_text.lines() {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CorpusError::MalformedRow {
            file: meta_path.clone(),
            line_no: 0,
        })?;
        fields.insert(key, value);
    }
    let get = |key: &str| -> Result<&str, CorpusError> {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| CorpusError::InconsistentMeta {
                reason: format!("missing key {key}"),
            })
    };
    let bad_value = |key: &str, value: &str| CorpusError::InconsistentMeta {
        reason: format!("bad value for {key}: {value}"),
    };

    let total_ham: u32 = get("total_ham")?
        .parse()
        .map_err(|_| bad_value("total_ham", get("total_ham").unwrap_or("")))?;
    let total_smish: u32 = get("total_smish")?
        .parse()
        .map_err(|_| bad_value("total_smish", get("total_smish").unwrap_or("")))?;
    let alpha: f64 = get("alpha")?
        .parse()
        .map_err(|_| bad_value("alpha", get("alpha").unwrap_or("")))?;
    let smoothing = match get("smoothing")? {
        "skip_unknown" => SmoothingConfig {
            mode: SmoothingMode::SkipUnknown,
            alpha,
        },
        "laplace" if alpha > 0.0 => SmoothingConfig {
            mode: SmoothingMode::Laplace,
            alpha,
        },
        other => return Err(bad_value("smoothing", other)),
    };
    let prior_mode = match get("prior_mode")? {
        "uniform" => PriorMode::Uniform,
        "class_frequency" => PriorMode::ClassFrequency,
        other => return Err(bad_value("prior_mode", other)),
    };
    let normalize = match get("normalize")? {
        "true" => true,
        "false" => false,
        other => return Err(bad_value("normalize", other)),
    };

    let model = TrainedModel::from_counts(
        total_ham,
        total_smish,
        ham_df,
        smish_df,
        smoothing,
        prior_mode,
    )
    .map_err(|err| match err {
        TrainError::InconsistentCounts { term, df, total } => CorpusError::InconsistentMeta {
            reason: format!("term {term:?} has count {df} above class total {total}"),
        },
        TrainError::BothClassesRequired => CorpusError::InconsistentMeta {
            reason: "class totals must both be positive".to_string(),
        },
    })?;
    Ok((model, PipelineSettings { normalize }))
}
