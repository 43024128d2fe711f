//! Python bindings: the preprocessing pipeline, the classifier, and the
//! evaluation helpers, exposed as the `smishpy` extension module.
//!
//! Quick tour from Python:
//!
//!     import smishpy
//!     pipe = smishpy.Pipeline()
//!     terms = pipe.preprocess("Plz reply us with ur Bank Details")
//!     model = smishpy.Model.train([(terms, "smish"), (["lunch"], "ham")])
//!     label, log_smish, log_ham = model.classify(terms)

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use smish_core::bayes::{ClassLabel, PriorMode, SmoothingConfig, SmoothingMode, TrainedModel};
use smish_core::corpus;
use smish_core::eval;
use smish_core::pipeline::{self, PipelineSettings, SlangDictionary, StopWordList};

fn parse_label(label: &str) -> PyResult<ClassLabel> {
    match label {
        "ham" => Ok(ClassLabel::Ham),
        "smish" => Ok(ClassLabel::Smish),
        other => Err(PyValueError::new_err(format!(
            "unknown label {other:?} (expected \"ham\" or \"smish\")"
        ))),
    }
}

fn parse_smoothing(mode: &str, alpha: f64) -> PyResult<SmoothingConfig> {
    match mode {
        "skip_unknown" => Ok(SmoothingConfig {
            mode: SmoothingMode::SkipUnknown,
            alpha,
        }),
        "laplace" if alpha > 0.0 => Ok(SmoothingConfig {
            mode: SmoothingMode::Laplace,
            alpha,
        }),
        "laplace" => Err(PyValueError::new_err("laplace alpha must be positive")),
        other => Err(PyValueError::new_err(format!(
            "unknown smoothing {other:?} (expected \"skip_unknown\" or \"laplace\")"
        ))),
    }
}

fn parse_prior(prior: &str) -> PyResult<PriorMode> {
    match prior {
        "uniform" => Ok(PriorMode::Uniform),
        "class_frequency" => Ok(PriorMode::ClassFrequency),
        other => Err(PyValueError::new_err(format!(
            "unknown prior {other:?} (expected \"uniform\" or \"class_frequency\")"
        ))),
    }
}

/// The five-step preprocessing pipeline with its dictionaries loaded.
#[pyclass]
struct Pipeline {
    dict: SlangDictionary,
    stop: StopWordList,
    settings: PipelineSettings,
}

#[pymethods]
impl Pipeline {
    /// Build a pipeline. Without arguments the bundled slang dictionary
    /// and 153-word stop list are used; `normalize=False` gives the
    /// ablated pipeline (tokenize + lowercase only).
    #[new]
    #[pyo3(signature = (dict_path=None, stopwords_path=None, normalize=true))]
    fn new(
        dict_path: Option<PathBuf>,
        stopwords_path: Option<PathBuf>,
        normalize: bool,
    ) -> PyResult<Self> {
        let dict = match dict_path {
            Some(path) => SlangDictionary::load(&path)
                .map_err(|e| PyValueError::new_err(e.to_string()))?,
            None => SlangDictionary::bundled(),
        };
        let stop = match stopwords_path {
            Some(path) => {
                StopWordList::load(&path).map_err(|e| PyValueError::new_err(e.to_string()))?
            }
            None => StopWordList::bundled(),
        };
        Ok(Self {
            dict,
            stop,
            settings: PipelineSettings { normalize },
        })
    }

    fn tokenize(&self, text: &str) -> Vec<String> {
        pipeline::tokenize(text)
    }

    /// Run the configured pipeline on one message.
    fn preprocess(&self, text: &str) -> Vec<String> {
        pipeline::preprocess_with(text, &self.dict, &self.stop, self.settings)
    }

    /// All five intermediate stages, as a dict of token lists.
    fn stages<'py>(&self, py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyDict>> {
        let stages = pipeline::preprocess_stages(text, &self.dict, &self.stop);
        let out = PyDict::new(py);
        out.set_item("tokenized", stages.tokenized)?;
        out.set_item("lowercased", stages.lowercased)?;
        out.set_item("normalized", stages.normalized)?;
        out.set_item("without_stopwords", stages.without_stopwords)?;
        out.set_item("stemmed", stages.stemmed)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Pipeline(slang_entries={}, stop_words={}, normalize={})",
            self.dict.len(),
            self.stop.len(),
            self.settings.normalize
        )
    }
}

/// Porter-stem a single token.
#[pyfunction]
fn stem(word: &str) -> String {
    pipeline::porter::stem(word)
}

/// A trained document-frequency naive Bayes model.
#[pyclass]
struct Model {
    inner: TrainedModel,
    normalize: bool,
}

#[pymethods]
impl Model {
    /// Train from `(terms, label)` pairs, where `terms` is a list of
    /// normalized tokens and `label` is "ham" or "smish".
    #[staticmethod]
    #[pyo3(signature = (corpus, smoothing="skip_unknown", alpha=1.0, prior="uniform", normalize=true))]
    fn train(
        corpus: Vec<(Vec<String>, String)>,
        smoothing: &str,
        alpha: f64,
        prior: &str,
        normalize: bool,
    ) -> PyResult<Self> {
        let smoothing = parse_smoothing(smoothing, alpha)?;
        let prior = parse_prior(prior)?;
        let labeled: Vec<(Vec<String>, ClassLabel)> = corpus
            .into_iter()
            .map(|(terms, label)| Ok((terms, parse_label(&label)?)))
            .collect::<PyResult<_>>()?;
        let inner = TrainedModel::train(&labeled, smoothing, prior)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner, normalize })
    }

    /// Classify a list of terms; returns `(label, log_smish, log_ham)`.
    fn classify(&self, terms: Vec<String>) -> (String, f64, f64) {
        let result = self.inner.classify(&terms);
        (
            result.label.as_str().to_string(),
            result.log_score_smish,
            result.log_score_ham,
        )
    }

    /// Log-domain score of the terms for one class.
    fn score(&self, terms: Vec<String>, label: &str) -> PyResult<f64> {
        Ok(self.inner.score(&terms, parse_label(label)?))
    }

    /// Per-term probability, or None when the smoothing mode skips it.
    fn word_prob(&self, term: &str, label: &str) -> PyResult<Option<f64>> {
        Ok(self.inner.word_prob(term, parse_label(label)?))
    }

    fn document_frequency(&self, term: &str, label: &str) -> PyResult<u32> {
        Ok(self.inner.document_frequency(term, parse_label(label)?))
    }

    fn total(&self, label: &str) -> PyResult<u32> {
        Ok(self.inner.total(parse_label(label)?))
    }

    /// Whether the model was trained on the normalized pipeline.
    #[getter]
    fn normalize(&self) -> bool {
        self.normalize
    }

    /// Write ham.csv, smish.csv and meta.txt into a directory.
    fn save(&self, dir: PathBuf) -> PyResult<()> {
        corpus::export_model(
            &self.inner,
            PipelineSettings {
                normalize: self.normalize,
            },
            &dir,
        )
        .map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(())
    }

    /// Load a model directory written by `save` (or the CLI).
    #[staticmethod]
    fn load(dir: PathBuf) -> PyResult<Self> {
        let (inner, settings) =
            corpus::load_model(&dir).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self {
            inner,
            normalize: settings.normalize,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(total_ham={}, total_smish={}, normalize={})",
            self.inner.total(ClassLabel::Ham),
            self.inner.total(ClassLabel::Smish),
            self.normalize
        )
    }
}

/// Load a labeled TSV corpus; returns `(label, text)` pairs.
#[pyfunction]
#[pyo3(signature = (path, spam_as_smish=false))]
fn load_corpus(path: PathBuf, spam_as_smish: bool) -> PyResult<Vec<(String, String)>> {
    let corpus = corpus::load_corpus(&path, spam_as_smish)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(corpus
        .messages
        .into_iter()
        .map(|m| {
            let label = match m.label {
                corpus::MessageLabel::Ham => "ham",
                corpus::MessageLabel::Smish => "smish",
                corpus::MessageLabel::Unlabeled => "unlabeled",
            };
            (label.to_string(), m.text)
        })
        .collect())
}

/// Confusion counts `(tp, fp, tn, fn)` from gold and predicted labels.
#[pyfunction]
fn confusion(gold: Vec<String>, predicted: Vec<String>) -> PyResult<(u64, u64, u64, u64)> {
    let gold: Vec<ClassLabel> = gold.iter().map(|l| parse_label(l)).collect::<PyResult<_>>()?;
    let predicted: Vec<ClassLabel> = predicted
        .iter()
        .map(|l| parse_label(l))
        .collect::<PyResult<_>>()?;
    let cm = eval::confusion(&gold, &predicted).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((cm.tp, cm.fp, cm.tn, cm.fn_))
}

/// Rate metrics from confusion counts, as a dict with keys tpr, fpr,
/// tnr, fnr, accuracy.
#[pyfunction]
#[pyo3(name = "metrics")]
fn metrics_py<'py>(
    py: Python<'py>,
    tp: u64,
    fp: u64,
    tn: u64,
    fn_: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = eval::metrics(&eval::ConfusionMatrix::new(tp, fp, tn, fn_))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = PyDict::new(py);
    out.set_item("tpr", m.tpr)?;
    out.set_item("fpr", m.fpr)?;
    out.set_item("tnr", m.tnr)?;
    out.set_item("fnr", m.fnr)?;
    out.set_item("accuracy", m.accuracy)?;
    Ok(out)
}

#[pymodule]
fn smishpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Pipeline>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(stem, m)?)?;
    m.add_function(wrap_pyfunction!(load_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(confusion, m)?)?;
    m.add_function(wrap_pyfunction!(metrics_py, m)?)?;
    Ok(())
}
