//! Train/test splitting, confusion-matrix accounting, rate metrics and
//! descriptive corpus statistics.
//!
//! Splits are reproducible across platforms: the shuffle is driven by a
//! SplitMix64 stream (documented in [`SplitMix64`]), so the same seed
//! always yields the same membership.

use thiserror::Error;

use crate::bayes::ClassLabel;
use crate::corpus::{Corpus, MessageLabel};

/// SplitMix64 pseudo-random generator.
///
/// State advances by the 64-bit golden-gamma constant and each output is
/// the finalizer mix of the new state (Steele, Lea & Flood 2014). This
/// generator is fixed by contract: changing it would silently change
/// every seeded split, so it is pinned here rather than borrowed from a
/// random-number crate whose stream may move between versions.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// In-place Fisher-Yates: walks from the last index down, swapping with
/// `next_u64() % (i + 1)`.
fn shuffle<T>(items: &mut [T], rng: &mut SplitMix64) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Train/test split configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.9,
            seed: 42,
            stratified: true,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplitError {
    #[error("degenerate split: {reason}")]
    DegenerateSplit { reason: String },
}

/// Partition a corpus into train and test sides.
///
/// Stratified mode shuffles each class separately (ham first, then
/// smish) with a [`SplitMix64`] seeded `2 * seed + class_index`, takes
/// the first `round_half_up(fraction * n_class)` messages for training,
/// and leaves the rest for testing. Both sides are restored to corpus
/// line order. Unstratified mode does the same over the whole corpus
/// with the seed itself.
pub fn split(corpus: &Corpus, cfg: &SplitConfig) -> Result<(Corpus, Corpus), SplitError> {
    assert!(
        cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0,
        "train_fraction must lie strictly between 0 and 1"
    );
    let mut train_idx: Vec<usize> = Vec::new();
    let mut test_idx: Vec<usize> = Vec::new();

    if cfg.stratified {
        for (class_index, class) in [ClassLabel::Ham, ClassLabel::Smish].into_iter().enumerate() {
            let mut indices: Vec<usize> = corpus
                .messages
                .iter()
                .enumerate()
                .filter(|(_, m)| m.label.as_class() == Some(class))
                .map(|(i, _)| i)
                .collect();
            if indices.is_empty() {
                return Err(SplitError::DegenerateSplit {
                    reason: format!(
                        "both classes required: corpus has no {} messages",
                        class.as_str()
                    ),
                });
            }
            let mut rng =
                SplitMix64::new(cfg.seed.wrapping_mul(2).wrapping_add(class_index as u64));
            shuffle(&mut indices, &mut rng);
            let n_train = round_half_up(cfg.train_fraction * indices.len() as f64);
            train_idx.extend(&indices[..n_train.min(indices.len())]);
            test_idx.extend(&indices[n_train.min(indices.len())..]);
        }
    } else {
        let mut indices: Vec<usize> = (0..corpus.messages.len()).collect();
        let mut rng = SplitMix64::new(cfg.seed);
        shuffle(&mut indices, &mut rng);
        let n_train = round_half_up(cfg.train_fraction * indices.len() as f64);
        train_idx.extend(&indices[..n_train.min(indices.len())]);
        test_idx.extend(&indices[n_train.min(indices.len())..]);
    }

    if train_idx.is_empty() || test_idx.is_empty() {
        return Err(SplitError::DegenerateSplit {
            reason: format!(
                "train side has {} messages, test side has {}",
                train_idx.len(),
                test_idx.len()
            ),
        });
    }

    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let pick = |indices: &[usize]| Corpus {
        messages: indices.iter().map(|&i| corpus.messages[i].clone()).collect(),
        source_path: corpus.source_path.clone(),
    };
    Ok((pick(&train_idx), pick(&test_idx)))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("length mismatch: {gold} gold labels vs {predicted} predictions")]
    LengthMismatch { gold: usize, predicted: usize },
    #[error("undefined rate: {reason}")]
    UndefinedRate { reason: String },
}

/// Binary confusion counts; smishing is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Tally gold labels against predictions.
pub fn confusion(
    gold: &[ClassLabel],
    predicted: &[ClassLabel],
) -> Result<ConfusionMatrix, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::LengthMismatch {
            gold: gold.len(),
            predicted: predicted.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&g, &p) in gold.iter().zip(predicted) {
        match (g, p) {
            (ClassLabel::Smish, ClassLabel::Smish) => cm.tp += 1,
            (ClassLabel::Ham, ClassLabel::Smish) => cm.fp += 1,
            (ClassLabel::Ham, ClassLabel::Ham) => cm.tn += 1,
            (ClassLabel::Smish, ClassLabel::Ham) => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

/// Rate metrics over a confusion matrix, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub tpr: f64,
    pub fpr: f64,
    pub tnr: f64,
    pub fnr: f64,
    pub accuracy: f64,
}

/// tpr = tp/(tp+fn), fpr = fp/(tn+fp), tnr = tn/(tn+fp),
/// fnr = fn/(fn+tp), accuracy = (tp+tn)/total.
pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics, EvalError> {
    let positives = cm.tp + cm.fn_;
    let negatives = cm.tn + cm.fp;
    if positives == 0 {
        return Err(EvalError::UndefinedRate {
            reason: "no gold-smish messages (tp + fn = 0)".to_string(),
        });
    }
    if negatives == 0 {
        return Err(EvalError::UndefinedRate {
            reason: "no gold-ham messages (tn + fp = 0)".to_string(),
        });
    }
    Ok(Metrics {
        tpr: cm.tp as f64 / positives as f64,
        fpr: cm.fp as f64 / negatives as f64,
        tnr: cm.tn as f64 / negatives as f64,
        fnr: cm.fn_ as f64 / positives as f64,
        accuracy: (cm.tp + cm.tn) as f64 / cm.total() as f64,
    })
}

/// The fixed-order evaluation report: four counts, then the five rates
/// as percentages with two decimals.
pub fn render_report(cm: &ConfusionMatrix, m: &Metrics) -> String {
    format!(
        "tp={}\nfp={}\ntn={}\nfn={}\ntpr={:.2}\nfpr={:.2}\ntnr={:.2}\nfnr={:.2}\naccuracy={:.2}\n",
        cm.tp,
        cm.fp,
        cm.tn,
        cm.fn_,
        m.tpr * 100.0,
        m.fpr * 100.0,
        m.tnr * 100.0,
        m.fnr * 100.0,
        m.accuracy * 100.0,
    )
}

/// The same report as a two-line CSV.
pub fn render_report_csv(cm: &ConfusionMatrix, m: &Metrics) -> String {
    format!(
        "tp,fp,tn,fn,tpr,fpr,tnr,fnr,accuracy\n{},{},{},{},{:.2},{:.2},{:.2},{:.2},{:.2}\n",
        cm.tp,
        cm.fp,
        cm.tn,
        cm.fn_,
        m.tpr * 100.0,
        m.fpr * 100.0,
        m.tnr * 100.0,
        m.fnr * 100.0,
        m.accuracy * 100.0,
    )
}

/// Descriptive statistics of one class of messages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassStats {
    pub message_count: usize,
    pub avg_chars: f64,
    pub avg_words: f64,
    pub avg_url_presence: f64,
    pub avg_currency_presence: f64,
}

/// Per-class descriptive statistics; a class with no messages reports
/// no stats.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorpusStats {
    pub ham: Option<ClassStats>,
    pub smish: Option<ClassStats>,
}

/// Top-level domains recognized by the URL heuristic.
const URL_TLDS: &[&str] = &[
    "com", "net", "org", "uk", "co", "info", "biz", "mobi", "wap",
];

/// Case-insensitive URL detection: an `http://`, `https://` or `www.`
/// substring, or any whitespace-delimited token whose host part (up to
/// the first `/`, stripped of surrounding punctuation) is dot-separated
/// and ends in a known TLD.
pub fn contains_url(text: &str) -> bool {
    let lower = text.to_lowercase();
    if lower.contains("http://") || lower.contains("https://") || lower.contains("www.") {
        return true;
    }
    for token in lower.split_whitespace() {
        let trimmed = token.trim_matches(|c: char| !c.is_alphanumeric());
        let host = trimmed.split('/').next().unwrap_or("");
        if !host.contains('.') {
            continue;
        }
        let parts: Vec<&str> = host.split('.').collect();
        if parts.len() >= 2
            && parts.iter().all(|p| !p.is_empty())
            && URL_TLDS.contains(parts.last().unwrap())
        {
            return true;
        }
    }
    false
}

/// True when the text mentions a `$` or Euro currency symbol.
pub fn contains_currency_symbol(text: &str) -> bool {
    text.contains('$') || text.contains('\u{20AC}')
}

fn class_stats<'a, I: Iterator<Item = &'a str>>(texts: I) -> Option<ClassStats> {
    let mut count = 0usize;
    let mut chars = 0usize;
    let mut words = 0usize;
    let mut urls = 0usize;
    let mut currency = 0usize;
    for text in texts {
        count += 1;
        chars += text.chars().count();
        words += text.split_whitespace().count();
        urls += usize::from(contains_url(text));
        currency += usize::from(contains_currency_symbol(text));
    }
    (count > 0).then(|| ClassStats {
        message_count: count,
        avg_chars: chars as f64 / count as f64,
        avg_words: words as f64 / count as f64,
        avg_url_presence: urls as f64 / count as f64,
        avg_currency_presence: currency as f64 / count as f64,
    })
}

/// Per-class descriptive statistics over raw message text: mean
/// character count (Unicode scalar values), mean whitespace-delimited
/// word count, and mean URL / currency-symbol presence indicators.
pub fn describe(corpus: &Corpus) -> CorpusStats {
    let texts = |label: MessageLabel| {
        corpus
            .messages
            .iter()
            .filter(move |m| m.label == label)
            .map(|m| m.text.as_str())
    };
    CorpusStats {
        ham: class_stats(texts(MessageLabel::Ham)),
        smish: class_stats(texts(MessageLabel::Smish)),
    }
}
