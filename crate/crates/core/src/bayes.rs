//! Phase 2: document-frequency naive Bayes classification.
//!
//! Training counts, per class, the number of distinct messages a term
//! appears in (document frequency, not token frequency). Classification
//! compares per-class log scores over the distinct terms of a message;
//! the shared evidence denominator cancels and is never computed.
//!
//! A [`TrainedModel`] is immutable once built, so classification is safe
//! under unbounded concurrent use.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// The two message classes. Smishing is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    Ham,
    Smish,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Ham => "ham",
            ClassLabel::Smish => "smish",
        }
    }
}

/// How zero-frequency terms are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingMode {
    /// Terms unseen in both classes contribute nothing. A term seen in
    /// only one class contributes a floor of `1 / (2 * total)` to the
    /// lacking class, scaled by the totals of the class that has it.
    SkipUnknown,
    /// Laplace smoothing: `(df + alpha) / (total + 2 * alpha)`.
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    pub mode: SmoothingMode,
    pub alpha: f64,
}

impl SmoothingConfig {
    pub fn skip_unknown() -> Self {
        Self {
            mode: SmoothingMode::SkipUnknown,
            alpha: 1.0,
        }
    }

    pub fn laplace(alpha: f64) -> Self {
        assert!(alpha > 0.0, "laplace alpha must be positive");
        Self {
            mode: SmoothingMode::Laplace,
            alpha,
        }
    }
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self::skip_unknown()
    }
}

/// Whether class priors enter the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorMode {
    /// No prior term; matches a bare likelihood comparison.
    #[default]
    Uniform,
    /// log(total_class / total_messages) added to each score.
    ClassFrequency,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrainError {
    #[error("both classes required: training corpus must contain at least one ham and one smishing message")]
    BothClassesRequired,
    #[error("inconsistent counts: document frequency {df} for {term:?} exceeds class total {total}")]
    InconsistentCounts { term: String, df: u32, total: u32 },
}

/// Classification outcome: the label plus both log-domain scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationResult {
    pub label: ClassLabel,
    pub log_score_ham: f64,
    pub log_score_smish: f64,
}

/// Two log scores within this absolute distance are treated as a tie
/// (and ties classify as ham). Real score margins on small-count models
/// are orders of magnitude larger; the band only absorbs floating-point
/// noise on exact rational ties.
pub const TIE_EPSILON: f64 = 1e-9;

/// The classifier's entire state: class message totals and per-term
/// document frequencies, with the smoothing and prior configuration
/// fixed at training time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    total_ham: u32,
    total_smish: u32,
    ham_df: BTreeMap<String, u32>,
    smish_df: BTreeMap<String, u32>,
    smoothing: SmoothingConfig,
    prior_mode: PriorMode,
}

impl TrainedModel {
    /// Count document frequencies over a labeled corpus of normalized
    /// messages. Each message contributes at most 1 to a term's count in
    /// its class, regardless of token repetition.
    pub fn train<M>(
        corpus: &[(M, ClassLabel)],
        smoothing: SmoothingConfig,
        prior_mode: PriorMode,
    ) -> Result<Self, TrainError>
    where
        M: AsRef<[String]>,
    {
        let mut total_ham = 0u32;
        let mut total_smish = 0u32;
        let mut ham_df: BTreeMap<String, u32> = BTreeMap::new();
        let mut smish_df: BTreeMap<String, u32> = BTreeMap::new();

        for (message, label) in corpus {
            let (total, df) = match label {
                ClassLabel::Ham => (&mut total_ham, &mut ham_df),
                ClassLabel::Smish => (&mut total_smish, &mut smish_df),
            };
            *total += 1;
            let distinct: BTreeSet<&String> = message.as_ref().iter().collect();
            for term in distinct {
                *df.entry(term.clone()).or_insert(0) += 1;
            }
        }

        if total_ham == 0 || total_smish == 0 {
            return Err(TrainError::BothClassesRequired);
        }

        Ok(Self {
            total_ham,
            total_smish,
            ham_df,
            smish_df,
            smoothing,
            prior_mode,
        })
    }

    /// Build a model directly from counts, validating the document
    /// frequency invariants. Persistence reloads go through here.
    pub fn from_counts(
        total_ham: u32,
        total_smish: u32,
        ham_df: BTreeMap<String, u32>,
        smish_df: BTreeMap<String, u32>,
        smoothing: SmoothingConfig,
        prior_mode: PriorMode,
    ) -> Result<Self, TrainError> {
        if total_ham == 0 || total_smish == 0 {
            return Err(TrainError::BothClassesRequired);
        }
        for (map, total) in [(&ham_df, total_ham), (&smish_df, total_smish)] {
            for (term, &df) in map {
                if df > total {
                    return Err(TrainError::InconsistentCounts {
                        term: term.clone(),
                        df,
                        total,
                    });
                }
            }
        }
        Ok(Self {
            total_ham,
            total_smish,
            ham_df,
            smish_df,
            smoothing,
            prior_mode,
        })
    }

    pub fn total(&self, class: ClassLabel) -> u32 {
        match class {
            ClassLabel::Ham => self.total_ham,
            ClassLabel::Smish => self.total_smish,
        }
    }

    pub fn document_frequency(&self, term: &str, class: ClassLabel) -> u32 {
        self.df_map(class).get(term).copied().unwrap_or(0)
    }

    fn df_map(&self, class: ClassLabel) -> &BTreeMap<String, u32> {
        match class {
            ClassLabel::Ham => &self.ham_df,
            ClassLabel::Smish => &self.smish_df,
        }
    }

    /// Per-term counts of a class in lexicographic term order.
    pub fn counts(&self, class: ClassLabel) -> impl Iterator<Item = (&str, u32)> {
        self.df_map(class).iter().map(|(t, &c)| (t.as_str(), c))
    }

    pub fn smoothing(&self) -> SmoothingConfig {
        self.smoothing
    }

    pub fn prior_mode(&self) -> PriorMode {
        self.prior_mode
    }

    /// Probability that a message of `class` contains `term`.
    ///
    /// Under `SkipUnknown` this is `df / total` for seen terms and `None`
    /// (no contribution) for unseen ones; under `Laplace` it is
    /// `(df + alpha) / (total + 2 * alpha)` for every term.
    pub fn word_prob(&self, term: &str, class: ClassLabel) -> Option<f64> {
        let df = self.document_frequency(term, class);
        let total = self.total(class);
        match self.smoothing.mode {
            SmoothingMode::SkipUnknown => {
                (df >= 1).then(|| f64::from(df) / f64::from(total))
            }
            SmoothingMode::Laplace => {
                let alpha = self.smoothing.alpha;
                Some((f64::from(df) + alpha) / (f64::from(total) + 2.0 * alpha))
            }
        }
    }

    /// Log-domain score of a message for one class: the log prior (under
    /// `ClassFrequency`) plus the sum of per-term log probabilities over
    /// the distinct terms of the message.
    ///
    /// Under `SkipUnknown`, a term absent from both classes is skipped;
    /// a term present only in the other class contributes the floor
    /// `log(1 / (2 * total_of_the_class_that_has_it))`, which keeps the
    /// floor on the same scale as the probability it competes against.
    pub fn score<S: AsRef<str>>(&self, message: &[S], class: ClassLabel) -> f64 {
        let other = match class {
            ClassLabel::Ham => ClassLabel::Smish,
            ClassLabel::Smish => ClassLabel::Ham,
        };
        let mut score = match self.prior_mode {
            PriorMode::Uniform => 0.0,
            PriorMode::ClassFrequency => {
                let total = f64::from(self.total_ham) + f64::from(self.total_smish);
                (f64::from(self.total(class)) / total).ln()
            }
        };
        let distinct: BTreeSet<&str> = message.iter().map(|s| s.as_ref()).collect();
        for term in distinct {
            match self.word_prob(term, class) {
                Some(p) => score += p.ln(),
                None => {
                    // SkipUnknown with df = 0 in `class`.
                    let df_other = self.document_frequency(term, other);
                    if df_other >= 1 {
                        score += (0.5 / f64::from(self.total(other))).ln();
                    }
                }
            }
        }
        score
    }

    /// Classify a normalized message. Smish wins only on a strictly
    /// greater score; ties (within [`TIE_EPSILON`]) go to ham.
    pub fn classify<S: AsRef<str>>(&self, message: &[S]) -> ClassificationResult {
        let log_score_ham = self.score(message, ClassLabel::Ham);
        let log_score_smish = self.score(message, ClassLabel::Smish);
        let label = if log_score_smish - log_score_ham > TIE_EPSILON {
            ClassLabel::Smish
        } else {
            ClassLabel::Ham
        };
        ClassificationResult {
            label,
            log_score_ham,
            log_score_smish,
        }
    }
}
