//! Shared test helpers: a linear-domain (non-log) reference evaluation
//! of the classifier, kept independent of the production scoring path.

use smish_core::bayes::{ClassLabel, PriorMode, SmoothingMode, TrainedModel};

/// Linear-domain posterior numerator for one class: prior times the
/// product of per-term probabilities over the distinct terms of the
/// message, with the same smoothing semantics as the production scorer
/// but evaluated with plain multiplication instead of log sums.
pub fn linear_score(model: &TrainedModel, message: &[String], class: ClassLabel) -> f64 {
    let other = match class {
        ClassLabel::Ham => ClassLabel::Smish,
        ClassLabel::Smish => ClassLabel::Ham,
    };
    let mut score = match model.prior_mode() {
        PriorMode::Uniform => 1.0,
        PriorMode::ClassFrequency => {
            let total =
                f64::from(model.total(ClassLabel::Ham)) + f64::from(model.total(ClassLabel::Smish));
            f64::from(model.total(class)) / total
        }
    };
    let mut distinct: Vec<&str> = message.iter().map(|s| s.as_str()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    for term in distinct {
        let df = model.document_frequency(term, class);
        let total = f64::from(model.total(class));
        match model.smoothing().mode {
            SmoothingMode::Laplace => {
                let alpha = model.smoothing().alpha;
                score *= (f64::from(df) + alpha) / (total + 2.0 * alpha);
            }
            SmoothingMode::SkipUnknown => {
                if df >= 1 {
                    score *= f64::from(df) / total;
                } else if model.document_frequency(term, other) >= 1 {
                    score *= 0.5 / f64::from(model.total(other));
                }
            }
        }
    }
    score
}

/// Linear-domain classification with the same tie rule as production:
/// smish wins only on a clear strict margin, ties go to ham.
pub fn linear_classify(model: &TrainedModel, message: &[String]) -> ClassLabel {
    let smish = linear_score(model, message, ClassLabel::Smish);
    let ham = linear_score(model, message, ClassLabel::Ham);
    let tie_band = 1e-9 * smish.max(ham);
    if smish - ham > tie_band {
        ClassLabel::Smish
    } else {
        ClassLabel::Ham
    }
}
