//! Ranking, thresholded and calibration metrics, plus threshold tuning.

mod ranking;
mod threshold;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use ranking::{pr_auc, roc_auc};
pub use threshold::{tune_threshold, ThresholdResult};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub balanced_accuracy: f64,
    pub mcc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub pr_auc: f64,
    pub roc_auc: f64,
    pub f1: f64,
    pub mcc: f64,
    pub balanced_accuracy: f64,
    pub brier: f64,
    pub tau: f64,
    pub counts: ConfusionCounts,
}

impl MetricsReport {
    /// Metric columns in table order.
    pub const METRICS: [&'static str; 6] = ["pr_auc", "roc_auc", "f1", "mcc", "balanced_accuracy", "brier"];

    pub fn metric(&self, name: &str) -> Option<f64> {
        Some(match name {
            "pr_auc" => self.pr_auc,
            "roc_auc" => self.roc_auc,
            "f1" => self.f1,
            "mcc" => self.mcc,
            "balanced_accuracy" => self.balanced_accuracy,
            "brier" => self.brier,
            "tau" => self.tau,
            _ => return None,
        })
    }
}

pub(crate) fn check_lengths<T>(y: &[u8], p: &[T]) -> Result<()> {
    if y.len() != p.len() {
        return Err(Error::LengthMismatch(y.len(), p.len()));
    }
    Ok(())
}

pub(crate) fn class_counts(y: &[u8]) -> (usize, usize) {
    let pos = y.iter().filter(|&&v| v == 1).count();
    (pos, y.len() - pos)
}

/// Counts under the rule `predict 1 iff p >= tau`.
pub fn confusion<T: Real>(y: &[u8], p: &[T], tau: T) -> Result<ConfusionCounts> {
    check_lengths(y, p)?;
    let mut c = ConfusionCounts::default();
    for (&yi, &pi) in y.iter().zip(p) {
        match (yi == 1, pi >= tau) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Precision, recall, F1, balanced accuracy and MCC. A zero denominator yields 0.
pub fn threshold_metrics(c: ConfusionCounts) -> ThresholdMetrics {
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let recall = ratio(tp, tp + fn_);
    let specificity = ratio(tn, tn + fp);
    let den = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    ThresholdMetrics {
        precision: ratio(tp, tp + fp),
        recall,
        f1: ratio(2.0 * tp, 2.0 * tp + fp + fn_),
        balanced_accuracy: (recall + specificity) / 2.0,
        mcc: ratio(tp * tn - fp * fn_, den.sqrt()),
    }
}

/// Mean squared error between probabilities and labels; 0 for empty input.
pub fn brier<T: Real>(y: &[u8], p: &[T]) -> Result<f64> {
    check_lengths(y, p)?;
    let sum: f64 = y
        .iter()
        .zip(p)
        .map(|(&yi, &pi)| {
            let d = pi.as_f64() - yi as f64;
            d * d
        })
        .sum();
    Ok(ratio(sum, y.len() as f64))
}

/// All report metrics at a fixed threshold.
pub fn evaluate<T: Real>(y: &[u8], p: &[T], tau: T) -> Result<MetricsReport> {
    check_lengths(y, p)?;
    let counts = confusion(y, p, tau)?;
    let t = threshold_metrics(counts);
    Ok(MetricsReport {
        pr_auc: pr_auc(y, p)?,
        roc_auc: roc_auc(y, p)?,
        f1: t.f1,
        mcc: t.mcc,
        balanced_accuracy: t.balanced_accuracy,
        brier: brier(y, p)?,
        tau: tau.as_f64(),
        counts,
    })
}
