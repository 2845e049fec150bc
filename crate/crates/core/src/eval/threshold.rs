use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{check_lengths, class_counts, threshold_metrics, ConfusionCounts};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub tau_star: f64,
    pub val_f1: f64,
    pub candidates_evaluated: usize,
}

/// Picks the threshold maximizing validation F1.
///
/// Candidates are the distinct predicted values plus 0 and 1. Ties go to the
/// higher balanced accuracy, then to the smaller threshold.
pub fn tune_threshold<T: Real>(y: &[u8], p: &[T]) -> Result<ThresholdResult> {
    check_lengths(y, p)?;
    let (n_pos, n_neg) = class_counts(y);
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let sorted = |label: u8| {
        let mut v: Vec<f64> = y.iter().zip(p).filter(|(&yi, _)| yi == label).map(|(_, pi)| pi.as_f64()).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (pos, neg) = (sorted(1), sorted(0));

    let mut candidates: Vec<f64> = p.iter().map(|v| v.as_f64()).chain([0.0, 1.0]).collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let mut best: Option<(f64, f64, f64)> = None;
    for &tau in &candidates {
        // values >= tau sit at the top of each sorted list
        let tp = (pos.len() - pos.partition_point(|&v| v < tau)) as u64;
        let fp = (neg.len() - neg.partition_point(|&v| v < tau)) as u64;
        let c = ConfusionCounts { tp, fp, tn: n_neg as u64 - fp, fn_: n_pos as u64 - tp };
        let m = threshold_metrics(c);
        let better = match best {
            None => true,
            Some((_, f1, bal)) => m.f1 > f1 || (m.f1 == f1 && m.balanced_accuracy > bal),
        };
        if better {
            best = Some((tau, m.f1, m.balanced_accuracy));
        }
    }
    let (tau_star, val_f1, _) = best.expect("candidate set always holds 0 and 1");
    Ok(ThresholdResult { tau_star, val_f1, candidates_evaluated: candidates.len() })
}
