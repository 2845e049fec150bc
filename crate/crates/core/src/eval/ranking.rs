use crate::error::{Error, Result};
use crate::models::average_ranks;
use crate::scalar::Real;

use super::{check_lengths, class_counts};

/// Tie-aware Mann-Whitney estimate of `P(p_pos > p_neg) + P(tie) / 2`.
pub fn roc_auc<T: Real>(y: &[u8], p: &[T]) -> Result<f64> {
    check_lengths(y, p)?;
    let (n_pos, n_neg) = class_counts(y);
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let rank_sum: f64 = average_ranks(p).iter().zip(y).filter(|(_, &yi)| yi == 1).map(|(r, _)| r).sum();
    let (np, nn) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum - np * (np + 1.0) / 2.0) / (np * nn))
}

/// Average precision with tied scores grouped into a single step.
pub fn pr_auc<T: Real>(y: &[u8], p: &[T]) -> Result<f64> {
    check_lengths(y, p)?;
    let (n_pos, _) = class_counts(y);
    if n_pos == 0 {
        return Err(Error::NoPositives);
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].cmp_total(&p[a]));
    let (mut tp, mut seen, mut ap) = (0usize, 0usize, 0.0);
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        let mut group_tp = 0;
        while end < order.len() && p[order[end]] == p[order[start]] {
            group_tp += usize::from(y[order[end]] == 1);
            end += 1;
        }
        tp += group_tp;
        seen += end - start;
        if group_tp > 0 {
            ap += (group_tp as f64 / n_pos as f64) * (tp as f64 / seen as f64);
        }
        start = end;
    }
    Ok(ap)
}
