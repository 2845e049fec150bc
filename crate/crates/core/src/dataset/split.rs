use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Disjoint train/validation index lists covering `0..n`, both ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train_idx: Vec<usize>,
    pub val_idx: Vec<usize>,
}

/// Validation members drawn from a class of `n_class` samples.
///
/// `max(1, round(fraction * n))`, capped at `n - 1` so every class keeps a
/// training member.
pub fn validation_count(n_class: usize, val_fraction: f64) -> usize {
    let raw = ((val_fraction * n_class as f64).round() as usize).max(1);
    raw.min(n_class.saturating_sub(1))
}

fn class_members(labels: &[u8]) -> [Vec<usize>; 2] {
    let mut members = [Vec::new(), Vec::new()];
    for (i, &y) in labels.iter().enumerate() {
        members[usize::from(y.min(1))].push(i);
    }
    members
}

/// Per-class shuffled order: Fisher–Yates driven by SplitMix64 seeded with `seed ^ class`.
fn shuffled_members(labels: &[u8], seed: u64) -> [Vec<usize>; 2] {
    let mut members = class_members(labels);
    for (class, idx) in members.iter_mut().enumerate() {
        SplitMix64::new(seed ^ class as u64).shuffle(idx);
    }
    members
}

/// Stratified shuffle split: the first `validation_count` shuffled members of
/// each class form the validation set.
pub fn stratified_split(labels: &[u8], val_fraction: f64, seed: u64) -> Result<SplitIndices> {
    if !(val_fraction > 0.0 && val_fraction < 1.0) {
        return Err(Error::Config(format!(
            "validation fraction must lie in (0, 1), got {val_fraction}"
        )));
    }
    let members = shuffled_members(labels, seed);
    let mut train_idx = Vec::with_capacity(labels.len());
    let mut val_idx = Vec::new();
    for (class, idx) in members.iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        if idx.len() < 2 {
            return Err(Error::DegenerateClass {
                class: class as u8,
                count: idx.len(),
            });
        }
        let n_val = validation_count(idx.len(), val_fraction);
        val_idx.extend_from_slice(&idx[..n_val]);
        train_idx.extend_from_slice(&idx[n_val..]);
    }
    train_idx.sort_unstable();
    val_idx.sort_unstable();
    Ok(SplitIndices { train_idx, val_idx })
}

/// Deterministic class-proportional subsample of at most `limit` indices, ascending.
pub fn stratified_subset(labels: &[u8], limit: usize, seed: u64) -> Vec<usize> {
    if limit >= labels.len() {
        return (0..labels.len()).collect();
    }
    let members = shuffled_members(labels, seed);
    let n = labels.len() as f64;
    let mut keep = Vec::with_capacity(limit);
    let n0 = ((limit as f64) * members[0].len() as f64 / n).round() as usize;
    let take = [n0.min(members[0].len()), (limit - n0.min(members[0].len())).min(members[1].len())];
    for (class, idx) in members.iter().enumerate() {
        keep.extend_from_slice(&idx[..take[class]]);
    }
    keep.sort_unstable();
    keep
}
