//! Histogram gradient-boosted trees for binary log-loss.
//!
//! Features are bucketed once into at most `n_bins` quantile bins. Each round
//! fits a regression tree to the per-sample gradient `p - y` and hessian
//! `p (1 - p)` using histogram split search with the parent-minus-sibling
//! trick, then adds `learning_rate * leaf` to every sample's raw score.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

use super::tree::{Tree, TreeNode};
use super::{check_binary, Classifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum Growth {
    /// Best-first: always split the leaf with the largest gain.
    LeafWise { max_leaves: usize },
    /// Breadth-first: split every splittable node down to `max_depth`.
    LevelWise { max_depth: usize },
}

impl Growth {
    pub fn leaf_wise() -> Self {
        Growth::LeafWise { max_leaves: 31 }
    }

    pub fn level_wise() -> Self {
        Growth::LevelWise { max_depth: 6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbdtParams {
    pub n_trees: usize,
    pub learning_rate: f64,
    pub growth: Growth,
    pub l2_lambda: f64,
    pub min_child_weight: f64,
    pub n_bins: usize,
}

impl Default for GbdtParams {
    fn default() -> Self {
        Self {
            n_trees: 500,
            learning_rate: 0.05,
            growth: Growth::leaf_wise(),
            l2_lambda: 1.0,
            min_child_weight: 1.0,
            n_bins: 255,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GbdtModel<T> {
    /// Prior log-odds of the positive class.
    pub base_score: T,
    pub learning_rate: T,
    pub params: GbdtParams,
    pub n_features: usize,
    pub bin_edges: Vec<Vec<T>>,
    /// Leaf values are raw log-odds contributions, before the learning rate.
    pub trees: Vec<Tree<T>>,
}

/// `0.5 [G_L^2/(H_L+l) + G_R^2/(H_R+l) - (G_L+G_R)^2/(H_L+H_R+l)]`
pub fn split_gain<T: Real>(gl: T, hl: T, gr: T, hr: T, lambda: T) -> T {
    let score = |g: T, h: T| g * g / (h + lambda);
    T::of(0.5) * (score(gl, hl) + score(gr, hr) - score(gl + gr, hl + hr))
}

/// `-G / (H + lambda)`
pub fn leaf_weight<T: Real>(g: T, h: T, lambda: T) -> T {
    -g / (h + lambda)
}

/// Upper bin edges from training-set quantiles, strictly increasing.
///
/// With at most `n_bins` distinct values every value gets its own bin (edges
/// at midpoints); otherwise edges sit at the `k / n_bins` quantiles with
/// duplicates collapsed.
pub fn quantile_bin_edges<T: Real>(values: &[T], n_bins: usize) -> Vec<T> {
    let mut sorted = values.to_vec();
    sorted.sort_by(T::cmp_total);
    let mut distinct = sorted.clone();
    distinct.dedup();
    let mut edges: Vec<T> = if distinct.len() <= n_bins {
        distinct
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) * T::of(0.5);
                if mid >= w[1] {
                    w[0]
                } else {
                    mid
                }
            })
            .collect()
    } else {
        let last = (sorted.len() - 1) as f64;
        (1..n_bins)
            .map(|k| {
                let pos = k as f64 / n_bins as f64 * last;
                let lo = pos.floor() as usize;
                let frac = T::of(pos - lo as f64);
                let hi = (lo + 1).min(sorted.len() - 1);
                sorted[lo] + (sorted[hi] - sorted[lo]) * frac
            })
            .collect()
    };
    edges.dedup();
    let max = *sorted.last().unwrap_or(&T::zero());
    edges.retain(|&e| e < max);
    edges
}

/// Bin of `v`: the number of edges strictly below it, so `v <= edges[b]` iff `bin(v) <= b`.
#[inline]
pub fn bin_index<T: Real>(v: T, edges: &[T]) -> usize {
    edges.partition_point(|&e| e < v)
}

struct Binned {
    n_rows: usize,
    /// Start of each feature's bins in a flat histogram; one extra entry at the end.
    offsets: Vec<usize>,
    /// Column-major bin codes.
    codes: Vec<u8>,
}

impl Binned {
    fn new<T: Real>(x: &Matrix<T>, edges: &[Vec<T>]) -> Self {
        let n = x.n_rows();
        let mut offsets = Vec::with_capacity(edges.len() + 1);
        let mut total = 0;
        for e in edges {
            offsets.push(total);
            total += e.len() + 1;
        }
        offsets.push(total);
        let mut codes = vec![0u8; n * edges.len()];
        codes
            .par_chunks_mut(n.max(1))
            .zip(edges.par_iter())
            .enumerate()
            .for_each(|(f, (col, e))| {
                for (i, c) in col.iter_mut().enumerate() {
                    *c = bin_index(x.get(i, f), e) as u8;
                }
            });
        Self {
            n_rows: n,
            offsets,
            codes,
        }
    }

    fn n_features(&self) -> usize {
        self.offsets.len() - 1
    }

    fn total_bins(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    #[inline]
    fn code(&self, feature: usize, row: usize) -> usize {
        self.codes[feature * self.n_rows + row] as usize
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Bin<T> {
    g: T,
    h: T,
    n: u32,
}

#[derive(Debug, Clone, Copy)]
struct SplitInfo<T> {
    gain: T,
    feature: usize,
    bin: usize,
}

struct Leaf<T> {
    slot: usize,
    samples: Vec<u32>,
    g: T,
    h: T,
    depth: usize,
    hist: Vec<Bin<T>>,
    best: Option<SplitInfo<T>>,
}

struct Booster<'a, T> {
    binned: &'a Binned,
    edges: &'a [Vec<T>],
    grad: Vec<T>,
    hess: Vec<T>,
    lambda: T,
    min_child_weight: T,
    growth: Growth,
}

fn feature_slices<'h, T>(hist: &'h mut [Bin<T>], offsets: &[usize]) -> Vec<&'h mut [Bin<T>]> {
    let mut out = Vec::with_capacity(offsets.len() - 1);
    let mut rest = hist;
    for w in offsets.windows(2) {
        let (head, tail) = rest.split_at_mut(w[1] - w[0]);
        out.push(head);
        rest = tail;
    }
    out
}

impl<'a, T: Real> Booster<'a, T> {
    fn build_hist(&self, samples: &[u32], pool: &mut Vec<Vec<Bin<T>>>) -> Vec<Bin<T>> {
        let mut hist = match pool.pop() {
            Some(mut h) => {
                h.fill(Bin::default());
                h
            }
            None => vec![Bin::default(); self.binned.total_bins()],
        };
        feature_slices(&mut hist, &self.binned.offsets)
            .into_par_iter()
            .enumerate()
            .for_each(|(f, bins)| {
                let col = &self.binned.codes[f * self.binned.n_rows..(f + 1) * self.binned.n_rows];
                for &i in samples {
                    let b = &mut bins[col[i as usize] as usize];
                    b.g += self.grad[i as usize];
                    b.h += self.hess[i as usize];
                    b.n += 1;
                }
            });
        hist
    }

    fn best_split(&self, hist: &[Bin<T>], g: T, h: T, n: u32) -> Option<SplitInfo<T>> {
        let per_feature: Vec<Option<SplitInfo<T>>> = (0..self.binned.n_features())
            .into_par_iter()
            .map(|f| {
                let bins = &hist[self.binned.offsets[f]..self.binned.offsets[f + 1]];
                let mut best: Option<SplitInfo<T>> = None;
                let (mut gl, mut hl, mut nl) = (T::zero(), T::zero(), 0u32);
                for (b, bin) in bins.iter().enumerate().take(bins.len().saturating_sub(1)) {
                    if bin.n == 0 {
                        // same partition as the previous edge
                        continue;
                    }
                    gl += bin.g;
                    hl += bin.h;
                    nl += bin.n;
                    if hl < self.min_child_weight {
                        continue;
                    }
                    let (gr, hr) = (g - gl, h - hl);
                    if nl == n || hr < self.min_child_weight {
                        break;
                    }
                    let gain = split_gain(gl, hl, gr, hr, self.lambda);
                    if best.is_none_or(|s| gain > s.gain) {
                        best = Some(SplitInfo { gain, feature: f, bin: b });
                    }
                }
                best
            })
            .collect();
        per_feature
            .into_iter()
            .flatten()
            .fold(None, |acc: Option<SplitInfo<T>>, s| match acc {
                Some(a) if a.gain >= s.gain => Some(a),
                _ => Some(s),
            })
            .filter(|s| s.gain > T::zero())
    }

    fn can_split(&self, depth: usize) -> bool {
        match self.growth {
            Growth::LeafWise { .. } => true,
            Growth::LevelWise { max_depth } => depth < max_depth,
        }
    }

    fn make_leaf(
        &self,
        slot: usize,
        samples: Vec<u32>,
        depth: usize,
        hist: Vec<Bin<T>>,
        pool: &mut Vec<Vec<Bin<T>>>,
    ) -> Leaf<T> {
        let g = samples.iter().map(|&i| self.grad[i as usize]).sum();
        let h = samples.iter().map(|&i| self.hess[i as usize]).sum();
        let best = if self.can_split(depth) {
            self.best_split(&hist, g, h, samples.len() as u32)
        } else {
            None
        };
        // histograms are only needed to derive a sibling later
        let hist = if best.is_some() {
            hist
        } else {
            pool.push(hist);
            Vec::new()
        };
        Leaf { slot, samples, g, h, depth, hist, best }
    }

    fn next_leaf(&self, leaves: &[Leaf<T>]) -> Option<usize> {
        let candidates = leaves.iter().enumerate().filter(|(_, l)| l.best.is_some());
        match self.growth {
            Growth::LeafWise { max_leaves } => {
                if leaves.len() >= max_leaves {
                    return None;
                }
                candidates
                    .fold(None, |acc: Option<(usize, T)>, (i, l)| {
                        let gain = l.best.unwrap().gain;
                        match acc {
                            Some((_, g)) if g >= gain => acc,
                            _ => Some((i, gain)),
                        }
                    })
                    .map(|(i, _)| i)
            }
            Growth::LevelWise { .. } => candidates.min_by_key(|(i, l)| (l.depth, *i)).map(|(i, _)| i),
        }
    }

    /// Grows one tree; returns it with the sample sets of its leaves and their values.
    fn grow(&self, n_rows: usize, pool: &mut Vec<Vec<Bin<T>>>) -> (Tree<T>, Vec<(Vec<u32>, T)>) {
        let all: Vec<u32> = (0..n_rows as u32).collect();
        let hist = self.build_hist(&all, pool);
        let mut arena = vec![TreeNode::Leaf { value: T::zero() }];
        let mut leaves = vec![self.make_leaf(0, all, 0, hist, pool)];

        while let Some(pick) = self.next_leaf(&leaves) {
            let parent = leaves.remove(pick);
            let split = parent.best.unwrap();
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for &i in &parent.samples {
                if self.binned.code(split.feature, i as usize) <= split.bin {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            let small_is_left = left.len() <= right.len();
            let small_hist = self.build_hist(if small_is_left { &left } else { &right }, pool);
            let mut large_hist = parent.hist;
            for (l, s) in large_hist.iter_mut().zip(&small_hist) {
                l.g -= s.g;
                l.h -= s.h;
                l.n -= s.n;
            }
            let (left_hist, right_hist) = if small_is_left {
                (small_hist, large_hist)
            } else {
                (large_hist, small_hist)
            };
            let (ls, rs) = (arena.len(), arena.len() + 1);
            arena.push(TreeNode::Leaf { value: T::zero() });
            arena.push(TreeNode::Leaf { value: T::zero() });
            arena[parent.slot] = TreeNode::Split {
                feature: split.feature,
                threshold: self.edges[split.feature][split.bin],
                left: ls,
                right: rs,
            };
            let depth = parent.depth + 1;
            leaves.push(self.make_leaf(ls, left, depth, left_hist, pool));
            leaves.push(self.make_leaf(rs, right, depth, right_hist, pool));
        }

        let mut assignments = Vec::with_capacity(leaves.len());
        for leaf in leaves {
            let value = leaf_weight(leaf.g, leaf.h, self.lambda);
            arena[leaf.slot] = TreeNode::Leaf { value };
            if !leaf.hist.is_empty() {
                pool.push(leaf.hist);
            }
            assignments.push((leaf.samples, value));
        }
        (Tree::from_arena(&arena, 0), assignments)
    }
}

/// Mean binary log-loss of raw scores.
pub fn log_loss_from_scores<T: Real>(scores: &[T], y: &[u8]) -> T {
    let total: T = scores
        .iter()
        .zip(y)
        .map(|(&s, &yi)| if yi == 1 { (-s).softplus() } else { s.softplus() })
        .sum();
    total / T::of_usize(scores.len())
}

impl<T: Real> GbdtModel<T> {
    pub fn fit(x: &Matrix<T>, y: &[u8], params: GbdtParams) -> Result<Self> {
        Self::fit_with_history(x, y, params).map(|(m, _)| m)
    }

    /// Also returns the training log-loss before the first tree and after every round.
    pub fn fit_with_history(x: &Matrix<T>, y: &[u8], params: GbdtParams) -> Result<(Self, Vec<T>)> {
        check_binary(x, y)?;
        if !(2..=256).contains(&params.n_bins) {
            return Err(Error::Config(format!("n_bins must be in 2..=256, got {}", params.n_bins)));
        }
        let (n, d) = (x.n_rows(), x.n_cols());
        let edges: Vec<Vec<T>> = (0..d)
            .into_par_iter()
            .map(|f| {
                let col: Vec<T> = (0..n).map(|i| x.get(i, f)).collect();
                quantile_bin_edges(&col, params.n_bins)
            })
            .collect();
        let binned = Binned::new(x, &edges);

        let pos = y.iter().filter(|&&v| v == 1).count() as f64;
        let prior = pos / n as f64;
        let base_score = T::of((prior / (1.0 - prior)).ln());
        let lr = T::of(params.learning_rate);
        let mut scores = vec![base_score; n];
        let mut history = vec![log_loss_from_scores(&scores, y)];

        let mut booster = Booster {
            binned: &binned,
            edges: &edges,
            grad: vec![T::zero(); n],
            hess: vec![T::zero(); n],
            lambda: T::of(params.l2_lambda),
            min_child_weight: T::of(params.min_child_weight),
            growth: params.growth,
        };
        let mut trees = Vec::with_capacity(params.n_trees);
        let mut pool = Vec::new();
        for _ in 0..params.n_trees {
            for i in 0..n {
                let p = scores[i].sigmoid();
                booster.grad[i] = p - T::of(y[i] as f64);
                booster.hess[i] = p * (T::one() - p);
            }
            let (tree, assignments) = booster.grow(n, &mut pool);
            for (samples, value) in assignments {
                for i in samples {
                    scores[i as usize] += lr * value;
                }
            }
            history.push(log_loss_from_scores(&scores, y));
            trees.push(tree);
        }

        Ok((
            Self {
                base_score,
                learning_rate: lr,
                params,
                n_features: d,
                bin_edges: edges,
                trees,
            },
            history,
        ))
    }

    pub fn raw_score(&self, x: &[T]) -> T {
        let mut s = self.base_score;
        for t in &self.trees {
            s += self.learning_rate * t.predict_row(x);
        }
        s
    }
}

impl<T: Real> Classifier<T> for GbdtModel<T> {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_row(&self, x: &[T]) -> T {
        self.raw_score(x).sigmoid()
    }
}
