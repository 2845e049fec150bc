//! Random forest and extra-trees classifiers over Gini impurity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::rng::SplitMix64;
use crate::scalar::Real;

use super::tree::{Tree, TreeNode};
use super::{check_binary, Classifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForestMode {
    /// Bootstrap rows, exhaustive threshold search.
    RandomForest,
    /// All rows, one uniform random threshold per candidate feature.
    ExtraTrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub mode: ForestMode,
    pub n_trees: usize,
    pub seed: u64,
}

impl ForestParams {
    pub fn new(mode: ForestMode) -> Self {
        Self {
            mode,
            n_trees: 500,
            seed: 42,
        }
    }
}

/// Averages the class-1 leaf frequencies of its trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ForestModel<T> {
    pub params: ForestParams,
    pub n_features: usize,
    /// Candidate features per node, `floor(sqrt(d))`.
    pub max_features: usize,
    pub trees: Vec<Tree<T>>,
}

pub fn max_features_for(d: usize) -> usize {
    ((d as f64).sqrt().floor() as usize).max(1)
}

#[derive(Debug, Clone, Copy)]
struct Candidate<T> {
    /// Weighted Gini: `n_L gini_L + n_R gini_R`.
    impurity: f64,
    feature: usize,
    threshold: T,
}

impl<T: Real> Candidate<T> {
    /// Lower impurity wins; ties go to the lower feature index, then the lower threshold.
    fn beats(&self, other: &Option<Candidate<T>>) -> bool {
        match other {
            None => true,
            Some(o) => {
                (self.impurity, self.feature) < (o.impurity, o.feature)
                    || (self.impurity == o.impurity && self.feature == o.feature && self.threshold < o.threshold)
            }
        }
    }
}

fn weighted_gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (p, q) = (pos as f64, (n - pos) as f64);
    n as f64 - (p * p + q * q) / n as f64
}

struct Grower<'a, T> {
    x: &'a Matrix<T>,
    y: &'a [u8],
    mode: ForestMode,
    max_features: usize,
    rng: SplitMix64,
    /// Persistent permutation used for lazy feature sampling without replacement.
    features: Vec<usize>,
    values: Vec<(T, u8)>,
}

impl<'a, T: Real> Grower<'a, T> {
    fn best_exhaustive(&mut self, samples: &[usize], feature: usize, pos_total: usize) -> Option<Candidate<T>> {
        self.values.clear();
        self.values.extend(samples.iter().map(|&i| (self.x.get(i, feature), self.y[i])));
        self.values.sort_by(|a, b| a.0.cmp_total(&b.0));
        let n = self.values.len();
        let mut best: Option<Candidate<T>> = None;
        let mut left_pos = 0;
        for k in 0..n - 1 {
            left_pos += usize::from(self.values[k].1);
            let (lo, hi) = (self.values[k].0, self.values[k + 1].0);
            if lo >= hi {
                continue;
            }
            let impurity = weighted_gini(left_pos, k + 1) + weighted_gini(pos_total - left_pos, n - k - 1);
            let mut threshold = (lo + hi) * T::of(0.5);
            if threshold >= hi {
                threshold = lo;
            }
            let cand = Candidate { impurity, feature, threshold };
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                best = Some(cand);
            }
        }
        best
    }

    fn best_random(&mut self, samples: &[usize], feature: usize, pos_total: usize) -> Option<Candidate<T>> {
        let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
        for &i in samples {
            let v = self.x.get(i, feature);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo >= hi {
            return None;
        }
        let mut threshold = lo + T::of(self.rng.next_f64()) * (hi - lo);
        if threshold >= hi {
            threshold = lo;
        }
        let (mut n_left, mut left_pos) = (0, 0);
        for &i in samples {
            if self.x.get(i, feature) <= threshold {
                n_left += 1;
                left_pos += usize::from(self.y[i]);
            }
        }
        let n = samples.len();
        Some(Candidate {
            impurity: weighted_gini(left_pos, n_left) + weighted_gini(pos_total - left_pos, n - n_left),
            feature,
            threshold,
        })
    }

    /// Draws `max_features` features; keeps drawing past that while none of
    /// them can split the node (all constant).
    fn choose_split(&mut self, samples: &[usize], pos_total: usize) -> Option<Candidate<T>> {
        let d = self.features.len();
        let mut best: Option<Candidate<T>> = None;
        for drawn in 0..d {
            if drawn >= self.max_features && best.is_some() {
                break;
            }
            let j = drawn + self.rng.below((d - drawn) as u64) as usize;
            self.features.swap(drawn, j);
            let feature = self.features[drawn];
            let cand = match self.mode {
                ForestMode::RandomForest => self.best_exhaustive(samples, feature, pos_total),
                ForestMode::ExtraTrees => self.best_random(samples, feature, pos_total),
            };
            if let Some(c) = cand {
                if c.beats(&best) {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn grow(mut self, mut samples: Vec<usize>) -> Tree<T> {
        let mut arena: Vec<TreeNode<T>> = Vec::new();
        // (arena slot, start, end)
        let mut stack = vec![(0usize, 0usize, samples.len())];
        arena.push(TreeNode::Leaf { value: T::zero() });
        while let Some((slot, start, end)) = stack.pop() {
            let node_samples = &samples[start..end];
            let n = node_samples.len();
            let pos = node_samples.iter().filter(|&&i| self.y[i] == 1).count();
            let freq = T::of(pos as f64 / n.max(1) as f64);
            if n < 2 || pos == 0 || pos == n {
                arena[slot] = TreeNode::Leaf { value: freq };
                continue;
            }
            let owned = node_samples.to_vec();
            let Some(split) = self.choose_split(&owned, pos) else {
                arena[slot] = TreeNode::Leaf { value: freq };
                continue;
            };
            let block = &mut samples[start..end];
            let mut mid = 0;
            for k in 0..block.len() {
                if self.x.get(block[k], split.feature) <= split.threshold {
                    block.swap(mid, k);
                    mid += 1;
                }
            }
            let (left, right) = (arena.len(), arena.len() + 1);
            arena.push(TreeNode::Leaf { value: T::zero() });
            arena.push(TreeNode::Leaf { value: T::zero() });
            arena[slot] = TreeNode::Split {
                feature: split.feature,
                threshold: split.threshold,
                left,
                right,
            };
            stack.push((right, start + mid, end));
            stack.push((left, start, start + mid));
        }
        Tree::from_arena(&arena, 0)
    }
}

impl<T: Real> ForestModel<T> {
    pub fn fit(x: &Matrix<T>, y: &[u8], params: ForestParams) -> Result<Self> {
        check_binary(x, y)?;
        let (n, d) = (x.n_rows(), x.n_cols());
        let max_features = max_features_for(d);
        let seeds = SplitMix64::new(params.seed).child_seeds(params.n_trees);
        let trees = seeds
            .into_par_iter()
            .map(|seed| {
                let mut rng = SplitMix64::new(seed);
                let samples: Vec<usize> = match params.mode {
                    ForestMode::RandomForest => (0..n).map(|_| rng.below(n as u64) as usize).collect(),
                    ForestMode::ExtraTrees => (0..n).collect(),
                };
                Grower {
                    x,
                    y,
                    mode: params.mode,
                    max_features,
                    rng,
                    features: (0..d).collect(),
                    values: Vec::with_capacity(n),
                }
                .grow(samples)
            })
            .collect();
        Ok(Self {
            params,
            n_features: d,
            max_features,
            trees,
        })
    }
}

impl<T: Real> Classifier<T> for ForestModel<T> {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_row(&self, x: &[T]) -> T {
        let sum: T = self.trees.iter().map(|t| t.predict_row(x)).sum();
        sum / T::of_usize(self.trees.len().max(1))
    }
}
