//! Trainable binary classifiers mapping feature vectors to `P(fake)`.

mod forest;
mod gbdt;
mod logistic;
mod standardize;
mod tree;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

pub use forest::{max_features_for, ForestMode, ForestModel, ForestParams};
pub use gbdt::{
    bin_index, leaf_weight, log_loss_from_scores, quantile_bin_edges, split_gain, GbdtModel, GbdtParams, Growth,
};
pub use logistic::{logistic_objective, LinearModel, LogisticParams};
pub use standardize::{Standardizer, SIGMA_FLOOR};
pub use tree::{Tree, TreeNode};

/// Version written into every model artifact.
pub const ARTIFACT_VERSION: u32 = 1;

pub trait Classifier<T: Real> {
    /// Width of the feature vectors the model was trained on.
    fn n_features(&self) -> usize;

    /// Probability of class 1 for a single row. The row must have `n_features` entries.
    fn predict_row(&self, x: &[T]) -> T;

    fn predict_proba(&self, x: &Matrix<T>) -> Result<Vec<T>> {
        if x.n_cols() != self.n_features() {
            return Err(Error::dimension(self.n_features(), x.n_cols()));
        }
        Ok(x.rows().map(|r| self.predict_row(r)).collect())
    }
}

pub(crate) fn check_binary<T: Real>(x: &Matrix<T>, y: &[u8]) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::LengthMismatch(x.n_rows(), y.len()));
    }
    let pos = y.iter().filter(|&&v| v == 1).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// Soft voting: the plain mean of member probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct VotingModel<T> {
    pub names: Vec<String>,
    pub members: Vec<Model<T>>,
}

impl<T: Real> VotingModel<T> {
    pub fn new(names: Vec<String>, members: Vec<Model<T>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Config("voting needs at least one member".into()));
        }
        if names.len() != members.len() {
            return Err(Error::LengthMismatch(names.len(), members.len()));
        }
        let d = members[0].n_features();
        if let Some(m) = members.iter().find(|m| m.n_features() != d) {
            return Err(Error::dimension(d, m.n_features()));
        }
        Ok(Self { names, members })
    }
}

impl<T: Real> Classifier<T> for VotingModel<T> {
    fn n_features(&self) -> usize {
        self.members[0].n_features()
    }

    fn predict_row(&self, x: &[T]) -> T {
        let sum: T = self.members.iter().map(|m| m.predict_row(x)).sum();
        sum / T::of_usize(self.members.len())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
pub enum Model<T> {
    Logistic(LinearModel<T>),
    Forest(ForestModel<T>),
    Gbdt(GbdtModel<T>),
    Voting(VotingModel<T>),
}

impl<T: Real> Classifier<T> for Model<T> {
    fn n_features(&self) -> usize {
        match self {
            Model::Logistic(m) => m.n_features(),
            Model::Forest(m) => m.n_features(),
            Model::Gbdt(m) => m.n_features(),
            Model::Voting(m) => m.n_features(),
        }
    }

    fn predict_row(&self, x: &[T]) -> T {
        match self {
            Model::Logistic(m) => m.predict_row(x),
            Model::Forest(m) => m.predict_row(x),
            Model::Gbdt(m) => m.predict_row(x),
            Model::Voting(m) => m.predict_row(x),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct Artifact<T> {
    format_version: u32,
    model: Model<T>,
}

impl<T: Real> Model<T> {
    pub fn to_json(&self) -> Result<String> {
        let doc = Artifact { format_version: ARTIFACT_VERSION, model: self.clone() };
        serde_json::to_string(&doc).map_err(|e| Error::json("serializing model", e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Artifact<T> = serde_json::from_str(text).map_err(|e| Error::json("parsing model", e))?;
        if doc.format_version != ARTIFACT_VERSION {
            return Err(Error::Format(format!(
                "model artifact version {} (expected {ARTIFACT_VERSION})",
                doc.format_version
            )));
        }
        Ok(doc.model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = self.to_json()?;
        fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingArtifact(path.to_path_buf()));
        }
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_json(&text)
    }
}

/// 1-based ranks with ties sharing the mean of the ranks they span.
pub fn average_ranks<T: Real>(scores: &[T]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].cmp_total(&scores[b]));
    let mut ranks = vec![0.0; scores.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Monotone map of arbitrary scores into (0, 1): `(avg_rank - 0.5) / n`.
pub fn rank_to_unit<T: Real>(scores: &[T]) -> Vec<T> {
    let n = scores.len() as f64;
    average_ranks(scores).into_iter().map(|r| T::of((r - 0.5) / n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    struct Fixed(f64);

    impl Classifier<f64> for Fixed {
        fn n_features(&self) -> usize {
            2
        }
        fn predict_row(&self, _: &[f64]) -> f64 {
            self.0
        }
    }

    #[test]
    fn rank_examples() {
        let p = rank_to_unit(&[3.0f64, 1.0, 2.0]);
        let want = [2.5 / 3.0, 0.5 / 3.0, 1.5 / 3.0];
        for (a, b) in p.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(rank_to_unit(&[7.0f64; 4]), vec![0.5; 4]);
        assert_eq!(average_ranks(&[1.0f64, 2.0, 2.0, 5.0]), vec![1.0, 2.5, 2.5, 4.0]);
    }

    #[test]
    fn default_predict_proba_checks_width() {
        let m = Fixed(0.3);
        let ok = Matrix::from_vec(3, 2, vec![0.0; 6]).unwrap();
        assert_eq!(m.predict_proba(&ok).unwrap(), vec![0.3; 3]);
        let bad = Matrix::from_vec(2, 3, vec![0.0; 6]).unwrap();
        assert!(matches!(m.predict_proba(&bad), Err(Error::Dimension { .. })));
    }

    #[test]
    fn binary_checks() {
        let x = Matrix::from_vec(3, 1, vec![0.0f64; 3]).unwrap();
        assert!(matches!(check_binary(&x, &[1, 1, 1]), Err(Error::SingleClass)));
        assert!(matches!(check_binary(&x, &[0, 1]), Err(Error::LengthMismatch(3, 2))));
        assert!(check_binary(&x, &[0, 1, 0]).is_ok());
    }

    proptest! {
        #[test]
        fn rank_preserves_order(scores in prop::collection::vec(-1e6f64..1e6, 1..60)) {
            let p = rank_to_unit(&scores);
            for i in 0..scores.len() {
                prop_assert!(p[i] > 0.0 && p[i] < 1.0);
                for j in 0..scores.len() {
                    prop_assert_eq!(scores[i] < scores[j], p[i] < p[j]);
                    prop_assert_eq!(scores[i] == scores[j], p[i] == p[j]);
                }
            }
        }

        #[test]
        fn rank_ignores_monotone_transforms(scores in prop::collection::vec(-50f64..50.0, 1..60)) {
            let moved: Vec<f64> = scores.iter().map(|s| (s / 10.0).exp() * 3.0 + 1.0).collect();
            prop_assert_eq!(rank_to_unit(&scores), rank_to_unit(&moved));
        }
    }
}
