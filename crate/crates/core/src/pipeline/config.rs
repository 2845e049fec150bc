use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Logreg,
    RandomForest,
    ExtraTrees,
    GbdtLeafwise,
    GbdtLevelwise,
    Voting,
}

impl ModelName {
    pub const ALL: [ModelName; 6] = [
        ModelName::Logreg,
        ModelName::RandomForest,
        ModelName::ExtraTrees,
        ModelName::GbdtLeafwise,
        ModelName::GbdtLevelwise,
        ModelName::Voting,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Logreg => "logreg",
            ModelName::RandomForest => "random_forest",
            ModelName::ExtraTrees => "extra_trees",
            ModelName::GbdtLeafwise => "gbdt_leafwise",
            ModelName::GbdtLevelwise => "gbdt_levelwise",
            ModelName::Voting => "voting",
        }
    }

    pub fn default_voting_members() -> Vec<ModelName> {
        vec![ModelName::Logreg, ModelName::RandomForest, ModelName::ExtraTrees, ModelName::GbdtLeafwise]
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        // "gbdt" alone means the leaf-wise variant
        if s == "gbdt" {
            return Ok(ModelName::GbdtLeafwise);
        }
        ModelName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown model {s:?}")))
    }
}

/// Everything a run needs. JSON config files may set any subset of the fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data_root: PathBuf,
    /// Feature spec tags, e.g. `mixed` or `hog+lbp`.
    pub features: Vec<String>,
    pub models: Vec<ModelName>,
    pub voting_members: Vec<ModelName>,
    pub seed: u64,
    pub val_fraction: f64,
    pub train_limit: Option<usize>,
    pub test_limit: Option<usize>,
    pub out_dir: PathBuf,
    pub gbdt_rounds: usize,
    pub forest_trees: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_root: PathBuf::from("data"),
            features: vec!["mixed".into()],
            models: vec![ModelName::GbdtLeafwise],
            voting_members: ModelName::default_voting_members(),
            seed: 42,
            val_fraction: 0.10,
            train_limit: None,
            test_limit: None,
            out_dir: PathBuf::from("out"),
            gbdt_rounds: 500,
            forest_trees: 500,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(format!("config {}", path.display()), e))
    }

    pub fn specs(&self) -> Result<Vec<FeatureSpec>> {
        if self.features.is_empty() {
            return Err(Error::Config("no feature specs requested".into()));
        }
        self.features.iter().map(|t| FeatureSpec::parse(t)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.specs()?;
        if self.models.is_empty() {
            return Err(Error::Config("no models requested".into()));
        }
        if self.voting_members.is_empty() || self.voting_members.contains(&ModelName::Voting) {
            return Err(Error::Config("voting members must be non-empty base models".into()));
        }
        if !(self.val_fraction > 0.0 && self.val_fraction < 1.0) {
            return Err(Error::Config(format!("val_fraction must lie in (0, 1), got {}", self.val_fraction)));
        }
        Ok(())
    }

    /// Base models that must be fitted, including voting members, in canonical order.
    pub fn base_models(&self) -> Vec<ModelName> {
        let mut out: Vec<ModelName> = self.models.iter().copied().filter(|&m| m != ModelName::Voting).collect();
        if self.models.contains(&ModelName::Voting) {
            out.extend(self.voting_members.iter().copied());
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Parses a comma-separated model list.
pub fn parse_models(list: &str) -> Result<Vec<ModelName>> {
    let mut out = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let m: ModelName = item.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}
