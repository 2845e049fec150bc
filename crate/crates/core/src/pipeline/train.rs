//! Model fitting, threshold tuning and test-split evaluation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::dataset::{stratified_split, Split};
use crate::error::Result;
use crate::eval::{evaluate, tune_threshold, MetricsReport};
use crate::features::FeatureSpec;
use crate::models::{
    Classifier, ForestMode, ForestModel, ForestParams, GbdtModel, GbdtParams, Growth, LinearModel, LogisticParams,
    Model, VotingModel,
};

use super::config::{ModelName, RunConfig};
use super::extract::{cache_path, file_sha256, load_verified, read_json, write_json};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFile {
    pub tau_star: f64,
    pub val_f1: f64,
    pub candidates_evaluated: usize,
    pub n_train: usize,
    pub n_val: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRef {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub spec: String,
    pub config: RunConfig,
    pub trained_models: Vec<ModelName>,
    pub train_started_unix: u64,
    pub train_finished_unix: u64,
    pub train_cache: CacheRef,
    pub evaluated_unix: Option<u64>,
    pub test_cache: Option<CacheRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VotingManifest {
    members: Vec<ModelName>,
}

pub fn run_dir(out_dir: &Path, spec: &FeatureSpec) -> PathBuf {
    out_dir.join("runs").join(spec.tag())
}

pub fn model_dir(out_dir: &Path, spec: &FeatureSpec, model: ModelName) -> PathBuf {
    run_dir(out_dir, spec).join(model.as_str())
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn fit_base(name: ModelName, x: &crate::matrix::Matrix<f64>, y: &[u8], config: &RunConfig) -> Result<Model<f64>> {
    let forest = |mode| ForestParams { n_trees: config.forest_trees, seed: config.seed, ..ForestParams::new(mode) };
    let gbdt = |growth| GbdtParams { n_trees: config.gbdt_rounds, growth, ..GbdtParams::default() };
    Ok(match name {
        ModelName::Logreg => {
            Model::Logistic(LinearModel::fit(x, y, LogisticParams { seed: config.seed, ..Default::default() })?)
        }
        ModelName::RandomForest => Model::Forest(ForestModel::fit(x, y, forest(ForestMode::RandomForest))?),
        ModelName::ExtraTrees => Model::Forest(ForestModel::fit(x, y, forest(ForestMode::ExtraTrees))?),
        ModelName::GbdtLeafwise => Model::Gbdt(GbdtModel::fit(x, y, gbdt(Growth::leaf_wise()))?),
        ModelName::GbdtLevelwise => Model::Gbdt(GbdtModel::fit(x, y, gbdt(Growth::level_wise()))?),
        ModelName::Voting => unreachable!("voting is assembled from fitted members"),
    })
}

/// Fits every requested model on 90% of the train cache, tunes its threshold
/// on the held-out 10%, and persists model, threshold and run manifest.
pub fn train(config: &RunConfig) -> Result<Vec<(String, ModelName, ThresholdFile)>> {
    config.validate()?;
    let mut out = Vec::new();
    for spec in config.specs()? {
        let started = unix_now();
        let cpath = cache_path(&config.out_dir, Split::Train, &spec, config.train_limit);
        let cache = load_verified(&cpath)?;
        let split = stratified_split(&cache.labels, config.val_fraction, config.seed)?;
        let x_train = cache.matrix.select_rows(&split.train_idx);
        let y_train: Vec<u8> = split.train_idx.iter().map(|&i| cache.labels[i]).collect();
        let x_val = cache.matrix.select_rows(&split.val_idx);
        let y_val: Vec<u8> = split.val_idx.iter().map(|&i| cache.labels[i]).collect();

        let mut fitted = BTreeMap::new();
        for name in config.base_models() {
            let t0 = Instant::now();
            fitted.insert(name, fit_base(name, &x_train, &y_train, config)?);
            log::info!("{} / {}: fitted in {:.1?}", spec.tag(), name, t0.elapsed());
        }

        for &name in &config.models {
            let model = if name == ModelName::Voting {
                let members = config.voting_members.iter().map(|m| fitted[m].clone()).collect();
                let names = config.voting_members.iter().map(|m| m.to_string()).collect();
                Model::Voting(VotingModel::new(names, members)?)
            } else {
                fitted[&name].clone()
            };
            let p_val = model.predict_proba(&x_val)?;
            let tuned = tune_threshold(&y_val, &p_val)?;
            let threshold = ThresholdFile {
                tau_star: tuned.tau_star,
                val_f1: tuned.val_f1,
                candidates_evaluated: tuned.candidates_evaluated,
                n_train: y_train.len(),
                n_val: y_val.len(),
            };
            let dir = model_dir(&config.out_dir, &spec, name);
            std::fs::create_dir_all(&dir).map_err(|e| crate::Error::io(format!("creating {}", dir.display()), e))?;
            model.save(&dir.join("model.json"))?;
            write_json(&dir.join("threshold.json"), &threshold)?;
            if name == ModelName::Voting {
                write_json(&dir.join("voting.json"), &VotingManifest { members: config.voting_members.clone() })?;
            }
            out.push((spec.tag(), name, threshold));
        }

        let manifest = RunManifest {
            spec: spec.tag(),
            config: config.clone(),
            trained_models: config.models.clone(),
            train_started_unix: started,
            train_finished_unix: unix_now(),
            train_cache: CacheRef { sha256: file_sha256(&cpath)?, path: cpath },
            evaluated_unix: None,
            test_cache: None,
        };
        write_json(&run_dir(&config.out_dir, &spec).join("manifest.json"), &manifest)?;
    }
    Ok(out)
}

/// Applies each persisted model and frozen threshold to the test cache and writes `metrics.json`.
pub fn evaluate_runs(config: &RunConfig) -> Result<Vec<(String, ModelName, MetricsReport)>> {
    config.validate()?;
    let mut out = Vec::new();
    for spec in config.specs()? {
        let dirs: Vec<PathBuf> = config.models.iter().map(|&m| model_dir(&config.out_dir, &spec, m)).collect();
        // fail on missing training output before touching the test cache
        for dir in &dirs {
            for file in ["model.json", "threshold.json"] {
                if !dir.join(file).exists() {
                    return Err(crate::Error::MissingArtifact(dir.join(file)));
                }
            }
        }
        let cpath = cache_path(&config.out_dir, Split::Test, &spec, config.test_limit);
        let cache = load_verified(&cpath)?;
        for (&name, dir) in config.models.iter().zip(&dirs) {
            let model = Model::<f64>::load(&dir.join("model.json"))?;
            let threshold: ThresholdFile = read_json(&dir.join("threshold.json"))?;
            let p = model.predict_proba(&cache.matrix)?;
            let report = evaluate(&cache.labels, &p, threshold.tau_star)?;
            write_json(&dir.join("metrics.json"), &report)?;
            log::info!("{} / {}: roc_auc {:.4}", spec.tag(), name, report.roc_auc);
            out.push((spec.tag(), name, report));
        }
        let mpath = run_dir(&config.out_dir, &spec).join("manifest.json");
        if let Ok(mut manifest) = read_json::<RunManifest>(&mpath) {
            manifest.evaluated_unix = Some(unix_now());
            manifest.test_cache = Some(CacheRef { sha256: file_sha256(&cpath)?, path: cpath });
            write_json(&mpath, &manifest)?;
        }
    }
    Ok(out)
}
