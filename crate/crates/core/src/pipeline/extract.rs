//! Feature extraction into checksummed binary caches.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{
    decode_cache, load_image, scan_split, stratified_subset, write_cache, CachedFeatures, Split, CACHE_MAGIC,
};
use crate::error::{Error, Result};
use crate::features::{assemble_into, FeatureSpec};
use crate::matrix::Matrix;

use super::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheManifest {
    pub spec: String,
    pub split: String,
    pub limit: Option<usize>,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub sha256: String,
    /// Hash of the selected image paths and sizes.
    pub source_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractOutcome {
    pub path: PathBuf,
    pub rows: usize,
    pub cols: usize,
    /// True when a matching cache already existed and nothing was recomputed.
    pub reused: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    Ok(sha256_hex(&bytes))
}

pub fn cache_path(out_dir: &Path, split: Split, spec: &FeatureSpec, limit: Option<usize>) -> PathBuf {
    let limit = limit.map_or_else(|| "all".to_string(), |l| l.to_string());
    out_dir.join("cache").join(format!("{}-{}-{}.hffx", split.dir_name(), spec.tag(), limit))
}

pub fn manifest_path(cache: &Path) -> PathBuf {
    cache.with_extension("manifest.json")
}

fn split_limit(config: &RunConfig, split: Split) -> Option<usize> {
    match split {
        Split::Train => config.train_limit,
        Split::Test => config.test_limit,
    }
}

fn source_fingerprint(files: &[(PathBuf, u8)], root: &Path) -> Result<String> {
    let mut h = Sha256::new();
    for (path, label) in files {
        let meta = fs::metadata(path).map_err(|e| Error::io(format!("stat {}", path.display()), e))?;
        let rel = path.strip_prefix(root).unwrap_or(path);
        h.update(rel.to_string_lossy().as_bytes());
        h.update([0, *label]);
        h.update(meta.len().to_le_bytes());
    }
    Ok(hex::encode(h.finalize()))
}

/// `(rows, cols)` from a cache header, without reading the payload.
fn read_header(path: &Path) -> Result<(u64, u64)> {
    let mut head = [0u8; 24];
    let mut f = fs::File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    f.read_exact(&mut head).map_err(|_| Error::Truncation { expected: 24, actual: 0 })?;
    if &head[..4] != CACHE_MAGIC {
        return Err(Error::Format(format!("{} is not a feature cache", path.display())));
    }
    let rows = u64::from_le_bytes(head[8..16].try_into().unwrap());
    let cols = u64::from_le_bytes(head[16..24].try_into().unwrap());
    Ok((rows, cols))
}

fn read_manifest(path: &Path) -> Result<Option<CacheManifest>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    Ok(serde_json::from_str(&text).ok())
}

/// Extracts one (split, spec) cache, reusing an existing one whose checksum and sources match.
pub fn extract_split(config: &RunConfig, split: Split, spec: &FeatureSpec) -> Result<ExtractOutcome> {
    let limit = split_limit(config, split);
    let files = scan_split(&config.data_root, split)?;
    let labels: Vec<u8> = files.iter().map(|f| f.1).collect();
    let chosen: Vec<(PathBuf, u8)> = match limit {
        Some(l) => stratified_subset(&labels, l, config.seed).into_iter().map(|i| files[i].clone()).collect(),
        None => files,
    };
    let fingerprint = source_fingerprint(&chosen, &config.data_root)?;
    let path = cache_path(&config.out_dir, split, spec, limit);
    let mpath = manifest_path(&path);
    let dim = spec.dimension();

    if path.exists() {
        let (rows, cols) = read_header(&path)?;
        if cols as usize != dim {
            return Err(Error::CacheConflict {
                path: path.clone(),
                reason: format!("cache has {cols} columns but spec {} needs {dim}", spec.tag()),
            });
        }
        if let Some(m) = read_manifest(&mpath)? {
            if m.source_fingerprint == fingerprint && m.rows as u64 == rows && file_sha256(&path)? == m.sha256 {
                log::info!("reusing {}", path.display());
                return Ok(ExtractOutcome { path, rows: m.rows, cols: m.cols, reused: true });
            }
        }
    }

    log::info!("extracting {} images for {} ({})", chosen.len(), spec.tag(), split);
    let mut matrix = Matrix::<f64>::zeros(chosen.len(), dim);
    matrix
        .as_mut_slice()
        .par_chunks_mut(dim)
        .zip(chosen.par_iter())
        .try_for_each(|(row, (file, label))| -> Result<()> {
            let img = load_image(file, *label)?;
            assemble_into(&img, spec, row);
            Ok(())
        })?;
    let labels: Vec<u8> = chosen.iter().map(|f| f.1).collect();
    write_cache(&matrix, &labels, &spec.tag(), &path)?;
    let manifest = CacheManifest {
        spec: spec.tag(),
        split: split.dir_name().to_string(),
        limit,
        seed: config.seed,
        rows: chosen.len(),
        cols: dim,
        sha256: file_sha256(&path)?,
        source_fingerprint: fingerprint,
    };
    write_json(&mpath, &manifest)?;
    Ok(ExtractOutcome { path, rows: chosen.len(), cols: dim, reused: false })
}

/// Loads a cache after checking its bytes against the manifest checksum.
pub fn load_verified(path: &Path) -> Result<CachedFeatures<f64>> {
    let mpath = manifest_path(path);
    if !path.exists() {
        return Err(Error::MissingArtifact(path.to_path_buf()));
    }
    let manifest = read_manifest(&mpath)?.ok_or_else(|| Error::MissingArtifact(mpath.clone()))?;
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    if sha256_hex(&bytes) != manifest.sha256 {
        return Err(Error::Integrity(path.to_path_buf()));
    }
    decode_cache(&bytes)
}

pub(crate) fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(format!("creating {}", parent.display()), e))?;
    }
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path.display().to_string(), e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub(crate) fn read_json<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D> {
    if !path.exists() {
        return Err(Error::MissingArtifact(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))
}
