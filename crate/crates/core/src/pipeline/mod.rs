//! Extract, train, evaluate and report, driven by a [`RunConfig`].

mod config;
mod extract;
mod fixture;
mod report;
mod train;

use crate::dataset::Split;
use crate::error::Result;

pub use config::{parse_models, ModelName, RunConfig};
pub use extract::{cache_path, extract_split, file_sha256, load_verified, manifest_path, CacheManifest, ExtractOutcome};
pub use fixture::{low_pass, make_fixture, white_noise, FixtureOptions};
pub use report::{collect_results, markdown_table, write_report, ReportFiles, ResultRow};
pub use train::{evaluate_runs, model_dir, run_dir, train, RunManifest, ThresholdFile};

/// Extracts train and test caches for every requested spec.
pub fn extract(config: &RunConfig) -> Result<Vec<ExtractOutcome>> {
    config.validate()?;
    let mut out = Vec::new();
    for spec in config.specs()? {
        for split in [Split::Train, Split::Test] {
            out.push(extract_split(config, split, &spec)?);
        }
    }
    Ok(out)
}

/// The whole pipeline in one call.
pub fn run_all(config: &RunConfig) -> Result<ReportFiles> {
    extract(config)?;
    train(config)?;
    evaluate_runs(config)?;
    write_report(&config.out_dir)
}
