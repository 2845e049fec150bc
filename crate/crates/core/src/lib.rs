//! Handcrafted-feature detection of synthetic 32x32 images.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which is what the CLI uses.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod matrix;
pub mod models;
pub mod pipeline;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type FeatureVector = features::FeatureVector<f64>;
pub type GrayImage = features::GrayImage<f64>;
pub type Matrix = matrix::Matrix<f64>;
pub type Model = models::Model<f64>;
pub type LinearModel = models::LinearModel<f64>;
pub type ForestModel = models::ForestModel<f64>;
pub type GbdtModel = models::GbdtModel<f64>;
pub type VotingModel = models::VotingModel<f64>;
pub type Standardizer = models::Standardizer<f64>;
pub type CachedFeatures = dataset::CachedFeatures<f64>;
pub use eval::MetricsReport;
